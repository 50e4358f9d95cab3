import json

import pytest

from toruscm.cli import run


def invoke(capsys, argv):
    code = run(argv)
    out = capsys.readouterr().out
    return code, out


def test_torus_validate_ok(capsys, fixture_dir):
    code, out = invoke(capsys, ["torus", "validate", "--torus", str(fixture_dir / "tau_i.json")])
    assert code == 0
    doc = json.loads(out)
    assert doc["ok"] and doc["g"] == 1


def test_torus_validate_bad_i_exits_2(capsys, fixture_dir):
    doc = json.load(open(fixture_dir / "tau_i.json"))
    doc["I"] = [[["0"], ["1"]], [["1"], ["0"]]]  # I^2 != -Id
    code, out = invoke(capsys, ["torus", "validate", "--torus", json.dumps(doc)])
    assert code == 2
    rep = json.loads(out)
    assert rep["ok"] is False and "I^2" in rep["error"]


def test_malformed_json_exits_2(capsys):
    code, out = invoke(capsys, ["torus", "validate", "--torus", '{"g": 1}'])
    assert code == 2


def test_gks_induce_and_rationality(capsys, fixture_dir):
    code, out = invoke(capsys, ["gks", "induce", "--torus", str(fixture_dir / "tau_i.json")])
    assert code == 0
    doc = json.loads(out)
    assert doc["verified"] and len(doc["calI"]) == 4

    code, out = invoke(
        capsys,
        ["gks", "rationality", "--torus", str(fixture_dir / "tau_i.json"), "--expect", "true"],
    )
    assert code == 0
    code, out = invoke(
        capsys,
        ["gks", "rationality", "--torus", str(fixture_dir / "tau_i.json"), "--expect", "false"],
    )
    assert code == 1  # expectation mismatch

    code, out = invoke(
        capsys,
        ["gks", "rationality", "--torus", str(fixture_dir / "zeta5.json"), "--expect", "false"],
    )
    assert code == 0


def test_cm_build_from_fixture_block(capsys, fixture_dir):
    code, out = invoke(capsys, ["cm", "build", "--input", str(fixture_dir / "tau_i.json")])
    assert code == 0
    doc = json.loads(out)
    assert doc["E"] == [[["0"], ["2"]], [["-2"], ["0"]]]
    assert doc["G"] == [[["2"], ["0"]], [["0"], ["2"]]]


def test_cm_certificate_cli(capsys, fixture_dir):
    code, out = invoke(
        capsys,
        [
            "cm",
            "certificate",
            "--torus",
            str(fixture_dir / "tau_i.json"),
            "--expect",
            "CM",
        ],
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["verdict"] == "CM" and doc["minpoly"] == ["1", "0", "1"]

    code, out = invoke(
        capsys,
        [
            "cm",
            "certificate",
            "--torus",
            str(fixture_dir / "tau_2pow14.json"),
            "--expect",
            "NotCM",
        ],
    )
    assert code == 0
    assert json.loads(out)["end_dim"] == 1


def test_cm_metric_search_cli(capsys, fixture_dir):
    code, out = invoke(
        capsys,
        ["cm", "metric-search", "--torus", str(fixture_dir / "tau_2pow14.json")],
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["found"] is False and doc["solution_dim"] == 0


def test_mirror_roundtrip_cli(capsys, tmp_path):
    code, out = invoke(capsys, ["mirror", "construct", "--A", '[["1"]]', "--rho", "[[-1]]"])
    assert code == 0
    pair_doc = json.loads(out)
    assert pair_doc["report"]["ok"]
    p = tmp_path / "pair.json"
    p.write_text(json.dumps(pair_doc))

    code, out = invoke(capsys, ["mirror", "verify", "--pair", str(p)])
    assert code == 0
    assert json.loads(out)["ok"]

    code, out = invoke(capsys, ["mirror", "isogeny", "--pair", str(p)])
    assert code == 0
    doc = json.loads(out)
    assert doc["found"] and doc["gamma"] == [[1, 0], [0, -1]]

    # break the map: identity phi fails conjugation, exit 1
    pair_doc["phi"] = [[1 if i == j else 0 for j in range(4)] for i in range(4)]
    p.write_text(json.dumps(pair_doc))
    code, out = invoke(capsys, ["mirror", "verify", "--pair", str(p)])
    assert code == 1
    assert json.loads(out)["ok"] is False


def test_va_chiral_cli(capsys, fixture_dir):
    code, out = invoke(capsys, ["va", "chiral", "--torus", str(fixture_dir / "tau_i.json")])
    assert code == 0
    doc = json.loads(out)
    assert doc["rank"] == 4 and doc["index"] == 4


def test_va_commutator_cli(capsys, fixture_dir):
    code, out = invoke(
        capsys,
        [
            "va",
            "commutator",
            "--torus",
            str(fixture_dir / "tau_i.json"),
            "--kind",
            "boson",
            "--h",
            '["1", "0", "-1", "0"]',
            "--mode-a",
            "3",
            "--hp",
            '["1", "0", "-1", "0"]',
            "--mode-b",
            "-3",
        ],
    )
    assert code == 0
    assert json.loads(out)["coefficient"] == "6"


def test_va_commutator_fermion_half_modes(capsys, fixture_dir):
    # negative half-integer modes must survive argparse
    for mode_args in (
        ["--mode-a", "1/2", "--mode-b", "-1/2"],
        ["--mode-a=1/2", "--mode-b=-1/2"],
    ):
        code, out = invoke(
            capsys,
            [
                "va",
                "commutator",
                "--torus",
                str(fixture_dir / "tau_i.json"),
                "--kind",
                "fermion",
                "--h",
                '["1", "0", "-1", "0"]',
                *mode_args,
                "--hp",
                '["1", "0", "-1", "0"]',
            ],
        )
        assert code == 0
        assert json.loads(out)["coefficient"] == "2"


def test_demo_section4_cli(capsys, tmp_path):
    out_path = tmp_path / "report.json"
    code, out = invoke(capsys, ["demo", "section4", "--out", str(out_path)])
    assert code == 0
    doc = json.loads(out)
    assert doc["ij_rational"] is False and doc["cm_left"] == "CM"
    assert json.loads(out_path.read_text()) == doc


def test_outputs_deterministic(capsys, fixture_dir):
    _, out1 = invoke(capsys, ["va", "chiral", "--torus", str(fixture_dir / "tau_i.json")])
    _, out2 = invoke(capsys, ["va", "chiral", "--torus", str(fixture_dir / "tau_i.json")])
    assert out1 == out2
    _, d1 = invoke(
        capsys, ["cm", "certificate", "--torus", str(fixture_dir / "tau_i.json"), "--seed", "5"]
    )
    _, d2 = invoke(
        capsys, ["cm", "certificate", "--torus", str(fixture_dir / "tau_i.json"), "--seed", "5"]
    )
    assert d1 == d2
