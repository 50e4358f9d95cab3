"""JSON encodings: rationals as "p/q" strings, fields, elements, matrices,
torus documents, CM blocks, and mirror-pair documents."""

from __future__ import annotations

from fractions import Fraction

from .cm import CmInput
from .exactla import FieldMatrix
from .numfield import FieldElement, NumberField, make_field
from .torus import ComplexTorusData, KahlerData


def encode_rational(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def decode_rational(raw) -> Fraction:
    if isinstance(raw, str):
        return Fraction(raw)
    if isinstance(raw, int):
        return Fraction(raw)
    raise ValueError(f"not a rational encoding: {raw!r}")


def encode_field(f: NumberField) -> dict:
    return {
        "minpoly": [encode_rational(c) for c in f.minpoly],
        "conj": [encode_rational(c) for c in f.conj_image] if f.has_conj else None,
    }


def decode_field(doc: dict) -> NumberField:
    conj = doc.get("conj")
    return make_field(
        [decode_rational(c) for c in doc["minpoly"]],
        [decode_rational(c) for c in conj] if conj is not None else None,
    )


def encode_element(e: FieldElement) -> list:
    return [encode_rational(c) for c in e.coords]


def decode_element(f: NumberField, raw) -> FieldElement:
    if isinstance(raw, (str, int)):
        return f.from_rational(decode_rational(raw))
    return f.element([decode_rational(c) for c in raw])


def encode_matrix(m: FieldMatrix) -> list:
    return [[encode_element(e) for e in row] for row in m.entries]


def decode_matrix(f: NumberField, raw) -> FieldMatrix:
    return FieldMatrix(f, [[decode_element(f, e) for e in row] for row in raw])


def encode_int_matrix(rows) -> list:
    return [[int(v) for v in row] for row in rows]


def encode_torus(
    t: ComplexTorusData,
    k: KahlerData | None = None,
    polarization: FieldMatrix | None = None,
    cm: CmInput | None = None,
) -> dict:
    doc = {
        "g": t.g,
        "field": encode_field(t.field),
        "embedding": t.embedding.index,
        "I": encode_matrix(t.I),
        "G": encode_matrix(k.G) if k else None,
        "B": encode_matrix(k.B) if k else None,
    }
    if polarization is not None:
        doc["polarization"] = encode_matrix(polarization)
    if cm is not None:
        doc["cm"] = encode_cm_input(cm)
    return doc


def decode_torus(doc: dict) -> dict:
    """Torus document -> {torus, kahler, polarization, cm} (absent -> None)."""
    f = decode_field(doc["field"])
    embs = f.embeddings()
    idx = int(doc["embedding"])
    if not 1 <= idx <= len(embs):
        raise ValueError("embedding index out of range")
    torus = ComplexTorusData(int(doc["g"]), f, decode_matrix(f, doc["I"]), embs[idx - 1])
    kahler = None
    if doc.get("G") is not None:
        g_m = decode_matrix(f, doc["G"])
        if doc.get("B") is not None:
            b_m = decode_matrix(f, doc["B"])
        else:
            b_m = FieldMatrix.zeros(f, 2 * torus.g, 2 * torus.g)
        kahler = KahlerData(g_m, b_m)
        kahler.validate_for(torus)
    pol = None
    if doc.get("polarization") is not None:
        pol = decode_matrix(f, doc["polarization"])
    cm = decode_cm_input(doc["cm"]) if doc.get("cm") else None
    return {"torus": torus, "kahler": kahler, "polarization": pol, "cm": cm}


def encode_cm_input(inp: CmInput) -> dict:
    return {
        "field": encode_field(inp.field),
        "basis": [encode_element(b) for b in inp.basis],
        "phi": list(inp.phi),
        "beta": encode_element(inp.beta) if inp.beta is not None else None,
        "automorphisms": (
            [encode_element(a) for a in inp.automorphisms]
            if inp.automorphisms is not None
            else None
        ),
    }


def decode_cm_input(doc: dict) -> CmInput:
    f = decode_field(doc["field"])
    basis = [decode_element(f, b) for b in doc["basis"]]
    beta = decode_element(f, doc["beta"]) if doc.get("beta") is not None else None
    autos = None
    if doc.get("automorphisms") is not None:
        autos = [decode_element(f, a) for a in doc["automorphisms"]]
    return CmInput(f, basis, [int(i) for i in doc["phi"]], beta, autos)


def encode_pair(pair) -> dict:
    return {
        "left": encode_torus(pair.left.torus, pair.left.kahler),
        "right": encode_torus(pair.right.torus, pair.right.kahler),
        "phi": encode_int_matrix(pair.map.phi),
    }


def decode_pair(doc: dict):
    from .mirror import MirrorMap, MirrorPair, MirrorSide
    from .torus import induce_gks

    sides = []
    for key in ("left", "right"):
        got = decode_torus(doc[key])
        if got["kahler"] is None:
            raise ValueError(f"{key} side needs G (and B) for a mirror pair")
        sides.append(
            MirrorSide(got["torus"], got["kahler"], induce_gks(got["torus"], got["kahler"]))
        )
    phi = [[int(v) for v in row] for row in doc["phi"]]
    return MirrorPair(sides[0], sides[1], MirrorMap(phi))
