import math
from fractions import Fraction

import pytest

from toruscm import polyq
from toruscm.cm import (
    BetaNotAdmissible,
    CmInput,
    NotFoundWithinBudget,
    cm_certificate,
    cm_torus,
    element_minpoly,
    endomorphism_algebra,
    eta_checks,
    find_beta,
    matrix_minpoly,
    mult_matrix_in_basis,
    rational_kahler_search,
    simplicity_check,
)
from toruscm.exactla import FieldMatrix, positive_definite
from toruscm.fixtures import _embedding_near, tau_2pow14_torus, tau_i_torus
from toruscm.numfield import make_field, rationals

QQ = rationals()
QEMB = QQ.embeddings()[0]


def test_cm_torus_gaussian(gaussian_cm):
    e_m, g_m = gaussian_cm["E"], gaussian_cm["G"]
    assert e_m == FieldMatrix(QQ, [[0, 2], [-2, 0]])
    assert g_m == FieldMatrix(QQ, [[2, 0], [0, 2]])
    t = gaussian_cm["torus"]
    assert t.field.degree == 1  # the value field collapses to Q
    assert [[x.as_rational() for x in row] for row in t.I.entries] == [[0, -1], [1, 0]]


def test_cm_torus_zeta5_properties(zeta5_cm):
    t = zeta5_cm["torus"]
    inp = zeta5_cm["input"]
    assert t.g == 2 and t.field.degree == 4
    # multiplication by xi in the Gamma-basis commutes with I exactly
    m_xi = mult_matrix_in_basis(inp.field.gen(), inp.basis).lift(t.field)
    assert m_xi * t.I == t.I * m_xi
    # E and G are I-compatible (checked inside cm_torus; assert again)
    e_f = zeta5_cm["E"].lift(t.field)
    assert t.I.transpose() * e_f * t.I == e_f
    assert positive_definite(zeta5_cm["G"], QEMB).positive


def test_cm_torus_zeta5_matches_fixture_numerically(zeta5_cm, zeta5_mirror):
    ours = zeta5_cm["torus"]
    ref = zeta5_mirror["pair"].left.torus
    w = Fraction(1, 1 << 40)
    for i in range(4):
        for j in range(4):
            a = ours.I[i, j].enclosure(ours.embedding, w)
            b = ref.I[i, j].enclosure(ref.embedding, w)
            assert abs(a.re.mid() - b.re.mid()) < Fraction(1, 1 << 30)


def test_cm_torus_requires_admissible_beta():
    k = make_field([1, 0, 1], conj_image=[0, -1])
    basis = [k.one(), k.gen()]
    phi = [_embedding_near(k, 0.0, 1.0)]
    # beta = -i has Im sigma(beta) < 0
    with pytest.raises(BetaNotAdmissible):
        cm_torus(CmInput(k, basis, phi, -k.gen()))


def test_find_beta_gaussian():
    k = make_field([1, 0, 1], conj_image=[0, -1])
    beta = find_beta(k, [k.one(), k.gen()], [_embedding_near(k, 0.0, 1.0)], 1)
    assert beta == k.gen()


def test_find_beta_zeta5(zeta5_cm):
    inp = zeta5_cm["input"]
    beta = find_beta(inp.field, inp.basis, inp.phi, 3)
    # lies in the span of the antisymmetric generators xi-xi^-1, xi^2-xi^-2
    k = inp.field
    assert (k.conj(beta) + beta).is_zero()
    CmInput(k, inp.basis, inp.phi, beta, inp.automorphisms).validate()


def test_phi_with_conjugate_pair_rejected(zeta5_cm):
    inp = zeta5_cm["input"]
    k = inp.field
    emb = k.embeddings()[inp.phi[0] - 1]
    bad = CmInput(k, inp.basis, [inp.phi[0], emb.conj_index], inp.beta, inp.automorphisms)
    with pytest.raises(ValueError):
        bad.validate()


def test_endomorphism_algebra_tau_i():
    t, _, _ = tau_i_torus()
    end = endomorphism_algebra(t)
    assert end.dim == 2
    stack = [
        [e.as_rational() for row in b.entries for e in row] for b in end.basis
    ]
    for target in ([1, 0, 0, 1], [0, -1, 1, 0]):  # Id and I in the span
        aug = FieldMatrix(QQ, stack + [[Fraction(x) for x in target]])
        assert aug.rank() == 2


def test_endomorphism_algebra_2pow14():
    t, _ = tau_2pow14_torus()
    end = endomorphism_algebra(t)
    assert end.dim == 1


def test_endomorphism_algebra_zeta5(zeta5_mirror):
    t = zeta5_mirror["pair"].left.torus
    end = endomorphism_algebra(t)
    assert end.dim >= 4


def test_cm_certificate_tau_i():
    t, _, _ = tau_i_torus()
    v = cm_certificate(t)
    assert v.verdict == "CM"
    assert list(v.minpoly) == [1, 0, 1]


def test_cm_certificate_2pow14_dimension_obstruction():
    t, _ = tau_2pow14_torus()
    v = cm_certificate(t)
    assert v.verdict == "NotCM" and v.end_dim == 1


def test_cm_certificate_zeta5(zeta5_mirror):
    for side in ("left", "right"):
        t = getattr(zeta5_mirror["pair"], side).torus
        v = cm_certificate(t, trials=64, seed=1)
        assert v.verdict == "CM"
        assert polyq.degree(v.minpoly) == 4 and polyq.is_squarefree(v.minpoly)


def test_cm_certificate_never_notcm_on_construction(gaussian_cm, zeta5_cm):
    for bundle in (gaussian_cm, zeta5_cm):
        assert cm_certificate(bundle["torus"]).verdict != "NotCM"


def test_matrix_minpoly_of_mult_by_xi(zeta5_cm):
    inp = zeta5_cm["input"]
    m = mult_matrix_in_basis(inp.field.gen(), inp.basis)
    assert list(matrix_minpoly(m)) == [1, 1, 1, 1, 1]


def test_rational_kahler_search_tau_i():
    t, _, _ = tau_i_torus()
    g, dim = rational_kahler_search(t)
    assert g is not None and dim >= 1
    assert g.is_symmetric()
    assert t.I.transpose() * g.lift(t.field) * t.I == g.lift(t.field)
    assert positive_definite(g, QEMB).positive


def test_rational_kahler_search_2pow14_empty():
    t, _ = tau_2pow14_torus()
    g, dim = rational_kahler_search(t)
    assert g is None and dim == 0


def test_rational_kahler_search_zeta5(zeta5_mirror):
    t = zeta5_mirror["pair"].left.torus
    g, dim = rational_kahler_search(t, trials=200, seed=0)
    assert g is not None and dim >= 1
    g_f = g.lift(t.field)
    assert t.I.transpose() * g_f * t.I == g_f
    assert positive_definite(g, QEMB).positive


def test_kahler_search_finds_trace_form(zeta5_cm):
    # the trace metric itself lies in the rational solution space
    t = zeta5_cm["torus"]
    g_m = zeta5_cm["G"]
    g_f = g_m.lift(t.field)
    assert t.I.transpose() * g_f * t.I == g_f


def test_kahler_search_succeeds_on_cm_torus_outputs(gaussian_cm, zeta5_cm):
    # forward direction of the metric/CM equivalence, on construction output
    for bundle in (gaussian_cm, zeta5_cm):
        t = bundle["torus"]
        g, dim = rational_kahler_search(t, trials=200, seed=0)
        assert g is not None and dim >= 1
        g_f = g.lift(t.field)
        assert t.I.transpose() * g_f * t.I == g_f
        assert positive_definite(g, QEMB).positive


def test_eta_tau_i_known_value():
    t, k, pol = tau_i_torus()
    end = endomorphism_algebra(t)
    rep = eta_checks(t, FieldMatrix.identity(QQ, 2), pol, end)
    assert rep.passed
    # solving G = eta^T omega0 for G=Id, omega0=[[0,1],[-1,0]] gives -I
    assert rep.eta == FieldMatrix(QQ, [[0, 1], [-1, 0]])


def test_eta_is_multiplication_by_minus_beta(gaussian_cm, zeta5_cm):
    for bundle in (gaussian_cm, zeta5_cm):
        t = bundle["torus"]
        end = endomorphism_algebra(t)
        rep = eta_checks(t, bundle["G"], bundle["E"], end)
        assert rep.passed
        inp = bundle["input"]
        assert rep.eta == mult_matrix_in_basis(-inp.beta, inp.basis)


def test_simplicity_zeta5(zeta5_cm):
    inp = zeta5_cm["input"]
    k = inp.field
    subfields = [k.one(), k.element([-1, 0, -1, -1])]  # Q and Q(sqrt5)
    assert simplicity_check(inp, subfields) is True


def zeta12_input():
    k = make_field([1, 0, -1, 0, 1], conj_image=[0, 1, 0, -1])
    autos = [
        k.gen(),
        k.element([0, -1, 0, 1]),  # xi -> xi^5
        k.element([0, -1, 0, 0]),  # xi -> xi^7
        k.element([0, 1, 0, -1]),  # xi -> xi^11
    ]
    phi = [
        _embedding_near(k, math.cos(math.pi / 6), math.sin(math.pi / 6)),
        _embedding_near(k, math.cos(5 * math.pi / 6), math.sin(5 * math.pi / 6)),
    ]
    basis = [k.one(), k.gen(), k.gen() ** 2, k.gen() ** 3]
    return CmInput(k, basis, phi, None, autos)


def test_simplicity_zeta12_fails_via_gaussian_subfield():
    inp = zeta12_input()
    k = inp.field
    subfields = [
        k.element([0, 0, 0, 1]),  # i = xi^3
        k.element([0, 2, 0, -1]),  # xi + xi^-1 = sqrt3
        k.element([0, 0, 1, 0]),  # xi^2, generating Q(sqrt-3)
    ]
    assert simplicity_check(inp, subfields) is False


def test_element_minpoly():
    k = make_field([1, 1, 1, 1, 1], conj_image=[-1, -1, -1, -1])
    mp = element_minpoly(k.gen() + k.conj(k.gen()))  # 2cos(2pi/5): x^2+x-1
    assert list(mp) == [-1, 1, 1]


def test_find_beta_budget_exhaustion():
    k = make_field([1, 0, 1], conj_image=[0, -1])
    with pytest.raises(NotFoundWithinBudget):
        find_beta(k, [k.one(), k.gen()], [_embedding_near(k, 0.0, 1.0)], 0)
