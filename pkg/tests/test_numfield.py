import cmath
import random
from fractions import Fraction

import pytest

from toruscm import polyq
from toruscm.numfield import (
    ConjNotAutomorphism,
    ConjNotInvolution,
    NotSquarefree,
    embeddings,
    exact_sign,
    exact_sign_imag,
    make_field,
    rational_part,
    rationals,
    trace_q,
)


def gaussian():
    return make_field([1, 0, 1], conj_image=[0, -1])


def zeta5():
    return make_field([1, 1, 1, 1, 1], conj_image=[-1, -1, -1, -1])


def test_make_field_gaussian_conj():
    f = gaussian()
    assert f.degree == 2
    i = f.gen()
    assert f.conj(i) == -i
    assert f.conj(f.conj(i)) == i


def test_make_field_zeta5():
    f = zeta5()
    xi = f.gen()
    assert xi**5 == f.one()
    assert f.conj(xi) == xi**4


def test_make_field_rejects_square():
    with pytest.raises(NotSquarefree):
        make_field([0, 0, 1])  # x^2 has a double root


def test_make_field_allows_reducible_squarefree():
    f = make_field([0, -1, 1])  # x^2 - x = x(x-1)
    assert f.degree == 2


def test_conj_must_be_automorphism():
    with pytest.raises(ConjNotAutomorphism):
        make_field([1, 0, 1], conj_image=[1, 1])


def test_conj_must_be_involution():
    # xi -> xi^2 is an automorphism of Q(zeta5) of order 4
    with pytest.raises(ConjNotInvolution):
        make_field([1, 1, 1, 1, 1], conj_image=[0, 0, 1, 0])


def test_embeddings_gaussian():
    f = gaussian()
    embs = embeddings(f, Fraction(1, 1 << 20))
    assert len(embs) == 2
    assert not any(e.is_real for e in embs)
    vals = sorted(e.enclosure().approx().imag for e in embs)
    assert abs(vals[0] + 1) < 1e-5 and abs(vals[1] - 1) < 1e-5
    assert embs[0].conj_index == 2 and embs[1].conj_index == 1


def test_embeddings_zeta5_match_roots_of_unity():
    f = zeta5()
    embs = embeddings(f, Fraction(1, 1 << 20))
    assert len(embs) == 4
    targets = [cmath.exp(2j * cmath.pi * k / 5) for k in range(1, 5)]
    for e in embs:
        z = e.enclosure().approx()
        assert min(abs(z - t) for t in targets) < 1e-5
    # pairwise disjoint enclosures
    for i in range(4):
        for j in range(i + 1, 4):
            assert embs[i].enclosure().disjoint(embs[j].enclosure())


def test_embeddings_sqrt5_real():
    f = make_field([-5, 0, 1])
    embs = embeddings(f, Fraction(1, 1 << 30))
    assert [e.is_real for e in embs] == [True, True]
    # bisection oracle: sqrt(5) in (2.2360679, 2.2360680)
    lo, hi = (e.enclosure().re for e in embs)
    assert abs(float(lo.mid()) + 2.23606797) < 1e-6
    assert abs(float(hi.mid()) - 2.23606797) < 1e-6


def test_embedding_refinement_monotone():
    f = zeta5()
    e = f.embeddings()[0]
    w0 = e.enclosure().width()
    e.refine(w0 / (1 << 12))
    w1 = e.enclosure().width()
    assert w1 < w0
    # still encloses a root: interval evaluation of the minpoly allows zero
    from toruscm.boxes import poly_eval_box

    assert poly_eval_box(f.minpoly, e.enclosure()).contains_zero()


def test_exact_sign_zero():
    f = make_field([-5, 0, 1])
    assert exact_sign(f.zero(), f.embeddings()[0]) == 0


def test_exact_sign_sqrt5():
    f = make_field([-5, 0, 1])
    neg, pos = f.embeddings()
    assert exact_sign(f.gen(), pos) == 1
    assert exact_sign(f.gen(), neg) == -1


def test_exact_sign_totally_positive_beta_square():
    f = zeta5()
    xi = f.gen()
    beta = xi - xi**4
    val = -(beta * beta)
    for e in f.embeddings():
        assert exact_sign(val, e) == 1
    # numeric cross-check: 2 - 2cos(4 pi k / 5) > 0 at every root
    for k in range(1, 5):
        w = cmath.exp(2j * cmath.pi * k / 5)
        assert (2 - w**2 - w**-2).real > 0


def test_exact_sign_zero_divisor_fallback():
    # x^2 - x splits as x(x-1): gen vanishes at the root 0 only
    f = make_field([0, -1, 1])
    e0, e1 = f.embeddings()
    signs = sorted(exact_sign(f.gen(), e) for e in (e0, e1))
    assert signs == [0, 1]


def test_exact_sign_imag_on_beta():
    f = zeta5()
    xi = f.gen()
    beta = xi - xi**4
    by_index = {e.index: exact_sign_imag(beta, e) for e in f.embeddings()}
    # images are 2i sin(2 pi k/5): positive on the upper-half embeddings
    for e in f.embeddings():
        z = e.enclosure().approx()
        expected = 1 if (z - z.conjugate()).imag > 0 else -1
        assert by_index[e.index] == expected


def test_trace_identity_is_degree():
    for mp in ([1, 0, 1], [1, 1, 1, 1, 1], [-2, 0, 0, 0, 1]):
        f = make_field(mp)
        assert trace_q(f.one()) == len(mp) - 1


def test_trace_zeta5_generator():
    assert trace_q(zeta5().gen()) == -1


def test_trace_gaussian():
    f = gaussian()
    rng = random.Random(7)
    for _ in range(10):
        a, b = Fraction(rng.randint(-9, 9), rng.randint(1, 5)), Fraction(rng.randint(-9, 9))
        x = f.element([a, b])
        assert trace_q(x) == 2 * a


def test_trace_linear_and_conj_invariant():
    f = zeta5()
    rng = random.Random(11)
    for _ in range(20):
        x = f.element([Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(4)])
        y = f.element([Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(4)])
        assert trace_q(x + y) == trace_q(x) + trace_q(y)
        assert trace_q(f.conj(x)) == trace_q(x)
        assert trace_q(f.conj(x) * f.conj(y)) == trace_q(x * y)


def test_rational_part():
    f5 = make_field([-5, 0, 1])
    r, rem = rational_part(f5.from_rational(Fraction(3, 2)))
    assert r == Fraction(3, 2) and rem.is_zero()
    r, rem = rational_part(f5.from_rational(2) + f5.gen())
    assert r == 2 and rem == f5.gen()
    f = zeta5()
    xi = f.gen()
    x = f.from_rational(5) + xi * 2 - xi**3
    r, rem = rational_part(x)
    assert r == 5 and rem == xi * 2 - xi**3


def test_element_inverse_and_pow():
    f = zeta5()
    xi = f.gen()
    assert xi * xi.inverse() == f.one()
    assert xi ** (-1) == xi**4


def test_rationals_field():
    qq = rationals()
    assert qq.degree == 1
    e = qq.embeddings()[0]
    assert e.is_real
    assert exact_sign(qq.from_rational(Fraction(-3, 7)), e) == -1
