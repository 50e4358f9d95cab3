"""CM abelian varieties: trace/Riemann forms, the period-matrix complex
structure, endomorphism algebras, CM certificates, rational-metric search,
the eta-involution checks, and the simplicity criterion.

The complex structure of C^g / Phi(O) is computed symbolically in the
quadratic extension ring A = K[y]/(y^2 + 1) (pairs of K-elements), which is
etale even when i already lies in K.  Entries are certified fixed by the
extended conjugation and their real values are extracted into an explicit
coefficient field via Krylov minimal polynomials and certified-enclosure
factor selection.  Every decision is exact; enclosures only steer which
exact verification to attempt.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction

from . import polyq
from .boxes import Box, poly_eval_box
from .exactla import FieldMatrix, Inconsistent, Singular, positive_definite
from .numfield import (
    Embedding,
    FieldElement,
    NumberField,
    _isolate_all_roots,
    _refine_box_once,
    exact_sign,
    exact_sign_imag,
    minpoly_factor_at,
    rationals,
    trace_q,
)
from .torus import ComplexTorusData


class BetaNotAdmissible(ValueError):
    pass


class BasisDependent(ValueError):
    pass


class UnsupportedField(ValueError):
    pass


class IncompatiblePolarization(ValueError):
    pass


class SubfieldDataNotClosed(ValueError):
    pass


class NotFoundWithinBudget(LookupError):
    pass


# ---------------------------------------------------------------------------
# Krylov minimal polynomials


def krylov_minpoly(vec_of_power):
    """Monic minimal polynomial from the first linear dependence of powers.

    `vec_of_power(k)` returns the rational coordinate vector of u^k in some
    ambient space; dependence is detected by exact elimination.
    """
    qq = rationals()
    cols = []
    k = 0
    while True:
        v = vec_of_power(k)
        if cols:
            a = FieldMatrix(qq, [[cols[j][i] for j in range(k)] for i in range(len(v))])
            b = FieldMatrix(qq, [[x] for x in v])
            try:
                sol = a.solve(b)
                coeffs = [-sol[j, 0].as_rational() for j in range(k)]
                return polyq.poly(coeffs + [Fraction(1)])
            except (Inconsistent, Singular):
                pass
        elif all(x == 0 for x in v):
            return polyq.poly([0, 1])
        cols.append(list(v))
        k += 1
        if k > len(cols[0]) + 1:
            raise AssertionError("no dependence found")


def matrix_minpoly(m: FieldMatrix):
    """Minimal polynomial of a rational square matrix."""
    powers = [FieldMatrix.identity(m.field, m.rows)]

    def vec(k):
        while len(powers) <= k:
            powers.append(powers[-1] * m)
        p = powers[k]
        return [p[i, j].as_rational() for i in range(p.rows) for j in range(p.cols)]

    return krylov_minpoly(vec)


def element_minpoly(x: FieldElement):
    """Minimal polynomial over Q of a field element."""
    powers = [x.field.one()]

    def vec(k):
        while len(powers) <= k:
            powers.append(powers[-1] * x)
        return list(powers[k].coords)

    return krylov_minpoly(vec)


# ---------------------------------------------------------------------------
# The quadratic extension ring A = K[y]/(y^2+1)


@dataclass(frozen=True)
class AElt:
    re: FieldElement
    im: FieldElement

    def __add__(self, o):
        return AElt(self.re + o.re, self.im + o.im)

    def __sub__(self, o):
        return AElt(self.re - o.re, self.im - o.im)

    def __neg__(self):
        return AElt(-self.re, -self.im)

    def __mul__(self, o):
        return AElt(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    def inverse(self):
        n = self.re * self.re + self.im * self.im
        ninv = n.inverse()  # ZeroDivisor iff not a unit of A
        return AElt(self.re * ninv, -(self.im * ninv))

    def is_zero(self):
        return self.re.is_zero() and self.im.is_zero()

    def conj(self):
        f = self.re.field
        return AElt(f.conj(self.re), -f.conj(self.im))

    def vec(self):
        return list(self.re.coords) + list(self.im.coords)

    def enclosure(self, emb: Embedding, width) -> Box:
        """Box around sigma(re) + i*sigma(im) through one embedding of K."""
        a = self.re.enclosure(emb, width)
        b = self.im.enclosure(emb, width)
        return Box(a.re - b.im, a.im + b.re)


def _a_from_k(x: FieldElement) -> AElt:
    return AElt(x, x.field.zero())


def _a_scale(x: AElt, c: Fraction) -> AElt:
    f = x.re.field
    ce = f.from_rational(c)
    return AElt(x.re * ce, x.im * ce)


def _a_matmul(a, b):
    n, m, p = len(a), len(b), len(b[0])
    out = []
    for i in range(n):
        row = []
        for j in range(p):
            acc = a[i][0] * b[0][j]
            for k in range(1, m):
                acc = acc + a[i][k] * b[k][j]
            row.append(acc)
        out.append(row)
    return out


def _a_inverse(mat):
    from .numfield import ZeroDivisor

    n = len(mat)
    f = mat[0][0].re.field
    zero, one = _a_from_k(f.zero()), _a_from_k(f.one())
    a = [list(row) + [one if i == j else zero for j in range(n)] for i, row in enumerate(mat)]

    def invertible(e):
        try:
            return e.inverse()
        except ZeroDivisor:
            return None

    r = 0
    for c in range(n):
        sel = inv = None
        for i in range(r, n):
            if a[i][c].is_zero():
                continue
            inv = invertible(a[i][c])
            if inv is not None:
                sel = i
                break
        if sel is None:
            # zero-divisor repair (etale A): a row sum may yield a unit pivot
            for i in range(r, n):
                for j in range(r, n):
                    if i == j:
                        continue
                    inv = invertible(a[i][c] + a[j][c])
                    if inv is not None:
                        a[i] = [x + y for x, y in zip(a[i], a[j])]
                        sel = i
                        break
                if sel is not None:
                    break
        if sel is None:
            raise Singular("matrix over A is not invertible")
        a[r], a[sel] = a[sel], a[r]
        a[r] = [x * inv for x in a[r]]
        for i in range(n):
            if i != r and not a[i][c].is_zero():
                fac = a[i][c]
                a[i] = [x - fac * y for x, y in zip(a[i], a[r])]
        r += 1
    return [row[n:] for row in a]


def _a_krylov_minpoly(u: AElt):
    powers = [_a_from_k(u.re.field.one())]

    def vec(k):
        while len(powers) <= k:
            powers.append(powers[-1] * u)
        return powers[k].vec()

    return krylov_minpoly(vec)


def _a_value_is_zero(u: AElt, emb: Embedding) -> bool:
    """Exact test: is the complex value of u under the base embedding zero?"""
    if u.is_zero():
        return True
    mu = _a_krylov_minpoly(u)
    if mu[0] != 0:
        return False  # zero is not a root of the annihilator
    h = polyq.pdivmod(mu, polyq.poly([0, 1]))[0]
    width = Fraction(1, 1 << 16)
    while True:
        box = u.enclosure(emb, width)
        if not box.contains_zero():
            return False
        if not poly_eval_box(h, box).contains_zero():
            return True
        width /= 1 << 6


# ---------------------------------------------------------------------------
# CM input


@dataclass
class CmInput:
    field: NumberField
    basis: list
    phi: list
    beta: FieldElement | None = None
    automorphisms: list | None = None

    def validate(self) -> None:
        k = self.field
        d = k.degree
        if not k.has_conj:
            raise ValueError("CM input needs a field with conjugation")
        if d % 2:
            raise ValueError("CM field must have even degree")
        if len(self.basis) != d:
            raise ValueError("basis must have 2g elements")
        qq = rationals()
        gram = FieldMatrix(
            qq,
            [[trace_q(a * b) for b in self.basis] for a in self.basis],
        )
        if gram.det().is_zero():
            raise BasisDependent("trace-form Gram determinant vanishes")
        embs = k.embeddings()
        if len(self.phi) != d // 2:
            raise ValueError("Phi must pick one embedding per conjugate pair")
        seen = set()
        for idx in self.phi:
            emb = embs[idx - 1]
            if emb.conj_index is None:
                raise ValueError("CM field cannot have real embeddings")
            if idx in seen or emb.conj_index in seen:
                raise ValueError("Phi contains a conjugate pair")
            seen.add(idx)
        if self.beta is not None:
            self.check_beta(self.beta)

    def check_beta(self, beta: FieldElement) -> None:
        k = self.field
        if not (k.conj(beta) + beta).is_zero():
            raise BetaNotAdmissible("conj(beta) != -beta")
        mb2 = -(beta * beta)
        for emb in k.embeddings():
            if exact_sign(mb2, emb) != 1:
                raise BetaNotAdmissible("-beta^2 is not totally positive")
        for idx in self.phi:
            if exact_sign_imag(beta, k.embeddings()[idx - 1]) != 1:
                raise BetaNotAdmissible("Im sigma_j(beta) <= 0 on Phi")


# ---------------------------------------------------------------------------
# Multiplication matrices


def mult_matrix_power_basis(x: FieldElement) -> FieldMatrix:
    """Matrix of multiplication by x on the power basis (rational)."""
    k = x.field
    qq = rationals()
    gen = k.gen()
    cols = []
    p = k.one()
    for _ in range(k.degree):
        cols.append((x * p).coords)
        p = p * gen
    return FieldMatrix(qq, [[cols[j][i] for j in range(k.degree)] for i in range(k.degree)])


def mult_matrix_in_basis(x: FieldElement, basis) -> FieldMatrix:
    """Matrix of multiplication by x in a given Q-basis (rational)."""
    k = x.field
    qq = rationals()
    bmat = FieldMatrix(qq, [[b.coords[i] for b in basis] for i in range(k.degree)])
    rhs = FieldMatrix(qq, [[(x * b).coords[i] for b in basis] for i in range(k.degree)])
    return bmat.solve(rhs)


def _apply_automorphism(tau_image: FieldElement, x: FieldElement) -> FieldElement:
    acc = x.field.zero()
    p = x.field.one()
    for c in x.coords:
        if c:
            acc = acc + p * x.field.from_rational(c)
        p = p * tau_image
    return acc


# ---------------------------------------------------------------------------
# Value-field extraction


def _match_embedding(value_encloser, embs, start_width=Fraction(1, 1 << 16)):
    """Index (1-based) of the unique embedding whose enclosure meets the value."""
    width = start_width
    while True:
        v = value_encloser(width)
        hits = [e for e in embs if not e.enclosure().disjoint(v)]
        if len(hits) == 1:
            return hits[0].index
        width /= 1 << 4
        for e in embs:
            e.refine(width)


def _extract_real_values(k: NumberField, base: Embedding, entries):
    """Find a field with a real designated embedding carrying all values.

    `entries` are conj-fixed AElts (real complex values under `base`).
    Returns (field, embedding, values-as-FieldElements).
    """
    qq = rationals()
    if all(e.im.is_zero() and e.re.is_rational() for e in entries):
        f = qq
        emb = f.embeddings()[0]
        return f, emb, [f.from_rational(e.re.as_rational()) for e in entries]

    nontrivial = []
    for e in entries:
        if e.is_zero() or (e.im.is_zero() and e.re.is_rational()):
            continue
        if all(not _a_value_is_zero(e - x, base) for x in nontrivial):
            nontrivial.append(e)
    candidates = list(nontrivial)
    for a, b in itertools.combinations(nontrivial, 2):
        candidates.append(a + b)
    rng = random.Random(20250809)
    for _ in range(8):
        combo = entries[0]
        first = True
        for e in nontrivial:
            c = rng.randint(-3, 3)
            term = _a_scale(e, Fraction(c))
            combo = term if first else combo + term
            first = False
        if not first:
            candidates.append(combo)

    for gamma in candidates:
        got = _try_generator(k, base, gamma, entries)
        if got is not None:
            return got
    raise UnsupportedField("could not extract a real coefficient field for I")


def _try_generator(k: NumberField, base: Embedding, gamma: AElt, entries):
    mg = _a_krylov_minpoly(gamma)
    p = minpoly_factor_at(mg, lambda w: gamma.enclosure(base, w))
    scale = math.lcm(*[c.denominator for c in p])
    if scale > 1:
        gamma = _a_scale(gamma, Fraction(scale))
        p = polyq.poly(
            [c * Fraction(scale) ** (len(p) - 1 - i) for i, c in enumerate(p)]
        )
    f = NumberField([int(c) for c in p])
    if f.degree == 1:
        femb = f.embeddings()[0]
    else:
        femb_idx = _match_embedding(lambda w: gamma.enclosure(base, w), f.embeddings())
        femb = f.embeddings()[femb_idx - 1]
        if not femb.is_real:
            return None
    values = []
    for e in entries:
        coords = _express_value(k, base, e, gamma, f)
        if coords is None:
            return None
        values.append(f.element(coords))
    return f, femb, values


def _express_value(k: NumberField, base: Embedding, e: AElt, gamma: AElt, f: NumberField):
    """Rational coordinates of value(e) in the power basis of value(gamma)."""
    deg = f.degree
    if e.im.is_zero() and e.re.is_rational():
        return [e.re.as_rational()] + [Fraction(0)] * (deg - 1)
    if deg == 1:
        return _rationalize_value(e, base)
    gpow = [_a_from_k(k.one())]
    for _ in range(deg - 1):
        gpow.append(gpow[-1] * gamma)
    embs = k.embeddings()
    for bits in (64, 128, 256, 512):
        width = Fraction(1, 1 << bits)
        rows = []
        rhs = []
        used = []
        for emb in embs:
            gval = gamma.enclosure(emb, width)
            if any(not gval.disjoint(u) for u in used):
                continue
            used.append(gval)
            rows.append([p.enclosure(emb, width) for p in gpow])
            rhs.append(e.enclosure(emb, width))
            if len(rows) == deg:
                break
        if len(rows) < deg:
            continue
        qq = rationals()
        try:
            a = FieldMatrix(qq, [[c.re.mid() for c in row] for row in rows])
            b = FieldMatrix(qq, [[c.re.mid()] for c in rhs])
            sol = a.solve(b)
        except (Inconsistent, Singular):
            continue
        approx = [sol[i, 0].as_rational() for i in range(deg)]
        for dbound in (1 << 12, 1 << 24, 1 << 48):
            cand = [x.limit_denominator(dbound) for x in approx]
            diff = e
            for c, p in zip(cand, gpow):
                diff = diff - _a_scale(p, c)
            if _a_value_is_zero(diff, base):
                return cand
    return None


def _rationalize_value(e: AElt, base: Embedding):
    for bits in (64, 128, 256):
        box = e.enclosure(base, Fraction(1, 1 << bits))
        for dbound in (1 << 12, 1 << 24, 1 << 48):
            cand = box.re.mid().limit_denominator(dbound)
            diff = e - _a_from_k(e.re.field.from_rational(cand))
            if _a_value_is_zero(diff, base):
                return [cand]
    return None


# ---------------------------------------------------------------------------
# cm_torus


def cm_torus(inp: CmInput):
    """Build the CM torus: (ComplexTorusData, E, G) with E, G rational.

    E_kl = Tr(beta a_k conj(a_l)) is the Riemann form; G_kl =
    Tr(-beta^2 a_k conj(a_l)) the rational Kahler metric; I is the
    multiplication-by-i matrix from the period construction.
    """
    inp.validate()
    if inp.beta is None:
        raise BetaNotAdmissible("cm_torus needs beta")
    k = inp.field
    d = k.degree
    g = d // 2
    beta = inp.beta
    abar = [k.conj(a) for a in inp.basis]
    qq = rationals()
    e_rows = [[trace_q(beta * a * ab) for ab in abar] for a in inp.basis]
    g_rows = [[trace_q(-(beta * beta) * a * ab) for ab in abar] for a in inp.basis]
    e_m = FieldMatrix(qq, e_rows)
    g_m = FieldMatrix(qq, g_rows)
    if not e_m.is_antisymmetric():
        raise AssertionError("E is not antisymmetric")
    if not g_m.is_symmetric():
        raise AssertionError("G is not symmetric")
    m_beta = mult_matrix_in_basis(beta, inp.basis)
    if e_m * m_beta != g_m:
        raise AssertionError("G != E * (mult by beta)")
    if not positive_definite(g_m, qq.embeddings()[0]):
        raise BetaNotAdmissible("trace metric is not positive definite")

    autos = inp.automorphisms
    if autos is None:
        if d == 2:
            autos = [k.gen(), k.conj(k.gen())]
        else:
            raise UnsupportedField("no automorphisms supplied for a degree>2 field")
    for tau in autos:
        if any(c != 0 for c in k._minpoly_at(tau.coords)):
            raise UnsupportedField("supplied automorphism image is not a root of minpoly")
    if len(autos) != d or len({tau.coords for tau in autos}) != d:
        raise UnsupportedField("need the full set of distinct automorphisms (Galois)")

    embs = k.embeddings()
    base = embs[inp.phi[0] - 1]
    auto_by_emb = {}
    for tau in autos:
        idx = _match_embedding(lambda w, t=tau: t.enclosure(base, w), embs)
        auto_by_emb[idx] = tau
    if len(auto_by_emb) != d:
        raise UnsupportedField("automorphisms do not separate the embeddings")

    rows = []
    for idx in inp.phi:
        tau = auto_by_emb[idx]
        rows.append([_a_from_k(_apply_automorphism(tau, a)) for a in inp.basis])
    for idx in inp.phi:
        tau = auto_by_emb[idx]
        rows.append([_a_from_k(k.conj(_apply_automorphism(tau, a))) for a in inp.basis])
    y = AElt(k.zero(), k.one())
    ny = AElt(k.zero(), -k.one())
    diag = [y] * g + [ny] * g
    dm = [
        [diag[i] if i == j else _a_from_k(k.zero()) for j in range(d)] for i in range(d)
    ]
    i_a = _a_matmul(_a_matmul(_a_inverse(rows), dm), rows)
    flat = []
    for row in i_a:
        for e in row:
            if e.conj() != e:
                raise AssertionError("I entry is not fixed by conjugation")
            flat.append(e)
    f, femb, values = _extract_real_values(k, base, flat)
    i_f = FieldMatrix(f, [[values[i * d + j] for j in range(d)] for i in range(d)])
    torus = ComplexTorusData(g, f, i_f, femb)
    e_f = e_m.lift(f)
    g_f = g_m.lift(f)
    if i_f.transpose() * e_f * i_f != e_f:
        raise AssertionError("E is not I-compatible")
    if i_f.transpose() * g_f * i_f != g_f:
        raise AssertionError("G is not I-compatible")
    return torus, e_m, g_m


# ---------------------------------------------------------------------------
# find_beta


def find_beta(k: NumberField, basis, phi, budget: int) -> FieldElement:
    """First admissible beta among small integer combinations of the
    conj-antisymmetric parts of the basis, ordered by (max|coeff|, lex)."""
    inp = CmInput(k, list(basis), list(phi))
    inp.validate()
    qq = rationals()
    bmat = FieldMatrix(qq, [[b.coords[i] for b in basis] for i in range(k.degree)])
    parts = []
    for a in basis:
        v = a - k.conj(a)
        if v.is_zero():
            continue
        half = k.element([c / 2 for c in v.coords])
        use = half if _in_span_integral(bmat, half) else v
        if any(use == p or use == -p for p in parts):
            continue
        parts.append(use)
    if not parts:
        raise NotFoundWithinBudget("basis has no conj-antisymmetric part")
    coords = sorted(
        itertools.product(range(-budget, budget + 1), repeat=len(parts)),
        key=lambda c: (max(abs(x) for x in c), c),
    )
    for c in coords:
        if all(x == 0 for x in c):
            continue
        beta = k.zero()
        for x, p in zip(c, parts):
            if x:
                beta = beta + p * k.from_rational(x)
        try:
            inp.check_beta(beta)
            return beta
        except BetaNotAdmissible:
            continue
    raise NotFoundWithinBudget(f"no admissible beta with coordinates up to {budget}")


def _in_span_integral(bmat: FieldMatrix, x: FieldElement) -> bool:
    try:
        sol = bmat.solve(FieldMatrix(rationals(), [[c] for c in x.coords]))
    except (Inconsistent, Singular):
        return False
    return all(sol[i, 0].as_rational().denominator == 1 for i in range(sol.rows))


# ---------------------------------------------------------------------------
# Endomorphism algebra and certificates


@dataclass
class EndAlgebra:
    basis: list  # rational FieldMatrix over Q
    dim: int


def endomorphism_algebra(t: ComplexTorusData) -> EndAlgebra:
    """Rational solutions of M I = I M, via coordinatewise splitting."""
    n = 2 * t.g
    deg = t.field.degree
    qq = rationals()
    rows = []
    for i in range(n):
        for j in range(n):
            entries = {}
            for kk in range(n):
                entries[(i, kk)] = entries.get((i, kk), t.field.zero()) + t.I[kk, j]
                entries[(kk, j)] = entries.get((kk, j), t.field.zero()) - t.I[i, kk]
            for c in range(deg):
                row = [Fraction(0)] * (n * n)
                nonzero = False
                for (a, b), val in entries.items():
                    if val.coords[c]:
                        row[a * n + b] = val.coords[c]
                        nonzero = True
                if nonzero:
                    rows.append(row)
    mat = FieldMatrix(qq, rows)
    ker = mat.kernel()
    basis = []
    for r in range(ker.rows):
        flat = [ker[r, c].as_rational() for c in range(n * n)]
        basis.append(FieldMatrix(qq, [flat[i * n : (i + 1) * n] for i in range(n)]))
    return EndAlgebra(basis, len(basis))


@dataclass
class CmVerdict:
    verdict: str  # "CM" | "NotCM" | "Inconclusive"
    witness: FieldMatrix | None
    minpoly: tuple | None
    end_dim: int


def cm_certificate(t: ComplexTorusData, trials: int = 64, seed: int = 0) -> CmVerdict:
    """One-sided CM certificate search per the endomorphism criterion.

    CM: a rational endomorphism with squarefree minimal polynomial of
    degree 2g.  NotCM: only by the dimension obstruction dim End < 2g.
    Anything else is Inconclusive after `trials` seeded samples.
    """
    end = endomorphism_algebra(t)
    n = 2 * t.g
    if end.dim < n:
        return CmVerdict("NotCM", None, None, end.dim)
    rng = random.Random(seed)
    tried = 0
    for m in end.basis:
        if tried >= trials:
            break
        tried += 1
        got = _certificate_from(m, n)
        if got:
            return CmVerdict("CM", m, got, end.dim)
    while tried < trials:
        tried += 1
        coeffs = [rng.randint(-3, 3) for _ in end.basis]
        if not any(coeffs):
            continue
        m = FieldMatrix.zeros(rationals(), n, n)
        for c, b in zip(coeffs, end.basis):
            if c:
                m = m + b.scale(c)
        got = _certificate_from(m, n)
        if got:
            return CmVerdict("CM", m, got, end.dim)
    return CmVerdict("Inconclusive", None, None, end.dim)


def _certificate_from(m: FieldMatrix, n: int):
    mp = matrix_minpoly(m)
    if polyq.degree(mp) == n and polyq.is_squarefree(mp):
        return mp
    return None


def rational_kahler_search(t: ComplexTorusData, trials: int = 200, seed: int = 0):
    """Search the rational solution space of {G = G^T, I^T G I = G} for a
    positive definite element.

    Returns (G or None, solution_space_dimension).  Sampling: deterministic
    unit/sum vectors first, then seeded coefficients with numerators in
    [-8, 8] and denominators in [1, 8].
    """
    n = 2 * t.g
    deg = t.field.degree
    qq = rationals()
    unknowns = [(i, j) for i in range(n) for j in range(i, n)]
    index = {u: c for c, u in enumerate(unknowns)}
    rows = []
    for i in range(n):
        for j in range(n):
            coeffs = {}
            for a in range(n):
                for b in range(n):
                    key = (a, b) if a <= b else (b, a)
                    val = t.I[a, i] * t.I[b, j]
                    coeffs[key] = coeffs.get(key, t.field.zero()) + val
            key = (i, j) if i <= j else (j, i)
            coeffs[key] = coeffs.get(key, t.field.zero()) - t.field.one()
            for c in range(deg):
                row = [Fraction(0)] * len(unknowns)
                nonzero = False
                for kk, val in coeffs.items():
                    if val.coords[c]:
                        row[index[kk]] = val.coords[c]
                        nonzero = True
                if nonzero:
                    rows.append(row)
    ker = FieldMatrix(qq, rows).kernel()
    dim = ker.rows
    if dim == 0:
        return None, 0
    basis = []
    for r in range(dim):
        mat = [[Fraction(0)] * n for _ in range(n)]
        for (i, j), c in index.items():
            v = ker[r, c].as_rational()
            mat[i][j] = v
            mat[j][i] = v
        basis.append(FieldMatrix(qq, mat))
    emb = qq.embeddings()[0]
    rng = random.Random(seed)
    tried = 0

    def attempt(coeffs):
        nonlocal tried
        if tried >= trials or not any(coeffs):
            return None
        tried += 1
        g = FieldMatrix.zeros(qq, n, n)
        for c, b in zip(coeffs, basis):
            if c:
                g = g + b.scale(c)
        if g.is_zero():
            return None
        if positive_definite(g, emb):
            return g
        return None

    for i in range(dim):
        got = attempt([1 if j == i else 0 for j in range(dim)])
        if got is not None:
            return got, dim
    got = attempt([1] * dim)
    if got is not None:
        return got, dim
    while tried < trials:
        coeffs = [Fraction(rng.randint(-8, 8), rng.randint(1, 8)) for _ in range(dim)]
        got = attempt(coeffs)
        if got is not None:
            return got, dim
    return None, dim


# ---------------------------------------------------------------------------
# Eta checks: the metric-induced involution against the Rosati involution


@dataclass
class EtaReport:
    eta: FieldMatrix
    commutes_with_i: bool
    rosati_antisymmetric: bool
    involutions_conjugate: bool

    @property
    def passed(self) -> bool:
        return self.commutes_with_i and self.rosati_antisymmetric and self.involutions_conjugate


def eta_checks(
    t: ComplexTorusData, g_m: FieldMatrix, omega0: FieldMatrix, end: EndAlgebra
) -> EtaReport:
    """Checks (i), (ii), (iv) for eta defined by G(.,.) = omega0(eta., .)."""
    if not omega0.is_antisymmetric():
        raise IncompatiblePolarization("omega0 is not antisymmetric")
    try:
        om_inv = omega0.inverse()
    except Singular:
        raise IncompatiblePolarization("omega0 is singular")
    i_f = t.I
    om_f = omega0.lift(t.field)
    if i_f.transpose() * om_f * i_f != om_f:
        raise IncompatiblePolarization("omega0 is not I-compatible")
    if not g_m.is_symmetric():
        raise ValueError("G must be symmetric")
    eta = (g_m * om_inv).transpose()
    eta_f = eta.lift(t.field)
    commutes = eta_f * i_f == i_f * eta_f

    def rosati(f):
        return om_inv * f.transpose() * omega0

    anti = rosati(eta) == -eta
    g_inv = g_m.inverse()
    eta_inv = eta.inverse()
    conj_ok = True
    for f in end.basis:
        f_g = g_inv * f.transpose() * g_m
        if f_g != eta_inv * rosati(f) * eta:
            conj_ok = False
            break
    return EtaReport(eta, commutes, anti, conj_ok)


# ---------------------------------------------------------------------------
# Simplicity criterion


def simplicity_check(inp: CmInput, subfield_data) -> bool:
    """False iff some supplied proper subfield satisfies the two obstruction
    conditions (purely complex quadratic over its real part, and Phi-
    restriction collapse); True otherwise."""
    inp.validate()
    k = inp.field
    embs = k.embeddings()
    phi_embs = [embs[i - 1] for i in inp.phi]
    for u in subfield_data:
        if not isinstance(u, FieldElement) or u.field != k:
            raise SubfieldDataNotClosed("subfield generator is not an element of K")
        basis_l = _power_span_basis(u)
        l_dim = len(basis_l)
        if l_dim in (1, k.degree):
            continue  # Q itself or not proper
        if not _conj_stable(k, basis_l):
            continue  # cannot be a complex quadratic extension of its real part
        fixed = _fixed_subbasis(k, basis_l)
        if l_dim != 2 * len(fixed):
            continue  # not quadratic over L cap K0
        collapse = True
        for ea, eb in itertools.combinations(phi_embs, 2):
            agree_k0 = all(_values_equal(x, ea, eb) for x in fixed)
            if agree_k0:
                agree_l = all(_values_equal(x, ea, eb) for x in basis_l)
                if not agree_l:
                    collapse = False
                    break
        if collapse:
            return False
    return True


def _power_span_basis(u: FieldElement):
    mp = element_minpoly(u)
    deg = polyq.degree(mp)
    out = [u.field.one()]
    for _ in range(deg - 1):
        out.append(out[-1] * u)
    return out


def _conj_stable(k: NumberField, basis_l) -> bool:
    qq = rationals()
    bmat = FieldMatrix(qq, [[b.coords[i] for b in basis_l] for i in range(k.degree)])
    for b in basis_l:
        target = FieldMatrix(qq, [[c] for c in k.conj(b).coords])
        try:
            aug = FieldMatrix(
                qq,
                [list(bmat.entries[i]) + list(target.entries[i]) for i in range(k.degree)],
            )
            if aug.rank() != bmat.rank():
                return False
        except ValueError:
            return False
    return True


def _fixed_subbasis(k: NumberField, basis_l):
    """Basis of the conj-fixed subspace of span(basis_l)."""
    qq = rationals()
    rows = []
    for b in basis_l:
        diff = k.conj(b) - b
        rows.append(list(diff.coords))
    # kernel of c -> sum c_i (conj(b_i) - b_i)
    mat = FieldMatrix(qq, [[rows[j][i] for j in range(len(basis_l))] for i in range(k.degree)])
    ker = mat.kernel()
    out = []
    for r in range(ker.rows):
        x = k.zero()
        for j, b in enumerate(basis_l):
            c = ker[r, j].as_rational()
            if c:
                x = x + b * k.from_rational(c)
        out.append(x)
    return out


def _values_equal(x: FieldElement, ea: Embedding, eb: Embedding) -> bool:
    """Exact equality of sigma_a(x) and sigma_b(x) via root enclosures."""
    mp = element_minpoly(x)
    if polyq.degree(mp) == 1:
        return True
    reals, uppers = _isolate_all_roots(mp)
    boxes = list(reals) + list(uppers) + [b.conj() for b in uppers]
    dp = polyq.pderiv(mp)

    def locate(emb):
        width = Fraction(1, 1 << 16)
        while True:
            v = x.enclosure(emb, width)
            hits = [i for i, b in enumerate(boxes) if not b.disjoint(v)]
            if len(hits) == 1:
                return hits[0]
            width /= 1 << 4
            for i in range(len(boxes)):
                boxes[i] = _refine_box_once(mp, dp, boxes[i])

    return locate(ea) == locate(eb)
