"""Exact arithmetic in Q[x]/(m(x)) with certified complex embeddings.

A field is given by a monic squarefree integer polynomial; elements are
power-basis coordinate vectors of rationals.  Embeddings are certified
complex enclosures of the roots of m: real roots isolated by Sturm
sequences, complex roots by interval-Newton certification of boxes seeded
with Durand-Kerner approximations.  No floating-point value ever decides
anything; floats only pick where to *try* a certificate.
"""

from __future__ import annotations

import itertools
import math
import os
from fractions import Fraction

from . import polyq
from .boxes import Box, Iv, poly_eval_box


class NotSquarefree(ValueError):
    pass


class ConjNotAutomorphism(ValueError):
    pass


class ConjNotInvolution(ValueError):
    pass


class NotRealUnderEmbedding(ValueError):
    pass


class ZeroDivisor(ArithmeticError):
    """Division by an element that is not invertible mod the minpoly."""


def default_enclosure_width() -> Fraction:
    raw = os.environ.get("TORUSCM_PRECISION")
    if raw:
        return Fraction(raw)
    return Fraction(1, 1 << 24)


# ---------------------------------------------------------------------------
# Root isolation


def _durand_kerner(p, iters=400):
    """Float approximations to all roots of a squarefree polynomial.

    Returns None when the coefficients overflow floats; callers fall back
    to exact subdivision.
    """
    d = polyq.degree(p)
    try:
        cs = [complex(c) / complex(p[-1]) for c in p]
        if any(
            not (math.isfinite(x.real) and math.isfinite(x.imag)) for x in cs
        ):
            return None
    except (OverflowError, ValueError):
        return None
    zs = [(0.4 + 0.9j) ** k for k in range(1, d + 1)]
    for _ in range(iters):
        moved = 0.0
        for i in range(d):
            num = 0j
            for c in reversed(cs):
                num = num * zs[i] + c
            den = 1 + 0j
            for j in range(d):
                if j != i:
                    den *= zs[i] - zs[j]
            if den == 0:
                den = 1e-30
            step = num / den
            zs[i] -= step
            moved = max(moved, abs(step))
        if moved < 1e-14:
            break
    return zs


def _newton_step(p, dp, box: Box) -> Box | None:
    """One interval-Newton step; None if the derivative box straddles 0."""
    dval = poly_eval_box(dp, box)
    if dval.contains_zero():
        return None
    mid = box.mid()
    return mid - poly_eval_box(p, mid) / dval


def _certify(p, dp, box: Box) -> bool:
    """Interval-Newton proof that box contains exactly one root of p."""
    n = _newton_step(p, dp, box)
    return n is not None and n.inside(box)


def _refine_certified(p, dp, box: Box, width: Fraction) -> Box:
    """Shrink a certified box below `width` (Newton with bisection fallback)."""
    bits = 16
    while Fraction(1, 1 << bits) > width / 4:
        bits += 16
    while box.width() >= width:
        n = _newton_step(p, dp, box)
        if n is not None:
            cut = n.intersect(box)
            if cut is not None and cut.width() <= box.width() * Fraction(3, 4):
                box = cut.dyadic_outward(bits)
                continue
        box = _bisect_certified(p, dp, box)
    return box


def _bisect_certified(p, dp, box: Box) -> Box:
    wide_re = box.re.width() >= box.im.width()
    if wide_re:
        m = box.re.mid()
        halves = [Box(Iv(box.re.lo, m), box.im), Box(Iv(m, box.re.hi), box.im)]
    else:
        m = box.im.mid()
        halves = [Box(box.re, Iv(box.im.lo, m)), Box(box.re, Iv(m, box.im.hi))]
    for h in halves:
        if _certify(p, dp, h):
            return h
    # root may sit on the cut: keep the half whose evaluation allows zero
    for h in halves:
        if poly_eval_box(p, h).contains_zero():
            return h
    return box


def _refine_box_once(p, dp, box: Box) -> Box:
    if box.width() == 0:
        return box  # an exact point cannot shrink further
    # Newton first in all cases; _bisect_certified covers stalls, so real
    # boxes never need a new Sturm chain after isolation
    if box.im.lo == box.im.hi == 0:
        n = _newton_step(p, dp, box)
        if n is not None:
            cut = n.intersect(box)
            if cut is not None and cut.width() <= box.width() * Fraction(3, 4):
                # grid must be much finer than the contraction or the
                # outward rounding eats the progress
                bits = 16
                while Fraction(1, 1 << bits) > box.width() / 64:
                    bits += 16
                out = cut.dyadic_outward(bits)
                if out.width() < box.width():
                    return Box(out.re, Iv.point(0))
        half = _bisect_certified(p, dp, box)
        return Box(half.re, Iv.point(0))
    return _refine_certified(p, dp, box, box.width() / 2)


def _merge_close(zs, tol=1e-9):
    out = []
    for z in zs:
        if out and abs(z - out[-1]) < tol:
            continue
        out.append(z)
    return out


def _min_separation(approx, reals):
    pts = list(approx) + [z.conjugate() for z in approx]
    pts += [complex(b.re.mid()) for b in reals]
    best = 1.0
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            best = min(best, abs(pts[i] - pts[j]))
    return max(best, 1e-12)


def _certify_around(p, dp, z: complex, sep: float) -> Box | None:
    re = Fraction(z.real).limit_denominator(1 << 48)
    im = Fraction(z.imag).limit_denominator(1 << 48)
    base = Fraction(sep).limit_denominator(1 << 30) / 3
    for shrink in range(14):
        r = base / (1 << shrink)
        if r == 0:
            break
        box = Box(Iv(re - r, re + r), Iv(im - r, im + r))
        if _certify(p, dp, box):
            return _refine_certified(p, dp, box, Fraction(1, 1 << 16))
    return None


def _subdivision_upper_roots(p, dp, count, reals):
    """Exhaustive fallback: subdivide the upper half of a Cauchy box."""
    bound = polyq.cauchy_bound(p)
    eps = Fraction(1, 257)  # asymmetry keeps roots off the cut lines
    queue = [Box(Iv(-bound - eps, bound + eps), Iv(Fraction(0), bound + eps))]
    found = []
    guard = 0
    while queue and len(found) < count:
        guard += 1
        if guard > 200000:
            raise AssertionError("root subdivision failed to converge")
        box = queue.pop()
        if not poly_eval_box(p, box).contains_zero():
            continue
        if _certify(p, dp, box):
            box = _refine_certified(p, dp, box, Fraction(1, 1 << 16))
            if box.im.strictly_positive():
                found.append(box)
            continue
        if box.re.width() >= box.im.width():
            m = box.re.mid() + box.re.width() / 17
            queue += [Box(Iv(box.re.lo, m), box.im), Box(Iv(m, box.re.hi), box.im)]
        else:
            m = box.im.mid() + box.im.width() / 17
            queue += [Box(box.re, Iv(box.im.lo, m)), Box(box.re, Iv(m, box.im.hi))]
    if len(found) != count:
        raise AssertionError("root subdivision missed roots")
    found.sort(key=lambda b: (b.re.mid(), b.im.mid()))
    return found


def _isolate_all_roots(p):
    """Pairwise-disjoint certified boxes for all roots of squarefree p.

    Returns (real_boxes, upper_boxes): real roots ascending, strictly
    complex roots with Im > 0 ordered by (re, im); the conjugate roots are
    the mirrored upper boxes.
    """
    d = polyq.degree(p)
    dp = polyq.pderiv(p)
    reals = []
    chain = polyq.sturm_chain(p)
    for a, b in polyq.isolate_real_roots(p):
        a, b = polyq.refine_real_root(p, a, b, Fraction(1, 1 << 8), chain)
        reals.append(Box(Iv(a, b), Iv.point(0)))
    n_upper, rem = divmod(d - len(reals), 2)
    if rem:
        raise AssertionError("complex roots must pair up")

    uppers = None
    if n_upper:
        seeds = _durand_kerner(p)
        if seeds is not None:
            approx = _merge_close(
                sorted((z for z in seeds if z.imag > 1e-9), key=lambda z: (z.real, z.imag))
            )
            if len(approx) == n_upper:
                sep = _min_separation(approx, reals)
                boxes = [_certify_around(p, dp, z, sep) for z in approx]
                if all(b is not None for b in boxes):
                    uppers = boxes
        if uppers is None:
            uppers = _subdivision_upper_roots(p, dp, n_upper, reals)
        # force boxes strictly off the real axis
        uppers = [
            b if b.im.strictly_positive() else _strictly_upper(p, dp, b) for b in uppers
        ]
    else:
        uppers = []

    boxes = reals + uppers
    _make_disjoint(p, dp, boxes)
    return boxes[: len(reals)], boxes[len(reals) :]


def _strictly_upper(p, dp, box: Box) -> Box:
    while not box.im.strictly_positive():
        box = _refine_certified(p, dp, box, box.width() / 2)
    return box


def _make_disjoint(p, dp, boxes):
    """Refine in place until all boxes (and conjugates of complex ones) are
    pairwise strictly disjoint."""

    def views():
        out = []
        for b in boxes:
            out.append(b)
            if not (b.im.lo == b.im.hi == 0):
                out.append(b.conj())
        return out

    changed = True
    while changed:
        changed = False
        vs = views()
        for i in range(len(vs)):
            for j in range(i + 1, len(vs)):
                if not vs[i].disjoint(vs[j]):
                    for k in range(len(boxes)):
                        boxes[k] = _refine_box_once(p, dp, boxes[k])
                    changed = True
                    break
            if changed:
                break


# ---------------------------------------------------------------------------
# Field, element, embedding


class Embedding:
    """A certified complex embedding: one isolated root of the minpoly."""

    def __init__(self, field, index, box, is_real, conj_index):
        self.field = field
        self.index = index  # 1-based
        self.is_real = is_real
        self.conj_index = conj_index
        self._box = box

    def enclosure(self, width=None) -> Box:
        if width is not None:
            self.refine(width)
        return self._box

    def refine(self, width) -> Box:
        p, dp = self.field.minpoly, self.field._dminpoly
        while self._box.width() >= width:
            self._box = _refine_box_once(p, dp, self._box)
        if self.conj_index is not None:
            mate = self.field.embeddings()[self.conj_index - 1]
            if mate._box.width() > self._box.width():
                mate._box = self._box.conj()
        return self._box

    def __repr__(self):
        return f"Embedding(#{self.index}, ~{self._box.approx():.6g}, real={self.is_real})"


class NumberField:
    """Q[x]/(m) for monic squarefree integer m, with optional conjugation."""

    def __init__(self, minpoly, conj_image=None):
        m = polyq.poly(minpoly)
        if polyq.degree(m) < 1:
            raise ValueError("minpoly must have degree >= 1")
        if m[-1] != 1:
            raise ValueError("minpoly must be monic")
        if any(c.denominator != 1 for c in m):
            raise ValueError("minpoly must have integer coefficients")
        if not polyq.is_squarefree(m):
            raise NotSquarefree("gcd(m, m') is not constant")
        self.minpoly = m
        self.degree = polyq.degree(m)
        self._dminpoly = polyq.pderiv(m)
        self._red = self._reduction_rows()
        self._embeddings = None
        self.conj_image = None
        self._conj_matrix = None
        if conj_image is not None:
            img = self._coords(conj_image)
            if any(c != 0 for c in self._minpoly_at(img)):
                raise ConjNotAutomorphism("minpoly(conj_image) != 0 mod minpoly")
            cm = self._power_matrix(img)
            if tuple(_mat_apply(cm, list(img))) != self._gen_coords():
                raise ConjNotInvolution("conj(conj(x)) != x")
            self.conj_image = img
            self._conj_matrix = cm

    # -- internal ------------------------------------------------------------

    def _coords(self, raw):
        cs = [Fraction(c) for c in raw]
        if len(cs) > self.degree:
            raise ValueError("coordinate vector too long")
        cs += [Fraction(0)] * (self.degree - len(cs))
        return tuple(cs)

    def _gen_coords(self):
        if self.degree == 1:
            return (-self.minpoly[0],)
        return self._coords([0, 1])

    def _reduction_rows(self):
        """Coordinates of x^k mod m for k = d .. 2d-2."""
        d = self.degree
        rows = [tuple(-c for c in self.minpoly[:-1])]
        for _ in range(d - 2):
            prev = rows[-1]
            carry = prev[-1]
            nxt = [Fraction(0)] + list(prev[:-1])
            if carry:
                for i in range(d):
                    nxt[i] += carry * rows[0][i]
            rows.append(tuple(nxt))
        return rows

    def _reduce(self, raw):
        d = self.degree
        out = list(raw[:d]) + [Fraction(0)] * max(0, d - len(raw))
        for k in range(d, len(raw)):
            c = raw[k]
            if c:
                row = self._red[k - d]
                for i in range(d):
                    out[i] += c * row[i]
        return tuple(out[:d])

    def _mul_coords(self, a, b):
        d = self.degree
        raw = [Fraction(0)] * (2 * d - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    raw[i + j] += x * y
        return self._reduce(raw)

    def _minpoly_at(self, coords):
        acc = self._coords([self.minpoly[-1]])
        for c in reversed(self.minpoly[:-1]):
            acc = self._mul_coords(acc, coords)
            acc = tuple(a + (c if i == 0 else 0) for i, a in enumerate(acc))
        return acc

    def _power_matrix(self, coords):
        """Matrix (on coordinates) of the ring map gen -> element(coords)."""
        d = self.degree
        cols = [self._coords([1])]
        for _ in range(d - 1):
            cols.append(self._mul_coords(cols[-1], coords))
        return [[cols[j][i] for j in range(d)] for i in range(d)]

    # -- public --------------------------------------------------------------

    def element(self, coords) -> "FieldElement":
        return FieldElement(self, self._coords(coords))

    def from_rational(self, r) -> "FieldElement":
        return self.element([Fraction(r)])

    def zero(self) -> "FieldElement":
        return self.from_rational(0)

    def one(self) -> "FieldElement":
        return self.from_rational(1)

    def gen(self) -> "FieldElement":
        return FieldElement(self, self._gen_coords())

    @property
    def has_conj(self) -> bool:
        return self.conj_image is not None

    def conj(self, x: "FieldElement") -> "FieldElement":
        if self._conj_matrix is None:
            raise ValueError("field has no conjugation")
        return FieldElement(self, tuple(_mat_apply(self._conj_matrix, list(x.coords))))

    def embeddings(self, width=None):
        if self._embeddings is None:
            reals, uppers = _isolate_all_roots(self.minpoly)
            embs = []
            idx = 1
            for b in reals:
                embs.append(Embedding(self, idx, b, True, None))
                idx += 1
            for b in uppers:
                embs.append(Embedding(self, idx, b, False, idx + 1))
                embs.append(Embedding(self, idx + 1, b.conj(), False, idx))
                idx += 2
            self._embeddings = embs
            initial = default_enclosure_width()
            for e in embs:
                e.refine(initial)
        if width is not None:
            for e in self._embeddings:
                e.refine(width)
        return self._embeddings

    def real_embeddings(self):
        return [e for e in self.embeddings() if e.is_real]

    def __eq__(self, other):
        return (
            isinstance(other, NumberField)
            and self.minpoly == other.minpoly
            and self.conj_image == other.conj_image
        )

    def __hash__(self):
        return hash((self.minpoly, self.conj_image))

    def __repr__(self):
        return f"NumberField(deg {self.degree}, m={[str(c) for c in self.minpoly]})"


def _mat_apply(mat, vec):
    return [sum(row[j] * vec[j] for j in range(len(vec))) for row in mat]


_QQ = None


def rationals() -> NumberField:
    """The degree-1 field Q as Q[x]/(x), with trivial conjugation."""
    global _QQ
    if _QQ is None:
        _QQ = NumberField([0, 1], conj_image=[0])
    return _QQ


class FieldElement:
    __slots__ = ("field", "coords")

    def __init__(self, field: NumberField, coords):
        self.field = field
        self.coords = tuple(coords)

    def _co(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise ValueError("field mismatch")
            return other
        return self.field.from_rational(other)

    def __add__(self, o):
        o = self._co(o)
        return FieldElement(self.field, tuple(a + b for a, b in zip(self.coords, o.coords)))

    __radd__ = __add__

    def __sub__(self, o):
        o = self._co(o)
        return FieldElement(self.field, tuple(a - b for a, b in zip(self.coords, o.coords)))

    def __rsub__(self, o):
        return self._co(o) - self

    def __neg__(self):
        return FieldElement(self.field, tuple(-a for a in self.coords))

    def __mul__(self, o):
        o = self._co(o)
        return FieldElement(self.field, self.field._mul_coords(self.coords, o.coords))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        u = _poly_inverse(polyq.poly(self.coords), self.field.minpoly)
        if u is None:
            raise ZeroDivisor("element shares a factor with the minpoly")
        return FieldElement(self.field, self.field._coords(u))

    def __truediv__(self, o):
        return self * self._co(o).inverse()

    def __rtruediv__(self, o):
        return self._co(o) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = self.field.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, o):
        if isinstance(o, (int, Fraction)):
            o = self.field.from_rational(o)
        return isinstance(o, FieldElement) and self.field == o.field and self.coords == o.coords

    def __hash__(self):
        return hash((self.field, self.coords))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coords[1:])

    def as_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("element is not rational")
        return self.coords[0]

    def conj(self) -> "FieldElement":
        return self.field.conj(self)

    def enclosure(self, emb: Embedding, width=None) -> Box:
        return poly_eval_box(self.coords, emb.enclosure(width))

    def __repr__(self):
        return f"FieldElement({[str(c) for c in self.coords]})"


def _poly_inverse(p, m):
    """u with u*p = 1 mod m via extended Euclid, or None if not invertible."""
    if polyq.is_zero(p):
        return None
    r0, r1 = polyq.poly(m), polyq.poly(p)
    s0, s1 = (), (Fraction(1),)
    while r1:
        q, r = polyq.pdivmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, polyq.psub(s0, polyq.pmul(q, s1))
    if polyq.degree(r0) != 0:
        return None
    return polyq.pscale(s0, 1 / r0[0])


# ---------------------------------------------------------------------------
# Spec operations


def make_field(minpoly, conj_image=None) -> NumberField:
    """Build a number field, verifying squarefreeness and the conjugation."""
    return NumberField(minpoly, conj_image)


def embeddings(field: NumberField, width):
    """All d embeddings with enclosures refined below `width`."""
    return field.embeddings(Fraction(width))


def rational_part(x: FieldElement):
    """Split x into (rational, remainder with zero constant coordinate)."""
    rem = (Fraction(0),) + x.coords[1:]
    return x.coords[0], FieldElement(x.field, rem)


def trace_q(x: FieldElement) -> Fraction:
    """Tr_{K/Q}(x): trace of the multiplication-by-x matrix."""
    field = x.field
    gen = field.gen()
    tr = Fraction(0)
    power = field.one()
    for k in range(field.degree):
        tr += (x * power).coords[k]
        power = power * gen
    return tr


def _is_real_under(x: FieldElement, emb: Embedding) -> bool:
    if emb.is_real:
        return True
    f = x.field
    if f.has_conj:
        diff = f.conj(x) - x  # image is -2i Im(sigma(x))
        return diff.is_zero() or _image_is_zero(diff, emb)
    raise NotRealUnderEmbedding("cannot certify a real image without conj")


def _image_is_zero(x: FieldElement, emb: Embedding) -> bool:
    """Exact zero test for the image of x under one embedding."""
    if x.is_zero():
        return True
    g = polyq.pgcd(polyq.poly(x.coords), x.field.minpoly)
    if polyq.degree(g) == 0:
        return False
    return _root_in_box(g, emb)


def _root_in_box(g, emb: Embedding) -> bool:
    """Does the root isolated by emb satisfy g = 0? Exact and terminating."""
    dg = polyq.pderiv(g)
    width = emb.enclosure().width()
    for _ in range(400):
        box = emb.enclosure()
        if box.width() == 0:  # the isolated root is an exact rational point
            val = poly_eval_box(g, box)
            return val.re.lo == 0 and val.im.lo == 0
        if not poly_eval_box(g, box).contains_zero():
            return False
        if emb.is_real:
            a, b = box.re.lo, box.re.hi
            if polyq.peval(g, a) != 0 and polyq.peval(g, b) != 0:
                return polyq.count_roots(polyq.sturm_chain(g), a, b) == 1
        else:
            if _certify(g, dg, box):
                return True
        width /= 2
        emb.refine(width)
    raise AssertionError("root membership test did not converge")


def exact_sign(x: FieldElement, emb: Embedding) -> int:
    """Sign of the (real) image of x: interval first, exact zero fallback."""
    if not _is_real_under(x, emb):
        raise NotRealUnderEmbedding("image of x is not real under this embedding")
    if x.is_zero():
        return 0
    if _image_is_zero(x, emb):
        return 0
    width = emb.enclosure().width()
    while True:
        s = x.enclosure(emb).re.sign()
        if s:
            return s
        width /= 1 << 4
        emb.refine(width)


def exact_sign_imag(x: FieldElement, emb: Embedding) -> int:
    """Sign of Im(sigma(x)) for conj-antifixed x (purely imaginary image)."""
    f = x.field
    if f.has_conj and not (f.conj(x) + x).is_zero():
        raise NotRealUnderEmbedding("image of x is not purely imaginary")
    if x.is_zero() or _image_is_zero(x, emb):
        return 0
    width = emb.enclosure().width()
    while True:
        s = x.enclosure(emb).im.sign()
        if s:
            return s
        width /= 1 << 4
        emb.refine(width)


# ---------------------------------------------------------------------------
# Small-degree exact factor extraction (trial factorization via certified
# enclosures; the cm module uses it to get minimal polynomials of values).


def minpoly_factor_at(mp, value_encloser):
    """Monic rational irreducible factor of mp whose root is the given value.

    `mp` is monic squarefree rational; `value_encloser(width)` returns a Box
    around the target value.  Locates the value's root among certified
    enclosures, then tries conjugation-closed root subsets in ascending
    size; candidate coefficients come from interval products and are
    verified by exact polynomial division, so the answer is exact.
    """
    mp = polyq.poly(mp)
    d = polyq.degree(mp)
    den = math.lcm(*[c.denominator for c in mp])
    den_bound = den**d  # factor coefficient denominators divide this (Gauss)
    reals, uppers = _isolate_all_roots(mp)
    boxes = list(reals) + list(uppers) + [b.conj() for b in uppers]
    dp = polyq.pderiv(mp)

    width = Fraction(1, 1 << 16)
    target = None
    while target is None:
        v = value_encloser(width)
        hits = [i for i, b in enumerate(boxes) if not b.disjoint(v)]
        if len(hits) == 1:
            target = hits[0]
        else:
            width /= 1 << 4
            boxes = [_refine_box_once(mp, dp, b) for b in boxes]

    nreal, nup = len(reals), len(uppers)

    def conj_of(i):
        if i < nreal:
            return i
        return i + nup if i < nreal + nup else i - nup

    for size in range(1, d + 1):
        for subset in itertools.combinations(range(d), size):
            ss = set(subset)
            if target not in ss or {conj_of(i) for i in ss} != ss:
                continue
            cand = _candidate_factor(mp, dp, boxes, subset, den_bound, target)
            if cand is not None:
                return cand
    raise AssertionError("no factor found")


def _candidate_factor(mp, dp, boxes, subset, den_bound, target):
    """Try to certify prod_{i in subset} (x - root_i) as an exact factor.

    Candidates are rounded from coefficient intervals and confirmed by
    exact polynomial division plus a certified check that the target root
    vanishes, so coarse intervals are safe; only a failed division at the
    guaranteed uniqueness width rejects the subset.
    """
    unique_width = Fraction(1, 2 * den_bound * den_bound)
    for _ in range(400):
        coeffs = [Box.point(1)]  # ascending coefficients of prod (x - root_i)
        for i in subset:
            b = boxes[i]
            new = [Box.point(0)] * (len(coeffs) + 1)
            for k, c in enumerate(coeffs):
                new[k + 1] = new[k + 1] + c
                new[k] = new[k] - c * b
            coeffs = new
        cand = []
        guaranteed = True
        usable = True
        for cbox in coeffs[:-1]:
            if not cbox.im.contains_zero():
                return None  # a conjugation-closed product has real coefficients
            iv = cbox.re
            if iv.width() >= unique_width:
                guaranteed = False
            # limit_denominator returns the closest bounded-denominator
            # rational, so a miss rules out every such rational in iv
            r = iv.mid().limit_denominator(den_bound)
            if not iv.contains(r):
                usable = False
                break
            cand.append(r)
        if usable:
            candidate = polyq.poly(cand + [Fraction(1)])
            if polyq.is_zero(polyq.pmod(mp, candidate)) and _target_vanishes(
                candidate, mp, dp, boxes, target
            ):
                return candidate
        if guaranteed:
            # intervals this tight pin the only possible rational factor
            return None
        for i in set(subset):
            boxes[i] = _refine_box_once(mp, dp, boxes[i])
    raise AssertionError("factor candidate refinement did not converge")


def _target_vanishes(g, mp, dp, boxes, target):
    """Certified: does the root isolated by boxes[target] satisfy g = 0?"""
    dg = polyq.pderiv(g)
    for _ in range(200):
        box = boxes[target]
        if box.width() == 0:
            val = poly_eval_box(g, box)
            return val.re.lo == 0 and val.im.lo == 0
        if not poly_eval_box(g, box).contains_zero():
            return False
        if box.im.lo == box.im.hi == 0:
            a, b = box.re.lo, box.re.hi
            if polyq.peval(g, a) != 0 and polyq.peval(g, b) != 0:
                if polyq.count_roots(polyq.sturm_chain(g), a, b) == 1:
                    return True
        elif _certify(g, dg, box):
            return True
        boxes[target] = _refine_box_once(mp, dp, boxes[target])
    raise AssertionError("target membership test did not converge")
