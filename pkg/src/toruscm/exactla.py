"""Exact linear algebra over Q and over a NumberField.

FieldMatrix is a dense matrix of FieldElements sharing one field (rational
matrices are the degree-1 case).  Integer lattices get Hermite/Smith normal
forms with unimodular transforms; positive definiteness is certified by
exact LDL pivots signed through a designated embedding.  Nothing here ever
touches floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .numfield import (
    Embedding,
    FieldElement,
    NotRealUnderEmbedding,
    NumberField,
    ZeroDivisor,
    exact_sign,
    rationals,
)


class Inconsistent(ValueError):
    pass


class Singular(ValueError):
    pass


class NotSymmetric(ValueError):
    pass


# ---------------------------------------------------------------------------
# FieldMatrix


class FieldMatrix:
    __slots__ = ("field", "rows", "cols", "entries")

    def __init__(self, field: NumberField, entries):
        self.field = field
        ents = []
        for row in entries:
            r = []
            for e in row:
                if isinstance(e, FieldElement):
                    if e.field != field:
                        raise ValueError("entry from a different field")
                    r.append(e)
                else:
                    r.append(field.from_rational(e))
            ents.append(tuple(r))
        if ents and any(len(r) != len(ents[0]) for r in ents):
            raise ValueError("ragged rows")
        self.entries = tuple(ents)
        self.rows = len(ents)
        self.cols = len(ents[0]) if ents else 0

    # -- constructors ---------------------------------------------------------

    @staticmethod
    def identity(field: NumberField, n: int) -> "FieldMatrix":
        return FieldMatrix(field, [[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @staticmethod
    def zeros(field: NumberField, r: int, c: int) -> "FieldMatrix":
        return FieldMatrix(field, [[0] * c for _ in range(r)])

    @staticmethod
    def block(blocks) -> "FieldMatrix":
        """Assemble from a 2D list of conforming FieldMatrix blocks."""
        field = blocks[0][0].field
        out = []
        for brow in blocks:
            h = brow[0].rows
            for i in range(h):
                row = []
                for b in brow:
                    row.extend(b.entries[i])
                out.append(row)
        return FieldMatrix(field, out)

    # -- basics ---------------------------------------------------------------

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def row(self, i):
        return list(self.entries[i])

    def col(self, j):
        return [self.entries[i][j] for i in range(self.rows)]

    def transpose(self) -> "FieldMatrix":
        return FieldMatrix(
            self.field, [[self.entries[i][j] for i in range(self.rows)] for j in range(self.cols)]
        )

    def __add__(self, o: "FieldMatrix") -> "FieldMatrix":
        self._conform(o)
        return FieldMatrix(
            self.field,
            [
                [self.entries[i][j] + o.entries[i][j] for j in range(self.cols)]
                for i in range(self.rows)
            ],
        )

    def __sub__(self, o: "FieldMatrix") -> "FieldMatrix":
        self._conform(o)
        return FieldMatrix(
            self.field,
            [
                [self.entries[i][j] - o.entries[i][j] for j in range(self.cols)]
                for i in range(self.rows)
            ],
        )

    def __neg__(self) -> "FieldMatrix":
        return FieldMatrix(self.field, [[-e for e in row] for row in self.entries])

    def __mul__(self, o):
        if isinstance(o, FieldMatrix):
            if self.cols != o.rows:
                raise ValueError("dimension mismatch")
            ocols = list(zip(*o.entries)) if o.entries else []
            zero = self.field.zero()
            out = []
            for row in self.entries:
                orow = []
                for c in ocols:
                    acc = zero
                    for a, b in zip(row, c):
                        acc = acc + a * b
                    orow.append(acc)
                out.append(orow)
            return FieldMatrix(self.field, out)
        return self.scale(o)

    def scale(self, c) -> "FieldMatrix":
        c = c if isinstance(c, FieldElement) else self.field.from_rational(c)
        return FieldMatrix(self.field, [[e * c for e in row] for row in self.entries])

    def __eq__(self, o):
        return (
            isinstance(o, FieldMatrix)
            and self.field == o.field
            and self.entries == o.entries
        )

    def __hash__(self):
        return hash((self.field, self.entries))

    def _conform(self, o):
        if self.rows != o.rows or self.cols != o.cols or self.field != o.field:
            raise ValueError("matrix mismatch")

    def is_zero(self) -> bool:
        return all(e.is_zero() for row in self.entries for e in row)

    def is_symmetric(self) -> bool:
        return self == self.transpose()

    def is_antisymmetric(self) -> bool:
        return (self + self.transpose()).is_zero()

    def is_rational(self) -> bool:
        return all(e.is_rational() for row in self.entries for e in row)

    def rational_entries(self):
        return [[e.as_rational() for e in row] for row in self.entries]

    def lift(self, field: NumberField) -> "FieldMatrix":
        """Re-coerce a rational matrix into another field."""
        if self.field == field:
            return self
        return FieldMatrix(field, self.rational_entries())

    def map(self, fn) -> "FieldMatrix":
        return FieldMatrix(self.field, [[fn(e) for e in row] for row in self.entries])

    def __repr__(self):
        return f"FieldMatrix({self.rows}x{self.cols} over deg-{self.field.degree})"

    # -- elimination ------------------------------------------------------------

    def _echelon(self, aug_cols=0):
        """Row-reduce in place on a copy; returns (rows, pivot_cols).

        Pivots must be invertible field elements; over an etale (reducible)
        field a zero-divisor pivot candidate is skipped like a zero.
        """
        rows = [list(r) for r in self.entries]
        m, n = self.rows, self.cols
        piv_cols = []
        r = 0
        for c in range(n - aug_cols):
            sel = None
            inv = None
            for i in range(r, m):
                e = rows[i][c]
                if e.is_zero():
                    continue
                try:
                    inv = e.inverse()
                    sel = i
                    break
                except ZeroDivisor:
                    continue
            if sel is None:
                continue
            rows[r], rows[sel] = rows[sel], rows[r]
            rows[r] = [x * inv for x in rows[r]]
            for i in range(m):
                if i != r and not rows[i][c].is_zero():
                    f = rows[i][c]
                    rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
            piv_cols.append(c)
            r += 1
            if r == m:
                break
        return rows, piv_cols

    def rank(self) -> int:
        return len(self._echelon()[1])

    def kernel(self) -> "FieldMatrix":
        """Basis (as rows) of the right kernel; 0 x cols matrix if trivial."""
        rows, piv = self._echelon()
        free = [c for c in range(self.cols) if c not in piv]
        basis = []
        one = self.field.one()
        for fc in free:
            v = [self.field.zero()] * self.cols
            v[fc] = one
            for r, pc in enumerate(piv):
                v[pc] = -rows[r][fc]
            basis.append(v)
        return FieldMatrix(self.field, basis) if basis else FieldMatrix(self.field, [])

    def solve(self, b: "FieldMatrix") -> "FieldMatrix":
        """Solve self * X = b exactly (raises Inconsistent / Singular)."""
        if b.rows != self.rows:
            raise ValueError("dimension mismatch")
        aug = FieldMatrix(
            self.field,
            [list(self.entries[i]) + list(b.entries[i]) for i in range(self.rows)],
        )
        rows, piv = aug._echelon(aug_cols=b.cols)
        for i in range(len(piv), self.rows):
            if any(not e.is_zero() for e in rows[i][self.cols :]):
                raise Inconsistent("no solution")
        if len(piv) < self.cols:
            raise Singular("solution space is not unique")
        sol = [[None] * b.cols for _ in range(self.cols)]
        for r, pc in enumerate(piv):
            for j in range(b.cols):
                sol[pc][j] = rows[r][self.cols + j]
        return FieldMatrix(self.field, sol)

    def inverse(self) -> "FieldMatrix":
        if self.rows != self.cols:
            raise ValueError("not square")
        try:
            return self.solve(FieldMatrix.identity(self.field, self.rows))
        except Inconsistent as exc:  # pragma: no cover - solve raises Singular first
            raise Singular(str(exc))

    def det(self) -> FieldElement:
        if self.rows != self.cols:
            raise ValueError("not square")
        rows = [list(r) for r in self.entries]
        n = self.rows
        det = self.field.one()
        for c in range(n):
            sel = None
            for i in range(c, n):
                if not rows[i][c].is_zero():
                    try:
                        rows[i][c].inverse()
                        sel = i
                        break
                    except ZeroDivisor:
                        continue
            if sel is None:
                return self.field.zero()
            if sel != c:
                rows[c], rows[sel] = rows[sel], rows[c]
                det = -det
            det = det * rows[c][c]
            inv = rows[c][c].inverse()
            for i in range(c + 1, n):
                if not rows[i][c].is_zero():
                    f = rows[i][c] * inv
                    rows[i] = [a - f * b for a, b in zip(rows[i], rows[c])]
        return det


def solve_linear(a: FieldMatrix, b: FieldMatrix | None = None):
    """Spec entry point: exact solve, or a kernel basis for b absent/zero."""
    if b is None or b.is_zero():
        return a.kernel()
    return a.solve(b)


# ---------------------------------------------------------------------------
# Rational helpers (plain Fractions, used by the field-splitting pipelines)


def rational_kernel(rows):
    """Kernel basis (rows of Fractions) of a rational matrix given as rows."""
    if not rows:
        return None  # meaning: full space; caller decides dimension
    qq = rationals()
    m = FieldMatrix(qq, rows)
    k = m.kernel()
    return [[e.as_rational() for e in row] for row in k.entries]


# ---------------------------------------------------------------------------
# Integer lattice algorithms


def _xgcd(a: int, b: int):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return x0, y0, a


def int_det(mat) -> int:
    """Fraction-free Bareiss determinant of a square integer matrix."""
    a = [list(map(int, row)) for row in mat]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[-1][-1]


def int_hnf_with_transform(mat):
    """Row-style lower-triangular HNF: returns (H, U, pivot_cols) with
    U unimodular, U*M = [H rows; zero rows], pivots positive, entries below
    a pivot reduced into [0, pivot)."""
    m = len(mat)
    n = len(mat[0]) if m else 0
    a = [list(map(int, row)) for row in mat]
    u = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    used = []
    for col in range(n - 1, -1, -1):
        cand = [i for i in range(m) if i not in used and a[i][col]]
        if not cand:
            continue
        i0 = cand[0]
        for i in cand[1:]:
            p, q = a[i0][col], a[i][col]
            x, y, g = _xgcd(p, q)
            pp, qq = p // g, q // g
            a[i0], a[i] = (
                [x * r0 + y * ri for r0, ri in zip(a[i0], a[i])],
                [-qq * r0 + pp * ri for r0, ri in zip(a[i0], a[i])],
            )
            u[i0], u[i] = (
                [x * r0 + y * ri for r0, ri in zip(u[i0], u[i])],
                [-qq * r0 + pp * ri for r0, ri in zip(u[i0], u[i])],
            )
        if a[i0][col] < 0:
            a[i0] = [-v for v in a[i0]]
            u[i0] = [-v for v in u[i0]]
        for r in used:
            q = a[r][col] // a[i0][col]
            if q:
                a[r] = [v - q * w for v, w in zip(a[r], a[i0])]
                u[r] = [v - q * w for v, w in zip(u[r], u[i0])]
        used.append(i0)
    order = list(reversed(used)) + [i for i in range(m) if i not in used]
    h = [a[i] for i in order]
    ut = [u[i] for i in order]
    piv_cols = []
    for row in h:
        nz = [j for j, v in enumerate(row) if v]
        piv_cols.append(nz[-1] if nz else None)  # rightmost: lower-triangular pivots
    return h, ut, piv_cols


def hnf(mat):
    """Canonical row HNF (zero rows dropped)."""
    h, _, _ = int_hnf_with_transform(mat)
    return [row for row in h if any(row)]


@dataclass
class SnfResult:
    diag: list
    u: list
    v: list


def snf(mat) -> SnfResult:
    """Smith normal form with unimodular transforms: U*M*V = diag."""
    m = len(mat)
    n = len(mat[0]) if m else 0
    a = [list(map(int, row)) for row in mat]
    u = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    v = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def addmul_row(dst, src, c):
        a[dst] = [x + c * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + c * y for x, y in zip(u[dst], u[src])]

    def addmul_col(dst, src, c):
        for row in a:
            row[dst] += c * row[src]
        for row in v:
            row[dst] += c * row[src]

    for s in range(min(m, n)):
        while True:
            best = None
            for i in range(s, m):
                for j in range(s, n):
                    if a[i][j] and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                break
            if best != (s, s):
                if best[0] != s:
                    swap_rows(s, best[0])
                if best[1] != s:
                    swap_cols(s, best[1])
            if a[s][s] < 0:
                a[s] = [-x for x in a[s]]
                u[s] = [-x for x in u[s]]
            clean = True
            for i in range(s + 1, m):
                q = a[i][s] // a[s][s]
                if q:
                    addmul_row(i, s, -q)
                if a[i][s]:
                    clean = False
            for j in range(s + 1, n):
                q = a[s][j] // a[s][s]
                if q:
                    addmul_col(j, s, -q)
                if a[s][j]:
                    clean = False
            if not clean:
                continue
            bad = None
            for i in range(s + 1, m):
                for j in range(s + 1, n):
                    if a[i][j] % a[s][s]:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            addmul_row(s, bad, 1)
    diag = [a[s][s] for s in range(min(m, n))]
    return SnfResult(diag, u, v)


def int_kernel(mat):
    """Basis rows of {x in Z^n : M x = 0} (saturated by construction)."""
    m = len(mat)
    n = len(mat[0]) if m else 0
    if m == 0:
        raise ValueError("use the caller's dimension for an empty system")
    transpose = [[mat[i][j] for i in range(m)] for j in range(n)]
    h, u, _ = int_hnf_with_transform(transpose)
    return [u[i] for i in range(n) if not any(h[i])]


def row_lattice_index(basis_rows, n) -> Fraction | int:
    """Index [Z^n : L] for L spanned by basis_rows; inf if rank < n."""
    if len(basis_rows) < n:
        return math.inf
    rows = hnf(basis_rows)
    if len(rows) < n:
        return math.inf
    d = abs(int_det(rows))
    return d if d else math.inf


# ---------------------------------------------------------------------------
# Saturation of field-linear integrality conditions


def saturate_integer_solutions(conditions: FieldMatrix):
    """Sublattice of Z^n where each field-linear functional takes Z values.

    Splits every coefficient via rational_part: the irrational power-basis
    components must vanish (a rational kernel), the rational component must
    be integral (denominator-cleared HNF congruence).  Returns basis rows
    (canonical HNF), possibly empty.
    """
    n = conditions.cols
    d = conditions.field.degree
    irr_rows = []
    rat_rows = []
    for row in conditions.entries:
        rat_rows.append([e.coords[0] for e in row])
        for k in range(1, d):
            r = [e.coords[k] for e in row]
            if any(r):
                irr_rows.append(r)
    # (a) irrational components vanish
    if irr_rows:
        den = math.lcm(*[f.denominator for row in irr_rows for f in row])
        int_rows = [[int(f * den) for f in row] for row in irr_rows]
        w = int_kernel(int_rows)
        if not w:
            return []
    else:
        w = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    r = len(w)
    # (b) rational components integral on the span of w
    qp = [
        [sum(Fraction(cond[j]) * w[i][j] for j in range(n)) for i in range(r)]
        for cond in rat_rows
    ]
    den = 1
    for row in qp:
        for f in row:
            den = math.lcm(den, f.denominator)
    if den > 1:
        mint = [[int(f * den) for f in row] + [0] * len(qp) for row in qp]
        for i in range(len(qp)):
            mint[i][r + i] = den
        ker = int_kernel(mint)
        coeffs = [k[:r] for k in ker]
        coeffs = hnf(coeffs)
    else:
        coeffs = [[1 if i == j else 0 for j in range(r)] for i in range(r)]
    basis = [[sum(c[i] * w[i][j] for i in range(r)) for j in range(n)] for c in coeffs]
    return hnf(basis)


# ---------------------------------------------------------------------------
# Positive definiteness


@dataclass
class PositivityCertificate:
    positive: bool
    pivots: list

    def __bool__(self):
        return self.positive


def positive_definite(m: FieldMatrix, embedding: Embedding) -> PositivityCertificate:
    """Exact LDL pivot certificate for symmetric positive definiteness."""
    if m.rows != m.cols:
        raise NotSymmetric("matrix is not square")
    if not m.is_symmetric():
        raise NotSymmetric("matrix is not symmetric")
    if not embedding.is_real:
        f = m.field
        if not f.has_conj:
            raise NotRealUnderEmbedding("entries not certifiably real")
        for row in m.entries:
            for e in row:
                if f.conj(e) != e:
                    raise NotRealUnderEmbedding("entry not fixed by conj")
    a = [list(row) for row in m.entries]
    n = m.rows
    pivots = []
    for k in range(n):
        p = a[k][k]
        pivots.append(p)
        if exact_sign(p, embedding) <= 0:
            return PositivityCertificate(False, pivots)
        pinv = p.inverse()
        for i in range(k + 1, n):
            if a[i][k].is_zero():
                continue
            f = a[i][k] * pinv
            for j in range(k + 1, n):
                a[i][j] = a[i][j] - f * a[k][j]
    return PositivityCertificate(True, pivots)
