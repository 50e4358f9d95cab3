"""The lattice side of the toroidal vertex algebra: the pairing lattice
Lambda = Gamma + Gamma* with its (z, zbar)-decomposition, the chiral
sublattice and rationality verdict, module count, dual bases, and the mode
supercommutator table."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .exactla import (
    FieldMatrix,
    hnf,
    int_det,
    rational_kernel,
    saturate_integer_solutions,
    snf,
)
from .numfield import FieldElement
from .torus import ComplexTorusData, GksPair, KahlerData, induce_gks, q_matrix


class ModeParityMismatch(ValueError):
    pass


class DegenerateRestriction(ValueError):
    pass


@dataclass
class PairingLattice:
    n: int  # 4g
    q: FieldMatrix
    p_plus: FieldMatrix
    gks: GksPair

    @property
    def field(self):
        return self.q.field


@dataclass
class ChiralReport:
    basis: list  # integer rows spanning Lambda_ch
    n: int
    rank: int
    index: object  # positive int or math.inf
    rational: bool
    zpart_rank: int
    zbarpart_rank: int


def build_pairing_lattice(t: ComplexTorusData, k: KahlerData) -> PairingLattice:
    """Lattice data of V(T, G, B): q and the projector onto the z-side."""
    pair = induce_gks(t, k)
    n = 4 * t.g
    ident = FieldMatrix.identity(pair.field, n)
    p_plus = (ident + pair.composition()).scale(Fraction(1, 2))
    # image(P+) is the graph of -G+B: check on the graph basis
    s = k.B - k.G
    for col in range(2 * t.g):
        v = [pair.field.zero()] * n
        v[col] = pair.field.one()
        for i in range(2 * t.g):
            v[2 * t.g + i] = s[i, col]
        vec = FieldMatrix(pair.field, [[x] for x in v])
        if p_plus * vec != vec:
            raise AssertionError("image(P+) != graph(-G+B)")
    return PairingLattice(n, q_matrix(pair.field, 2 * t.g), p_plus, pair)


def chiral_sublattice(lat: PairingLattice) -> ChiralReport:
    """Saturate the integrality conditions q(P+ lambda, e_i) in Z.

    Since q is unimodular this is exactly lambda_z in Lambda; rank, index
    and the z/zbar part ranks are computed from the saturated basis.
    """
    conditions = lat.q * lat.p_plus
    basis = saturate_integer_solutions(conditions)
    rank = len(basis)
    if rank == lat.n:
        index = abs(int_det(basis))
        if index == 0:
            index = math.inf
    else:
        index = math.inf
    rational = rank == lat.n and index != math.inf
    zr = _part_rank(lat, basis, zbar=False)
    zbr = _part_rank(lat, basis, zbar=True)
    return ChiralReport(basis, lat.n, rank, index, rational, zr, zbr)


def _part_rank(lat: PairingLattice, basis, zbar: bool) -> int:
    """Rank of Lambda_ch intersected with the (+1 or -1) eigenspace."""
    if not basis:
        return 0
    proj = lat.p_plus
    if not zbar:
        proj = FieldMatrix.identity(lat.field, lat.n) - proj  # kill z vectors: P- v = 0
    rows = []
    deg = lat.field.degree
    r = len(basis)
    for i in range(lat.n):
        entries = []
        for b in basis:
            acc = lat.field.zero()
            for j in range(lat.n):
                if b[j]:
                    acc = acc + proj[i, j] * lat.field.from_rational(b[j])
            entries.append(acc)
        for c in range(deg):
            row = [e.coords[c] for e in entries]
            if any(row):
                rows.append(row)
    ker = rational_kernel(rows)
    if ker is None:
        return r
    return len(ker)


def va_rational(report: ChiralReport) -> bool:
    """Rationality of the lattice vertex algebra: maximal chiral rank."""
    return report.rank == report.n


def module_count(report: ChiralReport):
    """|Lambda / Lambda_ch| via Smith normal form; inf when rank drops."""
    if report.index == math.inf:
        return math.inf
    d = snf(report.basis).diag
    out = 1
    for x in d:
        out *= abs(x)
    return out if out else math.inf


def encode_count(c) -> object:
    return "inf" if c == math.inf else c


def dual_basis(subspace: FieldMatrix, lat: PairingLattice, sign: int) -> FieldMatrix:
    """Dual rows with q(E_i, dual_j) = sign * delta_ij on the subspace."""
    from .exactla import Singular

    gram = subspace * lat.q * subspace.transpose()
    try:
        ginv = gram.inverse()
    except Singular:
        raise DegenerateRestriction("q restricted to the subspace is degenerate")
    return (ginv * subspace).scale(sign)


def _side_of(lat: PairingLattice, h: FieldMatrix) -> str | None:
    img = lat.p_plus * h
    if img == h:
        return "z"
    if img.is_zero():
        return "zbar"
    return None


def _as_column(lat: PairingLattice, h) -> FieldMatrix:
    if isinstance(h, FieldMatrix):
        return h
    return FieldMatrix(lat.field, [[x] for x in h])


def supercommutator(lat: PairingLattice, kind: str, h, mode_a, hp, mode_b) -> FieldElement:
    """Structure constants of the mode algebra.

    Bosonic: [h_n, h'_m] = n delta_{n,-m} q(h, h') with the sign flipped on
    the zbar side; fermionic: {f_r, f'_s} = delta_{r,-s} q(f, f'), same
    flip.  Mixed z/zbar pairs vanish.
    """
    if kind not in ("boson", "fermion"):
        raise ValueError("kind must be 'boson' or 'fermion'")
    ma, mb = Fraction(mode_a), Fraction(mode_b)
    for m in (ma, mb):
        if kind == "boson" and m.denominator != 1:
            raise ModeParityMismatch("bosonic modes must be integers")
        if kind == "fermion" and (m.denominator != 2 or m.numerator % 2 == 0):
            raise ModeParityMismatch("fermionic modes must be half-integers")
    hv = _as_column(lat, h)
    hpv = _as_column(lat, hp)
    side_a, side_b = _side_of(lat, hv), _side_of(lat, hpv)
    if side_a is None or side_b is None:
        raise ValueError("vectors must lie in Lambda_z or Lambda_zbar")
    zero = lat.field.zero()
    if side_a != side_b:
        return zero
    if ma + mb != 0:
        return zero
    qval = (hv.transpose() * lat.q * hpv)[0, 0]
    if side_a == "zbar":
        qval = -qval
    if kind == "boson":
        return qval * lat.field.from_rational(ma)
    return qval
