"""Rank-4 Z-lattices in a quaternion algebra.

A lattice is stored as a canonical Hermite normal form: an upper
triangular integer matrix ``H`` (rows are generators in 1, i, j, k
coordinates) together with one positive integer ``denominator`` so that
the lattice is the row span of ``H / denominator``.  ``denominator`` is
minimal, so two lattices are equal exactly when their (H, denominator)
pairs are equal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isqrt, lcm
from typing import Iterable, Sequence

from .errors import InternalError, NotAnOrderError, RankError
from .numth import ext_gcd, factorize
from .quat import QuatAlgebra, QuatElement, multiply, reduced_norm

IntMatrix = tuple[tuple[int, ...], ...]


def _hnf_integer(rows: list[list[int]], ncols: int = 4) -> list[list[int]]:
    """Row-style upper triangular HNF of a full-column-rank integer matrix."""
    rows = [list(r) for r in rows if any(r)]
    out: list[list[int]] = []
    for col in range(ncols):
        live = [r for r in rows if r[col] != 0]
        rest = [r for r in rows if r[col] == 0]
        if not live:
            raise RankError("generators do not span a rank-4 lattice")
        pivot = live[0]
        for other in live[1:]:
            g, s, t = ext_gcd(pivot[col], other[col])
            u, v = pivot[col] // g, other[col] // g
            new_pivot = [s * x + t * y for x, y in zip(pivot, other)]
            reduced = [u * y - v * x for x, y in zip(pivot, other)]
            pivot = new_pivot
            if any(reduced):
                rest.append(reduced)
        if pivot[col] < 0:
            pivot = [-x for x in pivot]
        for prev in out:
            q = prev[col] // pivot[col]
            if q:
                for c in range(col, ncols):
                    prev[c] -= q * pivot[c]
        out.append(pivot)
        rows = [r for r in rest if any(r)]
    return out


def _as_fraction_rows(generators: Iterable) -> list[list[Fraction]]:
    rows = []
    for g in generators:
        coords = g.coords if isinstance(g, QuatElement) else g
        row = [Fraction(c) for c in coords]
        if len(row) != 4:
            raise ValueError("each generator needs four coordinates")
        rows.append(row)
    return rows


def _det(matrix: Sequence[Sequence[Fraction]]) -> Fraction:
    m = [list(map(Fraction, row)) for row in matrix]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        for r in range(c + 1, n):
            if m[r][c]:
                f = m[r][c] / m[c][c]
                for cc in range(c, n):
                    m[r][cc] -= f * m[c][cc]
    return det


@dataclass(frozen=True)
class QuatLattice:
    algebra: QuatAlgebra
    matrix: IntMatrix
    denominator: int

    @property
    def basis(self) -> tuple[QuatElement, ...]:
        d = self.denominator
        return tuple(QuatElement(tuple(Fraction(x, d) for x in row)) for row in self.matrix)

    def rational_rows(self) -> list[list[Fraction]]:
        return [list(e.coords) for e in self.basis]

    def __contains__(self, x) -> bool:
        return contains(self, x)

    def index_in(self, other: "QuatLattice") -> Fraction:
        """[other : self] as a rational number (covolume ratio)."""
        return covolume(self) / covolume(other)


def hnf(algebra: QuatAlgebra, generators: Iterable) -> QuatLattice:
    rows = _as_fraction_rows(generators)
    if len(rows) < 4:
        raise RankError("need at least four generators")
    common = lcm(*(x.denominator for row in rows for x in row))
    ints = [[int(x * common) for x in row] for row in rows]
    h = _hnf_integer(ints)
    content = 0
    for row in h:
        for x in row:
            content = gcd(content, x)
    g = gcd(content, common)
    denominator = common // g
    matrix = tuple(tuple(x // g for x in row) for row in h)
    return QuatLattice(algebra, matrix, denominator)


def standard_lattice(algebra: QuatAlgebra) -> QuatLattice:
    return hnf(algebra, [algebra.one, algebra.i, algebra.j, algebra.k])


def coordinates(L: QuatLattice, x) -> list[Fraction]:
    """Coordinates of x in the HNF basis of L (rational in general)."""
    coords = x.coords if isinstance(x, QuatElement) else tuple(Fraction(c) for c in x)
    target = [Fraction(c) * L.denominator for c in coords]
    out = [Fraction(0)] * 4
    for col in range(4):
        c = target[col] / L.matrix[col][col]
        out[col] = c
        for cc in range(col, 4):
            target[cc] -= c * L.matrix[col][cc]
    return out


def contains(L: QuatLattice, x) -> bool:
    return all(c.denominator == 1 for c in coordinates(L, x))


def covolume(L: QuatLattice) -> Fraction:
    vol = Fraction(1)
    for idx in range(4):
        vol *= Fraction(L.matrix[idx][idx], L.denominator)
    return vol


@dataclass
class OrderReport:
    is_order: bool
    reduced_discriminant: int | None = None
    per_prime_level: dict[int, int] = field(default_factory=dict)
    failures: list[str] = field(default_factory=list)

    def __post_init__(self) -> None:
        if not self.is_order and not self.failures:
            raise ValueError("a lattice that is not an order needs at least one failure")

    @property
    def passed(self) -> bool:
        return self.is_order and not self.failures


def order_failures(L: QuatLattice) -> list[str]:
    """All reasons L fails to be an order; empty when it is one."""
    A = L.algebra
    failures = []
    if not contains(L, A.one):
        failures.append("1 is not in the lattice")
    basis = L.basis
    for idx, e in enumerate(basis):
        if e.reduced_trace().denominator != 1:
            failures.append(f"basis element {idx} ({e}) has non-integral reduced trace")
        if reduced_norm(A, e).denominator != 1:
            failures.append(f"basis element {idx} ({e}) has non-integral reduced norm")
    for u, eu in enumerate(basis):
        for v, ev in enumerate(basis):
            if not contains(L, multiply(A, eu, ev)):
                failures.append(f"product e{u}*e{v} = ({eu})*({ev}) leaves the lattice")
    return failures


def is_order(L: QuatLattice) -> bool:
    return not order_failures(L)


def trace_form_determinant(L: QuatLattice) -> Fraction:
    A = L.algebra
    basis = L.basis
    gram = [[multiply(A, eu, ev).reduced_trace() for ev in basis] for eu in basis]
    return _det(gram)


def reduced_discriminant(L: QuatLattice, check: bool = True) -> int:
    """Positive d with d^2 = |det(trd(e_u e_v))|."""
    if check:
        failures = order_failures(L)
        if failures:
            raise NotAnOrderError(failures[0])
    det = abs(trace_form_determinant(L))
    if det.denominator != 1:
        raise InternalError(f"trace form determinant {det} is not an integer")
    d = isqrt(det.numerator)
    if d * d != det.numerator:
        raise InternalError(f"trace form determinant {det} is not a square")
    return d


def level_by_prime(L: QuatLattice) -> dict[int, int]:
    return factorize(reduced_discriminant(L)).as_dict()


def adjoin(L: QuatLattice, x: QuatElement) -> QuatLattice:
    """The lattice L + Zx in canonical form."""
    return hnf(L.algebra, list(L.basis) + [x])


def check_order(L: QuatLattice) -> OrderReport:
    failures = order_failures(L)
    if failures:
        return OrderReport(False, failures=failures)
    d = reduced_discriminant(L, check=False)
    return OrderReport(True, d, factorize(d).as_dict())
