"""Integer linear algebra on subgroups of Z^d.

Sublattices are kept in a canonical Hermite form, so two sublattices are
equal exactly when their bases are equal.  The echelon runs over the columns
from last to first: the first basis vector carries the pivot in the last
coordinate.  Coset representatives of a full-rank sublattice are then the
vectors whose pivot coordinates lie in ``[0, pivot)``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import Lr1Violated, NotFullRank
from .exact_reals import FieldElement

IntVec = tuple[int, ...]


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, x, y) with x*a + y*b = g = gcd(a, b) >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a - (a // b) * b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def echelon(rows: Sequence[Sequence[int]], ncols: int, transform: bool = False):
    """Hermite echelon over the columns ``ncols-1, ..., 0``.

    Returns ``(H, U, pivots)`` where ``U @ rows = H`` with ``U`` unimodular,
    the first ``len(pivots)`` rows of ``H`` are the echelon basis and the
    remaining rows of ``U`` span the left kernel.  ``U`` is None unless
    ``transform`` is set.
    """
    a = [list(map(int, r)) for r in rows]
    m = len(a)
    u = [[int(i == j) for j in range(m)] for i in range(m)] if transform else None
    pivots: list[int] = []
    r = 0
    for col in range(ncols - 1, -1, -1):
        if r >= m:
            break
        for i in range(r + 1, m):
            b = a[i][col]
            if b == 0:
                continue
            top = a[r][col]
            g, x, y = xgcd(top, b)
            p, q = -b // g, top // g
            a[r], a[i] = ([x * s + y * t for s, t in zip(a[r], a[i])],
                          [p * s + q * t for s, t in zip(a[r], a[i])])
            if u is not None:
                u[r], u[i] = ([x * s + y * t for s, t in zip(u[r], u[i])],
                              [p * s + q * t for s, t in zip(u[r], u[i])])
        piv = a[r][col]
        if piv == 0:
            continue
        if piv < 0:
            a[r] = [-v for v in a[r]]
            if u is not None:
                u[r] = [-v for v in u[r]]
            piv = -piv
        for i in range(r):
            q = a[i][col] // piv
            if q:
                a[i] = [s - q * t for s, t in zip(a[i], a[r])]
                if u is not None:
                    u[i] = [s - q * t for s, t in zip(u[i], u[r])]
        pivots.append(col)
        r += 1
    return a, u, pivots


@dataclass(frozen=True)
class Sublattice:
    """A subgroup of Z^d given by its canonical Hermite basis."""

    ambient_dim: int
    basis: tuple[IntVec, ...]
    pivots: tuple[int, ...] = field(default=(), compare=False, repr=False)

    @classmethod
    def span(cls, vectors: Iterable[Sequence[int]], d: int) -> "Sublattice":
        rows = [tuple(int(v) for v in vec) for vec in vectors]
        rows = [r for r in rows if any(r)]
        if any(len(r) != d for r in rows):
            raise ValueError("vector length differs from ambient dimension")
        if not rows:
            return cls(d, (), ())
        h, _, piv = echelon(rows, d)
        return cls(d, tuple(tuple(h[i]) for i in range(len(piv))), tuple(piv))

    @classmethod
    def full(cls, d: int) -> "Sublattice":
        return cls.span([[int(i == j) for j in range(d)] for i in range(d)], d)

    @classmethod
    def zero(cls, d: int) -> "Sublattice":
        return cls(d, (), ())

    @property
    def rank(self) -> int:
        return len(self.basis)

    def _pivots(self) -> tuple[int, ...]:
        if self.pivots or not self.basis:
            return self.pivots
        return tuple(max(i for i, v in enumerate(row) if v) for row in self.basis)

    def __contains__(self, vec: Sequence[int]) -> bool:
        v = [int(x) for x in vec]
        for row, p in zip(self.basis, self._pivots()):
            if v[p] % row[p]:
                return False
            q = v[p] // row[p]
            if q:
                v = [s - q * t for s, t in zip(v, row)]
        return not any(v)

    def reduce(self, vec: Sequence[int]) -> IntVec:
        """Canonical representative of ``vec`` modulo this lattice."""
        v = [int(x) for x in vec]
        for row, p in zip(self.basis, self._pivots()):
            q = v[p] // row[p]
            if q:
                v = [s - q * t for s, t in zip(v, row)]
        return tuple(v)

    def index(self) -> int:
        if self.rank != self.ambient_dim:
            raise NotFullRank(f"rank {self.rank} < {self.ambient_dim}")
        return math.prod(row[p] for row, p in zip(self.basis, self._pivots()))

    def is_zero(self) -> bool:
        return not self.basis

    def to_json(self) -> dict:
        return {"ambient_dim": self.ambient_dim, "rank": self.rank,
                "basis": [list(b) for b in self.basis]}


def left_kernel(rows: Sequence[Sequence[int]], ncols: int) -> list[list[int]]:
    """Basis of {c in Z^m : sum_i c_i rows[i] = 0}."""
    if not rows:
        return []
    _, u, piv = echelon(rows, ncols, transform=True)
    return [u[i] for i in range(len(piv), len(rows))]


def right_kernel(matrix: Sequence[Sequence[int]], ncols: int) -> Sublattice:
    """Integer solutions x of matrix @ x = 0."""
    if not matrix:
        return Sublattice.full(ncols)
    cols = [[row[j] for row in matrix] for j in range(ncols)]
    return Sublattice.span(left_kernel(cols, len(matrix)), ncols)


def intersect(a: Sublattice, b: Sublattice) -> Sublattice:
    if a.ambient_dim != b.ambient_dim:
        raise ValueError("ambient dimensions differ")
    d = a.ambient_dim
    if a.is_zero() or b.is_zero():
        return Sublattice.zero(d)
    rows = list(a.basis) + list(b.basis)
    gens = []
    for c in left_kernel(rows, d):
        ca = c[:a.rank]
        gens.append([sum(ci * row[j] for ci, row in zip(ca, a.basis)) for j in range(d)])
    return Sublattice.span(gens, d)


def lattice_sum(a: Sublattice, b: Sublattice) -> Sublattice:
    if a.ambient_dim != b.ambient_dim:
        raise ValueError("ambient dimensions differ")
    return Sublattice.span(list(a.basis) + list(b.basis), a.ambient_dim)


def intersect_all(lattices: Sequence[Sublattice], d: int) -> Sublattice:
    out = Sublattice.full(d)
    for s in lattices:
        out = intersect(out, s)
    return out


@dataclass(frozen=True)
class CosetSystem:
    lattice: Sublattice
    representatives: tuple[IntVec, ...]
    index: int

    def representative_of(self, vec: Sequence[int]) -> IntVec:
        return self.lattice.reduce(vec)


def coset_representatives(a: Sublattice) -> CosetSystem:
    """Complete system of representatives of Z^d / a (a of full rank)."""
    d = a.ambient_dim
    idx = a.index()
    piv = a._pivots()
    sizes = [1] * d
    for row, p in zip(a.basis, piv):
        sizes[p] = row[p]
    reps = tuple(tuple(v) for v in itertools.product(*(range(s) for s in sizes)))
    return CosetSystem(a, reps, idx)


def solve_integer(matrix: Sequence[Sequence[int]], rhs: Sequence[int]) -> list[int] | None:
    """An integer solution x of matrix @ x = rhs, or None if there is none."""
    ncols = len(matrix[0]) if matrix else 0
    aug = [list(row) + [-int(b)] for row, b in zip(matrix, rhs)]
    ker = right_kernel(aug, ncols + 1)
    if not ker.basis:
        return None
    first = ker.basis[0]
    if first[-1] != 1:
        return None
    return list(first[:-1])


# -- rational linear algebra -----------------------------------------------

def rational_rref(rows: Sequence[Sequence[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    a = [[Fraction(v) for v in r] for r in rows]
    if not a:
        return [], []
    ncols = len(a[0])
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][col] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        p = a[r][col]
        a[r] = [v / p for v in a[r]]
        for i in range(len(a)):
            if i != r and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(col)
        r += 1
        if r == len(a):
            break
    return a[:r], pivots


def rational_rank(rows: Sequence[Sequence[Fraction]]) -> int:
    return len(rational_rref(rows)[1])


def rational_nullspace(rows: Sequence[Sequence[Fraction]], ncols: int) -> list[list[Fraction]]:
    """Basis of {x in Q^ncols : rows @ x = 0}."""
    rref, pivots = rational_rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for row, p in zip(rref, pivots):
            x[p] = -row[f]
        basis.append(x)
    return basis


def integer_scaled(vec: Sequence[Fraction]) -> list[int]:
    den = 1
    for v in vec:
        den = den * Fraction(v).denominator // math.gcd(den, Fraction(v).denominator)
    ints = [int(Fraction(v) * den) for v in vec]
    g = 0
    for v in ints:
        g = math.gcd(g, v)
    return [v // g for v in ints] if g else ints


# -- kernels of forms modulo one --------------------------------------------

def kernel_mod_one(coeffs: Sequence[FieldElement], d: int | None = None) -> Sublattice:
    """{n in Z^d : sum_j coeffs[j] n_j is an integer}.

    The irrational power-basis coordinates of the sum must vanish and the
    rational coordinate must be an integer; both become one homogeneous
    integer system in (n, t) after clearing denominators.
    """
    d = len(coeffs) if d is None else d
    if len(coeffs) != d:
        raise ValueError("coefficient count differs from d")
    if d == 0:
        return Sublattice.zero(0)
    deg = coeffs[0].field.degree
    den = 1
    for c in coeffs:
        for v in c.coords:
            den = den * v.denominator // math.gcd(den, v.denominator)
    rows = []
    for comp in range(1, deg):
        row = [int(c.coords[comp] * den) for c in coeffs] + [0]
        if any(row):
            rows.append(row)
    rows.append([int(c.coords[0] * den) for c in coeffs] + [den])
    ker = right_kernel(rows, d + 1)
    return Sublattice.span([v[:d] for v in ker.basis], d)


def subset_ranks(kernels: Sequence[Sublattice], d: int) -> dict[frozenset, int]:
    """Ranks r_I of S_I = intersection of kernels[i] for i in I (r_empty = d)."""
    q = len(kernels)
    cache: dict[frozenset, Sublattice] = {frozenset(): Sublattice.full(d)}
    for size in range(1, q + 1):
        for combo in itertools.combinations(range(q), size):
            key = frozenset(combo)
            prev = cache[frozenset(combo[:-1])]
            cache[key] = intersect(prev, kernels[combo[-1]])
    return {k: v.rank for k, v in cache.items()}


@dataclass(frozen=True)
class ComplementData:
    lambdas: tuple[Sublattice, ...]
    total: Sublattice
    ranks: tuple[int, ...]

    def to_json(self) -> dict:
        return {"lambdas": [l.to_json() for l in self.lambdas], "total": self.total.to_json(),
                "ranks": list(self.ranks)}


def complement_groups(kernels: Sequence[Sublattice], d: int) -> ComplementData:
    """The groups Lambda_i = intersection of the other kernels, and their sum."""
    q = len(kernels)
    lambdas = []
    for i in range(q):
        others = [kernels[j] for j in range(q) if j != i]
        lambdas.append(intersect_all(others, d))
    m = tuple(l.rank for l in lambdas)
    for i in range(q):
        if m[i] + kernels[i].rank != d:
            raise Lr1Violated(f"rank of Lambda_{i + 1} is {m[i]}, kernel rank {kernels[i].rank}, d = {d}")
    total = Sublattice.zero(d)
    for l in lambdas:
        total = lattice_sum(total, l)
    if total.rank != d:
        raise Lr1Violated(f"sum of complements has rank {total.rank} < {d}")
    return ComplementData(tuple(lambdas), total, m)
