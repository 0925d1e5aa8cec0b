"""Cut-and-project schemes: acceptance, generation and brute-force patches.

A point of Z^k is written (n, m) with n in Z^d and m in Z^{k-d}.  Its
internal coordinate is ``w = m + s2 - L(n + s1)``; the window decides
acceptance.  Patches are read off in n-coordinates.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import (InvalidDimensions, InvalidScheme, NotAccepted, SingularParametrization,
                     SingularShift)
from .exact_reals import AffineForm, FieldElement, RealField, sign
from .lattice import (Sublattice, integer_scaled, intersect_all, kernel_mod_one,
                      rational_nullspace, solve_integer)
from .zonotope import Membership, Zonotope

IntVec = tuple[int, ...]


class WindowKind(str, Enum):
    CUBICAL = "cubical"
    CANONICAL = "canonical"


@dataclass(frozen=True, eq=False)
class Scheme:
    """The datum (k, d, L, window, s) over a single real number field.

    ``forms[i][j]`` is the coefficient of x_j in L_i.  The shift is stored
    as ``s1`` (length d) and ``s2`` (length k - d).  ``inexact`` marks
    coefficients that stand in for numbers outside the field.
    """

    k: int
    d: int
    field: RealField
    forms: tuple[tuple[FieldElement, ...], ...]
    window: WindowKind = WindowKind.CUBICAL
    s1: tuple[FieldElement, ...] | None = None
    s2: tuple[FieldElement, ...] | None = None
    inexact: bool = False
    name: str = ""

    def __post_init__(self):
        if not (1 <= self.d < self.k):
            raise InvalidDimensions(f"need 1 <= d < k, got k={self.k}, d={self.d}")
        q = self.k - self.d
        if len(self.forms) != q or any(len(row) != self.d for row in self.forms):
            raise InvalidScheme(f"forms must be a {q} x {self.d} matrix")
        K = self.field
        forms = tuple(tuple(_coerce(K, a) for a in row) for row in self.forms)
        object.__setattr__(self, "forms", forms)
        object.__setattr__(self, "window", WindowKind(self.window))
        s1 = self.s1 if self.s1 is not None else (0,) * self.d
        if len(s1) != self.d:
            raise InvalidScheme("s1 must have length d")
        object.__setattr__(self, "s1", tuple(_coerce(K, v) for v in s1))
        if self.s2 is None:
            object.__setattr__(self, "s2", default_s2(self))
        elif len(self.s2) != q:
            raise InvalidScheme("s2 must have length k - d")
        else:
            object.__setattr__(self, "s2", tuple(_coerce(K, v) for v in self.s2))

    @property
    def q(self) -> int:
        return self.k - self.d

    def replace(self, **kw) -> "Scheme":
        args = dict(k=self.k, d=self.d, field=self.field, forms=self.forms, window=self.window,
                    s1=self.s1, s2=self.s2, inexact=self.inexact, name=self.name)
        args.update(kw)
        return Scheme(**args)

    def key(self) -> tuple:
        return (self.k, self.d, self.field.minpoly, self.field._root_index, self.forms,
                self.window.value, self.s1, self.s2, self.inexact)

    def __eq__(self, other):
        return isinstance(other, Scheme) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def form_value(self, i: int, n: Sequence[int]) -> FieldElement:
        out = self.field.zero
        for a, v in zip(self.forms[i], n):
            if v:
                out = out + a * int(v)
        return out

    def internal_const(self) -> tuple[FieldElement, ...]:
        """s2 - L(s1): the internal coordinate of (n, m) = 0."""
        out = []
        for i in range(self.q):
            v = self.s2[i]
            for a, s in zip(self.forms[i], self.s1):
                v = v - a * s
            out.append(v)
        return tuple(out)

    @cached_property
    def internal_forms(self) -> tuple[AffineForm, ...]:
        """c_i(n) = s2_i - L_i(n + s1), so that w = m + c(n)."""
        c0 = self.internal_const()
        return tuple(AffineForm(self.field, c0[i], [-a for a in self.forms[i]]) for i in range(self.q))

    def internal(self, n: Sequence[int], m: Sequence[int]) -> tuple[FieldElement, ...]:
        c0 = self.internal_const()
        return tuple(c0[i] - self.form_value(i, n) + int(m[i]) for i in range(self.q))

    @cached_property
    def zonotope(self) -> Zonotope:
        """The canonical window: the image of the unit cube of R^k in internal space."""
        K = self.field
        gens = [tuple(-self.forms[i][j] for i in range(self.q)) for j in range(self.d)]
        gens += [tuple(K.one if i == t else K.zero for i in range(self.q)) for t in range(self.q)]
        return Zonotope(gens, K)

    @cached_property
    def kernels(self) -> tuple[Sublattice, ...]:
        return tuple(kernel_mod_one(row, self.d) for row in self.forms)


def _coerce(K: RealField, v) -> FieldElement:
    if isinstance(v, FieldElement):
        if v.field != K:
            raise InvalidScheme("element from a different field")
        return v
    return K.rational(v)


def _odd_primes() -> Iterable[int]:
    p = 3
    while True:
        if all(p % t for t in range(3, int(p ** 0.5) + 1, 2)):
            yield p
        p += 2


def default_s2(scheme: Scheme) -> tuple[FieldElement, ...]:
    """s1 = 0 and s2_i = 1/(2 p_i) for the odd primes, nudged until regular."""
    K = scheme.field
    primes = list(itertools.islice(_odd_primes(), scheme.q))
    for bump in range(64):
        s2 = tuple(K.rational(Fraction(1 + 2 * bump, 2 * p) % 1) for p in primes)
        trial = Scheme(scheme.k, scheme.d, K, scheme.forms, scheme.window, scheme.s1, s2,
                       scheme.inexact, scheme.name)
        if check_regular(trial).regular:
            return s2
    return tuple(K.rational(Fraction(1, 2 * p)) for p in primes)


# -- regularity ---------------------------------------------------------------

@dataclass(frozen=True)
class Regularity:
    regular: bool
    witness: IntVec | None = None
    offset: IntVec | None = None
    coordinate: int | None = None

    def to_json(self) -> dict:
        if self.regular:
            return {"status": "Regular"}
        return {"status": "Singular", "n": list(self.witness), "offset": list(self.offset or ()),
                "constraint": self.coordinate}


def _hits_hyperplane(field: RealField, coeffs: Sequence[FieldElement], rhs: FieldElement):
    """Integer z with sum_j coeffs[j] z_j = rhs exactly, or None."""
    deg = field.degree
    rows = []
    for comp in range(deg):
        rows.append([c.coords[comp] for c in coeffs] + [rhs.coords[comp]])
    den = 1
    for row in rows:
        for v in row:
            den = den * v.denominator // math.gcd(den, v.denominator)
    mat = [[int(v * den) for v in row[:-1]] for row in rows]
    rhs_i = [int(row[-1] * den) for row in rows]
    return solve_integer(mat, rhs_i)


def check_regular(scheme: Scheme) -> Regularity:
    """Decide whether some point of Z^k + s meets the boundary of the strip.

    Cubical windows: exact, per internal coordinate.  Canonical windows:
    every facet hyperplane is tested for integer points, which can only
    over-report singularity.
    """
    K = scheme.field
    c0 = scheme.internal_const()
    d, q = scheme.d, scheme.q
    if scheme.window is WindowKind.CUBICAL:
        for i in range(q):
            # m_i - sum_j a_ij n_j = -c0_i
            coeffs = [-a for a in scheme.forms[i]] + [K.one]
            sol = _hits_hyperplane(K, coeffs, -c0[i])
            if sol is not None:
                m = [0] * q
                m[i] = sol[d]
                return Regularity(False, tuple(sol[:d]), tuple(m), i)
        return Regularity(True)
    Z = scheme.zonotope
    for idx, (nu, lo, hi) in enumerate(zip(Z.normals, Z.lower, Z.upper)):
        coeffs = []
        for j in range(d):
            v = K.zero
            for i in range(q):
                v = v - nu[i] * scheme.forms[i][j]
            coeffs.append(v)
        coeffs += list(nu)
        base = K.zero
        for i in range(q):
            base = base + nu[i] * c0[i]
        for bound in (lo, hi):
            sol = _hits_hyperplane(K, coeffs, bound - base)
            if sol is not None:
                return Regularity(False, tuple(sol[:d]), tuple(sol[d:]), idx)
    return Regularity(True)


# -- generation ---------------------------------------------------------------

def box_points(R: int, d: int) -> np.ndarray:
    """All n in Z^d with |n|_inf <= R, in lexicographic order."""
    axis = np.arange(-R, R + 1, dtype=np.int64)
    grids = np.meshgrid(*([axis] * d), indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=1)


def cubical_offsets(scheme: Scheme, n: np.ndarray) -> np.ndarray:
    """offset_i = ceil(L_i(n + s1) - s2_i), the unique lift with w_i in [0, 1)."""
    n = np.asarray(n, dtype=np.int64).reshape(-1, scheme.d)
    out = np.empty((len(n), scheme.q), dtype=np.int64)
    for i, f in enumerate(scheme.internal_forms):
        out[:, i] = -f.floors(n)
    return out


def _canonical_search(scheme: Scheme):
    K = scheme.field
    Z = scheme.zonotope
    d, q = scheme.d, scheme.q
    c0 = scheme.internal_const()
    coeffs = [tuple(-scheme.forms[i][j] for i in range(q)) for j in range(d)]
    coeffs += [tuple(K.one if i == t else K.zero for i in range(q)) for t in range(q)]
    member = Z.membership_forms(c0, coeffs)
    lows = [AffineForm(K, c0[i] - Z.extents[i][0], [-a for a in scheme.forms[i]]) for i in range(q)]
    widths = [int(np.floor(float(hi - lo))) + 1 for lo, hi in Z.extents]
    return member, lows, widths


def canonical_accepted(scheme: Scheme, n: np.ndarray, include_boundary: bool = True):
    """Accepted (n, m) pairs for the canonical window; returns (n rows, m rows, boundary mask)."""
    n = np.asarray(n, dtype=np.int64).reshape(-1, scheme.d)
    member, lows, widths = _canonical_search(scheme)
    # smallest admissible m_i is ceil(lo_i - c_i(n)) = -floor(c_i(n) - lo_i)
    base = np.stack([-f.floors(n) for f in lows], axis=1) if len(n) else np.zeros((0, scheme.q), np.int64)
    steps = np.array(list(itertools.product(*(range(w + 1) for w in widths))), dtype=np.int64)
    nn = np.repeat(n, len(steps), axis=0)
    mm = np.repeat(base, len(steps), axis=0) + np.tile(steps, (len(n), 1))
    status = member(np.hstack([nn, mm])) if len(nn) else np.zeros(0, np.int8)
    keep = status >= (0 if include_boundary else 1)
    return nn[keep], mm[keep], status[keep] == 0


@dataclass(frozen=True)
class AcceptedPoint:
    n: IntVec
    offset: IntVec
    internal: tuple[FieldElement, ...] | None = None
    embedded: tuple[float, ...] | None = None


def accepted_arrays(scheme: Scheme, R: int) -> tuple[np.ndarray, np.ndarray]:
    """(n, offset) arrays for all accepted points with |n|_inf <= R, sorted by (n, offset)."""
    n = box_points(R, scheme.d)
    if scheme.window is WindowKind.CUBICAL:
        return n, cubical_offsets(scheme, n)
    nn, mm, _ = canonical_accepted(scheme, n)
    order = np.lexsort(np.hstack([nn, mm]).T[::-1])
    return nn[order], mm[order]


def embedding_basis(scheme: Scheme) -> np.ndarray:
    """Orthonormal basis (k x d) of E from Gram-Schmidt on the columns (e_j, L(e_j))."""
    cols = np.zeros((scheme.k, scheme.d))
    for j in range(scheme.d):
        cols[j, j] = 1.0
        for i in range(scheme.q):
            cols[scheme.d + i, j] = float(scheme.forms[i][j])
    qmat, r = np.linalg.qr(cols)
    return qmat * np.sign(np.diag(r))


def generate(scheme: Scheme, R: int, embedded: bool = False, exact_internal: bool = True,
             check: bool = True) -> list[AcceptedPoint]:
    """Accepted points with |n|_inf <= R, sorted lexicographically by n."""
    if R < 0:
        raise ValueError("radius must be nonnegative")
    if check:
        reg = check_regular(scheme)
        if not reg.regular:
            raise SingularShift(f"shift is singular, witness n = {reg.witness}")
    n, m = accepted_arrays(scheme, R)
    basis = embedding_basis(scheme) if embedded else None
    s1 = np.array([float(v) for v in scheme.s1])
    out = []
    for row, off in zip(n, m):
        nt, mt = tuple(int(v) for v in row), tuple(int(v) for v in off)
        w = scheme.internal(nt, mt) if exact_internal else None
        emb = None
        if basis is not None:
            x = row + s1
            full = np.concatenate([x, [sum(float(a) * xv for a, xv in zip(scheme.forms[i], x))
                                       for i in range(scheme.q)]])
            emb = tuple(float(v) for v in basis.T @ full)
        out.append(AcceptedPoint(nt, mt, w, emb))
    return out


def is_accepted(scheme: Scheme, n: Sequence[int], m: Sequence[int]) -> bool:
    w = scheme.internal(n, m)
    if scheme.window is WindowKind.CUBICAL:
        K = scheme.field
        return all(sign(v) >= 0 and sign(v - K.one) < 0 for v in w)
    return scheme.zonotope.membership(w) is not Membership.OUTSIDE


# -- patches ------------------------------------------------------------------

@dataclass(frozen=True)
class PatchClass:
    """A size-r patch up to translation.

    ``entries`` pairs each displacement (in lexicographic order) with the
    sorted tuple of lift offsets relative to the center; displacements with
    no accepted point are left out.
    """

    radius: int
    entries: tuple[tuple[IntVec, tuple[IntVec, ...]], ...]

    def as_map(self) -> dict[IntVec, tuple[IntVec, ...]]:
        return dict(self.entries)

    def to_json(self) -> dict:
        return {"radius": self.radius,
                "encoding": [[list(dl), [list(o) for o in offs]] for dl, offs in self.entries]}


def displacements(r: int, d: int, shape: str = "cube") -> np.ndarray:
    box = box_points(r, d)
    if shape == "cube":
        return box
    if shape == "ball":
        return box[(box ** 2).sum(axis=1) <= r * r]
    raise ValueError(f"unknown patch shape {shape!r}")


def patch_at(scheme: Scheme, n0: Sequence[int], r: int, offset: Sequence[int] | None = None,
             shape: str = "cube") -> PatchClass:
    """The patch of size r around the accepted point over n0."""
    n0 = np.asarray(n0, dtype=np.int64).reshape(1, scheme.d)
    deltas = displacements(r, scheme.d, shape)
    pts = deltas + n0
    if scheme.window is WindowKind.CUBICAL:
        offs = cubical_offsets(scheme, pts)
        center = offs[np.all(deltas == 0, axis=1)][0]
        if offset is not None and tuple(offset) != tuple(int(v) for v in center):
            raise NotAccepted(f"({tuple(n0[0])}, {tuple(offset)}) is not accepted")
        rel = offs - center
        entries = tuple((tuple(int(v) for v in dl), (tuple(int(v) for v in o),))
                        for dl, o in zip(deltas, rel))
        return PatchClass(r, entries)
    nn, mm, _ = canonical_accepted(scheme, pts)
    here = np.all(nn == n0, axis=1)
    centers = [tuple(int(v) for v in row) for row in mm[here]]
    if not centers:
        raise NotAccepted(f"no accepted point over n = {tuple(n0[0])}")
    if offset is None:
        if len(centers) > 1:
            raise NotAccepted("several accepted lifts over n0; pass offset")
        center = centers[0]
    else:
        center = tuple(int(v) for v in offset)
        if center not in centers:
            raise NotAccepted(f"({tuple(n0[0])}, {center}) is not accepted")
    return _canonical_patch(deltas, n0[0], nn, mm, center, r)


def _canonical_patch(deltas, n0, nn, mm, center, r) -> PatchClass:
    groups: dict[IntVec, list[IntVec]] = {}
    c = np.asarray(center)
    for row, off in zip(nn, mm):
        groups.setdefault(tuple(int(v) for v in row - n0), []).append(tuple(int(v) for v in off - c))
    entries = []
    for dl in deltas:
        key = tuple(int(v) for v in dl)
        if key in groups:
            entries.append((key, tuple(sorted(groups[key]))))
    return PatchClass(r, tuple(entries))


@dataclass
class PatchCensus:
    radius: int
    search_radius: int
    classes: list[PatchClass]
    first_occurrence: list[tuple[IntVec, IntVec]]
    counts: list[int]

    def __len__(self) -> int:
        return len(self.classes)


def distinct_patches(scheme: Scheme, r: int, R: int, shape: str = "cube") -> PatchCensus:
    """Patch classes of size r over accepted points with |n|_inf <= R.

    Classes are listed in order of first occurrence (lexicographic in n).
    """
    d = scheme.d
    deltas = displacements(r, d, shape)
    if scheme.window is WindowKind.CUBICAL:
        big = box_points(R + r, d)
        offs = cubical_offsets(scheme, big).reshape((2 * (R + r) + 1,) * d + (scheme.q,))
        centers = box_points(R, d)
        # gather offsets at center + delta for every center, in chunks
        keys = []
        side = 2 * (R + r) + 1
        strides = np.array([side ** (d - 1 - t) for t in range(d)], dtype=np.int64)
        flat = offs.reshape(-1, scheme.q)
        didx = (deltas + r) @ strides
        chunk = max(1, 2_000_000 // max(1, len(deltas)))
        rows = []
        for a in range(0, len(centers), chunk):
            c = centers[a:a + chunk]
            cidx = (c + R) @ strides
            block = flat[cidx[:, None] + didx[None, :]]
            block = block - block[:, [int(np.flatnonzero(np.all(deltas == 0, axis=1))[0])]]
            rows.append(block.reshape(len(c), -1))
        allrows = np.ascontiguousarray(np.concatenate(rows).astype(np.int64))
        packed = allrows.view(np.dtype((np.void, allrows.shape[1] * 8))).ravel()
        _, first, counts = np.unique(packed, return_index=True, return_counts=True)
        order = np.argsort(first)
        classes, occ = [], []
        for idx in order:
            rel = allrows[first[idx]].reshape(len(deltas), scheme.q)
            entries = tuple((tuple(int(v) for v in dl), (tuple(int(v) for v in o),))
                            for dl, o in zip(deltas, rel))
            classes.append(PatchClass(r, entries))
            n0 = tuple(int(v) for v in centers[first[idx]])
            center_off = flat[(centers[first[idx]] + R + r) @ strides]
            occ.append((n0, tuple(int(v) for v in center_off)))
        return PatchCensus(r, R, classes, occ, [int(counts[i]) for i in order])
    nn, mm = accepted_arrays(scheme, R + r)
    by_n: dict[IntVec, list[IntVec]] = {}
    for row, off in zip(nn, mm):
        by_n.setdefault(tuple(int(v) for v in row), []).append(tuple(int(v) for v in off))
    dl = [tuple(int(v) for v in x) for x in deltas]
    seen: dict[PatchClass, int] = {}
    classes, occ, counts = [], [], []
    for row, off in zip(nn, mm):
        n0 = tuple(int(v) for v in row)
        if max(abs(v) for v in n0) > R:
            continue
        m0 = tuple(int(v) for v in off)
        entries = []
        for delta in dl:
            key = tuple(a + b for a, b in zip(n0, delta))
            if key in by_n:
                entries.append((delta, tuple(sorted(tuple(a - b for a, b in zip(o, m0)) for o in by_n[key]))))
        pc = PatchClass(r, tuple(entries))
        if pc in seen:
            counts[seen[pc]] += 1
        else:
            seen[pc] = len(classes)
            classes.append(pc)
            occ.append((n0, m0))
            counts.append(1)
    return PatchCensus(r, R, classes, occ, counts)


# -- structure of E -----------------------------------------------------------

@dataclass(frozen=True)
class RationalRelation:
    """Integer weights b with sum_i b_i L_i having rational coefficients.

    ``mod_one`` is True when that combination is integer valued on Z^d, so
    the maps L_i mod 1 satisfy sum_i b_i L_i = 0.
    """

    weights: IntVec
    coefficients: tuple[Fraction, ...]
    mod_one: bool

    def describe(self) -> str:
        terms = []
        for i, b in enumerate(self.weights):
            if b:
                terms.append(f"{'+' if b > 0 else '-'}{'' if abs(b) == 1 else abs(b)}L{i + 1}")
        s = "".join(terms).lstrip("+")
        return f"{s} = 0 mod 1" if self.mod_one else f"{s} rational"


def rational_relations(scheme: Scheme) -> list[RationalRelation]:
    """Basis of rational relations among the forms; empty iff E is totally irrational."""
    K = scheme.field
    q, d = scheme.q, scheme.d
    rows = []
    for j in range(d):
        for comp in range(1, K.degree):
            rows.append([scheme.forms[i][j].coords[comp] for i in range(q)])
    basis = rational_nullspace(rows, q) if rows else [
        [Fraction(int(i == t)) for i in range(q)] for t in range(q)]
    out = []
    for vec in basis:
        b = integer_scaled(vec)
        coeffs = []
        for j in range(d):
            v = K.zero
            for i in range(q):
                v = v + scheme.forms[i][j] * b[i]
            coeffs.append(v.coords[0])
        out.append(RationalRelation(tuple(b), tuple(coeffs), all(c.denominator == 1 for c in coeffs)))
    return out


def is_totally_irrational(scheme: Scheme) -> bool:
    return not rational_relations(scheme)


def period_group(scheme: Scheme) -> Sublattice:
    """Intersection of the kernels S_i; trivial exactly when the scheme is aperiodic."""
    return intersect_all(scheme.kernels, scheme.d)


def is_aperiodic(scheme: Scheme) -> bool:
    return period_group(scheme).is_zero()


# -- reparametrization --------------------------------------------------------

def solve_field(matrix: list[list[FieldElement]], rhs: list[list[FieldElement]], field: RealField):
    """X with matrix @ X = rhs (square matrix over the field); None if singular."""
    n = len(matrix)
    a = [list(matrix[i]) + list(rhs[i]) for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if not a[r][col].is_zero()), None)
        if piv is None:
            return None
        a[col], a[piv] = a[piv], a[col]
        inv = a[col][col].inverse()
        a[col] = [v * inv for v in a[col]]
        for r in range(n):
            if r != col and not a[r][col].is_zero():
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


def reparametrize(scheme: Scheme, order: Sequence[int]) -> Scheme:
    """Write E as a graph over the coordinates ``order[:d]`` of R^k.

    ``order`` is a permutation of range(k); the new internal coordinates are
    ``order[d:]``.  Raises SingularParametrization when E is not a graph
    over the chosen coordinates.
    """
    K, d, k = scheme.field, scheme.d, scheme.k
    if sorted(order) != list(range(k)):
        raise ValueError("order must be a permutation of range(k)")
    cols = [[K.one if r == j else K.zero for j in range(d)] for r in range(d)]
    cols += [list(row) for row in scheme.forms]
    g = [cols[t] for t in order]
    top = [row for row in g[:d]]
    # L' = G_bottom @ top^{-1}; solve top^T X = G_bottom^T
    topT = [[top[r][c] for r in range(d)] for c in range(d)]
    bottomT = [[g[d + r][c] for r in range(k - d)] for c in range(d)]
    x = solve_field(topT, bottomT, K)
    if x is None:
        raise SingularParametrization(f"E is not a graph over coordinates {list(order[:d])}")
    forms = tuple(tuple(x[c][r] for c in range(d)) for r in range(k - d))
    shift = list(scheme.s1) + list(scheme.s2)
    s = [shift[t] for t in order]
    new = Scheme(k, d, K, forms, scheme.window, tuple(s[:d]), None, scheme.inexact, scheme.name)
    trial = new.replace(s2=tuple(s[d:]))
    return trial if check_regular(trial).regular else new
