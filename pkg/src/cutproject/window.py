"""Window geometry: cut sets, box regions, frequencies, local derivability."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from .errors import InvalidScheme
from .exact_reals import AffineForm, FieldElement, RealField, compare, sign, sort_exact
from .scheme import (PatchClass, Scheme, WindowKind, box_points, distinct_patches)
from .zonotope import Membership, Zonotope

__all__ = [
    "CutSet", "cut_sets", "BoxComponent", "RegionDecomposition", "region_components",
    "zonotope_membership", "sampled_frequencies", "Derivability", "local_derivability",
]


class _LazyElements:
    """Field elements materialized from integer coordinate rows on demand."""

    def __init__(self, form: AffineForm, coords: np.ndarray, shifts: np.ndarray):
        self.form, self.coords, self.shifts = form, coords, shifts

    def __len__(self):
        return len(self.coords)

    def __getitem__(self, i):
        return self.form.element_from_coords(self.coords[i]) - int(self.shifts[i])


@dataclass
class CutSet:
    """Sorted distinct values {-L_i(n)} mod 1 over |n|_inf <= r for one coordinate."""

    coordinate: int
    values: list[FieldElement]
    approx: np.ndarray
    witnesses: np.ndarray
    err: float = 1e-15

    def __len__(self):
        return len(self.values)

    def gaps_approx(self) -> np.ndarray:
        return np.diff(np.append(self.approx, 1.0))

    def gap(self, t: int) -> FieldElement:
        """Length of the gap to the right of the t-th cut (circularly)."""
        right = self.values[t + 1] if t + 1 < len(self.values) else self.values[0].field.one
        return right - self.values[t]


def _cut_set(scheme: Scheme, i: int, n: np.ndarray) -> CutSet:
    form = AffineForm(scheme.field, 0, [-a for a in scheme.forms[i]])
    vals, err, x = form.approx(n)
    den = form.den
    # exact dedup: equal mod 1 iff irrational coordinates agree and rational ones agree mod 1
    key = np.array(x, dtype=object) if x.dtype == object else x.copy()
    key[:, 0] = key[:, 0] % den
    if key.dtype == object:
        seen: dict[tuple, int] = {}
        first = []
        for idx, row in enumerate(map(tuple, key)):
            if row not in seen:
                seen[row] = idx
                first.append(idx)
        first = np.array(first, dtype=np.int64)
    else:
        _, first = np.unique(key, axis=0, return_index=True)
        first = np.sort(first)
    floors = form.floors(n[first])
    frac_approx = vals[first] - floors
    lazy = _LazyElements(form, x[first], floors)
    order = sort_exact(lazy, frac_approx, err[first] + 1e-15)
    values = [lazy[j] for j in order]
    return CutSet(i, values, np.array([frac_approx[j] for j in order]), n[first][order],
                  float(err.max()) if len(err) else 1e-15)


def cut_sets(scheme: Scheme, r: int) -> list[CutSet]:
    if scheme.window is not WindowKind.CUBICAL:
        raise InvalidScheme("cut sets are defined for the cubical window")
    n = box_points(r, scheme.d)
    return [_cut_set(scheme, i, n) for i in range(scheme.q)]


@dataclass(frozen=True)
class BoxComponent:
    lower: tuple[FieldElement, ...]
    upper: tuple[FieldElement, ...]

    @property
    def volume(self) -> FieldElement:
        v = self.lower[0].field.one
        for a, b in zip(self.lower, self.upper):
            v = v * (b - a)
        return v

    def contains(self, w: Sequence[FieldElement]) -> bool:
        return all(compare(a, x) < 0 < compare(b, x) for a, b, x in zip(self.lower, self.upper, w))


def _min_gap(cut: CutSet, largest: bool = False) -> tuple[int, FieldElement]:
    g = cut.gaps_approx()
    tol = 4 * cut.err + 1e-15
    target = g.max() if largest else g.min()
    cand = np.nonzero(np.abs(g - target) <= tol)[0]
    best_t, best = int(cand[0]), cut.gap(int(cand[0]))
    for t in cand[1:]:
        v = cut.gap(int(t))
        c = compare(v, best)
        if (c > 0) if largest else (c < 0):
            best_t, best = int(t), v
    return best_t, best


class RegionDecomposition:
    """Connected components of the regular part of the cubical window at size r.

    Components are products of gaps of the per-coordinate cut sets, so they
    are listed lazily.
    """

    def __init__(self, scheme: Scheme, r: int):
        self.scheme = scheme
        self.r = r
        self.cuts = cut_sets(scheme, r)

    @property
    def count(self) -> int:
        return math.prod(len(c) for c in self.cuts)

    def __len__(self):
        return self.count

    def min_gaps(self) -> list[FieldElement]:
        return [_min_gap(c)[1] for c in self.cuts]

    def max_gaps(self) -> list[FieldElement]:
        return [_min_gap(c, largest=True)[1] for c in self.cuts]

    def min_volume(self) -> FieldElement:
        g = self.min_gaps()
        return math.prod(g[1:], start=g[0])

    def max_volume(self) -> FieldElement:
        g = self.max_gaps()
        return math.prod(g[1:], start=g[0])

    def component(self, index: Sequence[int]) -> BoxComponent:
        lo, hi = [], []
        for c, t in zip(self.cuts, index):
            lo.append(c.values[t])
            hi.append(c.values[t + 1] if t + 1 < len(c) else c.values[0].field.one)
        return BoxComponent(tuple(lo), tuple(hi))

    def components(self) -> Iterator[BoxComponent]:
        for idx in itertools.product(*(range(len(c)) for c in self.cuts)):
            yield self.component(idx)

    def gap_volumes(self, coordinate: int) -> list[FieldElement]:
        c = self.cuts[coordinate]
        return [c.gap(t) for t in range(len(c))]

    def total_volume(self) -> FieldElement:
        """Sum of all component volumes, computed exactly."""
        v = self.scheme.field.one
        for i in range(len(self.cuts)):
            s = self.scheme.field.zero
            for g in self.gap_volumes(i):
                s = s + g
            v = v * s
        return v

    def locate(self, w: Sequence[FieldElement]) -> tuple[int, ...] | None:
        """Index of the component containing w, or None if w lies on a cut."""
        out = []
        for c, x in zip(self.cuts, w):
            lo, hi = 0, len(c)
            while hi - lo > 1:
                mid = (lo + hi) // 2
                if compare(c.values[mid], x) <= 0:
                    lo = mid
                else:
                    hi = mid
            if compare(c.values[lo], x) == 0:
                return None
            out.append(lo)
        return tuple(out)

    def locate_approx(self, w: np.ndarray) -> np.ndarray:
        """Component indices for float internal points (rows of w)."""
        return np.stack([np.searchsorted(c.approx, w[:, i], side="right") - 1
                         for i, c in enumerate(self.cuts)], axis=1)

    def to_json(self) -> dict:
        mn = self.min_volume()
        mx = self.max_volume()
        return {"r": self.r, "c_r": self.count,
                "cut_set_sizes": [len(c) for c in self.cuts],
                "min_volume": {"exact": str(mn), "decimal": float(mn)},
                "max_volume": {"exact": str(mx), "decimal": float(mx)}}


def region_components(scheme: Scheme, r: int) -> RegionDecomposition:
    return RegionDecomposition(scheme, r)


def zonotope_membership(Z: Zonotope, w: Sequence[FieldElement]) -> Membership:
    return Z.membership(w)


def sampled_frequencies(scheme: Scheme, r: int, R: int, shape: str = "cube") -> dict[PatchClass, float]:
    """Empirical patch class frequencies over accepted points with |n|_inf <= R."""
    census = distinct_patches(scheme, r, R, shape)
    total = sum(census.counts)
    return {pc: c / total for pc, c in zip(census.classes, census.counts)}


@dataclass(frozen=True)
class Derivability:
    cubical_from_canonical: bool
    canonical_from_cubical: bool
    witnesses: tuple[int, ...]

    def to_json(self) -> dict:
        return {"CubicalFromCanonical": self.cubical_from_canonical,
                "CanonicalFromCubical": self.canonical_from_cubical,
                "witnesses": [i + 1 for i in self.witnesses]}


def local_derivability(scheme: Scheme) -> Derivability:
    """Whether the canonical set is locally derivable from the cubical one.

    This holds exactly when every generator -L(e_i) of the canonical window
    lies on a coordinate axis of internal space; the failing i are returned.
    """
    bad = []
    for j in range(scheme.d):
        nonzero = sum(1 for i in range(scheme.q) if not scheme.forms[i][j].is_zero())
        if nonzero > 1:
            bad.append(j)
    return Derivability(True, not bad, tuple(bad))
