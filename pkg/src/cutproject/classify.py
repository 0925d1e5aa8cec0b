"""Linear repetitivity: the two-condition decision, repetitivity and (PQ) scans."""

from __future__ import annotations

import itertools
import math
import statistics
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np

from .canonical import min_class_frequency
from .diophantine import BadStatus, BadVerdict, relatively_bad
from .errors import Lr1Violated, SingularParametrization
from .lattice import Sublattice, complement_groups, intersect_all
from .scheme import (Scheme, WindowKind, box_points, cubical_offsets, rational_relations,
                     reparametrize)
from .window import RegionDecomposition, local_derivability, sampled_frequencies

# kernel vectors longer than this are ignored for flagged-inexact schemes,
# whose rational coefficients stand in for irrationals
INEXACT_KERNEL_BOUND = 10 ** 6


class Overall(str, Enum):
    LR_PROVEN = "LR_Proven"
    LR_EMPIRICAL = "LR_Empirical"
    NOT_LR_PROVEN = "NotLR_Proven"
    NOT_LR_EMPIRICAL = "NotLR_Empirical"
    INAPPLICABLE = "Inapplicable"

    @property
    def is_lr(self) -> bool | None:
        if self is Overall.INAPPLICABLE:
            return None
        return self in (Overall.LR_PROVEN, Overall.LR_EMPIRICAL)


@dataclass
class LrVerdict:
    ranks: tuple[int, ...]
    target: int
    lr2: list[BadVerdict]
    overall: Overall
    reason: str = ""
    notes: list[str] = field(default_factory=list)

    @property
    def lr1(self) -> bool:
        return sum(self.ranks) == self.target

    def to_json(self) -> dict:
        return {"lr1": {"holds": self.lr1, "ranks": list(self.ranks), "sum": sum(self.ranks),
                        "target": self.target},
                "lr2": [v.to_json() for v in self.lr2],
                "overall": self.overall.value, "reason": self.reason, "notes": self.notes}


def effective_kernels(scheme: Scheme) -> tuple[Sublattice, ...]:
    """Kernels S_i; for inexact schemes only generators of moderate length count."""
    if not scheme.inexact:
        return scheme.kernels
    out = []
    for S in scheme.kernels:
        short = [v for v in S.basis if max(map(abs, v)) <= INEXACT_KERNEL_BOUND]
        out.append(Sublattice.span(short, scheme.d))
    return tuple(out)


def lr1_ranks(scheme: Scheme) -> tuple[tuple[int, ...], int]:
    kernels = effective_kernels(scheme)
    return tuple(S.rank for S in kernels), scheme.d * (scheme.q - 1)


def _downgrade(v: Overall) -> Overall:
    return {Overall.LR_PROVEN: Overall.LR_EMPIRICAL,
            Overall.NOT_LR_PROVEN: Overall.NOT_LR_EMPIRICAL}.get(v, v)


def _classify_cubical(scheme: Scheme, depth: int | None) -> LrVerdict:
    kernels = effective_kernels(scheme)
    ranks = tuple(S.rank for S in kernels)
    target = scheme.d * (scheme.q - 1)
    notes = [rel.describe() for rel in rational_relations(scheme)]
    if notes and scheme.inexact:
        # the rational coefficients are stand-ins, so their relations are artifacts
        notes = ["inexact coefficients: rational relations ignored"]
    elif notes:
        return LrVerdict(ranks, target, [], Overall.INAPPLICABLE, "not totally irrational", notes)
    if not intersect_all(kernels, scheme.d).is_zero():
        return LrVerdict(ranks, target, [], Overall.INAPPLICABLE, "periodic", notes)
    if sum(ranks) != target:
        return LrVerdict(ranks, target, [], Overall.NOT_LR_PROVEN,
                         f"kernel ranks sum to {sum(ranks)}, not {target}", notes)
    try:
        comp = complement_groups(kernels, scheme.d)
    except Lr1Violated as exc:
        return LrVerdict(ranks, target, [], Overall.NOT_LR_PROVEN, str(exc), notes)
    verdicts = [relatively_bad(row, S, lam, depth, scheme.inexact)
                for row, S, lam in zip(scheme.forms, kernels, comp.lambdas)]
    statuses = [v.status for v in verdicts]
    if BadStatus.PROVEN_NOT_BAD in statuses:
        overall = Overall.NOT_LR_PROVEN
    elif BadStatus.EMPIRICAL_NOT_BAD in statuses:
        overall = Overall.NOT_LR_EMPIRICAL
    elif all(s is BadStatus.PROVEN_BAD for s in statuses):
        overall = Overall.LR_PROVEN
    else:
        overall = Overall.LR_EMPIRICAL
    reason = ""
    if scheme.inexact and overall is not _downgrade(overall):
        overall = _downgrade(overall)
        reason = "coefficients flagged inexact"
    return LrVerdict(ranks, target, verdicts, overall, reason, notes)


def classify(scheme: Scheme, depth: int | None = None) -> LrVerdict:
    """Decide linear repetitivity from kernel ranks and relative bad approximability.

    Canonical windows get a verdict only where it transfers from the cubical
    set: in codimension one, when the two are locally derivable from each
    other, or when the cubical set already fails.
    """
    cub = scheme if scheme.window is WindowKind.CUBICAL else scheme.replace(window=WindowKind.CUBICAL)
    v = _classify_cubical(cub, depth)
    if scheme.window is WindowKind.CUBICAL or v.overall is Overall.INAPPLICABLE:
        return v
    if scheme.q == 1:
        v.notes.append("codimension one: canonical and cubical windows agree")
        return v
    if local_derivability(scheme).canonical_from_cubical:
        v.notes.append("canonical set is locally derivable from the cubical set")
        return v
    if v.overall in (Overall.NOT_LR_PROVEN, Overall.NOT_LR_EMPIRICAL):
        v.notes.append("cubical set is not linearly repetitive")
        return v
    return LrVerdict(v.ranks, v.target, v.lr2, Overall.INAPPLICABLE,
                     "canonical window not derivable from the cubical one", v.notes)


# -- repetitivity ----------------------------------------------------------

@dataclass
class RepetitivityRecord:
    r: int
    c_r: int
    min_gaps: tuple[float, ...]
    R: int | None
    mode: str = "density"

    @property
    def ratio(self) -> float:
        return math.inf if self.R is None else self.R / max(self.r, 1)

    def to_json(self) -> dict:
        return {"r": self.r, "c_r": self.c_r, "min_gaps": list(self.min_gaps), "R": self.R,
                "ratio": self.ratio, "mode": self.mode}


def _max_circular_gap(x: np.ndarray) -> float:
    x = np.sort(np.mod(x, 1.0))
    if len(x) == 0:
        return 1.0
    return float(max(np.diff(x).max(initial=0.0), 1.0 - x[-1] + x[0]))


class _OrbitGaps:
    """Max circular gap of {L_i(lam) mod 1 : lam in Lambda_i, |lam| <= R}."""

    def __init__(self, row, lam: Sublattice):
        self.values = np.array([float(sum((c * x for c, x in zip(row, v) if x), row[0].field.zero))
                                for v in lam.basis])
        self.m = lam.rank
        self.cache: dict[int, float] = {}

    def __call__(self, R: int) -> float:
        if R not in self.cache:
            pts = box_points(R, self.m).astype(float)
            self.cache[R] = _max_circular_gap(pts @ self.values)
        return self.cache[R]


def _smallest_R(gap_fn, target: float, start: int, limit: int) -> int | None:
    """Smallest R >= start with gap_fn(R) < target (gap_fn is nonincreasing)."""
    if gap_fn(start) < target:
        return start
    lo, hi = start, max(start, 1)
    while gap_fn(hi) >= target:
        lo, hi = hi, hi * 2
        if hi > limit:
            return None
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if gap_fn(mid) < target:
            hi = mid
        else:
            lo = mid
    return hi


def _cubical_labels(scheme: Scheme, r: int, R: int) -> np.ndarray:
    """Patch class id of every center in |n| <= R, as a (2R+1)^d grid."""
    d = scheme.d
    side = 2 * (R + r) + 1
    offs = cubical_offsets(scheme, box_points(R + r, d)).reshape((side,) * d + (scheme.q,))
    window = np.lib.stride_tricks.sliding_window_view(offs, (2 * r + 1,) * d, axis=tuple(range(d)))
    center = offs[(slice(r, side - r),) * d]
    rel = window - center[(...,) + (None,) * d]
    flat = np.ascontiguousarray(rel.reshape((2 * R + 1) ** d, -1).astype(np.int64))
    packed = flat.view(np.dtype((np.void, flat.shape[1] * 8))).ravel()
    _, inv = np.unique(packed, return_inverse=True)
    return inv.reshape((2 * R + 1,) * d)


def brute_force_R(scheme: Scheme, r: int, reference: int | None = None, centers: int = 5) -> int | None:
    """Smallest T such that boxes of radius T around sampled centers show every class.

    Classes are those found in the reference box; centers form a grid of
    ``centers`` points per axis.
    """
    ref = reference or max(40 * r, 40)
    labels = _cubical_labels(scheme, r, ref)
    total = int(labels.max()) + 1
    d = scheme.d

    def ok(T: int) -> bool:
        if T > ref:
            return False
        span = ref - T
        grid = np.linspace(-span, span, centers).round().astype(int)
        for c in itertools.product(grid, repeat=d):
            sl = tuple(slice(ref + ci - T, ref + ci + T + 1) for ci in c)
            if len(np.unique(labels[sl])) < total:
                return False
        return True

    if not ok(ref // 2):
        return None
    lo, hi = 0, ref // 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return hi


def repetitivity_scan(scheme: Scheme, r_max: int | None = None, rs: Sequence[int] | None = None,
                      limit: int = 1 << 22) -> list[RepetitivityRecord]:
    """R(r) per r from the density of each Lambda_i-orbit against the smallest cut gap.

    Schemes failing the rank condition fall back to direct search over patch
    classes.
    """
    if scheme.window is not WindowKind.CUBICAL:
        scheme = scheme.replace(window=WindowKind.CUBICAL)
    rs = list(rs) if rs is not None else list(range(1, (r_max or 1) + 1))
    kernels = effective_kernels(scheme)
    try:
        comp = complement_groups(kernels, scheme.d)
    except Lr1Violated:
        comp = None
    out: list[RepetitivityRecord] = []
    if comp is None:
        for r in rs:
            dec = RegionDecomposition(scheme, r)
            gaps = tuple(float(c.gaps_approx().min()) for c in dec.cuts)
            out.append(RepetitivityRecord(r, dec.count, gaps, brute_force_R(scheme, r), "brute_force"))
        return out
    orbits = [_OrbitGaps(row, lam) for row, lam in zip(scheme.forms, comp.lambdas)]
    prev = 1
    for r in sorted(rs):
        dec = RegionDecomposition(scheme, r)
        gaps = tuple(float(c.gaps_approx().min()) for c in dec.cuts)
        R = prev
        for orbit, g in zip(orbits, gaps):
            found = _smallest_R(orbit, g, R, limit)
            if found is None:
                R = None
                break
            R = found
        out.append(RepetitivityRecord(r, dec.count, gaps, R))
        if R is not None:
            prev = R
    return out


@dataclass
class TrendReport:
    dyadic: list[tuple[int, float]]
    median_earlier: float
    last: float
    violated: bool

    def to_json(self) -> dict:
        return {"dyadic": [list(x) for x in self.dyadic], "median_earlier": self.median_earlier,
                "last": self.last, "violated": self.violated,
                "rule": "last dyadic ratio above 4 times the median of the earlier ones"}


def trend_test(records: Sequence[RepetitivityRecord], factor: float = 4.0) -> TrendReport:
    """Reporting convention for upward drift of R(r)/r over dyadic r."""
    by_r = {rec.r: rec.ratio for rec in records}
    dy = [(r, by_r[r]) for r in sorted(by_r) if r & (r - 1) == 0]
    if len(dy) < 2:
        return TrendReport(dy, math.nan, dy[-1][1] if dy else math.nan, False)
    med = statistics.median(v for _, v in dy[:-1])
    last = dy[-1][1]
    return TrendReport(dy, med, last, last > factor * med)


# -- (PQ) proxy ------------------------------------------------------------

@dataclass
class PqRecord:
    r: int
    min_frequency: float
    scaled: float
    exact: str | None = None
    mode: str = "exact"

    def to_json(self) -> dict:
        return {"r": self.r, "min_frequency": self.min_frequency, "scaled": self.scaled,
                "exact": self.exact, "mode": self.mode}


@dataclass
class PqReport:
    records: list[PqRecord]

    @property
    def minimum(self) -> float:
        return min(rec.scaled for rec in self.records)

    def to_json(self) -> dict:
        return {"records": [r.to_json() for r in self.records], "minimum": self.minimum,
                "note": "frequency proxy for the packing density, up to constant factors"}


def pq_estimate(scheme: Scheme, r_list: Sequence[int], sample_radius: int | None = None,
                mode: str = "auto", scanlines: int = 60, per_line: int = 8, seed: int = 0) -> PqReport:
    """min over patch classes of frequency * r^d, per r.

    Cubical windows use exact minimal region volumes; canonical windows with
    two internal dimensions use class-area estimates, anything else sampled
    frequencies.  ``mode="sampled"`` forces sampling.
    """
    d = scheme.d
    out = []
    for r in r_list:
        if r == 0:
            out.append(PqRecord(0, 1.0, 1.0, "1", "convention"))
            continue
        if mode == "sampled" or (mode == "auto" and scheme.window is WindowKind.CANONICAL and scheme.q != 2):
            R = sample_radius or 100 * r
            f = min(sampled_frequencies(scheme, r, R).values())
            out.append(PqRecord(r, f, f * r ** d, None, "sampled"))
        elif scheme.window is WindowKind.CUBICAL:
            v = RegionDecomposition(scheme, r).min_volume()
            out.append(PqRecord(r, float(v), float(v) * r ** d, str(v), "exact"))
        else:
            res = min_class_frequency(scheme, r, scanlines, per_line, seed)
            out.append(PqRecord(r, res.min_frequency, res.min_frequency * r ** d, None, "class_area"))
    return PqReport(out)


# -- parametrizations ----------------------------------------------------------

@dataclass
class PermutationRecord:
    physical: tuple[int, ...]
    order: tuple[int, ...]
    valid: bool
    ranks: tuple[int, ...] = ()
    lr1: bool | None = None
    note: str = ""

    def to_json(self) -> dict:
        return {"physical": [i + 1 for i in self.physical], "order": [i + 1 for i in self.order],
                "valid": self.valid, "ranks": list(self.ranks), "lr1": self.lr1, "note": self.note}


def permutation_scan(scheme: Scheme) -> list[PermutationRecord]:
    """Rank condition for E written as a graph over each choice of d coordinates.

    Reordering within the physical or internal coordinates only relabels the
    kernels, so one order per d-subset is enough.
    """
    k, d = scheme.k, scheme.d
    out = []
    for phys in itertools.combinations(range(k), d):
        order = tuple(phys) + tuple(i for i in range(k) if i not in phys)
        try:
            s = reparametrize(scheme, order)
        except SingularParametrization as exc:
            out.append(PermutationRecord(phys, order, False, note=str(exc)))
            continue
        ranks, target = lr1_ranks(s)
        out.append(PermutationRecord(phys, order, True, ranks, sum(ranks) == target))
    return out
