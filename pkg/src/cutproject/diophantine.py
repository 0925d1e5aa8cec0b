"""Continued fractions, badly approximable scans and certificates.

Scans use 64-bit fixed point: each coefficient c is stored as
floor(frac(c) * 2^64), so sum(lambda_j C_j) mod 2^64 is frac(L(lambda))
up to (sum|lambda_j| + 1) units in the last place.  Everything that could be
the minimum after accounting for that error is re-scored exactly.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from .errors import ComplementInvalid, PrecisionExhausted
from .exact_reals import FieldElement, RealField, compare, dist_to_int, floor_frac, sign, to_interval
from .lattice import Sublattice, intersect, kernel_mod_one, rational_rank

_TWO64 = 2 ** 64
_ULP = 2.0 ** -64


# -- continued fractions ---------------------------------------------------

@dataclass
class ContinuedFraction:
    partial_quotients: list[int]
    period: tuple[int, int] | None = None
    terminated: bool = False

    def convergents(self) -> list[tuple[int, int]]:
        out = []
        p0, q0, p1, q1 = 1, 0, self.partial_quotients[0], 1
        out.append((p1, q1))
        for a in self.partial_quotients[1:]:
            p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
            out.append((p1, q1))
        return out

    def quotient(self, n: int) -> int:
        """n-th partial quotient, continuing the period if one was found."""
        if n < len(self.partial_quotients):
            return self.partial_quotients[n]
        if self.period is None:
            raise IndexError(n)
        pre, per = self.period
        return self.partial_quotients[pre + (n - pre) % per]

    def max_quotient(self) -> int:
        tail = self.partial_quotients[1:]
        return max(tail) if tail else 0

    def to_json(self) -> dict:
        return {"partial_quotients": self.partial_quotients,
                "period": list(self.period) if self.period else None,
                "terminated": self.terminated}


def continued_fraction(x: FieldElement, max_terms: int = 200) -> ContinuedFraction:
    """Partial quotients of x, with period detection.

    Complete quotients are kept as exact field elements, so a repeated complete
    quotient closes the period; this happens exactly for quadratic irrationals.
    """
    seen: dict[FieldElement, int] = {}
    quotients: list[int] = []
    cur = x
    for step in range(max_terms):
        a, frac = floor_frac(cur)
        if cur in seen:
            start = seen[cur]
            return ContinuedFraction(quotients, (start, step - start))
        seen[cur] = step
        quotients.append(a)
        if frac.is_zero():
            return ContinuedFraction(quotients, None, True)
        cur = frac.inverse()
    return ContinuedFraction(quotients)


def continued_fraction_float(x: float, max_terms: int = 40, guard: float = 1e-9) -> ContinuedFraction:
    """Quotients of a float input while they remain decidable."""
    quotients = []
    cur, err = x, abs(x) * 1e-16
    for _ in range(max_terms):
        a = math.floor(cur)
        if math.floor(cur - err) != math.floor(cur + err):
            if not quotients:
                raise PrecisionExhausted("first partial quotient is not decidable")
            break
        quotients.append(a)
        f = cur - a
        if f <= err or err > guard:
            break
        cur, err = 1 / f, err / (f * f) + 1e-16 / f
    return ContinuedFraction(quotients)


def is_quadratic(x: FieldElement) -> bool:
    """x irrational with x^2 in span(1, x) over the rationals."""
    if x.is_rational():
        return False
    return rational_rank([list(x.field.one.coords), list(x.coords), list((x * x).coords)]) == 2


# -- fixed point scanning ----------------------------------------------------

def _fixed(c: FieldElement) -> int:
    """floor(frac(c) * 2^64), off by at most one unit."""
    lo, _ = to_interval(c, Fraction(1, 2 ** 70))
    f = lo - math.floor(lo)
    return int(math.floor(f * _TWO64)) % _TWO64


def _half_box(N: int, m: int, chunk: int = 1 << 20) -> Iterator[np.ndarray]:
    """Nonzero points of [-N, N]^m whose first nonzero coordinate is positive."""
    if m == 1:
        for a in range(1, N + 1, chunk):
            yield np.arange(a, min(N, a + chunk - 1) + 1, dtype=np.int64)[:, None]
        return
    for tail in _half_box(N, m - 1, chunk):
        yield np.hstack([np.zeros((len(tail), 1), dtype=np.int64), tail])
    rest = np.stack(np.meshgrid(*[np.arange(-N, N + 1, dtype=np.int64)] * (m - 1), indexing="ij"),
                    axis=-1).reshape(-1, m - 1)
    per = max(1, chunk // len(rest))
    for a in range(1, N + 1, per):
        heads = np.arange(a, min(N, a + per - 1) + 1, dtype=np.int64)
        yield np.hstack([np.repeat(heads, len(rest))[:, None], np.tile(rest, (len(heads), 1))])


def _frac_fixed(lam: np.ndarray, C: Sequence[int], c0: int = 0) -> np.ndarray:
    acc = np.full(len(lam), np.uint64(c0), dtype=np.uint64)
    for j, c in enumerate(C):
        acc += lam[:, j].astype(np.uint64) * np.uint64(c)
    return acc


def _dist_fixed(v: np.ndarray) -> np.ndarray:
    return np.minimum(v, np.negative(v)).astype(float) * _ULP


def _exact_value(values: Sequence[FieldElement], const: FieldElement | None, lam) -> FieldElement:
    out = const if const is not None else values[0].field.zero
    for c, v in zip(values, lam):
        if v:
            out = out + c * int(v)
    return out


@dataclass
class ScanResult:
    depth: int
    rank: int
    infimum: FieldElement
    witness: tuple[int, ...]
    examined: int
    verified: int
    integral: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"depth": self.depth, "rank": self.rank, "infimum": str(self.infimum),
                "infimum_decimal": float(self.infimum), "witness": list(self.witness),
                "examined": self.examined}


def _scan(values: Sequence[FieldElement], N: int, weight, const: FieldElement | None = None,
          zero: bool = True, drop_integral: bool = True) -> ScanResult:
    """Exact minimum of weight(|lam|) * ||const + sum lam_j values_j|| over |lam| <= N.

    Without a constant only one of lam, -lam is visited and lam = 0 is
    skipped.  Points where the value is an integer are dropped (and reported
    through ``integral``) unless ``drop_integral`` is off.
    """
    m = len(values)
    K = values[0].field
    C = [_fixed(c) for c in values]
    c0 = _fixed(const) if const is not None else 0
    if const is None:
        chunks: Iterator[np.ndarray] = _half_box(N, m)
    else:
        head = [np.zeros((1, m), dtype=np.int64)] if zero else []
        chunks = itertools.chain(head, _half_box(N, m), (-c for c in _half_box(N, m)))
    best_hi = np.inf
    kept: list[tuple[np.ndarray, np.ndarray]] = []
    integral: list[tuple[int, ...]] = []
    examined = 0
    for lam in chunks:
        examined += len(lam)
        norm = np.abs(lam).max(axis=1).astype(float)
        w = weight(norm)
        dist = _dist_fixed(_frac_fixed(lam, C, c0))
        # fixed point error plus the rounding of the conversion to float
        e = (np.abs(lam).sum(axis=1) + 3) * _ULP + dist * 2.0 ** -52
        suspect = np.nonzero(dist <= e)[0] if drop_integral else ()
        if len(suspect):
            drop = []
            for i in suspect:
                row = tuple(int(v) for v in lam[i])
                if _exact_value(values, const, row).is_integer():
                    integral.append(row)
                    drop.append(i)
            if drop:
                mask = np.ones(len(lam), dtype=bool)
                mask[drop] = False
                lam, w, dist, e = lam[mask], w[mask], dist[mask], e[mask]
        if not len(lam):
            continue
        score = w * dist
        err = w * e
        best_hi = min(best_hi, float((score + err).min()))
        keep = score - err <= best_hi
        kept.append((lam[keep], (score - err)[keep]))
    if not kept:
        raise ComplementInvalid("every scanned value is an integer")
    lam = np.concatenate([k[0] for k in kept])
    lower = np.concatenate([k[1] for k in kept])
    sel = lower <= best_hi
    lam, lower = lam[sel], lower[sel]
    order = np.argsort(lower, kind="stable")
    best, best_lam, verified = None, None, 0
    for idx in order:
        if best is not None and lower[idx] > float(best) * (1 + 1e-9) + 1e-300:
            break
        row = tuple(int(v) for v in lam[idx])
        norm = max((abs(v) for v in row), default=0)
        s = dist_to_int(_exact_value(values, const, row)) * K.rational(weight.exact(norm))
        verified += 1
        c = 1 if best is None else compare(s, best)
        if best is None or c < 0 or (c == 0 and _before(row, best_lam)):
            best, best_lam = s, row
    res = ScanResult(N, m, best, best_lam, examined, verified)
    res.integral = integral
    return res


def _before(a: tuple[int, ...], b: tuple[int, ...]) -> bool:
    return (max(map(abs, a)), a) < (max(map(abs, b)), b)


class _Power:
    """|lam|^m, and its exact integer counterpart."""

    def __init__(self, m: int, plus_one: bool = False):
        self.m, self.plus_one = m, plus_one

    def __call__(self, norm: np.ndarray) -> np.ndarray:
        return norm ** self.m + (1.0 if self.plus_one else 0.0)

    def exact(self, norm: int) -> int:
        return norm ** self.m + (1 if self.plus_one else 0)


class _Const:
    def __call__(self, norm: np.ndarray) -> np.ndarray:
        return np.ones_like(norm)

    def exact(self, norm: int) -> int:
        return 1


def restrict(row: Sequence[FieldElement], lam: Sublattice) -> list[FieldElement]:
    """Values of the form on the canonical basis of lam."""
    K = row[0].field
    out = []
    for v in lam.basis:
        acc = K.zero
        for c, x in zip(row, v):
            if x:
                acc = acc + c * x
        out.append(acc)
    return out


def _short_kernel(values: Sequence[FieldElement], N: int) -> tuple[int, ...] | None:
    ker = kernel_mod_one(list(values), len(values))
    for v in ker.basis:
        if max(abs(x) for x in v) <= N:
            return tuple(v)
    return None


def bad_scan(values: Sequence[FieldElement], N: int) -> ScanResult:
    """inf over 0 < |lam| <= N of |lam|^m ||sum lam_j values_j||, exactly.

    ``values`` are the form's values on a basis of the group scanned.  A
    nonzero lam in range with an integer value violates the precondition.
    """
    values = list(values)
    if not values:
        raise ComplementInvalid("the group scanned has rank zero")
    hit = _short_kernel(values, N)
    if hit is not None:
        raise ComplementInvalid(f"lambda = {list(hit)} has an integer value")
    res = _scan(values, N, _Power(len(values)))
    if res.integral:
        raise ComplementInvalid(f"lambda = {list(res.integral[0])} has an integer value")
    return res


def bad_scan_on(row: Sequence[FieldElement], lam: Sublattice, N: int) -> ScanResult:
    return bad_scan(restrict(row, lam), N)


# -- verdicts ----------------------------------------------------------------

class BadStatus(str, Enum):
    PROVEN_BAD = "ProvenBad"
    PROVEN_NOT_BAD = "ProvenNotBad"
    EMPIRICAL_BAD = "EmpiricalBad"
    EMPIRICAL_NOT_BAD = "EmpiricalNotBad"
    UNKNOWN = "Unknown"

    @property
    def proven(self) -> bool:
        return self in (BadStatus.PROVEN_BAD, BadStatus.PROVEN_NOT_BAD)

    @property
    def bad(self) -> bool:
        return self in (BadStatus.PROVEN_BAD, BadStatus.EMPIRICAL_BAD)


@dataclass
class BadVerdict:
    status: BadStatus
    certificate: str
    depth: int | None = None
    infimum: FieldElement | None = None
    witness: tuple[int, ...] | None = None
    basis: tuple[tuple[int, ...], ...] = ()
    evidence: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {"status": self.status.value, "certificate": self.certificate, "depth": self.depth,
               "infimum": str(self.infimum) if self.infimum is not None else None,
               "witness": list(self.witness) if self.witness is not None else None,
               "basis": [list(v) for v in self.basis]}
        if self.infimum is not None:
            out["infimum_decimal"] = float(self.infimum)
        out.update(self.evidence)
        return out


def default_depth(m: int) -> int:
    return 10 ** 6 if m == 1 else 10 ** 3


def perron_certificate(values: Sequence[FieldElement]) -> bool:
    """{1, c_1..c_m} is a basis of a field of degree m + 1.

    Checked as: the span V has dimension m + 1 and every product c_i c_j lies
    in V, which makes V a subring of the ambient field, hence a field.
    """
    K = values[0].field
    basis = [list(K.one.coords)] + [list(c.coords) for c in values]
    rank = rational_rank(basis)
    if rank != len(values) + 1:
        return False
    for i, a in enumerate(values):
        for b in values[i:]:
            if rational_rank(basis + [list((a * b).coords)]) != rank:
                return False
    return True


def relatively_bad(row: Sequence[FieldElement], S: Sublattice, lam: Sublattice, N: int | None = None,
                   inexact: bool = False, quotient_bound: int = 10 ** 4) -> BadVerdict:
    """Whether the form is badly approximable on the complement lam of its kernel S."""
    m = lam.rank
    if m == 0:
        raise ComplementInvalid("complement has rank zero")
    if intersect(lam, S).rank:
        raise ComplementInvalid("complement meets the kernel")
    values = restrict(row, lam)
    basis = lam.basis
    N = default_depth(m) if N is None else N
    if m == 1 and (inexact or values[0].is_rational()):
        cf = continued_fraction(values[0], 400)
        big = cf.max_quotient()
        if big >= quotient_bound:
            return BadVerdict(BadStatus.PROVEN_NOT_BAD, "quotient_growth", None, None, None, basis,
                              {"max_quotient": str(big), "quotients": len(cf.partial_quotients)})
    ker = kernel_mod_one(values, m)
    # a flagged-inexact input stands in for an irrational, so only kernel
    # vectors inside the scan range count
    short = [v for v in ker.basis if not inexact or max(map(abs, v)) <= N]
    if short:
        return BadVerdict(BadStatus.PROVEN_NOT_BAD, "integer_value", None, values[0].field.zero,
                          tuple(short[0]), basis)
    if not inexact:
        if m == 1 and is_quadratic(values[0]):
            cf = continued_fraction(values[0], 400)
            if cf.period is not None:
                return BadVerdict(BadStatus.PROVEN_BAD, "periodic_cf", None, None, None, basis,
                                  {"continued_fraction": cf.to_json(),
                                   "max_quotient": max(cf.partial_quotients[cf.period[0]:])})
        if perron_certificate(values):
            return BadVerdict(BadStatus.PROVEN_BAD, "perron", None, None, None, basis,
                              {"values": [str(v) for v in values]})
    deep = bad_scan(values, N)
    shallow = bad_scan(values, max(1, math.isqrt(N)))
    ev = {"shallow_depth": shallow.depth, "shallow_infimum": float(shallow.infimum)}
    if compare(deep.infimum * 10, shallow.infimum) < 0:
        return BadVerdict(BadStatus.EMPIRICAL_NOT_BAD, "scan", N, deep.infimum, deep.witness, basis, ev)
    return BadVerdict(BadStatus.EMPIRICAL_BAD, "scan", N, deep.infimum, deep.witness, basis, ev)


@dataclass
class IndependenceReport:
    first: ScanResult
    second: ScanResult
    ratio: float

    def to_json(self) -> dict:
        return {"first": self.first.to_json(), "second": self.second.to_json(), "ratio": self.ratio}


def complement_independence_check(row: Sequence[FieldElement], S: Sublattice, lam: Sublattice,
                                  lam2: Sublattice, N: int) -> IndependenceReport:
    """Scan the same form on two complements of its kernel; the ratio is recorded."""
    for g in (lam, lam2):
        if g.rank == 0 or intersect(g, S).rank:
            raise ComplementInvalid("group is not a complement of the kernel")
    a = bad_scan_on(row, lam, N)
    b = bad_scan_on(row, lam2, N)
    return IndependenceReport(a, b, float(a.infimum) / float(b.infimum))


# -- Dirichlet and transference ------------------------------------------

@dataclass
class DirichletResult:
    N: int
    holds: bool
    witness: tuple[int, ...] | None
    value: float | None
    bound: float
    coordinates: tuple[int, ...]

    def to_json(self) -> dict:
        return {"N": self.N, "holds": self.holds, "witness": list(self.witness) if self.witness else None,
                "value": self.value, "bound": self.bound, "coordinates": [c + 1 for c in self.coordinates]}


def _dirichlet_in(forms, coords, N: int, d: int, q: int) -> tuple[tuple[int, ...], float] | None:
    K = forms[0][0].field
    sub = [[row[j] for j in coords] for row in forms]
    Cs = [[_fixed(c) for c in row] for row in sub]
    bound = float(N) ** (-d / q)
    for lam in _half_box(N, len(coords)):
        e = (np.abs(lam).sum(axis=1) + 3) * _ULP
        worst = np.zeros(len(lam))
        for C in Cs:
            dist = _dist_fixed(_frac_fixed(lam, C))
            worst = np.maximum(worst, dist - e - dist * 2.0 ** -52)
        cand = np.nonzero(worst <= bound * (1 + 1e-12))[0]
        for i in cand[np.argsort(worst[cand], kind="stable")]:
            row = tuple(int(v) for v in lam[i])
            dists = [dist_to_int(_exact_value(r, None, row)) for r in sub]
            if all(compare(x ** q * (N ** d), K.one) <= 0 for x in dists):
                full = [0] * d
                for j, v in zip(coords, row):
                    full[j] = v
                return tuple(full), max(float(x) for x in dists)
    return None


def dirichlet_check(forms: Sequence[Sequence[FieldElement]], N: int, budget: int = 4 * 10 ** 6) -> DirichletResult:
    """Find n != 0, |n| <= N, with max_i ||L_i(n)|| <= N^(-d/q).

    Such n always exist; the full box is searched when it fits the budget,
    otherwise coordinate subspaces of decreasing dimension.
    """
    q, d = len(forms), len(forms[0])
    bound = float(N) ** (-d / q)
    for size in range(d, 0, -1):
        if size < d and (2 * N + 1) ** size // 2 > budget:
            continue
        if size == d and (2 * N + 1) ** d // 2 > budget:
            continue
        for coords in itertools.combinations(range(d), size):
            hit = _dirichlet_in(forms, coords, N, d, q)
            if hit is not None:
                return DirichletResult(N, True, hit[0], hit[1], bound, coords)
    return DirichletResult(N, False, None, None, bound, ())


@dataclass
class TransferenceReport:
    N: int
    seed: int
    c1_estimate: float
    scale: float
    targets: list[dict]
    dirichlet: list[DirichletResult]

    @property
    def max_scaled(self) -> float:
        return max(t["scaled"] for t in self.targets) if self.targets else 0.0

    def to_json(self) -> dict:
        return {"N": self.N, "seed": self.seed, "C1_estimate": self.c1_estimate,
                "max_scaled": self.max_scaled, "targets": self.targets,
                "dirichlet": [r.to_json() for r in self.dirichlet]}


def inhomogeneous_min(values: Sequence[FieldElement], gamma: Fraction, N: int) -> ScanResult:
    """min over 0 < |n| <= N of ||sum n_j values_j - gamma||."""
    const = values[0].field.rational(-Fraction(gamma))
    return _scan(values, N, _Const(), const=const, zero=False, drop_integral=False)


def transference_probe(values: Sequence[FieldElement], N: int, n_targets: int = 100, seed: int = 0,
                       q: int = 1, targets: Sequence[Fraction] | None = None) -> TransferenceReport:
    """Homogeneous constant, inhomogeneous minima for random targets, Dirichlet checks."""
    values = list(values)
    m = len(values)
    rng = np.random.default_rng(seed)
    if targets is None:
        targets = [Fraction(int(v), 2 ** 53) for v in rng.integers(0, 2 ** 53, size=n_targets)]
    c1 = bad_scan(values, N)
    scale = float(N) ** (m / q)
    rows = []
    for g in targets:
        res = inhomogeneous_min(values, g, N)
        rows.append({"gamma": str(g), "n": list(res.witness), "distance": float(res.infimum),
                     "scaled": float(res.infimum) * scale})
    checks = []
    n = 10
    while n <= N:
        checks.append(dirichlet_check([values], n))
        n *= 10
    return TransferenceReport(N, seed, float(c1.infimum), scale, rows, checks)


def coset_shape_scan(row: Sequence[FieldElement], lam: Sublattice, reps: Sequence[Sequence[int]],
                     N: int) -> dict:
    """min over f in reps and |lam| <= N of (1 + |lam|^m) ||L(lam + f)||, skipping integer values."""
    values = restrict(row, lam)
    K = values[0].field
    m = len(values)
    best, where = None, None
    for f in reps:
        const = K.zero
        for c, x in zip(row, f):
            if x:
                const = const + c * int(x)
        res = _scan(values, N, _Power(m, plus_one=True), const=const)
        if best is None or compare(res.infimum, best) < 0:
            best, where = res.infimum, (tuple(f), res.witness)
    return {"N": N, "minimum": float(best), "exact": str(best),
            "coset": list(where[0]), "lambda": list(where[1])}
