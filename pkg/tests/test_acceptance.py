"""Acceptance checks; each test prints one PASS/FAIL line (run with -s to see them)."""

from __future__ import annotations

import itertools
import time
from fractions import Fraction

import numpy as np

from cutproject.classify import Overall, classify, pq_estimate, repetitivity_scan, trend_test
from cutproject.diophantine import bad_scan, continued_fraction, dirichlet_check
from cutproject.exact_reals import RealField
from cutproject.gallery import biquadratic_field, build, default_entries, sqrt5_field
from cutproject.lattice import Sublattice, subset_ranks
from cutproject.scheme import Scheme, box_points, cubical_offsets, distinct_patches
from cutproject.window import RegionDecomposition, local_derivability


def verdict(num: int, ok: bool, detail: str) -> None:
    print(f"criterion {num}: {'PASS' if ok else 'FAIL'} {detail}")
    assert ok, detail


def timed(fn):
    t = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t


# 1 -------------------------------------------------------------------------

def test_criterion_1_rank_condition():
    ab, t1 = timed(lambda: classify(build("ammann_beenker").scheme))
    l53, t2 = timed(lambda: classify(build("lemma_5_3").scheme))
    pen, t3 = timed(lambda: classify(build("penrose").scheme))
    ok = (ab.ranks == (1, 1) and ab.target == 2 and ab.lr1
          and l53.ranks == (1, 2) and l53.target == 3 and l53.lr1
          and pen.ranks == (1, 1, 1) and pen.overall is Overall.INAPPLICABLE
          and any("L1+L2+L3" in n for n in pen.notes)
          and max(t1, t2, t3) < 1)
    verdict(1, ok, f"AB {ab.ranks}, lemma_5_3 {l53.ranks}, penrose {pen.ranks} {pen.notes} "
                   f"times {t1:.3f}/{t2:.3f}/{t3:.3f}s")


# 2 -------------------------------------------------------------------------

def _low_dimension_extra():
    K, r2, r3 = biquadratic_field()
    r6 = r2 * r3
    a = Scheme(4, 1, K, ((r2,), (r3,), (r6,)))
    b = Scheme(5, 2, K, ((r2, r3), (r6, r2 + r3), (r3 - r6, r2 * 3 + 1)))
    return [a, b]


def test_criterion_2_gallery_pipeline():
    t = time.perf_counter()
    got = {}
    for name in ("fibonacci", "ammann_beenker"):
        got[name] = classify(build(name).scheme)
    perron = True
    for k, d in ((3, 2), (4, 2), (5, 3)):
        v = classify(build("numberfield", {"k": k, "d": d}).scheme)
        got[f"numberfield_{k}_{d}"] = v
        multi = [x for x, row in zip(v.lr2, build("numberfield", {"k": k, "d": d}).scheme.forms)
                 if sum(1 for c in row if not c.is_zero()) > 1]
        perron &= all(x.certificate == "perron" for x in multi)
    low = [classify(build("low_dimension").scheme)] + [classify(s) for s in _low_dimension_extra()]
    elapsed = time.perf_counter() - t
    ok = (all(v.overall is Overall.LR_PROVEN for v in got.values()) and perron
          and all(v.overall is Overall.NOT_LR_PROVEN and not v.lr1 for v in low) and elapsed < 10)
    verdict(2, ok, ", ".join(f"{k}={v.overall.value}" for k, v in got.items())
            + f", d<k/2: {[v.overall.value for v in low]}, {elapsed:.2f}s")


# 3 -------------------------------------------------------------------------

def _float_internal(s: Scheme, n: np.ndarray, m: np.ndarray) -> np.ndarray:
    L = np.array([[float(a) for a in row] for row in s.forms])
    s1 = np.array([float(v) for v in s.s1])
    s2 = np.array([float(v) for v in s.s2])
    return m + s2 - (n + s1) @ L.T


def _brute_labels(s: Scheme, r: int, R: int):
    """Patch encodings (offsets relative to the center) of every center in |n| <= R."""
    d, q = s.d, s.q
    big = box_points(R + r, d)
    offs = cubical_offsets(s, big).reshape((2 * (R + r) + 1,) * d + (q,))
    centers = box_points(R, d)
    deltas = box_points(r, d)
    enc = []
    for dl in deltas:
        idx = tuple((centers + dl + R + r).T)
        enc.append(offs[idx])
    enc = np.stack(enc, axis=1)
    center = offs[tuple((centers + R + r).T)]
    rel = (enc - center[:, None, :]).reshape(len(centers), -1)
    _, labels = np.unique(rel, axis=0, return_inverse=True)
    return centers, center, labels.ravel()


def test_criterion_3_classes_equal_regions():
    t = time.perf_counter()
    lines, ok = [], True
    for name in ("fibonacci", "ammann_beenker"):
        s = build(name).scheme
        for r in (1, 2, 3, 4):
            dec = RegionDecomposition(s, r)
            centers, center_off, labels = _brute_labels(s, r, 50 * r)
            w = _float_internal(s, centers, center_off)
            reg = dec.locate_approx(w)
            reg_id = np.ravel_multi_index(reg.T, [len(c) for c in dec.cuts])
            pairs = set(zip(labels.tolist(), reg_id.tolist()))
            n_classes = len(set(labels.tolist()))
            bij = len(pairs) == n_classes == len(set(reg_id.tolist()))
            # exact membership for one representative per class
            census = distinct_patches(s, r, 50 * r)
            exact = {dec.locate(s.internal(n0, m0)) for n0, m0 in census.first_occurrence}
            good = n_classes == dec.count == len(census) and bij and None not in exact \
                and len(exact) == dec.count
            ok &= good
            lines.append(f"{name} r={r}: {n_classes}/{dec.count}")
    elapsed = time.perf_counter() - t
    verdict(3, ok and elapsed < 60, "; ".join(lines) + f", {elapsed:.1f}s")


# 4 -------------------------------------------------------------------------

def test_criterion_4_frequency_equals_volume():
    t = time.perf_counter()
    s = build("fibonacci").scheme
    worst, sums_exact = 0.0, True
    for r in range(1, 6):
        dec = RegionDecomposition(s, r)
        sums_exact &= dec.total_volume() == s.field.one
        census = distinct_patches(s, r, 10 ** 4)
        total = sum(census.counts)
        for (n0, m0), c in zip(census.first_occurrence, census.counts):
            vol = dec.component(dec.locate(s.internal(n0, m0))).volume
            worst = max(worst, abs(c / total - float(vol)))
    elapsed = time.perf_counter() - t
    verdict(4, worst < 0.01 and sums_exact and elapsed < 30,
            f"max |frequency - volume| = {worst:.2e}, volumes sum to 1 exactly: {sums_exact}, {elapsed:.1f}s")


# 5 -------------------------------------------------------------------------

def test_criterion_5_repetitivity_contrast():
    t = time.perf_counter()
    gold = repetitivity_scan(build("fibonacci").scheme, 200)
    gmax = max(rec.ratio for rec in gold)
    trend = trend_test(gold)
    rs = sorted({2 ** j for j in range(11)} | set(range(1, 65)) | {100, 250, 500, 1000, 1500, 2000})
    liou = repetitivity_scan(build("liouville").scheme, rs=rs)
    lmax = max(rec.ratio for rec in liou)
    where = max(liou, key=lambda rec: rec.ratio).r
    elapsed = time.perf_counter() - t
    verdict(5, not trend.violated and lmax >= 10 * gmax and elapsed < 60,
            f"golden max R/r = {gmax:.2f} (trend violated: {trend.violated}), "
            f"liouville max = {lmax:.1f} at r={where}, {elapsed:.1f}s")


# 6 -------------------------------------------------------------------------

def test_criterion_6_pq_contrast():
    t = time.perf_counter()
    cub = pq_estimate(build("lemma_5_3").scheme, range(1, 21))
    scaled = [rec.scaled for rec in cub.records]
    first, second = min(scaled[:10]), min(scaled[10:])
    bounded = min(scaled) > 0 and second >= first / 4
    can = pq_estimate(build("lemma_5_3", {"window": "canonical"}).scheme, [4, 16])
    a, b = can.records[0].scaled, can.records[1].scaled
    elapsed = time.perf_counter() - t
    verdict(6, bounded and a >= 4 * b and elapsed < 600,
            f"cubical min vol*r^3 over r<=20 = {min(scaled):.4f} (r<=10: {first:.4f}, 11..20: {second:.4f}); "
            f"canonical freq*r^3 r=4 {a:.3e}, r=16 {b:.3e}, ratio {a / b:.2f}, {elapsed:.0f}s")


# 7 -------------------------------------------------------------------------

def test_criterion_7_diophantine_engine():
    t = time.perf_counter()
    K, r5 = sqrt5_field()
    phi = (r5 + 1) / 2
    cf_phi = continued_fraction(phi)
    K2 = RealField([1, 0, -2], "1.414")
    cf_r2 = continued_fraction(K2.gen)
    cf_ok = (cf_phi.period == (0, 1) and all(cf_phi.quotient(i) == 1 for i in range(50))
             and cf_r2.period == (1, 1) and [cf_r2.quotient(i) for i in range(6)] == [1, 2, 2, 2, 2, 2])
    failures = []
    for e in default_entries():
        for N in (10, 100, 1000):
            res = dirichlet_check(e.scheme.forms, N)
            if not res.holds:
                failures.append((e.scheme.name, N))
    scan = bad_scan([phi - 1], 10 ** 6)
    scan_ok = scan.infimum == 2 - phi and scan.witness in ((1,), (-1,))
    elapsed = time.perf_counter() - t
    verdict(7, cf_ok and not failures and scan_ok and elapsed < 30,
            f"CF periods ok: {cf_ok}, Dirichlet failures: {failures}, "
            f"scan infimum {scan.infimum} at {scan.witness}, {elapsed:.1f}s")


# 8 -------------------------------------------------------------------------

def test_criterion_8_derivability():
    t = time.perf_counter()
    ab = local_derivability(build("ammann_beenker").scheme)
    nf = local_derivability(build("numberfield", {"k": 4, "d": 2}).scheme)
    elapsed = time.perf_counter() - t
    verdict(8, (not ab.canonical_from_cubical) and bool(ab.witnesses) and nf.canonical_from_cubical
            and elapsed < 1, f"AB {ab.to_json()}, axis-aligned {nf.to_json()}, {elapsed:.3f}s")


# 9 -------------------------------------------------------------------------

def _random_lattice(rng, d):
    rows = rng.integers(-3, 4, size=(int(rng.integers(0, d + 1)), d))
    if rng.random() < 0.5 and len(rows):
        rows = rows * int(rng.integers(1, 4))
    return Sublattice.span(rows.tolist(), d)


def test_criterion_9_rank_identities():
    t = time.perf_counter()
    rng = np.random.default_rng(9)
    bad = 0
    for _ in range(100):
        d = int(rng.integers(1, 5))
        kernels = [_random_lattice(rng, d) for _ in range(int(rng.integers(2, 5)))]
        ranks = subset_ranks(kernels, d)
        bad += sum(1 for I in ranks for J in ranks if ranks[I] + ranks[J] > d + ranks[I | J])
    eq_checked, eq_bad = 0, 0
    for e in default_entries():
        s = e.scheme
        ranks = subset_ranks(list(s.kernels), s.d)
        if s.inexact or sum(ranks[frozenset([i])] for i in range(s.q)) != s.d * (s.q - 1):
            continue
        for a in range(1, s.q):
            for I in itertools.combinations(range(s.q), a):
                rest = [i for i in range(s.q) if i not in I]
                for b in range(1, len(rest) + 1):
                    for J in itertools.combinations(rest, b):
                        I_, J_ = frozenset(I), frozenset(J)
                        eq_checked += 1
                        eq_bad += ranks[I_] + ranks[J_] != s.d + ranks[I_ | J_]
    elapsed = time.perf_counter() - t
    verdict(9, bad == 0 and eq_bad == 0 and eq_checked > 0 and elapsed < 30,
            f"inequality violations {bad}/100 cases, equality {eq_checked - eq_bad}/{eq_checked}, {elapsed:.1f}s")


if __name__ == "__main__":
    for name, fn in list(globals().items()):
        if name.startswith("test_criterion"):
            try:
                fn()
            except AssertionError:
                pass
