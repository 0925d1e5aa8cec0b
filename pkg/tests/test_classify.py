from __future__ import annotations

import math

import pytest

from cutproject.classify import (Overall, RepetitivityRecord, brute_force_R, classify, lr1_ranks,
                                 permutation_scan, pq_estimate, repetitivity_scan, trend_test)
from cutproject.gallery import build, default_entries
from cutproject.scheme import Scheme
from cutproject.window import RegionDecomposition

ENTRIES = default_entries() + [build("lemma_5_5", {"alpha": [0, -9 / 2, 0, 1 / 2],
                                                   "beta": [0, 11 / 2, 0, -1 / 2]})]


@pytest.mark.parametrize("entry", ENTRIES, ids=lambda e: e.scheme.name)
def test_gallery_ranks_and_verdicts(entry):
    v = classify(entry.scheme)
    if "ranks" in entry.expectations:
        assert list(v.ranks) == entry.expectations["ranks"]
    assert v.lr1 == entry.expectations["lr1"]
    if "overall" in entry.expectations:
        assert v.overall.value == entry.expectations["overall"]
    for verdict, cert in zip(v.lr2, entry.expectations.get("certificates", [])):
        assert verdict.certificate == cert


def test_rank_sum_never_exceeds_target():
    for e in ENTRIES:
        ranks, target = lr1_ranks(e.scheme)
        assert sum(ranks) <= target


def test_internal_relabeling_permutes_ranks():
    s = build("lemma_5_3").scheme
    swapped = s.replace(forms=tuple(reversed(s.forms)))
    a, b = classify(s), classify(swapped)
    assert b.ranks == tuple(reversed(a.ranks)) and b.lr1 == a.lr1
    assert b.overall == a.overall


def test_periodic_scheme_inapplicable():
    K = build("ammann_beenker").scheme.field
    v = classify(Scheme(3, 2, K, ((K.gen, K.zero),)))
    assert v.overall is Overall.INAPPLICABLE and v.reason == "periodic"


def test_inexact_flag_downgrades():
    s = build("fibonacci").scheme.replace(inexact=True)
    v = classify(s, depth=10 ** 5)
    assert v.overall is Overall.LR_EMPIRICAL


def test_canonical_window_transfers():
    assert classify(build("fibonacci", {"window": "canonical"}).scheme).overall is Overall.LR_PROVEN
    nf = classify(build("numberfield", {"k": 4, "d": 2, "window": "canonical"}).scheme)
    assert nf.overall is Overall.LR_PROVEN and any("derivable" in n for n in nf.notes)
    ab = classify(build("ammann_beenker", {"window": "canonical"}).scheme)
    assert ab.overall is Overall.INAPPLICABLE
    low = classify(build("low_dimension", {"window": "canonical"}).scheme)
    assert low.overall is Overall.NOT_LR_PROVEN


def test_verdict_json_shape():
    doc = classify(build("ammann_beenker").scheme).to_json()
    assert doc["lr1"] == {"holds": True, "ranks": [1, 1], "sum": 2, "target": 2}
    assert [x["status"] for x in doc["lr2"]] == ["ProvenBad", "ProvenBad"]


def test_golden_repetitivity_bounded():
    recs = repetitivity_scan(build("fibonacci").scheme, 60)
    Rs = [rec.R for rec in recs]
    assert all(R is not None for R in Rs)
    assert Rs == sorted(Rs)
    assert max(rec.ratio for rec in recs) < 5
    assert not trend_test(recs).violated


@pytest.mark.parametrize("name,rmax", [("fibonacci", 6), ("ammann_beenker", 3)])
def test_density_R_tracks_brute_force(name, rmax):
    s = build(name).scheme
    for rec in repetitivity_scan(s, rmax):
        brute = brute_force_R(s, rec.r)
        assert brute is not None
        assert brute <= 2 * rec.R + 2 * rec.r
        assert rec.R <= 3 * brute + rec.r


def test_low_dimension_falls_back_to_brute_force():
    recs = repetitivity_scan(build("low_dimension").scheme, 2)
    assert {rec.mode for rec in recs} == {"brute_force"}


def test_trend_rule_synthetic():
    flat = [RepetitivityRecord(r, 0, (), 3 * r) for r in (1, 2, 4, 8, 16)]
    assert not trend_test(flat).violated
    bump = flat[:-1] + [RepetitivityRecord(16, 0, (), 16 * 13)]
    assert trend_test(bump).violated
    assert not trend_test(flat[:1]).violated


def test_pq_cubical_exact():
    s = build("fibonacci").scheme
    rep = pq_estimate(s, [0, 1, 5, 30])
    everything = pq_estimate(s, range(1, 201))
    assert min(rec.scaled for rec in everything.records) > 0.2
    assert rep.records[0].scaled == 1.0
    for rec in rep.records[1:]:
        assert rec.mode == "exact"
        assert rec.exact == str(RegionDecomposition(s, rec.r).min_volume())
        assert 0.2 < rec.scaled < 0.5


def test_pq_sampled_matches_exact():
    s = build("fibonacci").scheme
    rep = pq_estimate(s, [2, 4], sample_radius=5000, mode="sampled")
    assert all(rec.mode == "sampled" for rec in rep.records)
    exact = pq_estimate(s, [2, 4])
    for a, b in zip(rep.records, exact.records):
        assert math.isclose(a.min_frequency, b.min_frequency, rel_tol=0.01)


def test_permutation_scan():
    ab = permutation_scan(build("ammann_beenker").scheme)
    assert len(ab) == 6 and all(r.valid and r.lr1 for r in ab)
    l55 = permutation_scan(ENTRIES[-1].scheme)
    by_phys = {r.physical: r for r in l55}
    assert by_phys[(0, 1)].lr1
    assert by_phys[(2, 3)].lr1 is False
