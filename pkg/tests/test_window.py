from __future__ import annotations

from decimal import Decimal, getcontext
from fractions import Fraction

import numpy as np
from hypothesis import given, settings, strategies as st
from shapely.geometry import Point, Polygon

from cutproject.gallery import build
from cutproject.window import RegionDecomposition, cut_sets, local_derivability
from cutproject.zonotope import Membership

getcontext().prec = 60
INV_PHI = (Decimal(5).sqrt() - 1) / 2


def golden_cuts(r):
    # high precision oracle for {-n / phi mod 1 : |n| <= r}
    xs = [-n * INV_PHI for n in range(-r, r + 1)]
    vals = sorted({float(x - x.to_integral_value(rounding="ROUND_FLOOR")) for x in xs})
    return np.array(vals)


def test_cut_set_sizes():
    fib = build("fibonacci").scheme
    assert [len(c) for c in cut_sets(fib, 1)] == [3]
    ab = build("ammann_beenker").scheme
    assert [len(c) for c in cut_sets(ab, 1)] == [5, 5]


def test_golden_cut_values_against_decimal():
    fib = build("fibonacci").scheme
    for r in (1, 4, 17, 60):
        c = cut_sets(fib, r)[0]
        assert np.allclose(c.approx, golden_cuts(r), atol=1e-12)
        assert np.allclose([float(v) for v in c.values], golden_cuts(r), atol=1e-14)


def test_three_gap_property():
    for name in ("fibonacci", "liouville"):
        s = build(name).scheme
        for r in (5, 13, 40, 101):
            cut = cut_sets(s, r)[0]
            gaps = {cut.gap(t) for t in range(len(cut))}
            assert len(gaps) <= 3


def test_golden_r1_volumes():
    s = build("fibonacci").scheme
    inv_phi = s.forms[0][0]
    vols = sorted((c.volume for c in RegionDecomposition(s, 1).components()), key=float)
    assert vols == [2 * inv_phi - 1, 1 - inv_phi, 1 - inv_phi]


def test_volumes_sum_to_one_exactly():
    for name in ("fibonacci", "ammann_beenker", "lemma_5_3"):
        s = build(name).scheme
        for r in (1, 2, 3):
            dec = RegionDecomposition(s, r)
            assert dec.total_volume() == s.field.one
            assert dec.count == int(np.prod([len(c) for c in dec.cuts]))
            mn, mx = dec.min_volume(), dec.max_volume()
            assert 0 < float(mn) <= float(mx) < 1


def test_min_volume_is_smallest_component():
    s = build("ammann_beenker").scheme
    dec = RegionDecomposition(s, 2)
    vols = sorted(float(c.volume) for c in dec.components())
    assert abs(vols[0] - float(dec.min_volume())) < 1e-15
    assert abs(vols[-1] - float(dec.max_volume())) < 1e-15


def test_locate_matches_component():
    s = build("ammann_beenker").scheme
    dec = RegionDecomposition(s, 2)
    for idx, comp in zip([(0, 0), (3, 1), (4, 4)], [dec.component(i) for i in [(0, 0), (3, 1), (4, 4)]]):
        mid = [(a + b) / 2 for a, b in zip(comp.lower, comp.upper)]
        assert comp.contains(mid)
        assert dec.locate(mid) == idx
    # a cut point itself lies on no component
    assert dec.locate([dec.cuts[0].values[1], dec.cuts[1].values[0] + s.field.rational(Fraction(1, 1000))]) is None


def test_zonotope_membership_examples():
    s = build("ammann_beenker", {"window": "canonical"}).scheme
    Z = s.zonotope
    assert Z.membership(Z.center()) is Membership.INSIDE
    K = s.field
    v = Z.support_point((K.one, K.rational(Fraction(1, 7))))
    assert Z.membership(v) is Membership.BOUNDARY
    far = tuple(x + 5 for x in v)
    assert Z.membership(far) is Membership.OUTSIDE
    assert len(Z.float_vertices_2d()) == 8


@settings(max_examples=60, deadline=None)
@given(st.fractions(-2, 2, max_denominator=97), st.fractions(-2, 2, max_denominator=97))
def test_zonotope_membership_matches_polygon(x, y):
    s = build("ammann_beenker", {"window": "canonical"}).scheme
    Z = s.zonotope
    poly = Polygon(Z.float_vertices_2d())
    p = Point(float(x), float(y))
    if poly.exterior.distance(p) < 1e-9:
        return
    got = Z.membership((s.field.rational(x), s.field.rational(y)))
    assert (got is Membership.INSIDE) == poly.contains(p)


def test_derivability():
    ab = local_derivability(build("ammann_beenker").scheme)
    assert ab.cubical_from_canonical and not ab.canonical_from_cubical
    assert ab.witnesses
    nf = local_derivability(build("numberfield", {"k": 4, "d": 2}).scheme)
    assert nf.canonical_from_cubical and not nf.witnesses
    assert local_derivability(build("fibonacci").scheme).canonical_from_cubical
