from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cutproject.errors import Lr1Violated
from cutproject.gallery import default_entries
from cutproject.lattice import (Sublattice, complement_groups, coset_representatives, intersect,
                                kernel_mod_one, lattice_sum, subset_ranks)


def span(rows, d):
    return Sublattice.span(rows, d)


def test_kernel_examples(q2):
    r2 = q2.gen
    assert kernel_mod_one([r2], 1).rank == 0
    S = kernel_mod_one([r2 / 2, r2 / 2], 2)
    assert S == span([[1, -1]], 2)
    Q = q2.rationals()
    assert kernel_mod_one([Q.rational(Fraction(1, 2))], 1) == span([[2]], 1)


def test_kernel_membership_matches_integrality(q2):
    r2 = q2.gen
    rows = [[r2 / 2, r2 / 2], [r2 / 3 + Fraction(1, 2), -r2 / 3],
            [q2.rational(Fraction(1, 3)), q2.rational(Fraction(2, 3))]]
    for row in rows:
        S = kernel_mod_one(row, 2)
        for n in itertools.product(range(-10, 11), repeat=2):
            val = row[0] * n[0] + row[1] * n[1]
            assert (tuple(n) in S) == val.is_integer()


def test_intersect_examples():
    Z2 = Sublattice.full(2)
    assert intersect(Z2, Z2) == Z2
    assert intersect(span([[1, -1]], 2), span([[1, 1]], 2)).is_zero()
    assert intersect(span([[2, 0], [0, 1]], 2), span([[1, 0], [0, 3]], 2)) == span([[2, 0], [0, 3]], 2)


def test_sum_examples():
    s = lattice_sum(span([[1, -1]], 2), span([[1, 1]], 2))
    assert s.index() == 2
    assert all(v in s for v in ([2, 0], [0, 2], [1, 1]))
    a = span([[1, 2]], 2)
    assert lattice_sum(a, Sublattice.zero(2)) == a
    assert lattice_sum(span([[2]], 1), span([[3]], 1)) == Sublattice.full(1)


def test_coset_examples():
    c = coset_representatives(Sublattice.full(2))
    assert c.representatives == ((0, 0),) and c.index == 1
    c = coset_representatives(span([[2, 0], [0, 1]], 2))
    assert sorted(c.representatives) == [(0, 0), (1, 0)] and c.index == 2
    c = coset_representatives(span([[1, 1], [1, -1]], 2))
    assert c.index == 2 and len(c.representatives) == 2
    a, b = c.representatives
    assert tuple(x - y for x, y in zip(a, b)) not in c.lattice


def _random_lattice(rng, d):
    count = int(rng.integers(0, d + 1))
    rows = rng.integers(-4, 5, size=(count, d)).tolist()
    return span(rows, d)


def test_cosets_partition_box():
    rng = np.random.default_rng(7)
    for _ in range(20):
        d = int(rng.integers(1, 4))
        rows = rng.integers(-3, 4, size=(d, d))
        if round(abs(np.linalg.det(rows))) == 0:
            continue
        A = span(rows.tolist(), d)
        c = coset_representatives(A)
        assert len(c.representatives) == c.index == A.index()
        for n in itertools.product(range(-5, 6), repeat=d) if d < 3 else []:
            hits = [r for r in c.representatives if tuple(x - y for x, y in zip(n, r)) in A]
            assert len(hits) == 1


def test_complement_examples(q2, cubic):
    r2 = q2.gen
    h = r2 / 2
    kernels = [kernel_mod_one([h, h], 2), kernel_mod_one([h, -h], 2)]
    comp = complement_groups(kernels, 2)
    assert comp.lambdas[0] == span([[1, 1]], 2)
    assert comp.lambdas[1] == span([[1, -1]], 2)
    assert comp.total.index() == 2
    t = cubic.gen
    one = complement_groups([kernel_mod_one([t, t * t], 2)], 2)
    assert one.lambdas[0] == Sublattice.full(2)


def test_complement_rank_failure(q2):
    r2 = q2.gen
    with pytest.raises(Lr1Violated):
        complement_groups([kernel_mod_one([r2], 1), kernel_mod_one([r2 + 1], 1)], 1)


def test_canonical_form_is_unique():
    a = span([[2, 4], [1, 1]], 2)
    b = span([[1, 1], [0, 2], [3, 5]], 2)
    assert a == b and hash(a) == hash(b)


def test_rank_inequality_random_100_cases():
    rng = np.random.default_rng(2024)
    for _ in range(100):
        d = int(rng.integers(1, 5))
        q = int(rng.integers(2, 5))
        kernels = [_random_lattice(rng, d) for _ in range(q)]
        ranks = subset_ranks(kernels, d)
        for I in ranks:
            for J in ranks:
                assert ranks[I] + ranks[J] <= d + ranks[I | J]


def test_rank_equality_on_gallery():
    checked = 0
    for e in default_entries():
        s = e.scheme
        if s.inexact:
            continue
        ranks = subset_ranks(list(s.kernels), s.d)
        if sum(ranks[frozenset([i])] for i in range(s.q)) != s.d * (s.q - 1):
            continue
        items = list(range(s.q))
        for a in range(1, s.q):
            for I in itertools.combinations(items, a):
                rest = [i for i in items if i not in I]
                for b in range(1, len(rest) + 1):
                    for J in itertools.combinations(rest, b):
                        I_, J_ = frozenset(I), frozenset(J)
                        assert ranks[I_] + ranks[J_] == s.d + ranks[I_ | J_]
                        checked += 1
    assert checked > 0


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 3), st.lists(st.lists(st.integers(-5, 5), min_size=3, max_size=3), max_size=4),
       st.lists(st.lists(st.integers(-5, 5), min_size=3, max_size=3), max_size=4))
def test_intersection_and_sum_dimensions(d, ra, rb):
    A = span([r[:d] for r in ra], d)
    B = span([r[:d] for r in rb], d)
    I, S = intersect(A, B), lattice_sum(A, B)
    assert I.rank + S.rank == A.rank + B.rank
    for v in I.basis:
        assert v in A and v in B
    for v in A.basis + B.basis:
        assert v in S
