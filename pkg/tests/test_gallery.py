from __future__ import annotations

from fractions import Fraction

import pytest

from cutproject.errors import BadParams
from cutproject.gallery import (BUILDERS, biquadratic_field, build, cube_root_field, default_entries, names,
                                sextic_field)
from cutproject.classify import classify


def test_field_helpers():
    K, a, b = sextic_field()
    assert a ** 3 == K.rational(2) and b * b == K.rational(2)
    K, r2, r3 = biquadratic_field()
    assert r2 * r2 == K.rational(2) and r3 * r3 == K.rational(3)
    assert 1.414 < float(r2) < 1.415 and 1.732 < float(r3) < 1.733
    K, t = cube_root_field(3, 4)
    assert t ** 4 == K.rational(3)


def test_names_and_defaults():
    assert names() == list(BUILDERS)
    assert {"fibonacci", "penrose", "lemma_5_3", "lemma_5_5", "liouville"} <= set(names())
    entries = default_entries()
    assert len({e.scheme.name for e in entries}) == len(entries)


@pytest.mark.parametrize("params", [{}, {"d": 1}, {"d": 3}])
def test_codim1(params):
    e = build("codim1", params)
    s = e.scheme
    assert s.k == s.d + 1 and s.q == 1
    assert classify(s).overall.value == "LR_Proven"


def test_window_parameter():
    assert build("penrose", {"window": "canonical"}).scheme.window.value == "canonical"


def test_lemma_5_5_params():
    with pytest.raises(BadParams):
        build("lemma_5_5")
    with pytest.raises(BadParams):
        build("lemma_5_5", {"alpha": 2, "beta": [0, 1, 0, 0]})
    e = build("lemma_5_5", {"minpoly": [1, 0, -7], "root": "2.6", "alpha": [0, 1], "beta": [1, 1]})
    assert e.scheme.k == 4 and e.params["alpha"] == ["0", "1"]


@pytest.mark.parametrize("name,params", [("numberfield", {"k": 6, "d": 2}), ("liouville", {"terms": 9}),
                                         ("codim1", {"d": 0}), ("nope", {})])
def test_bad_params(name, params):
    with pytest.raises(BadParams):
        build(name, params)


def test_liouville_truncation():
    s = build("liouville", {"terms": 3}).scheme
    assert s.inexact
    assert s.forms[0][0].coords[0] == Fraction(1, 10) + Fraction(1, 100) + Fraction(1, 10 ** 6)
