"""Builders for the standard example schemes, with expected properties."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable

from .errors import BadParams
from .exact_reals import FieldElement, RealField
from .scheme import Scheme, WindowKind


@dataclass
class GalleryEntry:
    name: str
    scheme: Scheme
    expectations: dict[str, Any] = field(default_factory=dict)
    params: dict[str, Any] = field(default_factory=dict)


def sqrt5_field() -> tuple[RealField, FieldElement]:
    K = RealField([1, 0, -5], "2.236")
    return K, K.gen


def sqrt2_field() -> tuple[RealField, FieldElement]:
    K = RealField([1, 0, -2], "1.414")
    return K, K.gen


def cube_root_field(n: int = 2, degree: int = 3) -> tuple[RealField, FieldElement]:
    """Q(n^(1/degree)); its powers 1, t, .., t^(degree-1) form a field basis."""
    K = RealField([1] + [0] * (degree - 1) + [-n], str(n ** (1 / degree)))
    return K, K.gen


def sextic_field() -> tuple[RealField, FieldElement, FieldElement]:
    """Q(2^(1/3) + sqrt 2), returning (field, 2^(1/3), sqrt 2)."""
    K = RealField([1, 0, -6, -4, 12, -24, -4], "2.674")
    t = K.gen
    r2 = (t ** 3 + 6 * t - 2) / (3 * t * t + 2)
    return K, t - r2, r2


def biquadratic_field() -> tuple[RealField, FieldElement, FieldElement]:
    """Q(sqrt 2 + sqrt 3), returning (field, sqrt 2, sqrt 3)."""
    K = RealField([1, 0, -10, 0, 1], "3.146")
    t = K.gen
    return K, (t ** 3 - 9 * t) / 2, (11 * t - t ** 3) / 2


def _window(params: dict) -> WindowKind:
    return WindowKind(params.get("window", "cubical"))


def fibonacci(params: dict) -> GalleryEntry:
    K, r5 = sqrt5_field()
    inv_phi = (r5 - 1) / 2
    s = Scheme(2, 1, K, ((inv_phi,),), _window(params), name="fibonacci")
    return GalleryEntry("fibonacci", s, {"ranks": [0], "lr1": True, "certificates": ["periodic_cf"],
                                         "overall": "LR_Proven", "totally_irrational": True})


def codim1(params: dict) -> GalleryEntry:
    """k = d + 1 with L = (t, t^2, .., t^d) for t = 2^(1/(d+1))."""
    d = int(params.get("d", 2))
    if d < 1:
        raise BadParams("d must be positive")
    K, t = cube_root_field(2, d + 1)
    row = tuple(t ** (j + 1) for j in range(d))
    s = Scheme(d + 1, d, K, (row,), _window(params), name="codim1")
    cert = "periodic_cf" if d == 1 else "perron"
    return GalleryEntry("codim1", s, {"ranks": [0], "lr1": True, "certificates": [cert],
                                      "overall": "LR_Proven", "totally_irrational": True}, {"d": d})


def numberfield(params: dict) -> GalleryEntry:
    """Forms on disjoint blocks of variables, block i carrying a field basis of degree m_i + 1."""
    k, d = int(params.get("k", 4)), int(params.get("d", 2))
    window = _window(params)
    if (k, d) == (3, 2):
        K, t = cube_root_field(2, 3)
        forms = ((t, t * t),)
        ranks = [0]
    elif (k, d) == (4, 2):
        K, r2 = sqrt2_field()
        forms = ((r2, K.zero), (K.zero, r2 / 3))
        ranks = [1, 1]
    elif (k, d) == (5, 3):
        K, a, b = sextic_field()
        forms = ((a, a * a, K.zero), (K.zero, K.zero, b))
        ranks = [1, 2]
    else:
        raise BadParams(f"no preset for (k, d) = ({k}, {d}); presets are (3,2), (4,2), (5,3)")
    s = Scheme(k, d, K, forms, window, name=f"numberfield_{k}_{d}")
    certs = ["perron" if sum(1 for c in row if not c.is_zero()) > 1 else "periodic_cf" for row in forms]
    return GalleryEntry("numberfield", s, {"ranks": ranks, "lr1": True, "certificates": certs,
                                           "overall": "LR_Proven", "totally_irrational": True},
                        {"k": k, "d": d})


def ammann_beenker(params: dict) -> GalleryEntry:
    K, r2 = sqrt2_field()
    h = r2 / 2
    s = Scheme(4, 2, K, ((h, h), (h, -h)), _window(params), name="ammann_beenker")
    return GalleryEntry("ammann_beenker", s, {"ranks": [1, 1], "lr1": True,
                                              "certificates": ["periodic_cf", "periodic_cf"],
                                              "overall": "LR_Proven", "totally_irrational": True,
                                              "canonical_from_cubical": False})


def penrose(params: dict) -> GalleryEntry:
    K, r5 = sqrt5_field()
    a = (r5 - 1) / 2  # 2 alpha_1
    forms = ((K.rational(-1), a), (-a, -a), (a, K.rational(-1)))
    s = Scheme(5, 2, K, forms, _window(params), name="penrose")
    return GalleryEntry("penrose", s, {"ranks": [1, 1, 1], "lr1": False, "overall": "Inapplicable",
                                       "totally_irrational": False, "relation": [1, 1, 1]})


def lemma_5_3(params: dict) -> GalleryEntry:
    """Cubic pair (2^(1/3), 2^(2/3)) for the first form and sqrt 2 for the second."""
    K, a1, b = sextic_field()
    forms = ((-a1, -a1 * a1, K.rational(-1)), (K.zero, K.zero, -b))
    s = Scheme(5, 3, K, forms, _window(params), name="lemma_5_3")
    return GalleryEntry("lemma_5_3", s, {"ranks": [1, 2], "lr1": True,
                                         "certificates": ["perron", "periodic_cf"],
                                         "overall": "LR_Proven", "totally_irrational": True,
                                         "canonical_pq": "decays"})


def _param_element(params: dict, key: str, K: RealField, default: FieldElement | None) -> FieldElement:
    if key not in params:
        if default is None:
            raise BadParams(f"parameter {key!r} is required")
        return default
    v = params[key]
    if isinstance(v, FieldElement):
        return v
    if isinstance(v, (list, tuple)):
        return K.element(v)
    return K.rational(Fraction(str(v)))


def lemma_5_5(params: dict) -> GalleryEntry:
    """Needs user constants alpha, beta; the default field is Q(sqrt 2 + sqrt 3).

    ``params`` may give ``minpoly``/``root`` for another field and alpha,
    beta as power-basis coordinate lists.
    """
    if "alpha" not in params or "beta" not in params:
        raise BadParams("lemma_5_5 needs alpha and beta")
    if "minpoly" in params:
        K = RealField(params["minpoly"], params.get("root"))
    else:
        K = biquadratic_field()[0]
    alpha = _param_element(params, "alpha", K, None)
    beta = _param_element(params, "beta", K, None)
    if alpha.is_rational() or beta.is_rational():
        raise BadParams("alpha and beta must be irrational")
    forms = ((K.rational(Fraction(-2, 5)), -alpha), (-beta, -beta * Fraction(5, 2)))
    s = Scheme(4, 2, K, forms, _window(params), name="lemma_5_5")
    return GalleryEntry("lemma_5_5", s, {"lr1": True, "lr2_passes": True,
                                         "failing_parametrization": [3, 4]},
                        {"alpha": alpha.coord_strings(), "beta": beta.coord_strings()})


def low_dimension(params: dict) -> GalleryEntry:
    """d = 1 < k / 2: (sqrt 2, sqrt 3) has no kernel, so the rank sum falls short."""
    K, r2, r3 = biquadratic_field()
    s = Scheme(3, 1, K, ((r2,), (r3,)), _window(params), name="low_dimension")
    return GalleryEntry("low_dimension", s, {"ranks": [0, 0], "lr1": False,
                                             "overall": "NotLR_Proven", "totally_irrational": True})


def liouville(params: dict) -> GalleryEntry:
    """Truncation sum_{j <= terms} 10^(-j!) of a Liouville number, flagged inexact."""
    terms = int(params.get("terms", 4))
    if not 1 <= terms <= 6:
        raise BadParams("terms must be between 1 and 6")
    Q = RealField.rationals()
    fact, x = 1, Fraction(0)
    for j in range(1, terms + 1):
        fact *= j
        x += Fraction(1, 10 ** fact)
    s = Scheme(2, 1, Q, ((Q.rational(x),),), _window(params), inexact=True, name="liouville")
    return GalleryEntry("liouville", s, {"ranks": [0], "lr1": True, "certificates": ["quotient_growth"],
                                         "overall": "NotLR_Empirical"}, {"terms": terms})


BUILDERS: dict[str, Callable[[dict], GalleryEntry]] = {
    "fibonacci": fibonacci,
    "codim1": codim1,
    "numberfield": numberfield,
    "ammann_beenker": ammann_beenker,
    "penrose": penrose,
    "lemma_5_3": lemma_5_3,
    "lemma_5_5": lemma_5_5,
    "low_dimension": low_dimension,
    "liouville": liouville,
}


def names() -> list[str]:
    return list(BUILDERS)


def build(name: str, params: dict | None = None) -> GalleryEntry:
    if name not in BUILDERS:
        raise BadParams(f"unknown gallery entry {name!r}; known: {', '.join(BUILDERS)}")
    return BUILDERS[name](dict(params or {}))


def default_entries() -> list[GalleryEntry]:
    """Every entry that builds without user constants, including all numberfield presets."""
    out = [build(n) for n in ("fibonacci", "codim1", "ammann_beenker", "penrose", "lemma_5_3",
                              "low_dimension", "liouville")]
    out += [build("numberfield", {"k": k, "d": d}) for k, d in ((3, 2), (4, 2), (5, 3))]
    return out
