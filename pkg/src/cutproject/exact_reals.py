"""Exact arithmetic in a real number field Q(t), t a designated real root.

Elements are stored on the power basis 1, t, ..., t^(n-1) with
:class:`fractions.Fraction` coordinates.  Every comparison is decided
exactly: zero is recognised from the coordinates, and a non-zero element is
separated from zero (or from an integer, for floors) by refining a rational
interval around ``t``.

Bulk evaluation of affine integer combinations, which is what generation and
region counting need, goes through :class:`AffineForm`: a floating point fast
path with a rigorous error bound, falling back to exact arithmetic for the
rare ambiguous entries.
"""

from __future__ import annotations

import functools
import math
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidField

Rational = Fraction | int


def _frac(q) -> Fraction:
    if isinstance(q, Fraction):
        return q
    if isinstance(q, str):
        return Fraction(q.strip())
    return Fraction(q)


def _poly_eval(coeffs_low: Sequence[int], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs_low):
        acc = acc * x + c
    return acc


def solve_rational(matrix: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]) -> list[Fraction]:
    """Solve a square non-singular system over Q by Gauss-Jordan elimination."""
    n = len(matrix)
    a = [[_frac(v) for v in row] + [_frac(rhs[i])] for i, row in enumerate(matrix)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular rational system")
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [v / p for v in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [vr - f * vc for vr, vc in zip(a[r], a[col])]
    return [a[r][n] for r in range(n)]


class RealField:
    """The field Q(t) for a designated real root t of an irreducible monic polynomial.

    ``minpoly`` lists integer coefficients from the leading term down, so
    ``[1, 0, -2]`` is t^2 - 2.  A degree-one polynomial gives the rationals
    (the root is then irrelevant).  ``root_hint`` picks the real root nearest
    to it.
    """

    __slots__ = ("minpoly", "degree", "root_hint", "_low", "_lo", "_hi", "_reduction",
                 "_root_index", "_pow_cache", "_float_pows")

    def __init__(self, minpoly: Sequence[int], root_hint: Rational | str | float | None = None):
        coeffs = [int(c) for c in minpoly]
        if len(coeffs) < 2:
            raise InvalidField("minimal polynomial must have degree >= 1")
        if coeffs[0] != 1:
            raise InvalidField("minimal polynomial must be monic")
        self.minpoly = tuple(coeffs)
        self.degree = len(coeffs) - 1
        self._low = tuple(reversed(coeffs))
        self.root_hint = None if root_hint is None else _frac(str(root_hint) if isinstance(root_hint, float) else root_hint)
        self._pow_cache: dict[int, tuple[Fraction, Fraction]] = {}
        self._float_pows = None
        if self.degree == 1:
            root = Fraction(-coeffs[1])
            self._lo = self._hi = root
            self._root_index = 0
        else:
            self._isolate()
        self._reduction = self._build_reduction()

    @classmethod
    def rationals(cls) -> "RealField":
        return cls([1, 0])

    def _isolate(self) -> None:
        import sympy

        x = sympy.Symbol("x")
        poly = sympy.Poly(list(self.minpoly), x, domain="ZZ")
        if not poly.is_irreducible:
            raise InvalidField(f"polynomial {poly.as_expr()} is reducible over Q")
        intervals = [iv for iv, _ in poly.intervals()]
        if not intervals:
            raise InvalidField("polynomial has no real root")
        if self.root_hint is None:
            if len(intervals) > 1:
                raise InvalidField("root_hint required when there are several real roots")
            idx = 0
        else:
            h = self.root_hint
            # refine so that the hint cannot sit between two candidate intervals
            intervals = poly.intervals(eps=Fraction(1, 2 ** 40))
            intervals = [iv for iv, _ in intervals] if intervals and isinstance(intervals[0][0], tuple) else intervals
            idx = min(range(len(intervals)),
                      key=lambda i: abs(Fraction(str(intervals[i][0])) + Fraction(str(intervals[i][1])) - 2 * h))
        lo, hi = (Fraction(str(v)) for v in intervals[idx])
        self._lo, self._hi = lo, hi
        self._root_index = idx

    def _build_reduction(self) -> list[list[Fraction]]:
        n = self.degree
        # powers t^0 .. t^(2n-2) written on the power basis
        table = []
        for k in range(n):
            row = [Fraction(0)] * n
            row[k] = Fraction(1)
            table.append(row)
        top = [-Fraction(c) for c in self._low[:n]]
        cur = top
        for _ in range(n, 2 * n - 1):
            table.append(cur)
            nxt = [Fraction(0)] + cur[:-1]
            lead = cur[-1]
            cur = [nxt[i] + lead * top[i] for i in range(n)]
        return table

    # -- root refinement -------------------------------------------------

    def root_interval(self, bits: int) -> tuple[Fraction, Fraction]:
        """Rational interval of width <= 2**-bits containing the root."""
        if self.degree == 1:
            return self._lo, self._hi
        target = Fraction(1, 2 ** bits)
        lo, hi = self._lo, self._hi
        if hi - lo <= target:
            return lo, hi
        s_lo = _poly_eval(self._low, lo)
        if s_lo == 0:
            self._lo = self._hi = lo
            return lo, lo
        while hi - lo > target:
            mid = (lo + hi) / 2
            # dyadic rounding of the midpoint keeps denominators small
            mid = Fraction(math.floor(mid * 2 ** (bits + 2)), 2 ** (bits + 2))
            if not lo < mid < hi:
                mid = (lo + hi) / 2
            v = _poly_eval(self._low, mid)
            if v == 0:
                lo = hi = mid
                break
            if (v > 0) == (s_lo > 0):
                lo = mid
            else:
                hi = mid
        self._lo, self._hi = lo, hi
        return lo, hi

    def float_powers(self) -> np.ndarray:
        if self._float_pows is None:
            lo, hi = self.root_interval(80)
            mid = (lo + hi) / 2
            self._float_pows = np.array([float(mid ** k) for k in range(self.degree)])
        return self._float_pows

    # -- constructors ---------------------------------------------------

    def element(self, coords: Iterable[Rational | str]) -> "FieldElement":
        c = [_frac(v) for v in coords]
        if len(c) > self.degree:
            raise InvalidField("too many coordinates for this field")
        c += [Fraction(0)] * (self.degree - len(c))
        return FieldElement(self, tuple(c))

    def rational(self, q: Rational | str) -> "FieldElement":
        return self.element([_frac(q)])

    @property
    def gen(self) -> "FieldElement":
        if self.degree == 1:
            return self.rational(self._lo)
        return self.element([0, 1])

    @property
    def zero(self) -> "FieldElement":
        return self.rational(0)

    @property
    def one(self) -> "FieldElement":
        return self.rational(1)

    def __eq__(self, other):
        return (isinstance(other, RealField) and self.minpoly == other.minpoly
                and self._root_index == other._root_index)

    def __hash__(self):
        return hash((self.minpoly, self._root_index))

    def __repr__(self):
        if self.degree == 1:
            return "RealField(Q)"
        lo, hi = self.root_interval(20)
        return f"RealField({list(self.minpoly)}, root~{float((lo + hi) / 2):.6g})"

    def describe(self) -> dict:
        lo, hi = self.root_interval(60)
        return {"minpoly": list(self.minpoly),
                "root_hint": "0" if self.degree == 1 else f"{float((lo + hi) / 2):.15g}"}


@functools.total_ordering
class FieldElement:
    """Immutable element of a :class:`RealField`."""

    __slots__ = ("field", "coords", "_iv")

    def __init__(self, field: RealField, coords: tuple[Fraction, ...]):
        self.field = field
        self.coords = coords
        self._iv = None

    # -- arithmetic -----------------------------------------------------

    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.field is not self.field and other.field != self.field:
                raise InvalidField("elements belong to different fields")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.rational(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, tuple(a + b for a, b in zip(self.coords, o.coords)))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, tuple(-a for a in self.coords))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, tuple(a - b for a, b in zip(self.coords, o.coords)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return FieldElement(self.field, tuple(a * other for a in self.coords))
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        n = self.field.degree
        prod = [Fraction(0)] * (2 * n - 1)
        for i, a in enumerate(self.coords):
            if a:
                for j, b in enumerate(o.coords):
                    if b:
                        prod[i + j] += a * b
        red = self.field._reduction
        out = [Fraction(0)] * n
        for k, v in enumerate(prod):
            if v:
                row = red[k]
                for i in range(n):
                    if row[i]:
                        out[i] += v * row[i]
        return FieldElement(self.field, tuple(out))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        if self.is_rational():
            return self.field.rational(1 / self.coords[0])
        n = self.field.degree
        cols = []
        basis_pow = self.field.one
        t = self.field.gen
        for _ in range(n):
            cols.append((self * basis_pow).coords)
            basis_pow = basis_pow * t
        matrix = [[cols[j][i] for j in range(n)] for i in range(n)]
        rhs = [Fraction(1)] + [Fraction(0)] * (n - 1)
        return FieldElement(self.field, tuple(solve_rational(matrix, rhs)))

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return FieldElement(self.field, tuple(a / other for a in self.coords))
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = self.field.one
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- predicates -----------------------------------------------------

    def is_zero(self) -> bool:
        return not any(self.coords)

    def is_rational(self) -> bool:
        return not any(self.coords[1:])

    def is_integer(self) -> bool:
        return self.is_rational() and self.coords[0].denominator == 1

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coords[0] == other
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.coords == other.coords and self.field == other.field

    def __hash__(self):
        if self.is_rational():
            return hash(self.coords[0])
        return hash(self.coords)

    def __lt__(self, other):
        return sign(self - other) < 0

    # -- approximation --------------------------------------------------

    def interval(self, bits: int) -> tuple[Fraction, Fraction]:
        """Interval for the value using a root interval of width 2**-bits."""
        if self.is_rational():
            q = self.coords[0]
            return q, q
        lo, hi = self.field.root_interval(bits)
        if lo == hi:
            v = _poly_eval(self.coords, lo)
            return v, v
        a, b = Fraction(0), Fraction(0)
        for c in reversed(self.coords):
            products = (a * lo, a * hi, b * lo, b * hi)
            a, b = min(products) + c, max(products) + c
        return a, b

    def __float__(self):
        lo, hi = to_interval(self, Fraction(1, 2 ** 60))
        return float((lo + hi) / 2)

    def __repr__(self):
        return f"FieldElement({self})"

    def __str__(self):
        terms = []
        for i, c in enumerate(self.coords):
            if c == 0:
                continue
            if i == 0:
                terms.append(f"{c}")
            elif i == 1:
                terms.append(f"({c})*t")
            else:
                terms.append(f"({c})*t^{i}")
        return " + ".join(terms) if terms else "0"

    def coord_strings(self) -> list[str]:
        return [str(c) for c in self.coords]


def sign(x: FieldElement) -> int:
    """Exact sign of the real embedding of ``x``."""
    if x.is_zero():
        return 0
    if x.is_rational():
        return 1 if x.coords[0] > 0 else -1
    bits = 48
    while True:
        lo, hi = x.interval(bits)
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        bits *= 2


def floor_frac(x: FieldElement) -> tuple[int, FieldElement]:
    """``(floor(x), x - floor(x))`` with the fractional part in [0, 1)."""
    if x.is_rational():
        q = x.coords[0]
        f = math.floor(q)
        return f, x.field.rational(q - f)
    bits = 48
    while True:
        lo, hi = x.interval(bits)
        fl, fh = math.floor(lo), math.floor(hi)
        if fl == fh:
            return fl, x - fl
        # an irrational element never equals an integer, so refinement ends
        bits *= 2


def to_interval(x: FieldElement, width: Rational) -> tuple[Fraction, Fraction]:
    """Rational interval of length <= ``width`` containing ``x``."""
    width = _frac(width)
    if width <= 0:
        raise ValueError("width must be positive")
    if x.is_rational():
        return x.coords[0], x.coords[0]
    bits = 32
    while True:
        lo, hi = x.interval(bits)
        if hi - lo <= width:
            return lo, hi
        bits *= 2


def dist_to_int(x: FieldElement) -> FieldElement:
    """Distance from ``x`` to the nearest integer, as a field element."""
    _, f = floor_frac(x)
    g = 1 - f
    return f if sign(f - g) <= 0 else g


def compare(a: FieldElement, b: FieldElement) -> int:
    return sign(a - b)


def sort_exact(elements: Sequence[FieldElement], approx: np.ndarray | None = None,
               err: np.ndarray | None = None) -> list[int]:
    """Indices sorting ``elements`` ascending, decided exactly.

    ``approx``/``err`` (optional) give floating point values with absolute error
    bounds; they are used to order well separated items without exact work.
    """
    n = len(elements)
    if approx is None:
        approx = np.array([float(e) for e in elements])
        err = np.abs(approx) * 1e-12 + 1e-300
    order = list(np.argsort(approx, kind="stable"))
    out: list[int] = []
    i = 0
    key = functools.cmp_to_key(lambda p, q: compare(elements[p], elements[q]))
    while i < n:
        j = i + 1
        reach = approx[order[i]] + err[order[i]]
        while j < n and approx[order[j]] - err[order[j]] <= reach:
            reach = max(reach, approx[order[j]] + err[order[j]])
            j += 1
        group = order[i:j]
        if len(group) > 1:
            group = sorted(group, key=key)
        out.extend(int(g) for g in group)
        i = j
    return out


class AffineForm:
    """The map z -> const + sum_j coeffs[j] * z_j on integer vectors, in bulk.

    Exact coordinates are integer arrays over a common denominator; values are
    decided with floats carrying an explicit error bound and re-decided exactly
    where the bound is inconclusive.
    """

    _REL = 4e-14

    def __init__(self, field: RealField, const: FieldElement | Rational, coeffs: Sequence[FieldElement | Rational]):
        self.field = field
        const = const if isinstance(const, FieldElement) else field.rational(const)
        coeffs = [c if isinstance(c, FieldElement) else field.rational(c) for c in coeffs]
        self.const = const
        self.coeffs = coeffs
        den = 1
        for e in [const, *coeffs]:
            for c in e.coords:
                den = den * c.denominator // math.gcd(den, c.denominator)
        self.den = den
        self._c0 = [int(c * den) for c in const.coords]
        self._cm = [[int(c * den) for c in e.coords] for e in coeffs]
        self._scale = sum(abs(v) for row in self._cm for v in row) + sum(abs(v) for v in self._c0)

    def coordinates(self, z: np.ndarray) -> np.ndarray:
        """Exact integer coordinates (times ``den``), shape (N, degree)."""
        z = np.asarray(z, dtype=np.int64).reshape(-1, len(self.coeffs))
        zmax = int(np.abs(z).max()) if z.size else 0
        if (zmax + 1) * self._scale < 2 ** 62:
            cm = np.array(self._cm, dtype=np.int64).reshape(len(self.coeffs), self.field.degree)
            return z @ cm + np.array(self._c0, dtype=np.int64)
        cm = np.array(self._cm, dtype=object).reshape(len(self.coeffs), self.field.degree)
        return z.astype(object) @ cm + np.array(self._c0, dtype=object)

    def element_from_coords(self, row) -> FieldElement:
        return FieldElement(self.field, tuple(Fraction(int(v), self.den) for v in row))

    def evaluate(self, z: Sequence[int]) -> FieldElement:
        out = self.const
        for c, v in zip(self.coeffs, z):
            if v:
                out = out + c * int(v)
        return out

    def approx(self, z: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(values, absolute error bounds, exact coordinates)."""
        x = self.coordinates(z)
        xf = x.astype(float)
        pw = self.field.float_powers()
        vals = xf @ pw / self.den
        mag = np.abs(xf) @ np.abs(pw) / self.den
        err = mag * self._REL + 1e-300
        return vals, err, x

    def signs(self, z: np.ndarray) -> np.ndarray:
        vals, err, x = self.approx(z)
        out = np.sign(vals).astype(np.int8)
        bad = np.nonzero(np.abs(vals) <= err)[0]
        for i in bad:
            out[i] = sign(self.element_from_coords(x[i]))
        return out

    def floors(self, z: np.ndarray) -> np.ndarray:
        vals, err, x = self.approx(z)
        lo = np.floor(vals - err)
        hi = np.floor(vals + err)
        out = lo.astype(np.int64)
        for i in np.nonzero(lo != hi)[0]:
            out[i] = floor_frac(self.element_from_coords(x[i]))[0]
        return out
