"""Zonotopes in internal space, in exact facet form."""

from __future__ import annotations

import itertools
from enum import Enum
from typing import Sequence

import numpy as np

from .exact_reals import AffineForm, FieldElement, RealField, sign


class Membership(str, Enum):
    INSIDE = "Inside"
    BOUNDARY = "Boundary"
    OUTSIDE = "Outside"


def det(rows: Sequence[Sequence[FieldElement]], field: RealField) -> FieldElement:
    n = len(rows)
    if n == 0:
        return field.one
    total = field.zero
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for a, b in itertools.combinations(perm, 2) if a > b)
        term = field.one
        for i, p in enumerate(perm):
            term = term * rows[i][p]
            if term.is_zero():
                break
        if not term.is_zero():
            total = total - term if inv % 2 else total + term
    return total


def _normal(vectors: Sequence[Sequence[FieldElement]], q: int, field: RealField) -> tuple[FieldElement, ...]:
    """Generalized cross product of q-1 vectors in dimension q."""
    out = []
    for i in range(q):
        minor = [[v[j] for j in range(q) if j != i] for v in vectors]
        c = det(minor, field)
        out.append(-c if i % 2 else c)
    return tuple(out)


def dot(u: Sequence[FieldElement], v: Sequence[FieldElement], field: RealField) -> FieldElement:
    out = field.zero
    for a, b in zip(u, v):
        if not a.is_zero() and not b.is_zero():
            out = out + a * b
    return out


class Zonotope:
    """{sum_j c_j g_j : 0 <= c_j <= 1} for generators g_j in R^q.

    Facet normals come from (q-1)-subsets of the generators; the bounds of a
    normal are the sums of the negative and positive parts of its pairings
    with the generators.
    """

    def __init__(self, generators: Sequence[Sequence[FieldElement]], field: RealField):
        self.field = field
        self.generators = tuple(tuple(g) for g in generators)
        self.q = len(self.generators[0])
        q = self.q
        normals: list[tuple[FieldElement, ...]] = []
        seen = set()
        if q == 1:
            cands = [(field.one,)]
        else:
            cands = [_normal(sub, q, field) for sub in itertools.combinations(self.generators, q - 1)]
        for nu in cands:
            lead = next((c for c in nu if not c.is_zero()), None)
            if lead is None:
                continue
            nu = tuple(c / lead for c in nu)
            if nu in seen:
                continue
            seen.add(nu)
            normals.append(nu)
        self.normals = tuple(normals)
        lower, upper = [], []
        for nu in self.normals:
            lo, hi = field.zero, field.zero
            for g in self.generators:
                v = dot(nu, g, field)
                s = sign(v)
                if s > 0:
                    hi = hi + v
                elif s < 0:
                    lo = lo + v
            lower.append(lo)
            upper.append(hi)
        self.lower = tuple(lower)
        self.upper = tuple(upper)
        ext = []
        for i in range(q):
            lo, hi = field.zero, field.zero
            for g in self.generators:
                s = sign(g[i])
                if s > 0:
                    hi = hi + g[i]
                elif s < 0:
                    lo = lo + g[i]
            ext.append((lo, hi))
        self.extents = tuple(ext)

    def membership(self, w: Sequence[FieldElement]) -> Membership:
        on_face = False
        for nu, lo, hi in zip(self.normals, self.lower, self.upper):
            v = dot(nu, w, self.field)
            a, b = sign(v - lo), sign(hi - v)
            if a < 0 or b < 0:
                return Membership.OUTSIDE
            if a == 0 or b == 0:
                on_face = True
        return Membership.BOUNDARY if on_face else Membership.INSIDE

    def support_point(self, direction: Sequence[FieldElement]) -> tuple[FieldElement, ...]:
        """The point maximizing <direction, .>; a vertex for generic directions."""
        out = [self.field.zero] * self.q
        for g in self.generators:
            if sign(dot(direction, g, self.field)) > 0:
                out = [a + b for a, b in zip(out, g)]
        return tuple(out)

    def center(self) -> tuple[FieldElement, ...]:
        half = self.field.rational(1) / 2
        out = [self.field.zero] * self.q
        for g in self.generators:
            out = [a + b * half for a, b in zip(out, g)]
        return tuple(out)

    def float_halfspaces(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(normals, lower, upper) as floats."""
        nu = np.array([[float(c) for c in n] for n in self.normals])
        return nu, np.array([float(v) for v in self.lower]), np.array([float(v) for v in self.upper])

    def float_vertices_2d(self) -> np.ndarray:
        """Vertices in counterclockwise order (q = 2 only)."""
        if self.q != 2:
            raise ValueError("planar zonotopes only")
        g = np.array([[float(c) for c in v] for v in self.generators])
        g = g[np.abs(g).sum(axis=1) > 0]
        down = (g[:, 1] < 0) | ((g[:, 1] == 0) & (g[:, 0] < 0))
        # [0, g] = g + [0, -g]: point every generator into the upper half-plane
        start = g[down].sum(axis=0)
        up = np.where(down[:, None], -g, g)
        order = np.argsort(np.arctan2(up[:, 1], up[:, 0]), kind="stable")
        pts = [start]
        for j in order:
            pts.append(pts[-1] + up[j])
        for j in order[:-1]:
            pts.append(pts[-1] - up[j])
        return np.array(pts)

    def membership_forms(self, const: Sequence[FieldElement], coeffs: Sequence[Sequence[FieldElement]]):
        """Bulk membership for points w(z) = const + sum_j z_j coeffs[j] (z integer).

        Returns a function z -> int8 array with 1 Inside, 0 Boundary, -1 Outside.
        """
        field = self.field
        forms = []
        for nu, lo, hi in zip(self.normals, self.lower, self.upper):
            c0 = dot(nu, const, field)
            cs = [dot(nu, c, field) for c in coeffs]
            forms.append(AffineForm(field, c0 - lo, cs))
            forms.append(AffineForm(field, hi - c0, [-c for c in cs]))

        def classify(z: np.ndarray) -> np.ndarray:
            z = np.asarray(z, dtype=np.int64).reshape(-1, len(coeffs))
            out = np.ones(len(z), dtype=np.int8)
            for f in forms:
                s = f.signs(z)
                out = np.minimum(out, s)
            return out

        return classify
