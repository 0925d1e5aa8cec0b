"""Patch class areas for canonical windows in a planar internal space.

For a center with internal point w, the point over n0 + delta with lift
m0 + mu is accepted iff w + t lies in the window W, where
t = mu - L(delta).  The class of w is therefore the set of translates
W - t containing it, and the class region is

    H \\ union of the non-member translates,  H = intersection of member translates,

whose area over area(W) is the class frequency.  Classes are discovered
along horizontal scanlines, with a random 64-bit key per translate so that
a class signature is the XOR of its members' keys.  Areas are then computed
in floating point with shapely for the rarest classes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import shapely
from shapely.geometry import Polygon

from .errors import InvalidScheme
from .exact_reals import AffineForm
from .scheme import Scheme, box_points
from .zonotope import dot


@dataclass
class TranslateSet:
    """All translates W - t (t = mu - L(delta), |delta|_inf <= r) meeting W."""

    delta: np.ndarray
    mu: np.ndarray
    t: np.ndarray           # float (N, 2)
    bl: np.ndarray          # lo_k - nu_k . t, float (N, K), from exact coordinates
    bu: np.ndarray          # hi_k - nu_k . t
    keys: np.ndarray        # uint64
    normals: np.ndarray     # float (K, 2)
    lower: np.ndarray
    upper: np.ndarray
    vertices: np.ndarray    # float vertices of W
    area: float
    origin: int             # index of t = 0, the window itself


def translate_set(scheme: Scheme, r: int, seed: int = 0, chunk: int = 4096) -> TranslateSet:
    if scheme.q != 2:
        raise InvalidScheme("class areas need a planar internal space")
    K = scheme.field
    Z = scheme.zonotope
    d, q = scheme.d, scheme.q
    neg = [AffineForm(K, 0, [-a for a in scheme.forms[i]]) for i in range(q)]
    ext = [(float(lo - hi), float(hi - lo)) for lo, hi in Z.extents]
    widths = [int(np.ceil(ext[i][1] - ext[i][0])) + 2 for i in range(q)]
    steps = np.stack(np.meshgrid(*[np.arange(w) for w in widths], indexing="ij"), axis=-1).reshape(-1, q)
    # equal exact bounds must give equal floats, so each bound is evaluated
    # from its own exact coordinates
    bound_forms = []
    for nu, lo_e, hi_e in zip(Z.normals, Z.lower, Z.upper):
        coeffs = [-dot(nu, [-scheme.forms[i][j] for i in range(q)], K) for j in range(d)]
        coeffs += [-c for c in nu]
        bound_forms.append((AffineForm(K, lo_e, coeffs), AffineForm(K, hi_e, coeffs)))
    nuf, lo, hi = Z.float_halfspaces()
    parts = []
    deltas = box_points(r, d)
    for a in range(0, len(deltas), chunk):
        dl = deltas[a:a + chunk]
        shift = np.stack([f.approx(dl)[0] for f in neg], axis=1)
        bases = np.floor(np.array([e[0] for e in ext]) - shift).astype(np.int64)
        dd = np.repeat(dl, len(steps), axis=0)
        mm = np.repeat(bases, len(steps), axis=0) + np.tile(steps, (len(dl), 1))
        z = np.hstack([dd, mm])
        bl = np.stack([f.approx(z)[0] for f, _ in bound_forms], axis=1)
        bu = np.stack([g.approx(z)[0] for _, g in bound_forms], axis=1)
        keep = np.all((bl < hi) & (bu > lo), axis=1)
        parts.append((dd[keep], mm[keep], bl[keep], bu[keep]))
    dd = np.concatenate([p[0] for p in parts])
    mm = np.concatenate([p[1] for p in parts])
    bl = np.concatenate([p[2] for p in parts])
    bu = np.concatenate([p[3] for p in parts])
    t = mm + np.stack([f.approx(dd)[0] for f in neg], axis=1)
    rng = np.random.default_rng(seed)
    keys = rng.integers(0, 2 ** 63, size=len(dd), dtype=np.uint64) * np.uint64(2) + np.uint64(1)
    verts = Z.float_vertices_2d()
    area = Polygon(verts).area
    origin = int(np.flatnonzero(~np.any(dd, axis=1) & ~np.any(mm, axis=1))[0])
    return TranslateSet(dd, mm, t, bl, bu, keys, nuf, lo, hi, verts, area, origin)


def _members(ts: TranslateSet, w: np.ndarray) -> np.ndarray:
    v = ts.normals @ w
    return np.all((v >= ts.bl) & (v <= ts.bu), axis=1)


def _clip(poly: np.ndarray, a: np.ndarray, c: float, keep_le: bool) -> np.ndarray:
    """Clip a convex polygon by a.x <= c (or >= c)."""
    if len(poly) == 0:
        return poly
    s = poly @ a - c
    if not keep_le:
        s = -s
    out = []
    n = len(poly)
    for i in range(n):
        p, qv = poly[i], poly[(i + 1) % n]
        sp, sq = s[i], s[(i + 1) % n]
        if sp <= 0:
            out.append(p)
        if (sp < 0 < sq) or (sq < 0 < sp):
            out.append(p + (qv - p) * (sp / (sp - sq)))
    return np.array(out) if out else np.zeros((0, 2))


def class_area(ts: TranslateSet, w: np.ndarray) -> tuple[float, int]:
    """Area of the class region of internal point w, and its member count."""
    member = _members(ts, w)
    lo_b = np.max(ts.bl[member], axis=0)
    hi_b = np.min(ts.bu[member], axis=0)
    poly = ts.vertices.copy()
    for k in range(len(ts.normals)):
        poly = _clip(poly, ts.normals[k], lo_b[k], keep_le=False)
        poly = _clip(poly, ts.normals[k], hi_b[k], keep_le=True)
    if len(poly) < 3:
        return 0.0, int(member.sum())
    hv = poly @ ts.normals.T
    h_lo, h_hi = hv.min(axis=0), hv.max(axis=0)
    eps = 1e-13
    hit = (~member) & np.all((ts.bl < h_hi - eps) & (ts.bu > h_lo + eps), axis=1)
    H = Polygon(poly)
    if not hit.any():
        return H.area, int(member.sum())
    shapes = [Polygon(ts.vertices - tv) for tv in ts.t[hit]]
    rest = H.difference(shapely.union_all(shapes))
    return rest.area, int(member.sum())


@dataclass
class ScanResult:
    r: int
    scanlines: int
    translates: int
    min_area: float
    min_frequency: float
    window_area: float
    examined: int
    witness: tuple[float, float] = (0.0, 0.0)
    areas: list[float] = field(default_factory=list)


def _scanline(ts: TranslateSet, y: float):
    """Breakpoints and crossing translates of the line at height y inside W.

    Returns (bounds, keys at each breakpoint, start signature) or None.
    """
    nu = ts.normals
    xl = np.full(len(ts.keys), -np.inf)
    xr = np.full(len(ts.keys), np.inf)
    ok = np.ones(len(ts.keys), dtype=bool)
    for k in range(len(nu)):
        a, b = nu[k]
        if abs(a) < 1e-15:
            v = b * y
            ok &= (v >= ts.bl[:, k]) & (v <= ts.bu[:, k])
            continue
        p = (ts.bl[:, k] - b * y) / a
        q = (ts.bu[:, k] - b * y) / a
        xl = np.maximum(xl, np.minimum(p, q))
        xr = np.minimum(xr, np.maximum(p, q))
    ok &= xr > xl
    if not ok[ts.origin]:
        return None
    wl, wr = xl[ts.origin], xr[ts.origin]
    idx = np.nonzero(ok)[0]
    l, rr, kk = xl[idx], xr[idx], ts.keys[idx]
    inside0 = (l <= wl) & (rr > wl)
    start = np.bitwise_xor.reduce(kk[inside0]) if inside0.any() else np.uint64(0)
    lm, rm = (l > wl) & (l < wr), (rr > wl) & (rr < wr)
    ev_x = np.concatenate([l[lm], rr[rm]])
    ev_k = np.concatenate([kk[lm], kk[rm]])
    order = np.argsort(ev_x, kind="stable")
    bounds = np.concatenate([[wl], ev_x[order], [wr]])
    return bounds, ev_k[order], start


def _heights(ts: TranslateSet, scanlines: int, seed: int) -> tuple[np.ndarray, float]:
    ys = ts.vertices[:, 1]
    ymin, ymax = ys.min(), ys.max()
    dy = (ymax - ymin) / scanlines
    rng = np.random.default_rng(seed + 1)
    return ymin + (np.arange(scanlines) + rng.random(scanlines)) * dy, dy


def scan_classes(ts: TranslateSet, scanlines: int, seed: int = 0):
    """Class signatures along horizontal scanlines (for small patch sizes).

    Returns (signatures, estimated areas, representative points); memory
    grows with the total number of scanline intervals.
    """
    heights, dy = _heights(ts, scanlines, seed)
    sig_parts, len_parts, x_parts, y_parts = [], [], [], []
    for y in heights:
        line = _scanline(ts, y)
        if line is None:
            continue
        bounds, ev_k, start = line
        sigs = np.bitwise_xor.accumulate(np.concatenate([[start], ev_k]))
        lengths = np.diff(bounds)
        good = lengths > 0
        sig_parts.append(sigs[good])
        len_parts.append(lengths[good])
        x_parts.append(((bounds[:-1] + bounds[1:]) / 2)[good])
        y_parts.append(np.full(int(good.sum()), y))
    sig = np.concatenate(sig_parts)
    length = np.concatenate(len_parts)
    xs = np.concatenate(x_parts)
    yv = np.concatenate(y_parts)
    uniq, inv = np.unique(sig, return_inverse=True)
    est = np.bincount(inv, weights=length) * dy
    # representative: midpoint of the longest interval of each class
    order = np.lexsort((-length, inv))
    firsts = order[np.concatenate([[True], np.diff(inv[order]) != 0])]
    reps = np.stack([xs[firsts], yv[firsts]], axis=1)
    return uniq, est, reps


def scan_candidates(ts: TranslateSet, scanlines: int, per_line: int, seed: int = 0) -> np.ndarray:
    """Midpoints of the shortest scanline intervals: points in thin classes."""
    heights, _ = _heights(ts, scanlines, seed)
    pts = []
    for y in heights:
        line = _scanline(ts, y)
        if line is None:
            continue
        bounds = line[0]
        lengths = np.diff(bounds)
        good = np.nonzero(lengths > 0)[0]
        pick = good[np.argsort(lengths[good], kind="stable")[:per_line]]
        for i in pick:
            pts.append(((bounds[i] + bounds[i + 1]) / 2, y))
    return np.array(pts)


def min_class_frequency(scheme: Scheme, r: int, scanlines: int = 60, per_line: int = 8,
                        seed: int = 0) -> ScanResult:
    """Smallest class frequency found at patch size r (planar canonical windows).

    Candidate points sit in the thinnest scanline intervals; each candidate's
    class area is computed in full, so the result bounds the true minimum
    from above.
    """
    ts = translate_set(scheme, r, seed)
    cands = scan_candidates(ts, scanlines, per_line, seed)
    best, best_w, areas = np.inf, (0.0, 0.0), []
    for w in cands:
        a, _ = class_area(ts, w)
        areas.append(a)
        if 0 < a < best:
            best, best_w = a, (float(w[0]), float(w[1]))
    return ScanResult(r, scanlines, len(ts.keys), best, best / ts.area, ts.area, len(cands), best_w, areas)
