"""Contour extraction and 2-D shape measurements on binary rasters.

This module is the vision kernel of the pipeline and is implemented from
scratch on numpy: border following for contour extraction, region moments,
convex hulls, rotating-caliper minimum-area rectangles, point/polygon
queries, and polyline simplification.

Coordinates are (x, y) with x growing right and y growing down, matching
pixel indexing ``data[y, x]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateContourError
from .raster import BinaryImage, GrayImage

# Neighborhood in clockwise order starting from "east", as (dy, dx).
# Clockwise here is in image coordinates (y down).
_NBR = ((0, 1), (1, 1), (1, 0), (1, -1), (0, -1), (-1, -1), (-1, 0), (-1, 1))
_NBR_INDEX = {d: i for i, d in enumerate(_NBR)}


@dataclass
class Contour:
    """Closed pixel border. ``points`` is (N, 2) int (x, y), trace order.

    Consecutive points are 8-connected neighbors. ``is_hole`` marks borders
    of enclosed background regions. ``parent_id`` names the surrounding
    outer contour's ``id`` in both cases: for a hole that is the component
    it punctures, for an outer contour the component enclosing it (None at
    top level). Outline drawings therefore chain parent rings to the
    nested rings drawn inside them.
    """

    points: np.ndarray
    id: int = 0
    parent_id: int | None = None
    is_hole: bool = False

    def __post_init__(self):
        pts = np.asarray(self.points)
        if pts.ndim != 2 or pts.shape[1] != 2:
            pts = pts.reshape(-1, 2)
        pts = pts.astype(np.int64, copy=True)
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    def __len__(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class Moments:
    m00: float
    m10: float
    m01: float
    m20: float
    m02: float
    m11: float


@dataclass(frozen=True)
class RotatedRect:
    """Minimum-area rectangle.

    ``size`` is (length, breadth) with length >= breadth. ``angle`` is the
    rectangle's orientation folded into [0, 90) degrees; ``axis_angle`` is
    the unfolded direction of the length side in [0, 180), kept so the
    corner geometry stays unambiguous.
    """

    center: tuple[float, float]
    size: tuple[float, float]
    angle: float
    axis_angle: float = 0.0

    def corners(self) -> np.ndarray:
        """The 4 corner points, (4, 2) float."""
        th = math.radians(self.axis_angle)
        u = np.array([math.cos(th), math.sin(th)])
        v = np.array([-math.sin(th), math.cos(th)])
        c = np.asarray(self.center, dtype=float)
        hl, hb = self.size[0] / 2.0, self.size[1] / 2.0
        return np.array([c + u * hl + v * hb, c - u * hl + v * hb,
                         c - u * hl - v * hb, c + u * hl - v * hb])


def _points_of(c) -> np.ndarray:
    """Accept a Contour or bare point array; return (N, 2) float."""
    pts = getattr(c, "points", c)
    pts = np.asarray(pts, dtype=float)
    if pts.ndim == 1:
        pts = pts.reshape(-1, 2)
    return pts


# ---------------------------------------------------------------------------
# Border following
# ---------------------------------------------------------------------------

def _trace_border(f: np.ndarray, i: int, j: int, i2: int, j2: int, nbd: int):
    """Follow one border starting at (i, j); marks ``f`` in place.

    (i2, j2) is the background neighbor that triggered the start. Returns
    the border pixels in trace order (list of (i, j)).
    """
    start_dir = _NBR_INDEX[(i2 - i, j2 - j)]
    i1 = j1 = -1
    for k in range(1, 9):
        d = (start_dir + k) % 8  # clockwise examination
        ni, nj = i + _NBR[d][0], j + _NBR[d][1]
        if f[ni, nj] != 0:
            i1, j1 = ni, nj
            break
    if i1 < 0:
        # isolated pixel: border of a single-pixel component
        f[i, j] = -nbd
        return [(i, j)]

    i2, j2 = i1, j1
    i3, j3 = i, j
    pts = []
    while True:
        cur_dir = _NBR_INDEX[(i2 - i3, j2 - j3)]
        right_zero_seen = False
        i4 = j4 = 0
        for k in range(1, 9):
            d = (cur_dir - k) % 8  # counterclockwise examination
            ni, nj = i3 + _NBR[d][0], j3 + _NBR[d][1]
            if f[ni, nj] != 0:
                i4, j4 = ni, nj
                break
            if ni == i3 and nj == j3 + 1:
                right_zero_seen = True
        if right_zero_seen:
            f[i3, j3] = -nbd
        elif f[i3, j3] == 1:
            f[i3, j3] = nbd
        pts.append((i3, j3))
        if i4 == i and j4 == j and i3 == i1 and j3 == j1:
            return pts
        i2, j2 = i3, j3
        i3, j3 = i4, j4


def find_contours(img: BinaryImage) -> list[Contour]:
    """Extract all borders of the foreground with a two-level hierarchy.

    Foreground components are 8-connected, enclosed background regions
    4-connected. Every component yields one outer contour; every enclosed
    background region yields one hole contour whose ``parent_id`` names the
    surrounding outer contour. Discovery order follows a top-to-bottom,
    left-to-right raster scan, so results are deterministic.
    """
    h, w = img.height, img.width
    # 1-pixel zero frame keeps every neighbor access in bounds.
    f = np.zeros((h + 2, w + 2), dtype=np.int64)
    f[1:-1, 1:-1] = (np.asarray(img.data) != 0).astype(np.int64)

    # Marking flips values between +/-k but never 0 <-> nonzero, so the
    # nonzero membership per row can be precomputed once.
    rows = [np.flatnonzero(f[i]) for i in range(h + 2)]

    # Border bookkeeping; index 1 is the implicit frame (a hole border).
    btype = {1: "hole"}
    parent = {1: None}
    border_pts: dict[int, list] = {}
    nbd = 1

    for i in range(1, h + 1):
        lnbd = 1
        for j in rows[i]:
            v = f[i, j]
            traced = False
            if v == 1 and f[i, j - 1] == 0:
                nbd += 1
                kind = "outer"
                i2, j2 = i, j - 1
                traced = True
            elif v >= 1 and f[i, j + 1] == 0:
                if v > 1:
                    lnbd = v
                nbd += 1
                kind = "hole"
                i2, j2 = i, j + 1
                traced = True
            if traced:
                prev = lnbd
                btype[nbd] = kind
                parent[nbd] = prev if btype[prev] != kind else parent[prev]
                border_pts[nbd] = _trace_border(f, i, j, i2, j2, nbd)
            v = f[i, j]
            if v != 1:
                lnbd = abs(v)

    out: list[Contour] = []
    for b in sorted(border_pts):
        pts = np.array([(p[1] - 1, p[0] - 1) for p in border_pts[b]], dtype=np.int64)
        cid = b - 2
        if btype[b] == "hole":
            par = parent[b]
            pid = None if par is None or par == 1 else par - 2
            out.append(Contour(pts, id=cid, parent_id=pid, is_hole=True))
        else:
            # parent of an outer border is the hole it sits in; the hole's
            # parent is the enclosing outer component, which is what nesting
            # queries care about.
            hole = parent[b]
            gp = None if hole is None or hole == 1 else parent.get(hole)
            pid = None if gp is None or gp == 1 else gp - 2
            out.append(Contour(pts, id=cid, parent_id=pid, is_hole=False))
    return out


# ---------------------------------------------------------------------------
# Region rasterization and moments
# ---------------------------------------------------------------------------

def enclosed_mask(c) -> tuple[np.ndarray, int, int]:
    """Boolean mask of pixels inside-or-on the contour polygon.

    Returns (mask, x0, y0) where mask[y - y0, x - x0] covers the contour's
    bounding box. Interior membership follows the even-odd rule on the
    polygon through the contour points; the points themselves always count.
    """
    pts = np.asarray(getattr(c, "points", c), dtype=np.int64).reshape(-1, 2)
    if len(pts) == 0:
        return np.zeros((0, 0), dtype=bool), 0, 0
    x0, y0 = pts[:, 0].min(), pts[:, 1].min()
    x1, y1 = pts[:, 0].max(), pts[:, 1].max()
    mask = np.zeros((y1 - y0 + 1, x1 - x0 + 1), dtype=bool)

    # Even-odd scanline fill. Every non-horizontal edge spans exactly one
    # scanline interval [ylo, ylo + 1) and crosses it at the lower
    # endpoint's x, because consecutive contour points are 8-neighbors.
    if len(pts) >= 2:
        a = pts
        b = np.roll(pts, -1, axis=0)
        nh = a[:, 1] != b[:, 1]
        lower_is_a = a[:, 1] < b[:, 1]
        ylo = np.where(lower_is_a, a[:, 1], b[:, 1])[nh]
        xlo = np.where(lower_is_a, a[:, 0], b[:, 0])[nh]
        order = np.lexsort((xlo, ylo))
        ylo, xlo = ylo[order], xlo[order]
        i = 0
        n = len(ylo)
        while i < n:
            yv = ylo[i]
            jx = i
            while jx < n and ylo[jx] == yv:
                jx += 1
            xs = xlo[i:jx]
            for k in range(0, len(xs) - 1, 2):
                lo, hi = xs[k], xs[k + 1]
                if hi - lo > 1:
                    mask[yv - y0, lo + 1 - x0:hi - x0] = True
            i = jx

    mask[pts[:, 1] - y0, pts[:, 0] - x0] = True
    return mask, int(x0), int(y0)


def moments(c, img: GrayImage | None = None) -> Moments:
    """Raw moments of the region enclosed by a contour.

    Sums x^p * y^q * I(x, y) over every pixel inside or on the contour.
    Without ``img`` the intensity is 1, which gives pixel-count area and
    the geometric centroid; with ``img`` pixels are weighted by intensity.
    Sums are integer-exact (int64 accumulation).
    """
    mask, x0, y0 = enclosed_mask(c)
    if mask.size == 0 or not mask.any():
        return Moments(0, 0, 0, 0, 0, 0)
    ys, xs = np.nonzero(mask)
    xs = xs.astype(np.int64) + x0
    ys = ys.astype(np.int64) + y0
    if img is None:
        w = np.ones(len(xs), dtype=np.int64)
    else:
        w = np.asarray(img.data, dtype=np.int64)[ys, xs]
    return Moments(
        m00=int(w.sum()),
        m10=int((xs * w).sum()),
        m01=int((ys * w).sum()),
        m20=int((xs * xs * w).sum()),
        m02=int((ys * ys * w).sum()),
        m11=int((xs * ys * w).sum()),
    )


def centroid(m: Moments) -> tuple[float, float]:
    """Center of mass (m10/m00, m01/m00). Sub-pixel precision is kept."""
    if m.m00 == 0:
        raise DegenerateContourError("zero-mass region has no centroid")
    return (m.m10 / m.m00, m.m01 / m.m00)


# ---------------------------------------------------------------------------
# Bounding geometry
# ---------------------------------------------------------------------------

def bounding_rect(c) -> tuple[float, float, float, float]:
    """Axis-aligned bounds as (x, y, w, h) with w/h the coordinate spans."""
    pts = _points_of(c)
    if len(pts) == 0:
        raise ValueError("bounding_rect of an empty point set")
    x0, y0 = pts[:, 0].min(), pts[:, 1].min()
    x1, y1 = pts[:, 0].max(), pts[:, 1].max()
    return (float(x0), float(y0), float(x1 - x0), float(y1 - y0))


def convex_hull(points) -> np.ndarray:
    """Convex hull (monotone chain), counterclockwise in y-down coords.

    Collinear points are dropped; degenerate inputs collapse to 1 or 2
    points.
    """
    pts = np.unique(_points_of(points), axis=0)
    if len(pts) <= 2:
        return pts
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    pts = pts[order]

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper = []
    for p in pts[::-1]:
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = np.array(lower[:-1] + upper[:-1], dtype=float)
    if len(hull) == 0:  # fully collinear: keep the two extremes
        hull = np.array([pts[0], pts[-1]], dtype=float)
    return hull


def min_area_rect(c) -> RotatedRect:
    """Smallest-area enclosing rectangle via rotating calipers.

    One side of the optimum is collinear with a hull edge, so it is enough
    to scan hull-edge directions.
    """
    pts = _points_of(c)
    if len(pts) == 0:
        raise ValueError("min_area_rect of an empty point set")
    hull = convex_hull(pts)
    if len(hull) == 1:
        return RotatedRect((float(hull[0][0]), float(hull[0][1])), (0.0, 0.0), 0.0, 0.0)
    if len(hull) == 2:
        d = hull[1] - hull[0]
        length = float(np.hypot(d[0], d[1]))
        cx, cy = (hull[0] + hull[1]) / 2.0
        axis = math.degrees(math.atan2(d[1], d[0])) % 180.0
        return RotatedRect((float(cx), float(cy)), (length, 0.0), axis % 90.0, axis)

    edges = np.roll(hull, -1, axis=0) - hull
    lens = np.hypot(edges[:, 0], edges[:, 1])
    keep = lens > 1e-12
    dirs = edges[keep] / lens[keep][:, None]
    normals = np.stack([-dirs[:, 1], dirs[:, 0]], axis=1)

    pd = hull @ dirs.T     # (H, E) projections along each edge direction
    pn = hull @ normals.T
    dmin, dmax = pd.min(axis=0), pd.max(axis=0)
    nmin, nmax = pn.min(axis=0), pn.max(axis=0)
    wd = dmax - dmin
    wn = nmax - nmin
    k = int(np.argmin(wd * wn))

    mid_d = (dmin[k] + dmax[k]) / 2.0
    mid_n = (nmin[k] + nmax[k]) / 2.0
    center = dirs[k] * mid_d + normals[k] * mid_n
    if wd[k] >= wn[k]:
        length, breadth = float(wd[k]), float(wn[k])
        axis_vec = dirs[k]
    else:
        length, breadth = float(wn[k]), float(wd[k])
        axis_vec = normals[k]
    axis = math.degrees(math.atan2(axis_vec[1], axis_vec[0])) % 180.0
    return RotatedRect((float(center[0]), float(center[1])),
                       (length, breadth), axis % 90.0, axis)


# ---------------------------------------------------------------------------
# Point/polygon queries
# ---------------------------------------------------------------------------

def point_polygon_test(c, p, signed: bool = True):
    """Locate point(s) relative to a polygon.

    Positive means inside, negative outside, zero exactly on the boundary.
    With ``signed`` the magnitude is the distance to the nearest edge;
    without it only -1/0/+1 is returned. ``p`` may be one (x, y) pair or an
    (N, 2) batch, in which case an array comes back.
    """
    poly = _points_of(c)
    if len(poly) == 0:
        raise ValueError("point_polygon_test against an empty polygon")
    p_arr = np.asarray(p, dtype=float)
    single = p_arr.ndim == 1
    q = p_arr.reshape(-1, 2)

    a = poly
    b = np.roll(poly, -1, axis=0)
    ab = b - a
    ab2 = (ab * ab).sum(axis=1)
    safe = np.where(ab2 > 0, ab2, 1.0)

    # distance: min over segments of point-to-segment distance
    ap = q[:, None, :] - a[None, :, :]          # (N, E, 2)
    t = np.clip((ap * ab[None, :, :]).sum(axis=2) / safe[None, :], 0.0, 1.0)
    closest = a[None, :, :] + t[:, :, None] * ab[None, :, :]
    diff = q[:, None, :] - closest
    dist = np.sqrt((diff * diff).sum(axis=2)).min(axis=1)

    # even-odd crossing parity with the half-open rule
    ay, by = a[:, 1][None, :], b[:, 1][None, :]
    ax, bx = a[:, 0][None, :], b[:, 0][None, :]
    py = q[:, 1][:, None]
    px = q[:, 0][:, None]
    straddle = (ay > py) != (by > py)
    with np.errstate(divide="ignore", invalid="ignore"):
        xint = ax + (py - ay) * (bx - ax) / (by - ay)
    crossing = straddle & (px < xint)
    inside = (crossing.sum(axis=1) % 2) == 1

    sign = np.where(dist == 0.0, 0.0, np.where(inside, 1.0, -1.0))
    res = sign * dist if signed else sign
    return float(res[0]) if single else res


def arc_length(c, closed: bool = True) -> float:
    """Total polyline length; with ``closed`` the wrap-around edge counts."""
    pts = _points_of(c)
    if len(pts) < 2:
        return 0.0
    seg = np.diff(pts, axis=0)
    total = float(np.hypot(seg[:, 0], seg[:, 1]).sum())
    if closed:
        d = pts[0] - pts[-1]
        total += float(np.hypot(d[0], d[1]))
    return total


def contour_area(c) -> float:
    """Absolute shoelace area of the polygon through the points."""
    pts = _points_of(c)
    if len(pts) < 3:
        return 0.0
    x, y = pts[:, 0], pts[:, 1]
    return float(abs(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1))) / 2.0)


def sort_by_area_desc(contours) -> list:
    """Contours largest-first; equal areas keep their original order."""
    return sorted(contours, key=contour_area, reverse=True)


# ---------------------------------------------------------------------------
# Polyline simplification
# ---------------------------------------------------------------------------

def _perp_dist(pts: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    d = b - a
    n2 = float(d @ d)
    diff = pts - a
    if n2 == 0.0:
        return np.hypot(diff[:, 0], diff[:, 1])
    return np.abs(d[0] * diff[:, 1] - d[1] * diff[:, 0]) / math.sqrt(n2)


def _rdp_open(pts: np.ndarray, eps: float) -> list[int]:
    """Indices kept by Douglas-Peucker on an open chain (endpoints stay)."""
    n = len(pts)
    keep = np.zeros(n, dtype=bool)
    keep[0] = keep[-1] = True
    stack = [(0, n - 1)]
    while stack:
        s, e = stack.pop()
        if e - s < 2:
            continue
        seg = pts[s + 1:e]
        d = _perp_dist(seg, pts[s], pts[e])
        k = int(np.argmax(d))
        if d[k] > eps:
            m = s + 1 + k
            keep[m] = True
            stack.append((m, e))
            stack.append((s, m))
    return list(np.flatnonzero(keep))


def _merge_within_eps(pts: np.ndarray, idx: list[int], eps: float,
                      closed: bool) -> list[int]:
    """Drop kept vertices whose whole original arc fits the merged chord.

    On rasterized input the recursive split can land a pixel or two off a
    true corner; the corner pixel is then kept as a second vertex. Removing
    a vertex only when every original point between its neighbors stays
    within ``eps`` of the neighbor chord collapses those doubles without
    weakening the deviation bound.
    """
    n = len(pts)
    floor = 3 if closed else 2
    changed = True
    while changed and len(idx) > floor:
        changed = False
        k = 0
        while k < len(idx) and len(idx) > floor:
            m = len(idx)
            if not closed and (k == 0 or k == m - 1):
                k += 1
                continue
            a, b = idx[(k - 1) % m], idx[(k + 1) % m]
            arc = pts[a:b + 1] if a < b else np.concatenate(
                [pts[a:], pts[:b + 1]], axis=0)
            if _perp_dist(arc, pts[a], pts[b]).max() <= eps:
                del idx[k]
                changed = True
            else:
                k += 1
    return idx


def approx_poly_dp(c, epsilon: float, closed: bool = True) -> np.ndarray:
    """Douglas-Peucker simplification; returns the kept points (M, 2).

    A closed curve is anchored at a farthest-point pair (both anchors are
    hull vertices on convex shapes, i.e. real corners) and the two chains
    between them are simplified independently. A final pass merges away
    vertices whose span fits the tolerance. Every original point stays
    within ``epsilon`` of the simplified polyline.
    """
    if epsilon < 0:
        raise ValueError("epsilon must be >= 0")
    pts = _points_of(c)
    n = len(pts)
    if n <= 2 or epsilon == 0.0:
        return pts.copy()

    if not closed:
        idx = _rdp_open(pts, epsilon)
        return pts[_merge_within_eps(pts, idx, epsilon, closed=False)]

    d0 = pts - pts[0]
    p1 = int(np.argmax((d0 * d0).sum(axis=1)))
    d1 = pts - pts[p1]
    p2 = int(np.argmax((d1 * d1).sum(axis=1)))
    if p1 == p2:
        return pts[[p1]]
    lo, hi = min(p1, p2), max(p1, p2)

    chain_a = pts[lo:hi + 1]
    chain_b = np.concatenate([pts[hi:], pts[:lo + 1]], axis=0)
    ka = _rdp_open(chain_a, epsilon)
    kb = _rdp_open(chain_b, epsilon)
    idx_a = [lo + k for k in ka]
    idx_b = [(hi + k) % n for k in kb]
    # both chains contain the two anchors; drop the duplicated endpoints
    merged = idx_a + idx_b[1:-1]
    return pts[_merge_within_eps(pts, merged, epsilon, closed=True)]
