"""Synthetic three-view engineering drawings from known solid models.

Renders front, side and top orthographic views of a :class:`SolidNode`
list onto white canvases with dark outlines, the inverse of what the
reconstruction pipeline consumes. Solids draw their silhouette in every
view; subtracted features draw only in the view that looks straight down
their axis, mirroring drawings in which hidden edges are left out.

View conventions (image v grows down):
  front  u = +x, v = -z
  side   u = +y, v = -z
  top    u = +x, v = +y
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import geometry
from .model import SolidNode, cube, cylinder, rotation_matrix, world_corners
from .raster import GrayImage, line_pixels, save_gray

VIEWS = ("front", "side", "top")

# model axis seen head-on in each view (the projection direction)
_DEPTH_AXIS = {"front": 1, "side": 0, "top": 2}

_AXIS_LETTER = {0: "x", 1: "y", 2: "z"}


@dataclass(frozen=True)
class RenderSpec:
    """Canvas geometry: pixels per model unit, canvas size, stroke width."""

    ppu: float = 100.0
    canvas: int = 512
    stroke: int = 2

    def __post_init__(self):
        if self.ppu <= 0 or self.canvas < 16 or self.stroke < 1:
            raise ValueError("bad render spec")


def project(pts3: np.ndarray, view: str) -> np.ndarray:
    """World points (N, 3) to view-plane (u, v) in model units."""
    p = np.asarray(pts3, dtype=float).reshape(-1, 3)
    if view == "front":
        return np.column_stack([p[:, 0], -p[:, 2]])
    if view == "side":
        return np.column_stack([p[:, 1], -p[:, 2]])
    if view == "top":
        return np.column_stack([p[:, 0], p[:, 1]])
    raise ValueError(f"unknown view {view!r}")


def node_axis(node: SolidNode) -> int | None:
    """World axis index a cylinder's axis (or a cube's through axis) maps
    to, or None when it is not axis-aligned within 1 degree."""
    rot = rotation_matrix(*node.rotate)
    if node.kind == "cylinder":
        local = 2
    elif node.through_axis is not None:
        local = node.through_axis
    else:
        return None
    d = rot[:, local]
    k = int(np.argmax(np.abs(d)))
    return k if abs(abs(d[k]) - 1.0) < 1e-4 else None


# ---------------------------------------------------------------------------
# outline geometry per node and view


def _silhouette(node: SolidNode, view: str):
    """("circle", cu, cv, r) or ("polygon", (N, 2) hull) in model units."""
    if node.kind == "cylinder" and node.fn == 0:
        axis = node_axis(node)
        if axis == _DEPTH_AXIS[view]:
            cu, cv = project(np.asarray(node.translate), view)[0]
            return ("circle", cu, cv, node.r)
    hull = geometry.convex_hull(project(world_corners(node), view))
    return ("polygon", hull)


def _outlines(nodes, view: str):
    """Outlines drawn in one view, honoring the hidden-line convention."""
    out = []
    for node in nodes:
        if node.op == "difference":
            axis = node_axis(node)
            if axis is None:
                raise ValueError(
                    "subtracted features must be axis-aligned to render")
            if axis != _DEPTH_AXIS[view]:
                continue
        out.append(_silhouette(node, view))
    return out


def view_dimension(nodes, view: str) -> float:
    """Length of the longest side of the largest outline, model units.

    This is the number a user would supply to calibrate the drawing scale,
    so it must describe the same outline ``dimensioning`` measures.
    """
    best_area = -1.0
    best_len = 0.0
    for kind, *rest in _outlines(nodes, view):
        if kind == "circle":
            _, _, r = rest
            area, length = math.pi * r * r, 2.0 * r
        else:
            hull = rest[0]
            area = abs(geometry.contour_area(hull))
            length = geometry.min_area_rect(hull).size[0]
        if area > best_area:
            best_area, best_len = area, length
    if best_len <= 0:
        raise ValueError(f"nothing to draw in {view} view")
    return best_len


# ---------------------------------------------------------------------------
# rasterization


def _stamp_many(img: np.ndarray, px: np.ndarray, py: np.ndarray, stroke: int):
    h, w = img.shape
    for dy in range(-(stroke // 2), stroke - stroke // 2):
        for dx in range(-(stroke // 2), stroke - stroke // 2):
            xs = px + dx
            ys = py + dy
            ok = (xs >= 0) & (xs < w) & (ys >= 0) & (ys < h)
            img[ys[ok], xs[ok]] = 0


def _draw_polygon(img: np.ndarray, pts_px: np.ndarray, stroke: int):
    n = len(pts_px)
    for i in range(n):
        seg = line_pixels(tuple(pts_px[i]), tuple(pts_px[(i + 1) % n]))
        seg = np.asarray(seg)
        _stamp_many(img, seg[:, 0], seg[:, 1], stroke)


def _circle_points(cx: int, cy: int, r: int) -> np.ndarray:
    """Midpoint circle: all pixels of the 8 symmetric octants."""
    pts = []
    x, y, err = r, 0, 1 - r
    while x >= y:
        pts.extend([(cx + x, cy + y), (cx - x, cy + y), (cx + x, cy - y),
                    (cx - x, cy - y), (cx + y, cy + x), (cx - y, cy + x),
                    (cx + y, cy - x), (cx - y, cy - x)])
        y += 1
        if err < 0:
            err += 2 * y + 1
        else:
            x -= 1
            err += 2 * (y - x) + 1
    return np.array(pts, dtype=np.int64)


def render_view(nodes, view: str, spec: RenderSpec = RenderSpec()) -> GrayImage:
    img = np.full((spec.canvas, spec.canvas), 255, dtype=np.uint8)
    c = spec.canvas / 2.0
    for kind, *rest in _outlines(nodes, view):
        if kind == "circle":
            cu, cv, r = rest
            pts = _circle_points(int(round(c + cu * spec.ppu)),
                                 int(round(c + cv * spec.ppu)),
                                 int(round(r * spec.ppu)))
            _stamp_many(img, pts[:, 0], pts[:, 1], spec.stroke)
        else:
            hull = rest[0]
            px = np.rint(c + hull * spec.ppu).astype(np.int64)
            _draw_polygon(img, px, spec.stroke)
    return GrayImage(img)


def render_views(nodes, spec: RenderSpec = RenderSpec()) -> dict:
    return {v: render_view(nodes, v, spec) for v in VIEWS}


# ---------------------------------------------------------------------------
# fixture models


@dataclass(frozen=True)
class GroundTruthModel:
    name: str
    nodes: tuple
    spec: RenderSpec = RenderSpec()

    def dims(self) -> dict:
        return {v: view_dimension(self.nodes, v) for v in VIEWS}

    def render(self) -> dict:
        return render_views(self.nodes, self.spec)


def _fixture_block() -> GroundTruthModel:
    return GroundTruthModel("block", (cube(2.0, 1.0, 2.0),))


def _fixture_block_hole() -> GroundTruthModel:
    return GroundTruthModel("block_hole", (
        cube(2.0, 1.6, 1.2),
        cylinder(1.2, 0.3, translate=(0.3, -0.2, 0.0), op="difference",
                 through_axis=2),
    ))


def _fixture_block_boss() -> GroundTruthModel:
    # the boss floats 0.02 above the base: touching outlines would merge
    # into one unclassifiable contour in the front and side views
    return GroundTruthModel("block_boss", (
        cube(2.0, 1.6, 1.2),
        cylinder(0.6, 0.4, translate=(0.3, 0.0, 0.92), op="union"),
    ))


def _fixture_prism() -> GroundTruthModel:
    return GroundTruthModel("prism", (cylinder(1.4, 0.8, fn=6),))


_FIXTURES = {
    "block": _fixture_block,
    "block_hole": _fixture_block_hole,
    "block_boss": _fixture_block_boss,
    "prism": _fixture_prism,
}


def fixture(name: str) -> GroundTruthModel:
    try:
        return _FIXTURES[name]()
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; have "
                       f"{sorted(_FIXTURES)}") from None


def fixture_names() -> list[str]:
    return sorted(_FIXTURES)


# ---------------------------------------------------------------------------
# model description files
#
# One primitive per line, '#' comments. Examples:
#   cube 2 1.6 1.2
#   cylinder 0.6 0.4 at 0.3 0 0.92 union
#   cylinder 1.2 0.3 at 0.3 -0.2 0 diff through z
#   cylinder 1.0 0.25 axis y
#   cube 1 1 1 rz 30
# cylinder args are H R; 'fn N' facets it, 'axis x|y|z' orients it,
# 'through ax' marks a through cut ('diff' implied if not given).

_AXIS_ROT = {"x": (0.0, 90.0, 0.0), "y": (90.0, 0.0, 0.0),
             "z": (0.0, 0.0, 0.0)}


def _parse_line(tokens: list[str]) -> SolidNode:
    kind = tokens.pop(0)
    if kind == "cube":
        args = [float(tokens.pop(0)) for _ in range(3)]
    elif kind == "cylinder":
        args = [float(tokens.pop(0)) for _ in range(2)]
    else:
        raise ValueError(f"unknown primitive {kind!r}")

    fn = 0
    at = (0.0, 0.0, 0.0)
    rot = (0.0, 0.0, 0.0)
    op = "none"
    through = None
    while tokens:
        t = tokens.pop(0)
        if t == "fn":
            fn = int(tokens.pop(0))
        elif t == "at":
            at = tuple(float(tokens.pop(0)) for _ in range(3))
        elif t == "axis":
            rot = _AXIS_ROT[tokens.pop(0)]
        elif t == "rz":
            rot = (0.0, 0.0, float(tokens.pop(0)))
        elif t in ("union", "diff", "difference"):
            op = "union" if t == "union" else "difference"
        elif t == "through":
            through = "xyz".index(tokens.pop(0))
            if op == "none":
                op = "difference"
        else:
            raise ValueError(f"unknown token {t!r}")

    if kind == "cube":
        return cube(*args, translate=at, rotate=rot, op=op,
                    through_axis=through)
    if through is not None:
        # a cylinder cuts along its own axis; reorient instead of indexing
        rot = _AXIS_ROT[_AXIS_LETTER[through]]
        through = 2
    return cylinder(args[0], args[1], fn=fn, translate=at, rotate=rot,
                    op=op, through_axis=through)


def load_model(path) -> list[SolidNode]:
    nodes = []
    for ln, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            nodes.append(_parse_line(line.split()))
        except (ValueError, IndexError, KeyError) as e:
            raise ValueError(f"{path}:{ln}: {e}") from e
    if not nodes:
        raise ValueError(f"{path}: no primitives")
    return nodes


# ---------------------------------------------------------------------------
# CLI


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(
        prog="orthocad-synth",
        description="Render three-view drawings from a known solid model.")
    src = ap.add_mutually_exclusive_group(required=True)
    src.add_argument("--fixture", choices=fixture_names(),
                     help="built-in demonstration model")
    src.add_argument("--model", type=Path,
                     help="model description file (one primitive per line)")
    ap.add_argument("--out-dir", type=Path, required=True)
    ap.add_argument("--ppu", type=float, default=100.0,
                    help="pixels per model unit (default 100)")
    ap.add_argument("--canvas", type=int, default=512)
    ap.add_argument("--stroke", type=int, default=2)
    args = ap.parse_args(argv)

    spec = RenderSpec(ppu=args.ppu, canvas=args.canvas, stroke=args.stroke)
    try:
        nodes = fixture(args.fixture).nodes if args.fixture \
            else load_model(args.model)
        views = render_views(nodes, spec)
        dims = {v: view_dimension(nodes, v) for v in VIEWS}
    except (ValueError, KeyError, OSError) as e:
        print(f"ERROR[synth] {e}", file=sys.stderr)
        return 2

    args.out_dir.mkdir(parents=True, exist_ok=True)
    for v, img in views.items():
        save_gray(img, args.out_dir / f"{v}.png")
    meta = {"dims": dims, "ppu": spec.ppu, "canvas": spec.canvas,
            "stroke": spec.stroke}
    (args.out_dir / "dims.json").write_text(json.dumps(meta, indent=2) + "\n")
    print(f"wrote {', '.join(f'{v}.png' for v in VIEWS)} and dims.json "
          f"to {args.out_dir}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
