"""Solid primitives shared by the assembler, emitters and samplers.

A reconstructed model is an ordered list of :class:`SolidNode`. Each node
is a centered cube or a centered z-axis cylinder (optionally faceted into
a regular prism) under a rotate-then-translate placement, combined with
the running result through its ``op``: ``"none"`` starts a new solid,
``"union"`` adds to it, ``"difference"`` subtracts from it. This mirrors
how the OpenSCAD output is structured, so every consumer agrees on the
geometry without re-deriving it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

OPS = ("none", "union", "difference")


@dataclass(frozen=True)
class SolidNode:
    """One primitive with placement and boolean role.

    ``kind`` is "cube" or "cylinder". Cubes use ``size``; cylinders use
    ``h``/``r`` plus ``fn`` (0 = smooth, otherwise the regular-prism facet
    count with a vertex on the local +x axis, matching OpenSCAD). Rotation
    angles are degrees applied in OpenSCAD order: x, then y, then z.
    ``through_axis`` marks the local axis along which a subtracted node is
    known to pass fully through its host; samplers may elongate it there
    to keep the cut faces open.
    """

    kind: str
    size: tuple[float, float, float] = (1.0, 1.0, 1.0)
    h: float = 1.0
    r: float = 0.5
    fn: int = 0
    translate: tuple[float, float, float] = (0.0, 0.0, 0.0)
    rotate: tuple[float, float, float] = (0.0, 0.0, 0.0)
    op: str = "none"
    through_axis: int | None = None

    def __post_init__(self):
        if self.kind not in ("cube", "cylinder"):
            raise ValueError(f"unknown primitive kind {self.kind!r}")
        if self.op not in OPS:
            raise ValueError(f"unknown op {self.op!r}")
        if self.kind == "cube" and any(s <= 0 for s in self.size):
            raise ValueError(f"cube sides must be positive, got {self.size}")
        if self.kind == "cylinder" and (self.h <= 0 or self.r <= 0):
            raise ValueError(f"cylinder h and r must be positive, "
                             f"got h={self.h} r={self.r}")
        if self.fn < 0 or self.fn in (1, 2):
            raise ValueError(f"fn must be 0 or >= 3, got {self.fn}")


def cube(sx: float, sy: float, sz: float, translate=(0.0, 0.0, 0.0),
         rotate=(0.0, 0.0, 0.0), op: str = "none",
         through_axis: int | None = None) -> SolidNode:
    return SolidNode("cube", size=(float(sx), float(sy), float(sz)),
                     translate=tuple(map(float, translate)),
                     rotate=tuple(map(float, rotate)), op=op,
                     through_axis=through_axis)


def cylinder(h: float, r: float, fn: int = 0, translate=(0.0, 0.0, 0.0),
             rotate=(0.0, 0.0, 0.0), op: str = "none",
             through_axis: int | None = None) -> SolidNode:
    return SolidNode("cylinder", h=float(h), r=float(r), fn=int(fn),
                     translate=tuple(map(float, translate)),
                     rotate=tuple(map(float, rotate)), op=op,
                     through_axis=through_axis)


def rotation_matrix(rx: float, ry: float, rz: float) -> np.ndarray:
    """World-from-local rotation, OpenSCAD order (Rz @ Ry @ Rx)."""
    ax, ay, az = (math.radians(a) for a in (rx, ry, rz))
    cx, sx = math.cos(ax), math.sin(ax)
    cy, sy = math.cos(ay), math.sin(ay)
    cz, sz = math.cos(az), math.sin(az)
    rxm = np.array([[1, 0, 0], [0, cx, -sx], [0, sx, cx]])
    rym = np.array([[cy, 0, sy], [0, 1, 0], [-sy, 0, cy]])
    rzm = np.array([[cz, -sz, 0], [sz, cz, 0], [0, 0, 1]])
    return rzm @ rym @ rxm


def local_corners(node: SolidNode) -> np.ndarray:
    """Corner vertices in the node's local frame, (N, 3).

    Cubes return their 8 corners. Faceted cylinders return both end
    polygons (2 * fn points, first vertex on +x). Smooth cylinders are
    approximated by 64-gon end rings, good enough for silhouette hulls
    and bounding boxes.
    """
    if node.kind == "cube":
        sx, sy, sz = node.size
        return np.array([(x, y, z)
                         for x in (-sx / 2, sx / 2)
                         for y in (-sy / 2, sy / 2)
                         for z in (-sz / 2, sz / 2)])
    n = node.fn if node.fn >= 3 else 64
    ang = 2.0 * np.pi * np.arange(n) / n
    ring = np.column_stack([node.r * np.cos(ang), node.r * np.sin(ang)])
    top = np.column_stack([ring, np.full(n, node.h / 2)])
    bot = np.column_stack([ring, np.full(n, -node.h / 2)])
    return np.concatenate([top, bot], axis=0)


def world_corners(node: SolidNode) -> np.ndarray:
    rot = rotation_matrix(*node.rotate)
    return local_corners(node) @ rot.T + np.asarray(node.translate)


def node_bounds(node: SolidNode) -> tuple[np.ndarray, np.ndarray]:
    pts = world_corners(node)
    return pts.min(axis=0), pts.max(axis=0)


def model_bounds(nodes) -> tuple[np.ndarray, np.ndarray]:
    """Axis-aligned bounds of the additive solids (subtractions ignored)."""
    solids = [n for n in nodes if n.op != "difference"]
    if not solids:
        raise ValueError("model has no additive solid")
    lo = np.full(3, np.inf)
    hi = np.full(3, -np.inf)
    for n in solids:
        a, b = node_bounds(n)
        lo = np.minimum(lo, a)
        hi = np.maximum(hi, b)
    return lo, hi


def with_op(node: SolidNode, op: str) -> SolidNode:
    return replace(node, op=op)
