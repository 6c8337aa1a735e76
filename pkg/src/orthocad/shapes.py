"""Contour classification and drawing-scale recovery.

A closed contour is simplified with Douglas-Peucker at 1.5% of its
perimeter and classified by vertex count: 3 = triangle, 4 = square or
rectangle (split on the rotated-rect aspect ratio), 5 = pentagon,
6 = hexagon, anything rounder = circle. The regular polygons and the
circle all extrude to OpenSCAD ``cylinder`` primitives, so each class
carries the facet count used there.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import geometry
from .errors import EmptyDrawingError
from .raster import GrayImage, threshold_inv, to_rgb, draw_polyline
from .geometry import Contour, RotatedRect

# Fraction of the closed perimeter used as the simplification tolerance.
APPROX_EPS_FACTOR = 0.015

# Aspect-ratio band (length/breadth) inside which a quadrilateral counts
# as a square. The strict band (0.999, 1.001) only ever fires on perfect
# axis-aligned squares; the default absorbs rasterization jitter.
DEFAULT_SQUARE_BAND = (0.95, 1.05)
STRICT_SQUARE_BAND = (0.999, 1.001)


class ShapeClass(enum.Enum):
    TRIANGLE = "triangle"
    SQUARE = "square"
    RECTANGLE = "rectangle"
    PENTAGON = "pentagon"
    HEXAGON = "hexagon"
    CIRCLE = "circle"
    UNIDENTIFIED = "unidentified"

    @property
    def cylinder_fn(self) -> int:
        """Facet count when extruded as a cylinder; 0 means smooth.

        Only meaningful for round classes; the quadrilaterals extrude to
        cubes and report 0 as well.
        """
        return _CYLINDER_FN[self]

    @property
    def is_round(self) -> bool:
        """True for classes that extrude to cylinders rather than cubes."""
        return self in (ShapeClass.TRIANGLE, ShapeClass.PENTAGON,
                        ShapeClass.HEXAGON, ShapeClass.CIRCLE)


_CYLINDER_FN = {
    ShapeClass.TRIANGLE: 3,
    ShapeClass.SQUARE: 0,
    ShapeClass.RECTANGLE: 0,
    ShapeClass.PENTAGON: 5,
    ShapeClass.HEXAGON: 6,
    ShapeClass.CIRCLE: 0,
    ShapeClass.UNIDENTIFIED: 0,
}


def detect_shape(c: Contour, square_band=DEFAULT_SQUARE_BAND):
    """Classify a contour; returns (ShapeClass, simplified vertices).

    The square/rectangle split uses the minimum-area rectangle of the full
    contour, not of the simplified polygon, so corner clipping by the
    simplification cannot skew the aspect ratio.
    """
    peri = geometry.arc_length(c, closed=True)
    approx = geometry.approx_poly_dp(c, APPROX_EPS_FACTOR * peri, closed=True)
    n = len(approx)
    if n < 3:
        return ShapeClass.UNIDENTIFIED, approx
    if n == 3:
        return ShapeClass.TRIANGLE, approx
    if n == 4:
        rect = geometry.min_area_rect(c)
        if rect.size[1] <= 0:
            return ShapeClass.UNIDENTIFIED, approx
        ar = rect.size[0] / rect.size[1]
        lo, hi = square_band
        cls = ShapeClass.SQUARE if lo <= ar <= hi else ShapeClass.RECTANGLE
        return cls, approx
    if n == 5:
        return ShapeClass.PENTAGON, approx
    if n == 6:
        return ShapeClass.HEXAGON, approx
    return ShapeClass.CIRCLE, approx


@dataclass(frozen=True)
class DimensionRatio:
    """Model units per pixel for one view."""

    units_per_pixel: float
    view: str

    def __post_init__(self):
        if not (self.units_per_pixel > 0 and np.isfinite(self.units_per_pixel)):
            raise ValueError(f"units_per_pixel must be positive and finite, "
                             f"got {self.units_per_pixel}")


def dimensioning(img: GrayImage, user_length: float, view: str = "front",
                 thresh: int = 127):
    """Recover the drawing scale from one known dimension.

    ``user_length`` is the real length of the longest side of the largest
    outline in the view. The ratio divides it by that side's pixel length,
    measured on the minimum-area rectangle of the largest outer contour.

    Returns (DimensionRatio, annotated RGB image); the annotation shows the
    measured contour and highlights the side the scale was taken from.
    """
    if user_length <= 0:
        raise ValueError(f"user_length must be positive, got {user_length}")
    binary = threshold_inv(img, thresh)
    outers = [c for c in geometry.find_contours(binary) if not c.is_hole]
    outers = [c for c in outers if geometry.contour_area(c) > 0]
    if not outers:
        raise EmptyDrawingError(f"no closed outline found in {view} view")
    largest = geometry.sort_by_area_desc(outers)[0]
    rect = geometry.min_area_rect(largest)
    length_px = rect.size[0]
    if length_px <= 0:
        raise EmptyDrawingError(f"degenerate outline in {view} view")
    ratio = DimensionRatio(user_length / length_px, view)

    annotated = to_rgb(img)
    draw_polyline(annotated, largest.points, (0, 200, 0), closed=True)
    corners = np.rint(rect.corners()).astype(int)
    # corners() orders points so edges 0-1 and 2-3 are the length sides
    draw_polyline(annotated, [corners[0], corners[1]], (255, 0, 0), closed=False)
    return ratio, annotated
