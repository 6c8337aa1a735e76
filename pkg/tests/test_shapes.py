"""Contour classification and drawing-scale recovery tests.

Shapes are rendered with the independent test rasterizer in oracles.py,
never with the package's own synthetic renderer, so classification is
checked against drawings the code has not seen.
"""

import math

import numpy as np
import pytest

import oracles
from orthocad import geometry
from orthocad.errors import EmptyDrawingError
from orthocad.raster import GrayImage, threshold_inv
from orthocad.shapes import (
    DEFAULT_SQUARE_BAND,
    STRICT_SQUARE_BAND,
    DimensionRatio,
    ShapeClass,
    detect_shape,
    dimensioning,
)


def largest_outer(img):
    cs = geometry.find_contours(threshold_inv(GrayImage(img)))
    outers = [c for c in cs if not c.is_hole]
    assert outers, "test drawing produced no outer contour"
    return geometry.sort_by_area_desc(outers)[0]


def render_ngon(n, r, rot=0.0, canvas=256, stroke=1):
    poly = oracles.regular_ngon(n, canvas / 2, canvas / 2, r, rot)
    return oracles.rasterize_outline(poly, (canvas, canvas), stroke)


def render_rect(w, h, rot=0.0, canvas=320, stroke=1):
    cx = cy = canvas / 2
    th = math.radians(rot)
    c, s = math.cos(th), math.sin(th)
    half = np.array([[-w / 2, -h / 2], [w / 2, -h / 2],
                     [w / 2, h / 2], [-w / 2, h / 2]])
    rotm = np.array([[c, -s], [s, c]])
    poly = half @ rotm.T + (cx, cy)
    return oracles.rasterize_outline(poly, (canvas, canvas), stroke)


# ---------------------------------------------------------------------------
# classification


@pytest.mark.parametrize("rot", [0.0, 20.0, 45.0, 70.0])
@pytest.mark.parametrize("r", [45.0, 90.0])
@pytest.mark.parametrize("n,expected", [
    (3, ShapeClass.TRIANGLE),
    (5, ShapeClass.PENTAGON),
    (6, ShapeClass.HEXAGON),
])
def test_regular_polygon_classes(n, expected, r, rot):
    cls, approx = detect_shape(largest_outer(render_ngon(n, r, rot)))
    assert cls is expected
    assert len(approx) == n


@pytest.mark.parametrize("rot", [0.0, 15.0, 30.0])
@pytest.mark.parametrize("side", [80.0, 150.0])
def test_square_classification(side, rot):
    cls, approx = detect_shape(largest_outer(render_rect(side, side, rot)))
    assert cls is ShapeClass.SQUARE
    assert len(approx) == 4


@pytest.mark.parametrize("rot", [0.0, 25.0])
@pytest.mark.parametrize("w,h", [(160.0, 80.0), (120.0, 60.0), (200.0, 40.0)])
def test_rectangle_classification(w, h, rot):
    cls, approx = detect_shape(largest_outer(render_rect(w, h, rot)))
    assert cls is ShapeClass.RECTANGLE
    assert len(approx) == 4


@pytest.mark.parametrize("r", [30.0, 60.0, 110.0])
def test_circle_classification(r):
    img = oracles.rasterize_outline(("circle", 128, 128, r), (256, 256))
    cls, approx = detect_shape(largest_outer(img))
    assert cls is ShapeClass.CIRCLE
    assert len(approx) > 6


def test_scale_invariance_hexagon():
    for r in (35.0, 60.0, 100.0, 150.0):
        canvas = int(2 * r + 40)
        cls, _ = detect_shape(largest_outer(render_ngon(6, r, 10.0, canvas)))
        assert cls is ShapeClass.HEXAGON, f"r={r}"


def test_single_pixel_contour_is_unidentified():
    img = np.full((16, 16), 255, dtype=np.uint8)
    img[8, 8] = 0
    cls, approx = detect_shape(largest_outer(img))
    assert cls is ShapeClass.UNIDENTIFIED


# ---------------------------------------------------------------------------
# square band


def test_near_square_splits_on_band():
    c = largest_outer(render_rect(104.0, 100.0))
    default_cls, _ = detect_shape(c, square_band=DEFAULT_SQUARE_BAND)
    tight_cls, _ = detect_shape(c, square_band=(0.999, 1.001))
    assert default_cls is ShapeClass.SQUARE
    assert tight_cls is ShapeClass.RECTANGLE


def test_strict_band_accepts_exact_square():
    # axis-aligned integer square: the min-area rect sides match exactly
    c = largest_outer(render_rect(100.0, 100.0))
    cls, _ = detect_shape(c, square_band=STRICT_SQUARE_BAND)
    assert cls is ShapeClass.SQUARE


def test_band_is_a_ratio_not_a_difference():
    # 300x280 differs by 20px but the ratio 1.07 falls outside the band
    c = largest_outer(render_rect(300.0, 280.0, canvas=400))
    cls, _ = detect_shape(c)
    assert cls is ShapeClass.RECTANGLE


# ---------------------------------------------------------------------------
# class properties


def test_cylinder_facets():
    assert ShapeClass.TRIANGLE.cylinder_fn == 3
    assert ShapeClass.PENTAGON.cylinder_fn == 5
    assert ShapeClass.HEXAGON.cylinder_fn == 6
    # 0 marks a smooth profile (and the cube classes, where it is unused)
    assert ShapeClass.CIRCLE.cylinder_fn == 0
    assert ShapeClass.SQUARE.cylinder_fn == 0
    assert ShapeClass.RECTANGLE.cylinder_fn == 0


def test_round_classes():
    round_set = {c for c in ShapeClass if c.is_round}
    assert round_set == {ShapeClass.TRIANGLE, ShapeClass.PENTAGON,
                         ShapeClass.HEXAGON, ShapeClass.CIRCLE}


# ---------------------------------------------------------------------------
# scale recovery


def test_dimension_ratio_validation():
    with pytest.raises(ValueError):
        DimensionRatio(0.0, "front")
    with pytest.raises(ValueError):
        DimensionRatio(-1.0, "front")
    with pytest.raises(ValueError):
        DimensionRatio(float("inf"), "front")
    with pytest.raises(ValueError):
        DimensionRatio(float("nan"), "front")
    r = DimensionRatio(0.5, "top")
    assert r.units_per_pixel == 0.5
    assert r.view == "top"


def test_dimensioning_axis_aligned():
    img = GrayImage(render_rect(200.0, 100.0))
    ratio, annotated = dimensioning(img, 4.0, view="front")
    assert ratio.view == "front"
    assert math.isclose(ratio.units_per_pixel, 4.0 / 200.0, rel_tol=0.01)
    assert annotated.shape == (*img.data.shape, 3)


def test_dimensioning_rotated_outline():
    img = GrayImage(render_rect(200.0, 100.0, rot=30.0))
    ratio, _ = dimensioning(img, 10.0)
    assert math.isclose(ratio.units_per_pixel, 10.0 / 200.0, rel_tol=0.02)


def test_dimensioning_uses_largest_outline():
    base = render_rect(200.0, 100.0, canvas=400)
    small = oracles.rasterize_outline(("circle", 40, 40, 20), (400, 400))
    img = GrayImage(np.minimum(base, small))
    ratio, _ = dimensioning(img, 4.0)
    assert math.isclose(ratio.units_per_pixel, 4.0 / 200.0, rel_tol=0.01)


def test_dimensioning_annotation_marks_side():
    img = GrayImage(render_rect(200.0, 100.0))
    _, annotated = dimensioning(img, 4.0)
    green = (annotated == np.array([0, 200, 0])).all(axis=2)
    red = (annotated == np.array([255, 0, 0])).all(axis=2)
    assert green.sum() > 100
    # the highlighted side is the long one
    ys, xs = np.nonzero(red)
    assert xs.max() - xs.min() > 150
    assert ys.max() - ys.min() < 5


def test_dimensioning_rejects_blank_view():
    img = GrayImage(np.full((64, 64), 255, dtype=np.uint8))
    with pytest.raises(EmptyDrawingError):
        dimensioning(img, 1.0)


def test_dimensioning_rejects_bad_length():
    img = GrayImage(render_rect(100.0, 50.0))
    with pytest.raises(ValueError):
        dimensioning(img, 0.0)
    with pytest.raises(ValueError):
        dimensioning(img, -2.0)
