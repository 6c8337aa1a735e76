"""orthocad: rebuild 3D CSG models from three orthographic drawing rasters.

The pipeline runs front/side/top raster drawings through contour
extraction, shape classification, and three-view assembly to produce an
OpenSCAD source file and, optionally, a sampled surface point cloud (PLY).
"""

__version__ = "0.1.0"

from .errors import (
    PipelineError,
    EmptyDrawingError,
    DegenerateContourError,
    AssemblyError,
    AssemblyMismatchError,
    MissingDepthError,
    RenderError,
    EmptyCloudError,
)
from .raster import GrayImage, BinaryImage, load_gray, save_gray, threshold_inv, draw_annotation
from .geometry import (
    Contour,
    Moments,
    RotatedRect,
    find_contours,
    moments,
    centroid,
    bounding_rect,
    min_area_rect,
    point_polygon_test,
    arc_length,
    contour_area,
    approx_poly_dp,
    sort_by_area_desc,
)
from .shapes import ShapeClass, DimensionRatio, detect_shape, dimensioning
