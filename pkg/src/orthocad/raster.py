"""Grayscale raster handling: decode, threshold, and annotation drawing.

Image files are decoded with Pillow (pure I/O); everything that counts as
image processing here - luma conversion, thresholding, line drawing - is
done directly on numpy arrays so the pipeline has no computer-vision
dependency.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from PIL import Image

# ITU-R BT.601 luma weights for RGB -> gray conversion.
_LUMA = np.array([0.299, 0.587, 0.114])


@dataclass
class GrayImage:
    """Single-channel 8-bit image. ``data`` is (height, width), row-major."""

    data: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.data)
        if arr.ndim != 2:
            raise ValueError(f"expected a 2-D array, got shape {arr.shape}")
        if arr.size == 0:
            raise ValueError("image must have at least one pixel")
        arr = arr.astype(np.uint8, copy=True)
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @property
    def height(self) -> int:
        return self.data.shape[0]


@dataclass
class BinaryImage(GrayImage):
    """Thresholded image whose pixels are either 0 or ``maxval``."""

    maxval: int = 255

    def __post_init__(self):
        super().__post_init__()
        if not (1 <= self.maxval <= 255):
            raise ValueError(f"maxval out of range: {self.maxval}")

    @property
    def mask(self) -> np.ndarray:
        """Boolean foreground mask."""
        return self.data != 0


def load_gray(path) -> GrayImage:
    """Decode an image file and reduce it to 8-bit grayscale.

    Single-channel inputs pass through untouched; color inputs are
    converted with BT.601 luma weights (alpha, if present, is ignored).
    """
    with Image.open(path) as im:
        if im.mode == "L":
            arr = np.asarray(im, dtype=np.uint8)
        elif im.mode in ("1", "I", "I;16", "F", "P", "LA"):
            arr = np.asarray(im.convert("L"), dtype=np.uint8)
        else:
            rgb = np.asarray(im.convert("RGB"), dtype=np.float64)
            arr = np.rint(rgb @ _LUMA).clip(0, 255).astype(np.uint8)
    return GrayImage(arr)


def save_gray(img: GrayImage, path) -> None:
    """Write a grayscale image; the format follows the file extension."""
    Image.fromarray(np.asarray(img.data), mode="L").save(path)


def save_rgb(rgb: np.ndarray, path) -> None:
    """Write an (H, W, 3) uint8 array as a color image."""
    Image.fromarray(np.ascontiguousarray(rgb.astype(np.uint8)), mode="RGB").save(path)


def threshold_inv(img: GrayImage, thresh: int = 127, maxval: int = 255) -> BinaryImage:
    """Inverse binary threshold: pixels <= ``thresh`` become foreground.

    Engineering drawings are dark strokes on light paper, so the inverse
    mapping makes strokes the foreground for contour extraction.
    """
    if not (0 <= thresh <= 255):
        raise ValueError(f"threshold out of range: {thresh}")
    out = np.where(img.data > thresh, 0, maxval).astype(np.uint8)
    return BinaryImage(out, maxval=maxval)


def line_pixels(p0, p1) -> list[tuple[int, int]]:
    """Integer pixels on the segment p0-p1 (Bresenham), endpoints included."""
    x0, y0 = int(p0[0]), int(p0[1])
    x1, y1 = int(p1[0]), int(p1[1])
    dx, dy = abs(x1 - x0), -abs(y1 - y0)
    sx = 1 if x0 < x1 else -1
    sy = 1 if y0 < y1 else -1
    err = dx + dy
    pts = []
    while True:
        pts.append((x0, y0))
        if x0 == x1 and y0 == y1:
            break
        e2 = 2 * err
        if e2 >= dy:
            err += dy
            x0 += sx
        if e2 <= dx:
            err += dx
            y0 += sy
    return pts


def to_rgb(img: GrayImage) -> np.ndarray:
    """Expand a grayscale image to a writable (H, W, 3) array."""
    return np.repeat(np.asarray(img.data)[:, :, None], 3, axis=2).copy()


def draw_polyline(rgb: np.ndarray, points, color, closed: bool = True) -> None:
    """Rasterize segments between consecutive ``points`` into ``rgb`` in place."""
    pts = np.asarray(points)
    if len(pts) == 0:
        return
    h, w = rgb.shape[:2]
    n = len(pts)
    last = n if closed else n - 1
    for i in range(last):
        a = pts[i]
        b = pts[(i + 1) % n]
        for x, y in line_pixels(a, b):
            if 0 <= x < w and 0 <= y < h:
                rgb[y, x] = color

    if n == 1:
        x, y = int(pts[0][0]), int(pts[0][1])
        if 0 <= x < w and 0 <= y < h:
            rgb[y, x] = color


def draw_annotation(img: GrayImage, contour, out_path=None, color=(0, 255, 0)) -> np.ndarray:
    """Overlay a contour on a grayscale image and optionally write it out.

    ``contour`` may be a Contour or a bare point array; an empty contour
    yields an unmodified copy. Returns the annotated RGB array.
    """
    pts = getattr(contour, "points", contour)
    rgb = to_rgb(img)
    draw_polyline(rgb, pts, color, closed=True)
    if out_path is not None:
        save_rgb(rgb, out_path)
    return rgb
