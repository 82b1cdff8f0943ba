"""Procedural image families: random lines, circles, and filled triangles.

Each image is produced by its own PCG32 stream derived from (seed, index),
so generation is deterministic and order-independent: image k of a batch is
the same whether generated alone or alongside others.

Draw order per image (all draws use PCG32.bounded):
  lines     - one position per line: row index (horizontal) or column (vertical)
  circles   - per circle: center x over [-diameter, width + diameter), then
              center y over [-diameter, height + diameter)
  triangle  - vertex A (x over left half, then y), vertex B (same), vertex C
              (x over right half, then y); colored fills then draw R, G, B
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import ConfigError, SpecError
from .image import BLACK, DEFAULT_BW_SPEC, DEFAULT_RGB_SPEC, Encoding, Image, ImageSpec, blank
from .rng import PCG32, pcg_stream


class Family(str, Enum):
    HORIZONTAL = "horizontal"
    VERTICAL = "vertical"
    CIRCLES = "circles"
    TRIANGLE = "triangle"
    TRIANGLE_COLOR = "triangle_color"


DEFAULT_SHAPE_COUNT = 50
DEFAULT_CIRCLE_DIAMETER = 15


@dataclass(frozen=True)
class GeneratorConfig:
    """One image family plus the parameters needed to draw it."""

    family: Family
    spec: ImageSpec
    count: int = DEFAULT_SHAPE_COUNT
    diameter: int = DEFAULT_CIRCLE_DIAMETER

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        self.spec.require_even_width()
        if self.family in (Family.HORIZONTAL, Family.VERTICAL, Family.CIRCLES):
            if self.count < 0:
                raise ConfigError("shape count must be non-negative")
        if self.family is Family.CIRCLES and self.diameter <= 0:
            raise ConfigError("circle diameter must be positive")
        wants_rgb = self.family is Family.TRIANGLE_COLOR
        if wants_rgb and self.spec.encoding is not Encoding.RGB:
            raise SpecError("colored triangles require an RGB spec")
        if not wants_rgb and self.spec.encoding is not Encoding.BW:
            raise SpecError(f"family {self.family.value} requires a BW spec")


def default_config(family: Family) -> GeneratorConfig:
    """The stock configuration for a family: 250x250 BW or 200x200 RGB."""
    family = Family(family)
    if family is Family.TRIANGLE_COLOR:
        return GeneratorConfig(family, DEFAULT_RGB_SPEC)
    return GeneratorConfig(family, DEFAULT_BW_SPEC)


def gen_lines(orientation: str, count: int, spec: ImageSpec, seed: int, index: int = 0) -> Image:
    """White canvas with one-pixel lines at ``count`` uniform positions.

    Positions are drawn with replacement, so the number of distinct painted
    rows or columns can be less than ``count``.
    """
    if orientation not in ("horizontal", "vertical"):
        raise ConfigError(f"unknown orientation {orientation!r}")
    family = Family.HORIZONTAL if orientation == "horizontal" else Family.VERTICAL
    cfg = GeneratorConfig(family, spec, count=count)
    return _render(cfg, pcg_stream(seed, index))


def gen_circles(count: int, diameter: int, spec: ImageSpec, seed: int, index: int = 0) -> Image:
    """White canvas with ``count`` filled black disks, clipping permitted.

    Centers are uniform on [-diameter, dim + diameter) per axis, so a disk
    may lie up to one diameter past any edge.  A pixel is black when its
    center is within diameter/2 of a disk center (boundary inclusive).
    """
    cfg = GeneratorConfig(Family.CIRCLES, spec, count=count, diameter=diameter)
    return _render(cfg, pcg_stream(seed, index))


def gen_triangle(spec: ImageSpec, colored: bool, seed: int, index: int = 0) -> Image:
    """One filled triangle: two vertices on the left half, one on the right.

    The fill is black for BW specs or a uniform random (R, G, B) for colored
    output.  Degenerate (collinear) vertices rasterize to a line segment.
    """
    family = Family.TRIANGLE_COLOR if colored else Family.TRIANGLE
    cfg = GeneratorConfig(family, spec)
    return _render(cfg, pcg_stream(seed, index))


def generate(config: GeneratorConfig, seed: int, index: int = 0) -> Image:
    """Image ``index`` of the batch defined by (config, seed)."""
    return _render(config, pcg_stream(seed, index))


def _render(cfg: GeneratorConfig, rng: PCG32) -> Image:
    img = blank(cfg.spec)
    w, h = cfg.spec.width, cfg.spec.height
    if cfg.family is Family.HORIZONTAL:
        for _ in range(cfg.count):
            img.pixels[rng.bounded(h), :] = BLACK
    elif cfg.family is Family.VERTICAL:
        for _ in range(cfg.count):
            img.pixels[:, rng.bounded(w)] = BLACK
    elif cfg.family is Family.CIRCLES:
        d = cfg.diameter
        for _ in range(cfg.count):
            cx = rng.bounded(w + 2 * d) - d
            cy = rng.bounded(h + 2 * d) - d
            _paint_disk(img.pixels, cx, cy, d)
    else:
        ax = rng.bounded(w // 2)
        ay = rng.bounded(h)
        bx = rng.bounded(w // 2)
        by = rng.bounded(h)
        cx = w // 2 + rng.bounded(w // 2)
        cy = rng.bounded(h)
        mask = triangle_mask(w, h, (ax, ay), (bx, by), (cx, cy))
        if cfg.family is Family.TRIANGLE_COLOR:
            color = (rng.bounded(256), rng.bounded(256), rng.bounded(256))
            img.pixels[mask] = color
        else:
            img.pixels[mask] = BLACK
    return img


def _paint_disk(pixels: np.ndarray, cx: int, cy: int, diameter: int) -> None:
    """Fill pixels whose centers satisfy 4*((x-cx)^2 + (y-cy)^2) <= diameter^2."""
    h, w = pixels.shape
    r = diameter // 2 + 1
    x0, x1 = max(0, cx - r), min(w, cx + r + 1)
    y0, y1 = max(0, cy - r), min(h, cy + r + 1)
    if x0 >= x1 or y0 >= y1:
        return
    xs = np.arange(x0, x1, dtype=np.int64) - cx
    ys = np.arange(y0, y1, dtype=np.int64) - cy
    inside = 4 * (xs[None, :] ** 2 + ys[:, None] ** 2) <= diameter * diameter
    pixels[y0:y1, x0:x1][inside] = BLACK


def triangle_mask(width: int, height: int, v0, v1, v2) -> np.ndarray:
    """Boolean mask of pixels inside the closed triangle (v0, v1, v2).

    A pixel center (integer coordinates) counts as inside when the three
    edge cross products have no strictly opposite signs; evaluation is
    restricted to the vertex bounding box so collinear vertices paint only
    their segment.  All arithmetic is exact integer math.
    """
    mask = np.zeros((height, width), dtype=bool)
    x0 = max(0, min(v0[0], v1[0], v2[0]))
    x1 = min(width - 1, max(v0[0], v1[0], v2[0]))
    y0 = max(0, min(v0[1], v1[1], v2[1]))
    y1 = min(height - 1, max(v0[1], v1[1], v2[1]))
    if x0 > x1 or y0 > y1:
        return mask
    xs = np.arange(x0, x1 + 1, dtype=np.int64)[None, :]
    ys = np.arange(y0, y1 + 1, dtype=np.int64)[:, None]
    d0 = _edge_side(v0, v1, xs, ys)
    d1 = _edge_side(v1, v2, xs, ys)
    d2 = _edge_side(v2, v0, xs, ys)
    has_neg = (d0 < 0) | (d1 < 0) | (d2 < 0)
    has_pos = (d0 > 0) | (d1 > 0) | (d2 > 0)
    mask[y0 : y1 + 1, x0 : x1 + 1] = ~(has_neg & has_pos)
    return mask


def _edge_side(a, b, xs, ys):
    return (b[0] - a[0]) * (ys - a[1]) - (b[1] - a[1]) * (xs - a[0])
