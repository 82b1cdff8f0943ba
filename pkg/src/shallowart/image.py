"""Core raster types: pixel encodings, image specs, and validated images.

Black-and-white pixels are stored as 0 (white) and 1 (black); "black present"
is the positive class everywhere downstream.  Color pixels are (R, G, B)
triples of 8-bit integers.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import RangeError, ShapeError, SpecError

WHITE = 0
BLACK = 1


class Encoding(str, Enum):
    BW = "bw"
    RGB = "rgb"


@dataclass(frozen=True)
class ImageSpec:
    """Dimensions and pixel encoding of one image family.

    Width must be even wherever an image is split into halves; that is
    enforced by the splitting operations rather than here, so native-size
    corpus images (possibly odd-width) can still be represented before
    resampling.
    """

    width: int
    height: int
    encoding: Encoding

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise SpecError(f"image dimensions must be positive, got {self.width}x{self.height}")
        object.__setattr__(self, "encoding", Encoding(self.encoding))

    @property
    def values_per_pixel(self) -> int:
        return 3 if self.encoding is Encoding.RGB else 1

    @property
    def half_width(self) -> int:
        self.require_even_width()
        return self.width // 2

    def require_even_width(self) -> None:
        if self.width % 2 != 0:
            raise SpecError(f"width must be even to split into halves, got {self.width}")

    @property
    def attribute_length(self) -> int:
        """Number of values in a flattened half: w*h/2 (BW) or 3*w*h/2 (RGB)."""
        return self.half_width * self.height * self.values_per_pixel

    @property
    def label_length(self) -> int:
        return self.attribute_length

    @property
    def shape(self) -> tuple:
        if self.encoding is Encoding.RGB:
            return (self.height, self.width, 3)
        return (self.height, self.width)

    @property
    def half_shape(self) -> tuple:
        if self.encoding is Encoding.RGB:
            return (self.height, self.half_width, 3)
        return (self.height, self.half_width)


DEFAULT_BW_SPEC = ImageSpec(250, 250, Encoding.BW)
DEFAULT_RGB_SPEC = ImageSpec(200, 200, Encoding.RGB)


@dataclass(eq=False)
class Image:
    """A validated raster: row-major uint8 pixels matching ``spec``."""

    spec: ImageSpec
    pixels: np.ndarray

    def __post_init__(self):
        px = np.asarray(self.pixels)
        if px.shape != self.spec.shape:
            raise ShapeError(f"pixel array shape {px.shape} does not match spec {self.spec.shape}")
        if px.dtype != np.uint8:
            if not np.issubdtype(px.dtype, np.integer):
                raise RangeError(f"pixels must be integers, got dtype {px.dtype}")
            if px.min() < 0 or px.max() > 255:
                raise RangeError("pixel values outside [0, 255]")
            px = px.astype(np.uint8)
        if self.spec.encoding is Encoding.BW and px.size and px.max() > BLACK:
            raise RangeError("black-and-white pixels must be 0 (white) or 1 (black)")
        self.pixels = px

    def __eq__(self, other) -> bool:
        if not isinstance(other, Image):
            return NotImplemented
        return self.spec == other.spec and np.array_equal(self.pixels, other.pixels)

    def copy(self) -> "Image":
        return Image(self.spec, self.pixels.copy())


def blank(spec: ImageSpec) -> Image:
    """All-white canvas: zeros for BW, 255s for RGB."""
    if spec.encoding is Encoding.RGB:
        return Image(spec, np.full(spec.shape, 255, dtype=np.uint8))
    return Image(spec, np.zeros(spec.shape, dtype=np.uint8))
