"""Completion quality metrics.

All comparisons run over the right half only: the left half of a completed
image is copied input, and scoring it would inflate every number.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import EncodingError, RangeError, ShapeError
from .image import Encoding, Image


class Rect(NamedTuple):
    """Pixel-coordinate rectangle: origin (x, y), extent (width, height)."""

    x: int
    y: int
    width: int
    height: int


def _check_pair(pred: Image, truth: Image, encoding: Encoding) -> None:
    if pred.spec != truth.spec:
        raise ShapeError(f"image specs differ: {pred.spec} vs {truth.spec}")
    if pred.spec.encoding is not encoding:
        raise EncodingError(f"expected {encoding.value} images, got {pred.spec.encoding.value}")


def pixel_accuracy(pred: Image, truth: Image) -> float:
    """Fraction of right-half pixels where the BW prediction matches the truth."""
    _check_pair(pred, truth, Encoding.BW)
    half = pred.spec.half_width
    agree = pred.pixels[:, half:] == truth.pixels[:, half:]
    return float(agree.mean())


def channel_mae(pred: Image, truth: Image) -> float:
    """Mean absolute difference over all right-half channel values (RGB)."""
    _check_pair(pred, truth, Encoding.RGB)
    half = pred.spec.half_width
    a = pred.pixels[:, half:].astype(np.int64)
    b = truth.pixels[:, half:].astype(np.int64)
    return float(np.abs(a - b).mean())


def region_mean(img: Image, rect: Rect) -> tuple:
    """Arithmetic mean of each channel over the rectangle.

    Returns a 1-tuple for BW images (mean of the 0/1 values) and a 3-tuple
    for RGB.
    """
    x, y, w, h = rect
    if w <= 0 or h <= 0:
        raise RangeError(f"rectangle extent must be positive, got {w}x{h}")
    if x < 0 or y < 0 or x + w > img.spec.width or y + h > img.spec.height:
        raise RangeError(f"rectangle {rect} exceeds image bounds {img.spec.width}x{img.spec.height}")
    block = img.pixels[y : y + h, x : x + w].astype(np.float64)
    if img.spec.encoding is Encoding.RGB:
        means = block.mean(axis=(0, 1))
        return (float(means[0]), float(means[1]), float(means[2]))
    return (float(block.mean()),)


def right_corner_patches(img_spec, size: int = 8) -> dict:
    """Named top and bottom corner rectangles of the right half."""
    size = min(size, img_spec.half_width, img_spec.height)
    x = img_spec.width - size
    return {
        "right_top_corner": Rect(x, 0, size, size),
        "right_bottom_corner": Rect(x, img_spec.height - size, size, size),
    }


@dataclass
class ImageEval:
    """Metrics for one completed image against its ground truth."""

    name: str
    accuracy: float | None = None
    mae: float | None = None
    region_means: dict = field(default_factory=dict)


@dataclass
class EvalReport:
    """Aggregate and per-image completion metrics."""

    encoding: Encoding
    per_image: list = field(default_factory=list)
    warnings: list = field(default_factory=list)

    @property
    def mean_accuracy(self) -> float | None:
        vals = [e.accuracy for e in self.per_image if e.accuracy is not None]
        return float(np.mean(vals)) if vals else None

    @property
    def mean_mae(self) -> float | None:
        vals = [e.mae for e in self.per_image if e.mae is not None]
        return float(np.mean(vals)) if vals else None

    def to_text(self) -> str:
        lines = [f"encoding: {self.encoding.value}", f"images: {len(self.per_image)}"]
        if self.mean_accuracy is not None:
            lines.append(f"mean right-half pixel accuracy: {self.mean_accuracy:.6f}")
        if self.mean_mae is not None:
            lines.append(f"mean right-half channel MAE: {self.mean_mae:.6f}")
        for warning in self.warnings:
            lines.append(f"warning: {warning}")
        for entry in self.per_image:
            parts = [entry.name]
            if entry.accuracy is not None:
                parts.append(f"accuracy={entry.accuracy:.6f}")
            if entry.mae is not None:
                parts.append(f"mae={entry.mae:.6f}")
            for region, means in entry.region_means.items():
                joined = ",".join(f"{v:.2f}" for v in means)
                parts.append(f"{region}=({joined})")
            lines.append("  ".join(parts))
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {
            "encoding": self.encoding.value,
            "images": len(self.per_image),
            "mean_accuracy": self.mean_accuracy,
            "mean_mae": self.mean_mae,
            "warnings": list(self.warnings),
            "per_image": [
                {
                    "name": e.name,
                    "accuracy": e.accuracy,
                    "mae": e.mae,
                    "region_means": {k: list(v) for k, v in e.region_means.items()},
                }
                for e in self.per_image
            ],
        }
