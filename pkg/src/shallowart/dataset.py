"""Flattening images into attribute/label vectors and back, plus corpus prep.

The flattening order is row-major: attribute i of a BW image is the pixel at
(row i // (w/2), column i % (w/2)) of the left half, and RGB pixels
contribute their three channels consecutively.  The whole pipeline depends on
this order staying fixed, because output model i of a trained completer maps
back to exactly this position.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InsufficientDataError, RangeError, ShapeError, SpecMismatchError
from .image import Encoding, Image, ImageSpec
from .image_io import image_content_hash

TRAIN = "train"
TEST = "test"


@dataclass
class FlatSample:
    """One image split into attribute (left half) and label (right half) vectors."""

    attributes: np.ndarray
    labels: np.ndarray


def left_half(img: Image) -> np.ndarray:
    """The left-half pixel block, shape (h, w/2) or (h, w/2, 3)."""
    return img.pixels[:, : img.spec.half_width]


def flatten_split(img: Image) -> FlatSample:
    """Split an image into flattened left-half attributes and right-half labels."""
    half = img.spec.half_width
    attrs = np.ascontiguousarray(img.pixels[:, :half]).reshape(-1)
    labels = np.ascontiguousarray(img.pixels[:, half:]).reshape(-1)
    return FlatSample(attrs, labels)


def assemble(spec: ImageSpec, left: np.ndarray, labels: np.ndarray) -> Image:
    """Rebuild a full image from a left-half block and a flat label vector."""
    left = np.asarray(left)
    if left.shape != spec.half_shape:
        raise ShapeError(f"left half has shape {left.shape}, expected {spec.half_shape}")
    labels = np.asarray(labels)
    if labels.ndim != 1 or labels.shape[0] != spec.label_length:
        raise ShapeError(f"label vector has length {labels.size}, expected {spec.label_length}")
    if np.issubdtype(labels.dtype, np.floating):
        rounded = np.floor(labels + 0.5)
        if not np.array_equal(rounded, labels):
            raise RangeError("label values must be integral")
        labels = rounded
    hi = 1 if spec.encoding is Encoding.BW else 255
    if labels.size and (labels.min() < 0 or labels.max() > hi):
        raise RangeError(f"label values outside [0, {hi}]")
    right = labels.astype(np.uint8).reshape(spec.half_shape)
    pixels = np.concatenate([left.astype(np.uint8), right], axis=1)
    return Image(spec, pixels)


@dataclass
class Dataset:
    """Flat samples sharing one spec, each tagged "train" or "test"."""

    spec: ImageSpec
    samples: list = field(default_factory=list)
    tags: list = field(default_factory=list)

    @classmethod
    def from_images(cls, images, tag: str = TRAIN) -> "Dataset":
        if not images:
            raise InsufficientDataError("cannot build a dataset from zero images")
        spec = images[0].spec
        ds = cls(spec)
        for img in images:
            ds.add(img, tag)
        return ds

    def add(self, img: Image, tag: str = TRAIN) -> None:
        if img.spec != self.spec:
            raise SpecMismatchError(f"image spec {img.spec} does not match dataset spec {self.spec}")
        if tag not in (TRAIN, TEST):
            raise ValueError(f"unknown partition tag {tag!r}")
        self.samples.append(flatten_split(img))
        self.tags.append(tag)

    def matrices(self, tag: str | None = None):
        """Stacked (X, Y) attribute and label matrices, optionally filtered by tag."""
        rows = [s for s, t in zip(self.samples, self.tags) if tag is None or t == tag]
        if not rows:
            raise InsufficientDataError(f"no samples with tag {tag!r}")
        X = np.stack([s.attributes for s in rows])
        Y = np.stack([s.labels for s in rows])
        return X, Y


def resize_bilinear(pixels: np.ndarray, out_width: int, out_height: int) -> np.ndarray:
    """Classic bilinear resampling with pixel-center alignment.

    Destination center (i + 0.5) maps to source coordinate
    (i + 0.5) * scale - 0.5, clamped to the source grid; the four
    surrounding samples are blended and rounded half-up to uint8.
    """
    px = np.asarray(pixels, dtype=np.float64)
    squeeze = px.ndim == 2
    if squeeze:
        px = px[:, :, None]
    in_h, in_w, ch = px.shape
    sx = np.clip((np.arange(out_width) + 0.5) * in_w / out_width - 0.5, 0, in_w - 1)
    sy = np.clip((np.arange(out_height) + 0.5) * in_h / out_height - 0.5, 0, in_h - 1)
    x0 = np.floor(sx).astype(np.int64)
    y0 = np.floor(sy).astype(np.int64)
    x1 = np.minimum(x0 + 1, in_w - 1)
    y1 = np.minimum(y0 + 1, in_h - 1)
    fx = (sx - x0)[None, :, None]
    fy = (sy - y0)[:, None, None]
    top = px[y0[:, None], x0[None, :], :] * (1 - fx) + px[y0[:, None], x1[None, :], :] * fx
    bot = px[y1[:, None], x0[None, :], :] * (1 - fx) + px[y1[:, None], x1[None, :], :] * fx
    out = top * (1 - fy) + bot * fy
    out = np.clip(np.floor(out + 0.5), 0, 255).astype(np.uint8)
    return out[:, :, 0] if squeeze else out


def _convert_encoding(img: Image, encoding: Encoding) -> Image:
    if img.spec.encoding is encoding:
        return img
    spec = ImageSpec(img.spec.width, img.spec.height, encoding)
    if encoding is Encoding.RGB:
        gray = np.where(img.pixels == 0, 255, 0).astype(np.uint8)
        return Image(spec, np.repeat(gray[:, :, None], 3, axis=2))
    lum = (
        img.pixels[:, :, 0] * 299 + img.pixels[:, :, 1] * 587 + img.pixels[:, :, 2] * 114
    ) // 1000
    return Image(spec, (lum < 128).astype(np.uint8))


def preprocess_corpus(images, target: ImageSpec) -> list:
    """Drop exact duplicates and resample everything to the target spec.

    Order follows first occurrence.  Deduplication runs again after
    resampling so the operation is idempotent even if two distinct inputs
    collapse to the same thumbnail.
    """
    out = []
    seen = set()
    for img in images:
        key = image_content_hash(img)
        if key in seen:
            continue
        seen.add(key)
        converted = _convert_encoding(img, target.encoding)
        resized = resize_bilinear(converted.pixels, target.width, target.height)
        out.append(Image(target, resized))
    deduped = []
    seen.clear()
    for img in out:
        key = image_content_hash(img)
        if key in seen:
            continue
        seen.add(key)
        deduped.append(img)
    return deduped
