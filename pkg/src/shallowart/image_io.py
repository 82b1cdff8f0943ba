"""Image file I/O: lossless PNG for pipeline data, JPEG accepted read-only.

Binary B&W images are written as 8-bit grayscale PNGs (black pixel -> 0,
white -> 255) and read back through a luminance threshold: values of 128 and
above count as white.  Color images round-trip exactly as 8-bit RGB.
"""

from __future__ import annotations

import hashlib
import io
from pathlib import Path

import numpy as np
from PIL import Image as PILImage
from PIL import UnidentifiedImageError

from .errors import DecodeError, SpecMismatchError
from .image import Encoding, Image, ImageSpec

BW_THRESHOLD = 128
IMAGE_SUFFIXES = (".png", ".jpg", ".jpeg")

_PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


def encode_png(img: Image) -> bytes:
    """Serialize an image to PNG bytes (grayscale for BW, 8-bit RGB otherwise)."""
    if img.spec.encoding is Encoding.BW:
        arr = np.where(img.pixels == 0, 255, 0).astype(np.uint8)
        pil = PILImage.fromarray(arr, mode="L")
    else:
        pil = PILImage.fromarray(img.pixels, mode="RGB")
    buf = io.BytesIO()
    pil.save(buf, format="PNG")
    return buf.getvalue()


def decode_png(data: bytes, expected: ImageSpec) -> Image:
    """Decode PNG bytes against an expected spec.

    Grayscale or color input for a BW spec is binarized by luminance;
    anything that is not a well-formed PNG raises DecodeError, and a
    dimension mismatch raises SpecMismatchError.
    """
    if not data.startswith(_PNG_MAGIC):
        raise DecodeError("not a PNG byte stream")
    return _decode(data, expected)


def _decode(data: bytes, expected: ImageSpec) -> Image:
    try:
        pil = PILImage.open(io.BytesIO(data))
        pil.load()
    except (UnidentifiedImageError, OSError, SyntaxError) as exc:
        raise DecodeError(f"could not decode image: {exc}") from exc
    if pil.size != (expected.width, expected.height):
        raise SpecMismatchError(
            f"image is {pil.size[0]}x{pil.size[1]}, expected {expected.width}x{expected.height}"
        )
    if expected.encoding is Encoding.BW:
        lum = np.asarray(pil.convert("L"))
        px = (lum < BW_THRESHOLD).astype(np.uint8)
    else:
        px = np.asarray(pil.convert("RGB"))
    return Image(expected, px)


def decode_image(data: bytes, expected: ImageSpec) -> Image:
    """Decode PNG or JPEG bytes against an expected spec (corpus ingestion)."""
    return _decode(data, expected)


def decode_native(data: bytes) -> Image:
    """Decode PNG or JPEG bytes at native size as an RGB image."""
    try:
        pil = PILImage.open(io.BytesIO(data))
        pil.load()
    except (UnidentifiedImageError, OSError, SyntaxError) as exc:
        raise DecodeError(f"could not decode image: {exc}") from exc
    px = np.asarray(pil.convert("RGB"))
    spec = ImageSpec(pil.size[0], pil.size[1], Encoding.RGB)
    return Image(spec, px)


def save_image(img: Image, path) -> None:
    Path(path).write_bytes(encode_png(img))


def load_image(path, expected: ImageSpec) -> Image:
    """Read one image file (PNG or JPEG) against an expected spec."""
    return decode_image(Path(path).read_bytes(), expected)


def load_image_native(path) -> Image:
    return decode_native(Path(path).read_bytes())


def list_image_files(directory) -> list:
    """Image files in a directory, sorted by name for reproducible ordering."""
    directory = Path(directory)
    return sorted(p for p in directory.iterdir() if p.suffix.lower() in IMAGE_SUFFIXES)


def load_directory(directory, expected: ImageSpec) -> list:
    """(path, Image) pairs for every image file in the directory."""
    return [(p, load_image(p, expected)) for p in list_image_files(directory)]


def file_sha256(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def image_content_hash(img: Image) -> str:
    """Hash of the decoded pixel content, independent of container bytes."""
    h = hashlib.sha256()
    h.update(f"{img.spec.width}x{img.spec.height}:{img.spec.encoding.value}:".encode())
    h.update(np.ascontiguousarray(img.pixels).tobytes())
    return h.hexdigest()
