"""Flatten/assemble contracts and corpus preprocessing.

The bilinear oracle below is a deliberately naive scalar reimplementation of
the documented resampling rule; the production resampler must agree with it
exactly on small inputs.
"""

import numpy as np
import pytest

from shallowart.dataset import (
    Dataset,
    assemble,
    flatten_split,
    left_half,
    preprocess_corpus,
    resize_bilinear,
)
from shallowart.errors import (
    InsufficientDataError,
    RangeError,
    ShapeError,
    SpecError,
    SpecMismatchError,
)
from shallowart.generators import gen_circles, gen_lines, gen_triangle
from shallowart.image import Encoding, Image, ImageSpec


def random_image(spec, rng):
    if spec.encoding is Encoding.BW:
        return Image(spec, rng.integers(0, 2, size=spec.shape).astype(np.uint8))
    return Image(spec, rng.integers(0, 256, size=spec.shape).astype(np.uint8))


def test_attribute_counts_match_closed_forms():
    bw = flatten_split(random_image(ImageSpec(250, 250, Encoding.BW), np.random.default_rng(0)))
    assert bw.attributes.size == 31250
    assert bw.labels.size == 31250
    rgb = flatten_split(random_image(ImageSpec(200, 200, Encoding.RGB), np.random.default_rng(1)))
    assert rgb.attributes.size == 60000
    assert rgb.labels.size == 60000


def test_all_white_4x4_flattens_to_zeros():
    sample = flatten_split(Image(ImageSpec(4, 4, Encoding.BW), np.zeros((4, 4), dtype=np.uint8)))
    assert sample.attributes.tolist() == [0] * 8
    assert sample.labels.tolist() == [0] * 8


def test_flatten_order_is_row_major_with_rgb_interleaving():
    spec = ImageSpec(4, 2, Encoding.RGB)
    px = np.arange(4 * 2 * 3, dtype=np.uint8).reshape(2, 4, 3)
    sample = flatten_split(Image(spec, px))
    # left half: pixels (0,0),(0,1),(1,0),(1,1) with channels consecutive
    expected = np.concatenate([px[0, 0], px[0, 1], px[1, 0], px[1, 1]])
    assert sample.attributes.tolist() == expected.tolist()
    expected_labels = np.concatenate([px[0, 2], px[0, 3], px[1, 2], px[1, 3]])
    assert sample.labels.tolist() == expected_labels.tolist()


def test_odd_width_split_rejected():
    img = Image(ImageSpec(5, 4, Encoding.BW), np.zeros((4, 5), dtype=np.uint8))
    with pytest.raises(SpecError):
        flatten_split(img)


def test_flatten_assemble_identity_over_generated_families():
    rng = np.random.default_rng(2)
    spec64 = ImageSpec(64, 64, Encoding.BW)
    images = [
        gen_lines("horizontal", 20, spec64, seed=10),
        gen_lines("vertical", 20, spec64, seed=11),
        gen_circles(20, 9, spec64, seed=12),
        gen_triangle(spec64, colored=False, seed=13),
        gen_triangle(ImageSpec(64, 64, Encoding.RGB), colored=True, seed=14),
        random_image(ImageSpec(6, 4, Encoding.RGB), rng),
        random_image(ImageSpec(6, 4, Encoding.BW), rng),
    ]
    for img in images:
        sample = flatten_split(img)
        rebuilt = assemble(img.spec, left_half(img), sample.labels)
        assert rebuilt == img


def test_assemble_all_black_right_half():
    spec = ImageSpec(4, 4, Encoding.BW)
    left = np.zeros((4, 2), dtype=np.uint8)
    img = assemble(spec, left, np.ones(8, dtype=np.uint8))
    assert img.pixels[:, 2:].all()
    assert not img.pixels[:, :2].any()


def test_assemble_validation_errors():
    spec = ImageSpec(4, 4, Encoding.BW)
    left = np.zeros((4, 2), dtype=np.uint8)
    with pytest.raises(ShapeError):
        assemble(spec, left, np.zeros(7, dtype=np.uint8))
    with pytest.raises(RangeError):
        assemble(spec, left, np.full(8, 2, dtype=np.uint8))
    with pytest.raises(ShapeError):
        assemble(spec, np.zeros((4, 3), dtype=np.uint8), np.zeros(8, dtype=np.uint8))


def test_dataset_matrices_and_partition():
    spec = ImageSpec(4, 4, Encoding.BW)
    rng = np.random.default_rng(3)
    ds = Dataset.from_images([random_image(spec, rng) for _ in range(5)])
    ds.add(random_image(spec, rng), tag="test")
    X, Y = ds.matrices("train")
    assert X.shape == (5, 8) and Y.shape == (5, 8)
    X_all, _ = ds.matrices()
    assert X_all.shape == (6, 8)
    with pytest.raises(SpecMismatchError):
        ds.add(random_image(ImageSpec(6, 6, Encoding.BW), rng))
    with pytest.raises(InsufficientDataError):
        Dataset.from_images([])


# --- bilinear resampling ---

def bilinear_oracle(px, out_w, out_h):
    """Scalar reference resampler for the documented pixel-center rule."""
    px = np.asarray(px, dtype=float)
    if px.ndim == 2:
        px = px[:, :, None]
    in_h, in_w, ch = px.shape
    out = np.zeros((out_h, out_w, ch))
    for oy in range(out_h):
        for ox in range(out_w):
            sx = min(max((ox + 0.5) * in_w / out_w - 0.5, 0), in_w - 1)
            sy = min(max((oy + 0.5) * in_h / out_h - 0.5, 0), in_h - 1)
            x0, y0 = int(np.floor(sx)), int(np.floor(sy))
            x1, y1 = min(x0 + 1, in_w - 1), min(y0 + 1, in_h - 1)
            fx, fy = sx - x0, sy - y0
            for c in range(ch):
                top = px[y0, x0, c] * (1 - fx) + px[y0, x1, c] * fx
                bot = px[y1, x0, c] * (1 - fx) + px[y1, x1, c] * fx
                out[oy, ox, c] = top * (1 - fy) + bot * fy
    return np.clip(np.floor(out + 0.5), 0, 255).astype(np.uint8)


def test_resize_matches_scalar_oracle_on_toy_input():
    px = np.array(
        [
            [0, 60, 120, 180],
            [30, 90, 150, 210],
            [60, 120, 180, 240],
            [90, 150, 210, 255],
        ],
        dtype=np.uint8,
    )
    got = resize_bilinear(px, 2, 2)
    expected = bilinear_oracle(px, 2, 2)[:, :, 0]
    assert np.array_equal(got, expected)


def test_resize_matches_oracle_on_random_rgb():
    rng = np.random.default_rng(4)
    px = rng.integers(0, 256, size=(5, 7, 3)).astype(np.uint8)
    for out_w, out_h in [(3, 4), (7, 5), (10, 2), (14, 10)]:
        assert np.array_equal(resize_bilinear(px, out_w, out_h), bilinear_oracle(px, out_w, out_h))


def test_resize_same_size_is_identity():
    rng = np.random.default_rng(5)
    px = rng.integers(0, 256, size=(6, 6, 3)).astype(np.uint8)
    assert np.array_equal(resize_bilinear(px, 6, 6), px)


def test_single_dark_pixel_lands_at_scaled_coordinate():
    px = np.full((8, 8), 255, dtype=np.uint8)
    px[6, 6] = 0
    got = resize_bilinear(px, 4, 4)
    assert np.array_equal(got, bilinear_oracle(px, 4, 4)[:, :, 0])
    assert got.argmin() == np.ravel_multi_index((3, 3), (4, 4))


# --- corpus preprocessing ---

def test_preprocess_deduplicates_and_resizes():
    rng = np.random.default_rng(6)
    target = ImageSpec(200, 200, Encoding.RGB)
    img = random_image(ImageSpec(400, 400, Encoding.RGB), rng)
    out = preprocess_corpus([img, img.copy()], target)
    assert len(out) == 1
    assert out[0].spec == target


def test_preprocess_empty_input():
    assert preprocess_corpus([], ImageSpec(200, 200, Encoding.RGB)) == []


def test_preprocess_preserves_first_occurrence_order():
    rng = np.random.default_rng(7)
    target = ImageSpec(4, 4, Encoding.RGB)
    a = random_image(ImageSpec(4, 4, Encoding.RGB), rng)
    b = random_image(ImageSpec(4, 4, Encoding.RGB), rng)
    out = preprocess_corpus([a, b, a.copy()], target)
    assert out == [a, b]


def test_preprocess_idempotent():
    rng = np.random.default_rng(8)
    target = ImageSpec(16, 16, Encoding.RGB)
    corpus = [random_image(ImageSpec(24, 20, Encoding.RGB), rng) for _ in range(4)]
    once = preprocess_corpus(corpus, target)
    twice = preprocess_corpus(once, target)
    assert twice == once


def test_preprocess_converts_bw_to_rgb_target():
    bw = Image(ImageSpec(4, 4, Encoding.BW), np.eye(4, dtype=np.uint8))
    out = preprocess_corpus([bw], ImageSpec(4, 4, Encoding.RGB))
    assert out[0].spec.encoding is Encoding.RGB
    assert tuple(out[0].pixels[0, 0]) == (0, 0, 0)
    assert tuple(out[0].pixels[0, 1]) == (255, 255, 255)
