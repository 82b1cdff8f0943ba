"""Metric definitions over the predicted (right) half."""

import numpy as np
import pytest

from shallowart.errors import EncodingError, RangeError, ShapeError
from shallowart.generators import gen_triangle, triangle_mask
from shallowart.image import Encoding, Image, ImageSpec
from shallowart.metrics import (
    EvalReport,
    ImageEval,
    Rect,
    channel_mae,
    pixel_accuracy,
    region_mean,
    right_corner_patches,
)
from shallowart.rng import pcg_stream

BW4 = ImageSpec(4, 4, Encoding.BW)
RGB2 = ImageSpec(2, 2, Encoding.RGB)


def bw_image(bits):
    return Image(BW4, np.asarray(bits, dtype=np.uint8))


def test_identical_images_score_perfectly():
    rng = np.random.default_rng(0)
    img = bw_image(rng.integers(0, 2, size=(4, 4)))
    assert pixel_accuracy(img, img) == 1.0
    color = Image(RGB2, rng.integers(0, 256, size=(2, 2, 3)).astype(np.uint8))
    assert channel_mae(color, color) == 0.0


def test_inverted_right_half_scores_zero():
    rng = np.random.default_rng(1)
    truth = bw_image(rng.integers(0, 2, size=(4, 4)))
    flipped = truth.pixels.copy()
    flipped[:, 2:] = 1 - flipped[:, 2:]
    assert pixel_accuracy(bw_image(flipped), truth) == 0.0


def test_two_of_eight_right_pixels_differ():
    truth = bw_image(np.zeros((4, 4)))
    pred = truth.pixels.copy()
    pred[0, 2] = 1
    pred[3, 3] = 1
    assert pixel_accuracy(bw_image(pred), truth) == 0.75


def test_left_half_differences_are_ignored():
    truth = bw_image(np.zeros((4, 4)))
    pred = truth.pixels.copy()
    pred[:, :2] = 1
    assert pixel_accuracy(bw_image(pred), truth) == 1.0


def test_accuracy_symmetric():
    rng = np.random.default_rng(2)
    a = bw_image(rng.integers(0, 2, size=(4, 4)))
    b = bw_image(rng.integers(0, 2, size=(4, 4)))
    assert pixel_accuracy(a, b) == pixel_accuracy(b, a)


def test_constant_offset_mae():
    base = np.full((2, 2, 3), 100, dtype=np.uint8)
    truth = Image(RGB2, base)
    pred = Image(RGB2, base + 10)
    assert channel_mae(pred, truth) == 10.0


def test_hand_enumerated_mae():
    truth_px = np.zeros((2, 2, 3), dtype=np.uint8)
    pred_px = truth_px.copy()
    # right half = column 1: six channel values
    pred_px[0, 1] = (3, 0, 9)
    pred_px[1, 1] = (0, 6, 0)
    expected = (3 + 0 + 9 + 0 + 6 + 0) / 6
    assert channel_mae(Image(RGB2, pred_px), Image(RGB2, truth_px)) == pytest.approx(expected)


def test_metric_type_checks():
    bw = bw_image(np.zeros((4, 4)))
    rgb = Image(RGB2, np.zeros((2, 2, 3), dtype=np.uint8))
    with pytest.raises(EncodingError):
        pixel_accuracy(rgb, rgb)
    with pytest.raises(EncodingError):
        channel_mae(bw, bw)
    other = Image(ImageSpec(6, 4, Encoding.BW), np.zeros((4, 6), dtype=np.uint8))
    with pytest.raises(ShapeError):
        pixel_accuracy(bw, other)


def test_region_mean_trivial_cases():
    white = Image(RGB2, np.full((2, 2, 3), 255, dtype=np.uint8))
    assert region_mean(white, Rect(0, 0, 2, 2)) == (255.0, 255.0, 255.0)
    px = np.zeros((2, 2, 3), dtype=np.uint8)
    px[0, 1] = (255, 255, 255)
    img = Image(RGB2, px)
    assert region_mean(img, Rect(0, 0, 2, 1)) == (127.5, 127.5, 127.5)


def test_region_mean_bw_returns_single_channel():
    img = bw_image(np.eye(4))
    assert region_mean(img, Rect(0, 0, 4, 4)) == (0.25,)


def test_region_mean_bounds_checked():
    img = bw_image(np.zeros((4, 4)))
    with pytest.raises(RangeError):
        region_mean(img, Rect(2, 2, 4, 4))
    with pytest.raises(RangeError):
        region_mean(img, Rect(0, 0, 0, 1))


def test_disjoint_union_average_property():
    rng = np.random.default_rng(3)
    img = Image(ImageSpec(8, 4, Encoding.RGB), rng.integers(0, 256, size=(4, 8, 3)).astype(np.uint8))
    a = region_mean(img, Rect(0, 0, 4, 4))
    b = region_mean(img, Rect(4, 0, 4, 4))
    union = region_mean(img, Rect(0, 0, 8, 4))
    for ua, va, vb in zip(union, a, b):
        assert ua == pytest.approx((va + vb) / 2)


def test_region_inside_triangle_fill_reads_back_drawn_color():
    spec = ImageSpec(64, 64, Encoding.RGB)
    seed = 0  # this stream yields a triangle thick enough to hold a 2x2 block
    img = gen_triangle(spec, colored=True, seed=seed)
    # replay the generator's stream to recover vertices and fill color
    stream = pcg_stream(seed, 0)
    ax, ay = stream.bounded(32), stream.bounded(64)
    bx, by = stream.bounded(32), stream.bounded(64)
    cx, cy = 32 + stream.bounded(32), stream.bounded(64)
    fill = (stream.bounded(256), stream.bounded(256), stream.bounded(256))
    mask = triangle_mask(64, 64, (ax, ay), (bx, by), (cx, cy))
    # find a 2x2 block fully inside the fill
    found = False
    for y in range(63):
        for x in range(63):
            if mask[y : y + 2, x : x + 2].all():
                assert region_mean(img, Rect(x, y, 2, 2)) == tuple(float(c) for c in fill)
                found = True
                break
        if found:
            break
    assert found, "triangle too thin to contain a 2x2 block"


def test_corner_patches_clip_to_spec():
    patches = right_corner_patches(ImageSpec(64, 64, Encoding.RGB), size=8)
    assert patches["right_top_corner"] == Rect(56, 0, 8, 8)
    assert patches["right_bottom_corner"] == Rect(56, 56, 8, 8)
    small = right_corner_patches(ImageSpec(8, 8, Encoding.BW), size=8)
    assert small["right_top_corner"] == Rect(4, 0, 4, 4)


def test_eval_report_text_and_dict():
    report = EvalReport(encoding=Encoding.BW)
    report.per_image.append(ImageEval(name="a.png", accuracy=0.5))
    report.per_image.append(ImageEval(name="b.png", accuracy=1.0))
    report.warnings.append("something")
    text = report.to_text()
    assert "mean right-half pixel accuracy: 0.750000" in text
    assert "warning: something" in text
    data = report.to_dict()
    assert data["mean_accuracy"] == 0.75
    assert data["images"] == 2
