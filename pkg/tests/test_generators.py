"""Generator families checked against independently coded oracles.

The oracles here re-implement the documented rules from scratch: a minimal
PCG32 replay for stream positions, a per-pixel distance test for disks, and
a scalar point-in-triangle test.  They share no code with the production
rasterizers.
"""

import numpy as np
import pytest

from shallowart.errors import ConfigError, SpecError
from shallowart.generators import (
    Family,
    GeneratorConfig,
    default_config,
    gen_circles,
    gen_lines,
    gen_triangle,
    generate,
    triangle_mask,
)
from shallowart.image import Encoding, ImageSpec

BW64 = ImageSpec(64, 64, Encoding.BW)


# --- independent PRNG replay (copied from the published algorithm, not the package) ---

M64 = (1 << 64) - 1


def ref_splitmix64(x):
    x = (x + 0x9E3779B97F4A7C15) & M64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & M64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & M64
    return x ^ (x >> 31)


class RefPCG:
    def __init__(self, initstate, initseq=0xDA3E39CB94B95BDB):
        self.state = 0
        self.inc = ((initseq << 1) | 1) & M64
        self.next_u32()
        self.state = (self.state + initstate) & M64
        self.next_u32()

    def next_u32(self):
        old = self.state
        self.state = (old * 6364136223846793005 + self.inc) & M64
        xsh = (((old >> 18) ^ old) >> 27) & 0xFFFFFFFF
        rot = old >> 59
        return ((xsh >> rot) | (xsh << ((-rot) & 31))) & 0xFFFFFFFF

    def bounded(self, bound):
        threshold = (1 << 32) % bound
        while True:
            r = self.next_u32()
            if r >= threshold:
                return r % bound


def replay_stream(seed, index):
    return RefPCG(ref_splitmix64((ref_splitmix64(seed) + index) & M64))


# --- lines ---

def test_horizontal_lines_structure():
    img = gen_lines("horizontal", 50, ImageSpec(250, 250, Encoding.BW), seed=1)
    black_rows = np.flatnonzero(img.pixels.any(axis=1))
    # every row containing black is entirely black, and there are at most 50
    assert all(img.pixels[r].all() for r in black_rows)
    assert 0 < len(black_rows) <= 50
    assert set(np.unique(img.pixels)) <= {0, 1}


def test_zero_lines_is_all_white():
    img = gen_lines("horizontal", 0, BW64, seed=9)
    assert not img.pixels.any()


def test_vertical_single_line_matches_prng_replay():
    spec = ImageSpec(4, 4, Encoding.BW)
    seed = 2024
    img = gen_lines("vertical", 1, spec, seed=seed, index=3)
    expected_col = replay_stream(seed, 3).bounded(4)
    cols = np.flatnonzero(img.pixels.any(axis=0))
    assert cols.tolist() == [expected_col]
    assert img.pixels[:, expected_col].all()


def test_lines_deterministic_and_index_dependent():
    a = gen_lines("horizontal", 20, BW64, seed=5, index=0)
    b = gen_lines("horizontal", 20, BW64, seed=5, index=0)
    c = gen_lines("horizontal", 20, BW64, seed=5, index=1)
    assert np.array_equal(a.pixels, b.pixels)
    assert not np.array_equal(a.pixels, c.pixels)


def test_lines_reject_rgb_spec():
    with pytest.raises(SpecError):
        gen_lines("horizontal", 5, ImageSpec(64, 64, Encoding.RGB), seed=0)


def test_zero_sized_spec_rejected():
    with pytest.raises(SpecError):
        ImageSpec(0, 64, Encoding.BW)


# --- circles ---

def disk_pixel_count_oracle(cx, cy, diameter, width, height):
    """Count pixels with center within diameter/2 of (cx, cy), scalar math."""
    count = 0
    for y in range(height):
        for x in range(width):
            if (x - cx) ** 2 + (y - cy) ** 2 <= (diameter / 2.0) ** 2:
                count += 1
    return count


def test_single_interior_disk_matches_distance_oracle():
    spec = ImageSpec(64, 64, Encoding.BW)
    # find a seed whose disk lies fully inside the canvas
    for seed in range(100):
        stream = replay_stream(seed, 0)
        cx = stream.bounded(64 + 30) - 15
        cy = stream.bounded(64 + 30) - 15
        if 8 <= cx <= 55 and 8 <= cy <= 55:
            img = gen_circles(1, 15, spec, seed=seed)
            expected = disk_pixel_count_oracle(cx, cy, 15, 64, 64)
            assert int(img.pixels.sum()) == expected
            return
    pytest.fail("no fully interior disk found in 100 seeds")


def test_circle_count_zero_and_area_bound():
    assert not gen_circles(0, 15, BW64, seed=3).pixels.any()
    img = gen_circles(50, 15, ImageSpec(250, 250, Encoding.BW), seed=3)
    full_disk = disk_pixel_count_oracle(100, 100, 15, 250, 250)
    assert 0 < int(img.pixels.sum()) <= 50 * full_disk


def test_circles_clip_at_edges_without_error():
    # small canvas forces frequent clipping; just demand validity
    img = gen_circles(20, 15, ImageSpec(16, 16, Encoding.BW), seed=8)
    assert set(np.unique(img.pixels)) <= {0, 1}


def test_circle_diameter_validation():
    with pytest.raises(ConfigError):
        gen_circles(5, 0, BW64, seed=0)


# --- triangles ---

def point_in_triangle_oracle(px, py, v0, v1, v2):
    """Closed-triangle membership restricted to the vertex bounding box."""
    if not (min(v0[0], v1[0], v2[0]) <= px <= max(v0[0], v1[0], v2[0])):
        return False
    if not (min(v0[1], v1[1], v2[1]) <= py <= max(v0[1], v1[1], v2[1])):
        return False
    def side(a, b):
        return (b[0] - a[0]) * (py - a[1]) - (b[1] - a[1]) * (px - a[0])
    d = [side(v0, v1), side(v1, v2), side(v2, v0)]
    return not (any(v > 0 for v in d) and any(v < 0 for v in d))


def test_fixed_right_triangle_matches_oracle():
    got = triangle_mask(4, 4, (0, 0), (0, 3), (3, 0))
    for y in range(4):
        for x in range(4):
            assert got[y, x] == point_in_triangle_oracle(x, y, (0, 0), (0, 3), (3, 0)), (x, y)
    assert int(got.sum()) == 10


def test_random_triangles_match_oracle():
    rng = np.random.default_rng(0)
    for _ in range(25):
        verts = [tuple(rng.integers(0, 12, size=2).tolist()) for _ in range(3)]
        got = triangle_mask(12, 12, *verts)
        for y in range(12):
            for x in range(12):
                assert got[y, x] == point_in_triangle_oracle(x, y, *verts), (verts, x, y)


def test_collinear_vertices_paint_segment_without_error():
    got = triangle_mask(8, 8, (1, 1), (3, 3), (5, 5))
    expected = {(1, 1), (2, 2), (3, 3), (4, 4), (5, 5)}
    assert {(x, y) for y, x in zip(*np.nonzero(got))} == expected


def test_triangle_vertices_follow_documented_draw_order():
    spec = ImageSpec(64, 64, Encoding.BW)
    seed = 77
    stream = replay_stream(seed, 0)
    ax, ay = stream.bounded(32), stream.bounded(64)
    bx, by = stream.bounded(32), stream.bounded(64)
    cx, cy = 32 + stream.bounded(32), stream.bounded(64)
    img = gen_triangle(spec, colored=False, seed=seed)
    expected = triangle_mask(64, 64, (ax, ay), (bx, by), (cx, cy))
    assert np.array_equal(img.pixels.astype(bool), expected)


def test_colored_triangle_single_fill_color():
    spec = ImageSpec(200, 200, Encoding.RGB)
    img = gen_triangle(spec, colored=True, seed=12)
    px = img.pixels.reshape(-1, 3)
    colors = np.unique(px, axis=0)
    # white background plus exactly one fill color that spans both halves
    assert len(colors) == 2
    assert [255, 255, 255] in colors.tolist()
    mask = ~(img.pixels == 255).all(axis=2)
    cols = np.flatnonzero(mask.any(axis=0))
    assert cols.min() < 100 <= cols.max()


def test_triangle_spec_encoding_validation():
    with pytest.raises(SpecError):
        gen_triangle(ImageSpec(64, 64, Encoding.BW), colored=True, seed=0)
    with pytest.raises(SpecError):
        gen_triangle(ImageSpec(64, 64, Encoding.RGB), colored=False, seed=0)


# --- shared config machinery ---

def test_generate_dispatch_matches_family_functions():
    cfg = GeneratorConfig(Family.CIRCLES, BW64, count=7, diameter=9)
    assert np.array_equal(generate(cfg, 4, 2).pixels, gen_circles(7, 9, BW64, seed=4, index=2).pixels)


def test_default_configs():
    bw = default_config(Family.HORIZONTAL)
    assert (bw.spec.width, bw.spec.height, bw.spec.encoding) == (250, 250, Encoding.BW)
    rgb = default_config(Family.TRIANGLE_COLOR)
    assert (rgb.spec.width, rgb.spec.height, rgb.spec.encoding) == (200, 200, Encoding.RGB)


def test_odd_width_spec_rejected_for_generation():
    with pytest.raises(SpecError):
        GeneratorConfig(Family.HORIZONTAL, ImageSpec(63, 64, Encoding.BW))


def test_negative_count_rejected():
    with pytest.raises(ConfigError):
        GeneratorConfig(Family.HORIZONTAL, BW64, count=-1)
