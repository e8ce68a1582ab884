import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from conftest import random_pair
from oracles import energy_bruteforce, mean_filter_shrink
from regionstereo.energy import (INVALID, MatchWindow, box_smooth, compute_energy_volume,
                                 smooth_volume, window_sums)


def test_window_rejects_zero():
    with pytest.raises(ValueError):
        MatchWindow(0, 3)
    with pytest.raises(ValueError):
        MatchWindow(1, 0)


def test_identical_images_zero_at_d0(rng):
    img = rng.integers(0, 256, (7, 9, 3), dtype=np.uint8)
    vol = compute_energy_volume(img, img, MatchWindow(2, 3), 4)
    s0 = vol[0]
    assert np.all(s0[np.isfinite(s0)] == 0)
    assert np.isfinite(s0).sum() == (7 - 1) * (9 - 2)


def test_pure_red_vs_black():
    left = np.zeros((3, 4, 3), dtype=np.uint8)
    left[..., 0] = 255
    right = np.zeros_like(left)
    vol = compute_energy_volume(left, right, MatchWindow(1, 1), 0)
    assert np.all(vol[0] == 21675.0)


def test_matches_bruteforce_6x6(rng):
    left, right = random_pair(rng, 6, 6)
    vol = compute_energy_volume(left, right, MatchWindow(1, 2), 3)
    ref = energy_bruteforce(left, right, 1, 2, 3)
    np.testing.assert_array_equal(vol, ref)


@pytest.mark.parametrize("n,m,d_max", [(1, 1, 5), (3, 3, 4), (2, 5, 2), (1, 5, 9)])
def test_matches_bruteforce_windows(rng, n, m, d_max):
    left, right = random_pair(rng, 8, 10)
    np.testing.assert_array_equal(compute_energy_volume(left, right, MatchWindow(n, m), d_max),
                                  energy_bruteforce(left, right, n, m, d_max))


def test_out_of_bounds_are_invalid(rng):
    left, right = random_pair(rng, 5, 6)
    vol = compute_energy_volume(left, right, MatchWindow(2, 2), 7)
    # d + m > W leaves no valid anchor
    assert np.all(vol[5:] == INVALID)
    assert np.all(vol[:, 4, :] == INVALID)
    assert np.all(np.isfinite(vol[2, :4, :3])) and np.all(vol[2, :, 3:] == INVALID)


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        compute_energy_volume(np.zeros((4, 4, 3)), np.zeros((4, 5, 3)), MatchWindow(), 1)


def test_swap_and_mirror_symmetry(rng):
    left, right = random_pair(rng, 6, 12)
    win, d_max = MatchWindow(2, 3), 4
    vol = compute_energy_volume(left, right, win, d_max)
    mirrored = compute_energy_volume(right[:, ::-1], left[:, ::-1], win, d_max)
    w = 12
    for d in range(d_max + 1):
        for j in range(w):
            src = w - j - win.m - d
            if src < 0:
                assert np.all(mirrored[d, :, j] == INVALID)
            else:
                np.testing.assert_array_equal(mirrored[d, :, j], vol[d, :, src])


def test_deterministic(rng):
    left, right = random_pair(rng, 10, 12)
    a = compute_energy_volume(left, right, MatchWindow(3, 3), 5)
    b = compute_energy_volume(left.copy(), right.copy(), MatchWindow(3, 3), 5)
    np.testing.assert_array_equal(a, b)


def test_window_sums_exact_for_integers(rng):
    a = rng.integers(0, 195076, (20, 30)).astype(np.float64)
    s = window_sums(a, 3, 4)
    ref = np.array([[a[i:i + 3, j:j + 4].sum() for j in range(27)] for i in range(18)])
    np.testing.assert_array_equal(s, ref)


# --- smoothing -----------------------------------------------------------------

def test_smooth_hand_example():
    s = np.zeros((3, 3))
    s[1, 1] = 9.0
    out = box_smooth(s, MatchWindow(3, 3), 1)
    assert out[1, 1] == 1.0
    for i, j in [(0, 0), (0, 2), (2, 0), (2, 2)]:
        assert out[i, j] == 9.0 / 4
    # edges see a 2x3 window: 9/6
    assert out[0, 1] == 1.5


def test_zero_iterations_identity(rng):
    s = rng.uniform(0, 100, (6, 7))
    s[2, 3] = INVALID
    out = box_smooth(s, MatchWindow(3, 3), 0)
    np.testing.assert_array_equal(out, s)


@pytest.mark.parametrize("c", [0.0, 0.1, 7.0, 21675.0, 1e-7])
@pytest.mark.parametrize("iterations", [1, 5, 40])
def test_constant_fixed_point(c, iterations):
    s = np.full((9, 13), c)
    np.testing.assert_array_equal(box_smooth(s, MatchWindow(3, 5), iterations), s)


def test_sentinels_excluded_and_preserved():
    s = np.array([[1.0, INVALID, 3.0],
                  [INVALID, INVALID, INVALID],
                  [5.0, INVALID, 7.0]])
    out = box_smooth(s, MatchWindow(3, 3), 1)
    assert np.all(out[np.isinf(s)] == INVALID)
    # every finite pixel sees all four finite corners only through the centre 3x3
    assert out[0, 0] == 1.0 and out[2, 2] == 7.0
    np.testing.assert_array_equal(box_smooth(np.full((2, 2), INVALID), MatchWindow(3, 3), 3),
                                  np.full((2, 2), INVALID))


@pytest.mark.parametrize("n,m", [(1, 1), (3, 3), (1, 5), (2, 4), (4, 1)])
def test_smooth_matches_loop_oracle(rng, n, m):
    s = rng.uniform(0, 500, (8, 11))
    s[rng.random(s.shape) < 0.2] = INVALID
    expect = s
    for _ in range(3):
        expect = mean_filter_shrink(expect, n, m)
    out = box_smooth(s, MatchWindow(n, m), 3)
    np.testing.assert_array_equal(np.isinf(out), np.isinf(expect))
    np.testing.assert_allclose(out[np.isfinite(out)], expect[np.isfinite(expect)], rtol=1e-12)


def test_smooth_volume_per_slice(rng):
    vol = rng.uniform(0, 10, (3, 5, 6))
    out = smooth_volume(vol, MatchWindow(3, 3), 2)
    for d in range(3):
        np.testing.assert_array_equal(out[d], box_smooth(vol[d], MatchWindow(3, 3), 2))


slices = arrays(np.float64, st.tuples(st.integers(1, 12), st.integers(1, 12)),
                elements=st.one_of(st.floats(0, 1e5), st.just(np.inf)))


@settings(max_examples=100, deadline=None)
@given(s=slices, n=st.integers(1, 5), m=st.integers(1, 5), it=st.integers(0, 6))
def test_smooth_bounded_by_input_range(s, n, m, it):
    out = box_smooth(s, MatchWindow(n, m), it)
    fin = np.isfinite(s)
    np.testing.assert_array_equal(np.isfinite(out), fin)
    if fin.any():
        assert out[fin].min() >= s[fin].min()
        assert out[fin].max() <= s[fin].max()
