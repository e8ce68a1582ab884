"""Per-disparity error energy and iterated mean smoothing.

The volume has shape ``(d_max + 1, height, width)`` in right-image
coordinates. Entry ``[d, i, j]`` is the mean squared RGB difference between
the right-image window anchored at ``(i, j)`` and the left-image window
anchored at ``(i, j + d)``. Combinations whose window leaves either image
hold ``INVALID`` (+inf).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .imageio import check_pair

INVALID = np.inf


@dataclass(frozen=True)
class MatchWindow:
    """Matching window of ``n`` rows by ``m`` columns."""

    n: int = 1
    m: int = 1

    def __post_init__(self):
        if int(self.n) != self.n or int(self.m) != self.m:
            raise ValueError("window dimensions must be integers")
        if self.n < 1 or self.m < 1:
            raise ValueError(f"window must be at least 1x1, got {self.n}x{self.m}")

    @property
    def size(self) -> int:
        return self.n * self.m


def _integral(a: np.ndarray) -> np.ndarray:
    out = np.zeros((a.shape[0] + 1, a.shape[1] + 1), dtype=np.float64)
    np.cumsum(a, axis=0, out=out[1:, 1:])
    np.cumsum(out[1:, 1:], axis=1, out=out[1:, 1:])
    return out


def window_sums(a: np.ndarray, n: int, m: int) -> np.ndarray:
    """Sums over every n x m window fully inside ``a``, anchored top-left.

    Output shape is ``(H - n + 1, W - m + 1)``. Exact for integer-valued
    float input as long as the total stays below 2**53.
    """
    s = _integral(a)
    return s[n:, m:] - s[:-n, m:] - s[n:, :-m] + s[:-n, :-m]


def squared_residual(left, right, d: int) -> np.ndarray:
    """Channel-summed squared difference ``sum_k (L[i, j+d, k] - R[i, j, k])**2``.

    Returned for right-image columns ``0 .. W-d-1``.
    """
    w = right.shape[1]
    diff = left[:, d:, :].astype(np.float64) - right[:, :w - d, :].astype(np.float64)
    return np.einsum("ijk,ijk->ij", diff, diff)


def compute_energy_volume(left, right, win: MatchWindow, d_max: int) -> np.ndarray:
    """Error energy for every disparity ``0 .. d_max``."""
    left, right = check_pair(left, right)
    if d_max < 0:
        raise ValueError("d_max must be non-negative")
    h, w, _ = right.shape
    n, m = win.n, win.m
    vol = np.full((d_max + 1, h, w), INVALID)
    norm = 3.0 * n * m
    for d in range(d_max + 1):
        if d + m > w or n > h:
            continue
        sums = window_sums(squared_residual(left, right, d), n, m)
        vol[d, : sums.shape[0], : sums.shape[1]] = sums / norm
    return vol


def _centered_sums(a: np.ndarray, n: int, m: int) -> np.ndarray:
    """Sums over n x m windows centred on each pixel, zero outside ``a``."""
    up, left = (n - 1) // 2, (m - 1) // 2
    padded = np.pad(a, ((up, n - 1 - up), (left, m - 1 - left)))
    return window_sums(padded, n, m)


def box_smooth(slice_, win: MatchWindow, iterations: int = 10) -> np.ndarray:
    """Apply the ``n x m`` mean filter ``iterations`` times.

    The window is centred and shrinks at the image border; ``INVALID`` entries
    never enter an average and stay ``INVALID``.
    """
    if iterations < 0:
        raise ValueError("iterations must be non-negative")
    out = np.array(slice_, dtype=np.float64)
    valid = np.isfinite(out)
    if iterations == 0 or not valid.any():
        return out
    counts = _centered_sums(valid.astype(np.float64), win.n, win.m)
    lo, hi = out[valid].min(), out[valid].max()
    for _ in range(iterations):
        sums = _centered_sums(np.where(valid, out, 0.0), win.n, win.m)
        nxt = np.full_like(out, INVALID)
        nxt[valid] = sums[valid] / counts[valid]
        # true averages lie in [lo, hi]; clipping only strips rounding from the
        # running sums, which keeps constant slices exactly fixed
        np.clip(nxt, lo, hi, out=nxt, where=valid)
        out = nxt
    return out


def smooth_volume(volume: np.ndarray, win: MatchWindow, iterations: int = 10) -> np.ndarray:
    return np.stack([box_smooth(s, win, iterations) for s in volume])
