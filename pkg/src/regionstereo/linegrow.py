"""Scanline root selection and line growing.

Each row is scanned left to right. A root is the first unassigned pixel whose
best line-window energy is within the threshold; its disparity then grows
rightward while the next pixel's energy at that same disparity stays within
the threshold. Rows never interact.
"""
from __future__ import annotations

import os
from collections import Counter
from dataclasses import dataclass
from enum import IntEnum

import numba
import numpy as np

if "NUMBA_THREADING_LAYER" not in os.environ:
    # skip numba's TBB probe, which warns on older TBB installs
    numba.config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]

from .energy import MatchWindow
from .global_match import NE
from .imageio import check_pair


class PointStatus(IntEnum):
    NOT_PROCESSED = 0
    REGION = 1
    ROOT = 2
    IDLE = 3


@dataclass(frozen=True)
class GrowConfig:
    win: MatchWindow = MatchWindow(1, 5)
    d_max: int = 40
    v_lg: float = 60.0

    def __post_init__(self):
        if self.win.n != 1:
            raise ValueError("line growing needs a line window (n = 1)")
        if self.d_max < 0:
            raise ValueError("d_max must be non-negative")
        if not self.v_lg >= 0:
            raise ValueError("v_lg must be non-negative")


@numba.njit(cache=True, inline="always")
def _energy(left, right, i, j, d, m):
    s = 0.0
    for y in range(j, j + m):
        for k in range(3):
            diff = left[i, y + d, k] - right[i, y, k]
            s += diff * diff
    return s / (3.0 * m)


@numba.njit(cache=True, parallel=True)
def _grow(left, right, m, d_max, v_lg, disp, status):
    h, w = right.shape[0], right.shape[1]
    for i in numba.prange(h):
        j = 0
        while j < w:
            # root selection: best disparity whose window fits both images
            best_d = -1
            best_e = np.inf
            for d in range(min(d_max, w - m - j) + 1):
                e = _energy(left, right, i, j, d, m)
                if e < best_e:
                    best_e = e
                    best_d = d
            if best_d < 0 or best_e > v_lg:
                status[i, j] = 3
                j += 1
                continue
            status[i, j] = 2
            disp[i, j] = best_d
            j += 1
            # growing: only the region disparity is tested at each next pixel
            while j < w and j + best_d + m <= w:
                if _energy(left, right, i, j, best_d, m) > v_lg:
                    break
                status[i, j] = 1
                disp[i, j] = best_d
                j += 1


def line_grow_match(left, right, cfg: GrowConfig = GrowConfig()):
    """Line-growing stereo matcher.

    Returns the disparity map (``NE`` at idle pixels) and the point-status
    map with values from :class:`PointStatus`.
    """
    left, right = check_pair(left, right)
    h, w, _ = right.shape
    disp = np.full((h, w), NE, dtype=np.int32)
    status = np.zeros((h, w), dtype=np.uint8)
    _grow(left.astype(np.float64), right.astype(np.float64),
          int(cfg.win.m), int(cfg.d_max), float(cfg.v_lg), disp, status)
    return disp, status


def warmup() -> None:
    """Compile the growing kernel so later calls measure matching only."""
    img = np.zeros((1, 2, 3), dtype=np.uint8)
    line_grow_match(img, img, GrowConfig(MatchWindow(1, 1), 1, 0.0))


def segment_lengths(status) -> Counter:
    """Histogram ``{length: count}`` of maximal root+region runs along rows.

    A run starts at a root and continues through the region points after it.
    """
    status = np.asarray(status)
    hist: Counter = Counter()
    for row in status:
        run = 0
        for s in row:
            if s == PointStatus.ROOT:
                if run:
                    hist[run] += 1
                run = 1
            elif s == PointStatus.REGION and run:
                run += 1
            else:
                if run:
                    hist[run] += 1
                run = 0
        if run:
            hist[run] += 1
    return hist


def mean_segment_length(hist: Counter) -> float:
    total = sum(hist.values())
    if total == 0:
        return 0.0
    return sum(length * count for length, count in hist.items()) / total


def set_threads_from_env() -> None:
    """Honour ``STEREO_THREADS`` (0 or unset means numba's default)."""
    value = os.environ.get("STEREO_THREADS", "0").strip() or "0"
    n = int(value)
    if n < 0:
        raise ValueError("STEREO_THREADS must be >= 0")
    if n:
        numba.set_num_threads(min(n, numba.config.NUMBA_NUM_THREADS))
