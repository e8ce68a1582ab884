"""Global error-energy minimisation by iterated smoothing.

Disparity maps are int32 arrays in right-image coordinates; ``NE`` (-1) marks
pixels without an estimate.
"""
from __future__ import annotations

import numpy as np

from .energy import MatchWindow, compute_energy_volume, smooth_volume
from .imageio import check_pair

NE = -1


def wta_select(volume) -> np.ndarray:
    """Per-pixel argmin over finite energies; ties go to the smallest disparity."""
    volume = np.asarray(volume, dtype=np.float64)
    if volume.ndim != 3 or volume.shape[0] == 0:
        raise ValueError("expected a non-empty (D, H, W) energy volume")
    finite = np.isfinite(volume)
    # np.argmin returns the first minimum, which is the smallest-d tie-break
    disp = np.argmin(np.where(finite, volume, np.inf), axis=0).astype(np.int32)
    disp[~finite.any(axis=0)] = NE
    return disp


def global_match(left, right, win: MatchWindow, d_max: int = 40, iterations: int = 10,
                 smooth_win: MatchWindow | None = None):
    """Disparity by winner-take-all over the smoothed energy volume.

    Parameters
    ----------
    left, right : (H, W, 3) uint8 arrays
        Rectified pair; the result is registered to ``right``.
    win : MatchWindow
        Block-matching window.
    d_max : int
        Largest disparity searched.
    iterations : int
        Number of mean-filter passes applied to each energy slice.
    smooth_win : MatchWindow, optional
        Averaging window; defaults to the matching window.

    Returns
    -------
    disparity : (H, W) int32 array with ``NE`` where no disparity fits
    volume : (d_max + 1, H, W) smoothed energy volume
    """
    left, right = check_pair(left, right)
    volume = compute_energy_volume(left, right, win, d_max)
    volume = smooth_volume(volume, smooth_win or win, iterations)
    return wta_select(volume), volume
