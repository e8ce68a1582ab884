"""Disparity-map energy, reliability score and average-error thresholding.

Map energies are float arrays with NaN at "no estimate" pixels.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .energy import MatchWindow, squared_residual, window_sums
from .global_match import NE
from .imageio import check_pair


class NoEstimatesError(ValueError):
    """The energy map holds no estimated pixel."""


class MonotonicityError(AssertionError):
    """Reliability decreased when the tolerance coefficient decreased."""


@dataclass(frozen=True)
class ReliabilityReport:
    r_d: float
    s_d: int
    mean_energy: float
    ve: Optional[float] = None
    alpha: Optional[float] = None
    retained_fraction: Optional[float] = None

    def as_row(self) -> dict:
        return {
            "r_d": self.r_d, "s_d": self.s_d, "mean_energy": self.mean_energy,
            "ve": self.ve, "alpha": self.alpha, "retained_fraction": self.retained_fraction,
        }

    def __str__(self):
        lines = [f"R_d = {self.r_d:.6g}", f"S_d = {self.s_d}",
                 f"mean energy = {self.mean_energy:.6g}"]
        if self.ve is not None:
            lines += [f"alpha = {self.alpha:g}", f"Ve = {self.ve:.6g}",
                      f"retained = {self.retained_fraction:.4f}"]
        return "\n".join(lines)


def map_energy(left, right, disparity, win: MatchWindow) -> np.ndarray:
    """Windowed error energy of each pixel at its assigned disparity.

    Uses the same window and normalisation as the matching energy, so values
    are bitwise equal to the corresponding energy-volume entries.
    """
    left, right = check_pair(left, right)
    disparity = np.asarray(disparity)
    h, w, _ = right.shape
    if disparity.shape != (h, w):
        raise ValueError(f"disparity shape {disparity.shape} does not match images {(h, w)}")
    n, m = win.n, win.m
    out = np.full((h, w), np.nan)
    norm = 3.0 * n * m
    for d in np.unique(disparity[disparity != NE]):
        d = int(d)
        if d < 0 or d + m > w or n > h:
            continue
        sums = window_sums(squared_residual(left, right, d), n, m) / norm
        sel = disparity[: sums.shape[0], : sums.shape[1]] == d
        out[: sums.shape[0], : sums.shape[1]][sel] = sums[sel]
    return out


def reliability(e_d) -> ReliabilityReport:
    """Reciprocal mean energy over estimated pixels (``+inf`` if the mean is 0)."""
    e_d = np.asarray(e_d, dtype=np.float64)
    est = e_d[np.isfinite(e_d)]
    if est.size == 0:
        raise NoEstimatesError("energy map has no estimated pixels")
    mean = float(est.mean())
    r_d = np.inf if mean == 0 else 1.0 / mean
    return ReliabilityReport(r_d=r_d, s_d=int(est.size), mean_energy=mean)


def filter_unreliable(disparity, e_d, alpha: float = 1.0):
    """Drop estimates whose energy exceeds ``alpha`` times the mean energy.

    The threshold always comes from the unfiltered ``e_d``. Dropped pixels
    become ``NE`` in the disparity map and NaN in the energy map.

    Returns ``(filtered_disparity, filtered_energy, report)``; the report
    describes the filtered energy.
    """
    if not alpha >= 0:
        raise ValueError("alpha must be non-negative")
    disparity = np.asarray(disparity)
    e_d = np.asarray(e_d, dtype=np.float64)
    if disparity.shape != e_d.shape:
        raise ValueError("disparity and energy maps differ in shape")
    before = reliability(e_d)
    ve = alpha * before.mean_energy
    keep = np.isfinite(e_d) & (e_d <= ve)
    d_f = np.where(keep, disparity, NE).astype(np.int32)
    e_f = np.where(keep, e_d, np.nan)
    after = reliability(e_f)
    report = ReliabilityReport(
        r_d=after.r_d, s_d=after.s_d, mean_energy=after.mean_energy,
        ve=ve, alpha=float(alpha), retained_fraction=after.s_d / before.s_d,
    )
    return d_f, e_f, report


def verify_monotonicity(disparity, e_d, alphas: Sequence[float]) -> list[float]:
    """Filtered reliability for each of a strictly decreasing list of alphas.

    Each alpha filters the same unfiltered input. Raises
    :class:`MonotonicityError` if reliability ever drops as alpha decreases.
    """
    alphas = [float(a) for a in alphas]
    if not alphas:
        raise ValueError("need at least one alpha")
    if any(a < 0 for a in alphas):
        raise ValueError("alphas must be non-negative")
    if any(b >= a for a, b in zip(alphas, alphas[1:])):
        raise ValueError("alphas must be strictly decreasing")
    rs = [filter_unreliable(disparity, e_d, a)[2].r_d for a in alphas]
    for k in range(1, len(rs)):
        if rs[k] < rs[k - 1]:
            raise MonotonicityError(
                f"R_d fell from {rs[k - 1]!r} (alpha={alphas[k - 1]}) "
                f"to {rs[k]!r} (alpha={alphas[k]})"
            )
    return rs
