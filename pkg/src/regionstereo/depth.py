"""Depth from disparity, world coordinates, median post-filtering, PLY export."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .global_match import NE
from .imageio import as_color_image


@dataclass(frozen=True)
class CameraRig:
    """Focal length ``f`` and baseline ``t``; defaults are f=30, T=20."""

    f: float = 30.0
    t: float = 20.0

    def __post_init__(self):
        if not (self.f > 0 and self.t > 0):
            raise ValueError("focal length and baseline must be positive")


@dataclass
class PointCloud:
    points: np.ndarray  # (N, 3) float64 X, Y, Z
    colors: np.ndarray  # (N, 3) uint8 RGB

    def __len__(self):
        return len(self.points)


def depth_from_disparity(disparity, rig: CameraRig = CameraRig()) -> np.ndarray:
    """``Z = f * T / d``; NaN where the disparity is ``NE`` or zero."""
    d = np.asarray(disparity)
    ok = (d != NE) & (d > 0)
    z = np.full(d.shape, np.nan)
    z[ok] = rig.f * rig.t / d[ok].astype(np.float64)
    return z


def project_xyz(depth, rig: CameraRig, colors) -> PointCloud:
    """World points ``X = (Z - f)/f * i``, ``Y = (Z - f)/f * j`` for each depth pixel.

    ``(i, j)`` is (row, column). Colors are sampled from ``colors``, normally
    the right image.
    """
    depth = np.asarray(depth, dtype=np.float64)
    colors = as_color_image(colors)
    if colors.shape[:2] != depth.shape:
        raise ValueError(f"depth {depth.shape} and color image {colors.shape[:2]} differ")
    ii, jj = np.nonzero(np.isfinite(depth))
    z = depth[ii, jj]
    scale = (z - rig.f) / rig.f
    pts = np.column_stack([scale * ii, scale * jj, z])
    return PointCloud(points=pts, colors=colors[ii, jj].copy())


def median_filter(disparity, window: int = 5) -> np.ndarray:
    """Median over estimated pixels in a centred ``window x window`` neighbourhood.

    The window shrinks at borders and skips ``NE`` pixels. With an even number
    of candidates the lower middle value is taken, so the result always holds
    values present in the input. A window with no estimate yields ``NE``.
    """
    if window < 1 or window % 2 == 0:
        raise ValueError("median window must be a positive odd integer")
    d = np.asarray(disparity)
    if window == 1:
        return d.astype(np.int32, copy=True)
    r = window // 2
    vals = np.where(d == NE, np.nan, d.astype(np.float64))
    padded = np.pad(vals, r, constant_values=np.nan)
    win = sliding_window_view(padded, (window, window)).reshape(*d.shape, -1)
    win = np.sort(win, axis=-1)  # NaN sorts last
    count = np.isfinite(win).sum(axis=-1)
    idx = np.maximum(count - 1, 0) // 2
    med = np.take_along_axis(win, idx[..., None], axis=-1)[..., 0]
    out = np.where(count > 0, med, NE)
    return out.astype(np.int32)


def export_ply(cloud: PointCloud, path) -> None:
    """Write an ASCII PLY with x, y, z, red, green, blue vertex properties."""
    header = (
        "ply\nformat ascii 1.0\n"
        f"element vertex {len(cloud)}\n"
        "property double x\nproperty double y\nproperty double z\n"
        "property uchar red\nproperty uchar green\nproperty uchar blue\n"
        "end_header\n"
    )
    rows = np.column_stack([np.asarray(cloud.points, dtype=np.float64).reshape(-1, 3),
                            np.asarray(cloud.colors, dtype=np.float64).reshape(-1, 3)])
    with open(path, "w") as f:
        f.write(header)
        np.savetxt(f, rows, fmt=["%.17g"] * 3 + ["%d"] * 3)
