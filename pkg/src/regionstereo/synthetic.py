"""Synthetic rectified stereo pairs with known disparity.

Used by the tests, the benchmark defaults and the demo scripts. Pairs follow
the matcher's convention: a right-image pixel ``(i, j)`` with disparity ``d``
appears at ``(i, j + d)`` in the left image.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def random_texture(h: int, w: int, rng: np.random.Generator, coarse: int = 0,
                   fine_amp: float = 1.0) -> np.ndarray:
    """Random RGB texture as float in [0, 255].

    ``coarse`` > 1 mixes in blocky low-frequency color blobs of that size;
    ``fine_amp`` weights the per-pixel component.
    """
    tex = rng.uniform(0, 255, size=(h, w, 3)) * fine_amp
    if coarse > 1:
        ch, cw = -(-h // coarse) + 1, -(-w // coarse) + 1
        blobs = rng.uniform(0, 255, size=(ch, cw, 3))
        up = np.kron(blobs, np.ones((coarse, coarse, 1)))[:h, :w]
        tex = tex + up * (1.0 - fine_amp)
    return np.clip(tex, 0, 255)


def shifted_pair(h: int, w: int, shift: int, seed: int = 0):
    """Random textured pair whose left image is the right shifted by ``shift`` columns."""
    rng = np.random.default_rng(seed)
    right = rng.integers(0, 256, size=(h, w, 3), dtype=np.uint8)
    left = rng.integers(0, 256, size=(h, w, 3), dtype=np.uint8)
    left[:, shift:] = right[:, : w - shift]
    return left, right


@dataclass(frozen=True)
class Layer:
    """Fronto-parallel surface: mask in right-image coordinates plus disparity."""

    top: int
    left: int
    bottom: int
    right: int
    disparity: int
    ellipse: bool = False

    def mask(self, h: int, w: int, j0: int = 0) -> np.ndarray:
        """Coverage of rows ``0..h-1`` and columns ``j0 .. j0+w-1``."""
        ii, jj = np.mgrid[0:h, j0:j0 + w]
        if not self.ellipse:
            return (ii >= self.top) & (ii < self.bottom) & (jj >= self.left) & (jj < self.right)
        ci, cj = (self.top + self.bottom - 1) / 2, (self.left + self.right - 1) / 2
        ri, rj = (self.bottom - self.top) / 2, (self.right - self.left) / 2
        return ((ii - ci) / ri) ** 2 + ((jj - cj) / rj) ** 2 <= 1.0


def render_layers(h: int, w: int, background: int, layers, noise: float = 0.0,
                  seed: int = 0, coarse: int = 8, fine_amp: float = 0.6):
    """Render a layered scene.

    Returns ``(left, right, truth)`` where ``truth`` is the right-image
    disparity. Layers later in ``layers`` must have larger disparity (closer);
    occluded left-image regions show whatever surface is visible there.
    """
    rng = np.random.default_rng(seed)
    all_layers = [Layer(0, -10**6, h, 10**6, background)] + list(layers)
    d_hi = max(l.disparity for l in all_layers)
    pad = d_hi + 1
    # each surface carries its own texture, addressed in right-image columns
    textures = [random_texture(h, w + 2 * pad, rng, coarse, fine_amp) for _ in all_layers]
    right = np.zeros((h, w, 3))
    left = np.zeros((h, w, 3))
    truth = np.zeros((h, w), dtype=np.int32)
    wide = w + 2 * pad
    for tex, layer in zip(textures, all_layers):
        m = layer.mask(h, wide, -pad)
        m_r = m[:, pad:pad + w]
        right[m_r] = tex[:, pad:pad + w][m_r]
        truth[m_r] = layer.disparity
        d = layer.disparity
        # left column x shows right-frame column x - d
        m_l = m[:, pad - d:pad - d + w]
        left[m_l] = tex[:, pad - d:pad - d + w][m_l]
    if noise > 0:
        right = right + rng.normal(0, noise, right.shape)
        left = left + rng.normal(0, noise, left.shape)
    to8 = lambda a: np.clip(np.rint(a), 0, 255).astype(np.uint8)
    return to8(left), to8(right), truth


def middlebury_like(h: int = 288, w: int = 384, noise: float = 2.0, seed: int = 7):
    """Tsukuba-sized layered scene with disparities within 0..40."""
    sy, sx = h / 288, w / 384
    layers = [
        Layer(int(40 * sy), int(30 * sx), int(250 * sy), int(140 * sx), 9),
        Layer(int(120 * sy), int(210 * sx), int(280 * sy), int(360 * sx), 14),
        Layer(int(30 * sy), int(230 * sx), int(110 * sy), int(330 * sx), 18, ellipse=True),
        Layer(int(150 * sy), int(90 * sx), int(230 * sy), int(200 * sx), 24, ellipse=True),
        Layer(int(60 * sy), int(160 * sx), int(120 * sy), int(200 * sx), 31),
    ]
    return render_layers(h, w, background=4, layers=layers, noise=noise, seed=seed)


def two_region_pair(h: int = 48, w: int = 64, shifts=(2, 7), seed: int = 3):
    """Background at ``shifts[0]`` with a central block at ``shifts[1]``; no noise."""
    block = Layer(h // 4, w // 3, 3 * h // 4, 2 * w // 3, shifts[1])
    return render_layers(h, w, background=shifts[0], layers=[block], noise=0.0,
                         seed=seed, coarse=1, fine_amp=1.0)
