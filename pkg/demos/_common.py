"""Shared helpers for the demo scripts."""
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

OUT = Path(__file__).resolve().parent / "output"
OUT.mkdir(exist_ok=True)


def load_pair():
    """Middlebury Motorcycle pair from scikit-image if available, else a synthetic scene."""
    try:
        from skimage.data import stereo_motorcycle
    except ImportError:
        from regionstereo.synthetic import middlebury_like
        left, right, truth = middlebury_like()
        return left, right, truth.astype(float)
    left, right, truth = stereo_motorcycle()
    return left[::2, ::2], right[::2, ::2], truth[::2, ::2] / 2
