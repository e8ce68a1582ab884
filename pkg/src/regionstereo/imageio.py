"""Image data model and file I/O.

Color images are ``(height, width, 3)`` uint8 arrays. Gray maps are
``(height, width)`` float arrays; non-finite entries mark "no estimate".
Only 8-bit data is supported: PPM (P6/P3) and truecolor PNG for color input,
PGM (P5/P2) and 8-bit PNG for gray input, PGM P5 for gray output.
"""
from __future__ import annotations

from pathlib import Path

import numpy as np
from PIL import Image


class ImageFormatError(ValueError):
    """Raised for unreadable, unsupported or malformed image files."""


def as_color_image(img) -> np.ndarray:
    """Validate ``img`` as an 8-bit RGB image and return it as uint8."""
    arr = np.asarray(img)
    if arr.ndim != 3 or arr.shape[2] != 3:
        raise ValueError(f"expected an (H, W, 3) color image, got shape {arr.shape}")
    if arr.shape[0] == 0 or arr.shape[1] == 0:
        raise ValueError("empty image")
    if arr.dtype != np.uint8:
        if np.any(arr < 0) or np.any(arr > 255):
            raise ValueError("color samples must lie in [0, 255]")
        if not np.all(arr == np.round(arr)):
            raise ValueError("color samples must be integral")
        arr = arr.astype(np.uint8)
    return arr


def check_pair(left, right) -> tuple[np.ndarray, np.ndarray]:
    left = as_color_image(left)
    right = as_color_image(right)
    if left.shape != right.shape:
        raise ValueError(
            f"stereo pair dimension mismatch: left {left.shape[:2]} vs right {right.shape[:2]}"
        )
    return left, right


# --- netpbm -------------------------------------------------------------------

def _tokens(buf: bytes, count: int) -> tuple[list[int], int]:
    """Read ``count`` whitespace separated header integers, skipping comments.

    Returns the integers and the offset just past the last one.
    """
    out = []
    pos = 0
    n = len(buf)
    while len(out) < count:
        while pos < n and buf[pos:pos + 1].isspace():
            pos += 1
        if pos < n and buf[pos:pos + 1] == b"#":
            while pos < n and buf[pos:pos + 1] not in (b"\n", b"\r"):
                pos += 1
            continue
        start = pos
        while pos < n and not buf[pos:pos + 1].isspace() and buf[pos:pos + 1] != b"#":
            pos += 1
        if start == pos:
            raise ImageFormatError("truncated netpbm header")
        try:
            out.append(int(buf[start:pos]))
        except ValueError:
            raise ImageFormatError(f"bad netpbm header token {buf[start:pos]!r}") from None
    return out, pos


def _read_netpbm(buf: bytes) -> np.ndarray:
    magic = buf[:2]
    if magic not in (b"P2", b"P3", b"P5", b"P6"):
        raise ImageFormatError(f"not a PGM/PPM file (magic {magic!r})")
    channels = 3 if magic in (b"P3", b"P6") else 1
    (width, height, maxval), pos = _tokens(buf[2:], 3)
    pos += 2
    if width <= 0 or height <= 0:
        raise ImageFormatError("non-positive image dimensions")
    if maxval != 255:
        raise ImageFormatError(f"only 8-bit netpbm is supported (maxval {maxval})")
    count = width * height * channels
    if magic in (b"P5", b"P6"):
        # exactly one whitespace byte separates the header from raster data
        data = np.frombuffer(buf, dtype=np.uint8, count=count, offset=pos + 1) \
            if len(buf) >= pos + 1 + count else None
        if data is None:
            raise ImageFormatError("truncated raster data")
    else:
        values, _ = _tokens(buf[pos:], count)
        data = np.asarray(values)
        if data.min() < 0 or data.max() > 255:
            raise ImageFormatError("sample out of range")
        data = data.astype(np.uint8)
    shape = (height, width, 3) if channels == 3 else (height, width)
    return data.reshape(shape).copy()


def _read_any(path) -> np.ndarray:
    path = Path(path)
    try:
        buf = path.read_bytes()
    except OSError as exc:
        raise ImageFormatError(f"cannot read {path}: {exc}") from exc
    if buf[:1] == b"P":
        return _read_netpbm(buf)
    if buf[:8] == b"\x89PNG\r\n\x1a\n":
        with Image.open(path) as im:
            if im.mode == "RGBA":
                im = im.convert("RGB")
            if im.mode not in ("RGB", "L"):
                raise ImageFormatError(f"unsupported PNG mode {im.mode!r} in {path}")
            return np.asarray(im, dtype=np.uint8).copy()
    raise ImageFormatError(f"unsupported image format: {path}")


def load_color(path) -> np.ndarray:
    img = _read_any(path)
    if img.ndim != 3:
        raise ImageFormatError(f"{path} is not a color image")
    return img


def load_gray(path) -> np.ndarray:
    """Load an 8-bit gray image (PGM or PNG) as uint8."""
    img = _read_any(path)
    if img.ndim != 2:
        raise ImageFormatError(f"{path} is not a grayscale image")
    return img


def load_stereo_pair(left_path, right_path) -> tuple[np.ndarray, np.ndarray]:
    """Load a rectified stereo pair; both images must have equal dimensions."""
    left = load_color(left_path)
    right = load_color(right_path)
    if left.shape != right.shape:
        raise ValueError(
            f"stereo pair dimension mismatch: {left_path} is "
            f"{left.shape[1]}x{left.shape[0]}, {right_path} is {right.shape[1]}x{right.shape[0]}"
        )
    return left, right


def save_ppm(img, path) -> None:
    img = as_color_image(img)
    h, w, _ = img.shape
    with open(path, "wb") as f:
        f.write(f"P6\n{w} {h}\n255\n".encode("ascii"))
        f.write(np.ascontiguousarray(img).tobytes())


def to_gray_bytes(values, normalize: bool = False) -> np.ndarray:
    """Convert a real-valued map to 8-bit samples.

    Non-finite entries become 0. With ``normalize`` the finite range is
    stretched linearly onto [0, 255]; otherwise values are rounded and clipped.
    """
    values = np.asarray(values, dtype=np.float64)
    finite = np.isfinite(values)
    out = np.zeros(values.shape, dtype=np.float64)
    if finite.any():
        v = values[finite]
        if normalize:
            lo, hi = v.min(), v.max()
            v = (v - lo) * (255.0 / (hi - lo)) if hi > lo else np.zeros_like(v)
        out[finite] = v
    return np.clip(np.rint(out), 0, 255).astype(np.uint8)


def save_gray(values, path, normalize: bool = False) -> None:
    """Write a gray map as binary PGM (P5)."""
    values = np.asarray(values)
    if values.ndim != 2 or values.size == 0:
        raise ValueError(f"expected a non-empty 2-D map, got shape {values.shape}")
    if values.dtype == np.uint8 and not normalize:
        data = values
    else:
        data = to_gray_bytes(values, normalize)
    h, w = data.shape
    with open(path, "wb") as f:
        f.write(f"P5\n{w} {h}\n255\n".encode("ascii"))
        f.write(np.ascontiguousarray(data).tobytes())
