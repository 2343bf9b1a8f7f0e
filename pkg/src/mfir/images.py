"""Image decoding and canonical working representations.

Grayscale analysis images are square float64 arrays in [0, 1] at a fixed
resolution; color images are kept at native resolution as (H, W, 3) float64
arrays in [0, 1].
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import UnreadableFile, UnsupportedFormat

# Side length used for texture analysis throughout the engine.  Large enough
# for the lowest-frequency filters of the default bank, small enough to keep
# extraction fast.
ANALYSIS_SIDE = 128

_SUPPORTED_FORMATS = {"PNG", "JPEG"}


def _decode_rgb(path: str | Path) -> np.ndarray:
    """Decode a PNG/JPEG file to an (H, W, 3) float64 array in [0, 1]."""
    try:
        with Image.open(path) as img:
            if img.format not in _SUPPORTED_FORMATS:
                raise UnsupportedFormat(f"{path}: format {img.format!r} not supported (PNG/JPEG only)")
            rgb = img.convert("RGB")
            arr = np.asarray(rgb, dtype=np.float64) / 255.0
    except UnsupportedFormat:
        raise
    except (UnidentifiedImageError, OSError, ValueError) as exc:
        raise UnreadableFile(f"{path}: {exc}") from exc
    if arr.size == 0:
        raise UnreadableFile(f"{path}: empty image")
    return arr


def resize_bilinear(values: np.ndarray, height: int, width: int) -> np.ndarray:
    """Bilinear resample of a 2-D array onto a (height, width) grid.

    Uses pixel-center alignment, so resampling to the source size is the
    identity.  Output is clipped to [0, 1].
    """
    src_h, src_w = values.shape
    if (src_h, src_w) == (height, width):
        return values.copy()

    ys = (np.arange(height) + 0.5) * (src_h / height) - 0.5
    xs = (np.arange(width) + 0.5) * (src_w / width) - 0.5
    ys = np.clip(ys, 0.0, src_h - 1.0)
    xs = np.clip(xs, 0.0, src_w - 1.0)

    y0 = np.floor(ys).astype(np.intp)
    x0 = np.floor(xs).astype(np.intp)
    y1 = np.minimum(y0 + 1, src_h - 1)
    x1 = np.minimum(x0 + 1, src_w - 1)
    fy = (ys - y0)[:, None]
    fx = (xs - x0)[None, :]

    top = values[np.ix_(y0, x0)] * (1.0 - fx) + values[np.ix_(y0, x1)] * fx
    bot = values[np.ix_(y1, x0)] * (1.0 - fx) + values[np.ix_(y1, x1)] * fx
    out = top * (1.0 - fy) + bot * fy
    return np.clip(out, 0.0, 1.0)


def load_grayscale(path: str | Path, side: int = ANALYSIS_SIDE) -> np.ndarray:
    """Load an image as a ``side`` x ``side`` float64 luminance array in [0, 1].

    Luminance uses the BT.601 weights 0.299/0.587/0.114, evaluated in a form
    that is exact for gray pixels (R=G=B maps to that exact value), then the
    result is bilinearly resampled to the requested side.

    Raises:
        UnreadableFile: missing or undecodable file.
        UnsupportedFormat: decodable, but not PNG or JPEG.
    """
    if side <= 0:
        raise ValueError(f"side must be positive, got {side}")
    rgb = _decode_rgb(path)
    r = rgb[..., 0]
    g = rgb[..., 1]
    b = rgb[..., 2]
    # algebraically 0.299R + 0.587G + 0.114B; this grouping returns exactly v
    # for pixels with R=G=B=v, so saturated and gray inputs survive untouched
    lum = r + 0.587 * (g - r) + 0.114 * (b - r)
    lum = np.clip(lum, 0.0, 1.0)
    return resize_bilinear(lum, side, side)


def load_rgb(path: str | Path) -> np.ndarray:
    """Load an image at native resolution as (H, W, 3) float64 in [0, 1].

    Raises:
        UnreadableFile: missing or undecodable file.
        UnsupportedFormat: decodable, but not PNG or JPEG.
    """
    return _decode_rgb(path)
