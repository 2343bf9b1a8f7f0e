"""Normalized HSV color histograms.

Pixels are quantized on an 8x3x3 hue/saturation/value grid (72 bins); the
histogram sums to 1 and is the operand of the Jensen-Shannon distance on
the color channel.
"""

from __future__ import annotations

import numpy as np

from .errors import EmptyImage

HUE_BINS = 8
SAT_BINS = 3
VAL_BINS = 3
N_BINS = HUE_BINS * SAT_BINS * VAL_BINS
SCHEME = "hsv-8x3x3"


def rgb_to_hsv(rgb: np.ndarray) -> np.ndarray:
    """Vectorized RGB -> HSV with all channels in [0, 1].

    Achromatic pixels (max == min) take hue 0 by convention; black pixels
    additionally take saturation 0.
    """
    rgb = np.asarray(rgb, dtype=np.float64)
    r, g, b = rgb[..., 0], rgb[..., 1], rgb[..., 2]
    maxc = np.max(rgb, axis=-1)
    minc = np.min(rgb, axis=-1)
    delta = maxc - minc

    hue = np.zeros_like(maxc)
    chromatic = delta > 0
    safe = np.where(chromatic, delta, 1.0)
    rc = (maxc - r) / safe
    gc = (maxc - g) / safe
    bc = (maxc - b) / safe
    hue = np.where(maxc == r, bc - gc, hue)
    hue = np.where((maxc == g) & (g != r), 2.0 + rc - bc, hue)
    hue = np.where((maxc == b) & (b != r) & (b != g), 4.0 + gc - rc, hue)
    hue = np.where(chromatic, (hue / 6.0) % 1.0, 0.0)

    sat = np.where(maxc > 0, delta / np.where(maxc > 0, maxc, 1.0), 0.0)
    return np.stack([hue, sat, maxc], axis=-1)


def extract_color_histogram(image: np.ndarray) -> np.ndarray:
    """Normalized 72-bin HSV histogram of an (H, W, 3) image in [0, 1].

    Bin index is ``hue_bin * 9 + sat_bin * 3 + val_bin``; counts are divided
    by the pixel count so the bins sum to 1.

    Raises:
        EmptyImage: image has no pixels.
    """
    image = np.asarray(image, dtype=np.float64)
    if image.size == 0:
        raise EmptyImage("cannot build a histogram from an empty image")
    hsv = rgb_to_hsv(image.reshape(-1, 3))
    h_idx = np.minimum((hsv[:, 0] * HUE_BINS).astype(np.intp), HUE_BINS - 1)
    s_idx = np.minimum((hsv[:, 1] * SAT_BINS).astype(np.intp), SAT_BINS - 1)
    v_idx = np.minimum((hsv[:, 2] * VAL_BINS).astype(np.intp), VAL_BINS - 1)
    flat = h_idx * (SAT_BINS * VAL_BINS) + s_idx * VAL_BINS + v_idx
    counts = np.bincount(flat, minlength=N_BINS).astype(np.float64)
    return counts / hsv.shape[0]
