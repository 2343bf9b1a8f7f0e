"""Pure-numpy convolution fallback, used when the compiled core is absent.

Computes the identical response through zero-padded FFTs instead of the
direct spatial loop; the two agree to well below 1e-9 (enforced by the
backend-agreement tests), so either may serve the engine.
"""

from __future__ import annotations

import numpy as np


def _next_smooth(n: int) -> int:
    """Smallest 5-smooth integer >= n (fast FFT length)."""
    while True:
        k = n
        for p in (2, 3, 5):
            while k % p == 0:
                k //= p
        if k == 1:
            return n
        n += 1


def correlate_valid(padded: np.ndarray, kernel_conj: np.ndarray) -> np.ndarray:
    """Valid-mode correlation of a padded real image with conjugated taps.

    Same contract as the compiled core: output shape is
    ``padded.shape - kernel.shape + 1``.
    """
    kh, kw = kernel_conj.shape
    oh = padded.shape[0] - kh + 1
    ow = padded.shape[1] - kw + 1
    # correlation == convolution with the doubly flipped kernel
    flipped = kernel_conj[::-1, ::-1]
    sh = _next_smooth(padded.shape[0] + kh - 1)
    sw = _next_smooth(padded.shape[1] + kw - 1)
    spectrum = np.fft.fft2(padded, (sh, sw)) * np.fft.fft2(flipped, (sh, sw))
    full = np.fft.ifft2(spectrum)
    return np.ascontiguousarray(full[kh - 1:kh - 1 + oh, kw - 1:kw - 1 + ow])
