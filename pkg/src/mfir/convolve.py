"""Backend selection for the convolution core.

At import time the compiled extension is preferred; the numpy FFT fallback
takes over when the extension is not built.  Set ``MFIR_CONV_BACKEND`` to
``compiled`` or ``numpy`` to force one side (the benchmark and the
agreement tests do this).
"""

from __future__ import annotations

import os

import numpy as np

try:
    from . import _conv_ext
except ImportError:  # extension not built; pure fallback
    _conv_ext = None

from . import _conv_numpy
from .errors import InvalidParams


def _compiled_correlate(padded: np.ndarray, kernel_conj: np.ndarray) -> np.ndarray:
    kh, kw = kernel_conj.shape
    out_re = np.empty((padded.shape[0] - kh + 1, padded.shape[1] - kw + 1))
    out_im = np.empty_like(out_re)
    _conv_ext.correlate_valid(
        np.ascontiguousarray(padded),
        np.ascontiguousarray(kernel_conj.real),
        np.ascontiguousarray(kernel_conj.imag),
        out_re,
        out_im,
    )
    return out_re + 1j * out_im


def _select_backend() -> str:
    forced = os.environ.get("MFIR_CONV_BACKEND", "").strip().lower()
    if forced == "compiled":
        if _conv_ext is None:
            raise ImportError("MFIR_CONV_BACKEND=compiled but mfir._conv_ext is not built")
        return "compiled"
    if forced == "numpy":
        return "numpy"
    if forced:
        raise ValueError(f"unknown MFIR_CONV_BACKEND {forced!r}")
    return "compiled" if _conv_ext is not None else "numpy"


BACKEND = _select_backend()


def backend_name() -> str:
    """Active backend: ``compiled`` (direct spatial loop) or ``numpy`` (FFT)."""
    return BACKEND


def correlate_same(image: np.ndarray, kernel_conj: np.ndarray, backend: str | None = None) -> np.ndarray:
    """Same-size correlation of ``image`` with conjugated kernel taps.

    The image is reflect-padded (edge sample not repeated) by the kernel
    radius so the output matches the input dimensions.

    Args:
        image: 2-D float64 array.
        kernel_conj: odd-sided complex tap grid, already conjugated.
        backend: force ``compiled`` or ``numpy`` for this call.

    Returns:
        Complex response array with ``image.shape``.
    """
    image = np.asarray(image, dtype=np.float64)
    if image.ndim != 2:
        raise InvalidParams(f"image must be 2-D, got shape {image.shape}")
    kh, kw = kernel_conj.shape
    if kh % 2 == 0 or kw % 2 == 0:
        raise InvalidParams(f"kernel sides must be odd, got {kernel_conj.shape}")
    ry, rx = kh // 2, kw // 2
    if ry >= image.shape[0] or rx >= image.shape[1]:
        raise InvalidParams(
            f"kernel radius ({ry}, {rx}) too large for image {image.shape}; "
            "reflect padding needs radius < image side"
        )
    padded = np.pad(image, ((ry, ry), (rx, rx)), mode="reflect")
    which = backend or BACKEND
    if which == "compiled":
        return _compiled_correlate(padded, kernel_conj)
    return _conv_numpy.correlate_valid(padded, np.ascontiguousarray(kernel_conj))
