"""Gabor filter bank construction and texture statistics.

The bank is the standard dyadic family: a Gaussian-enveloped complex
sinusoid scaled over geometrically spaced center frequencies and rotated
over evenly spaced orientations, with envelope widths chosen so that
neighboring filters' half-magnitude frequency contours touch.  Each image
is reduced to the mean and standard deviation of the response magnitude
per filter.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .convolve import correlate_same
from .errors import InvalidParams

_TWO_LN2 = 2.0 * np.log(2.0)


@dataclass(frozen=True)
class GaborBankParams:
    """Parameters of the dyadic filter family.

    ``scales`` geometric frequency steps from ``u_low`` to ``u_high``
    (cycles/pixel), ``orientations`` angles evenly spread over [0, pi),
    square kernels of side ``2 * kernel_radius + 1``.
    """

    scales: int = 4
    orientations: int = 6
    u_low: float = 0.05
    u_high: float = 0.4
    kernel_radius: int = 15

    def validate(self) -> None:
        if self.scales < 2:
            raise InvalidParams(f"scales must be >= 2, got {self.scales}")
        if self.orientations < 1:
            raise InvalidParams(f"orientations must be >= 1, got {self.orientations}")
        if not (0.0 < self.u_low < self.u_high < 0.5):
            raise InvalidParams(
                f"need 0 < u_low < u_high < 0.5, got u_low={self.u_low}, u_high={self.u_high}"
            )
        if self.kernel_radius < 1:
            raise InvalidParams(f"kernel_radius must be >= 1, got {self.kernel_radius}")

    @property
    def n_features(self) -> int:
        """Texture vector length: mean and std per filter."""
        return 2 * self.scales * self.orientations


@dataclass(frozen=True)
class GaborKernel:
    """One filter of the bank: complex taps plus its tuning metadata."""

    scale: int
    orientation: int
    frequency: float  # center frequency, cycles/pixel
    angle: float      # radians
    taps: np.ndarray = field(repr=False)  # complex128, odd square grid

    def __post_init__(self):
        self.taps.setflags(write=False)


def build_filter_bank(params: GaborBankParams) -> list[GaborKernel]:
    """Construct the scaled/rotated filter family.

    Filter (m, n) has center frequency ``u_low * a**m`` with
    ``a = (u_high/u_low)**(1/(scales-1))`` and orientation ``n*pi/orientations``.
    Envelope widths follow the half-magnitude contour-touching rule; with a
    single orientation the cross-carrier width defaults to the radial one.
    Every kernel has its complex tap mean subtracted so that flat image
    regions produce zero response.

    Returns kernels ordered by scale, orientation varying fastest.
    """
    params.validate()
    m_scales, n_orient = params.scales, params.orientations
    a = (params.u_high / params.u_low) ** (1.0 / (m_scales - 1))

    coords = np.arange(-params.kernel_radius, params.kernel_radius + 1, dtype=np.float64)
    xx, yy = np.meshgrid(coords, coords)

    kernels = []
    for m in range(m_scales):
        freq = params.u_low * a**m
        sigma_u = (a - 1.0) * freq / ((a + 1.0) * np.sqrt(_TWO_LN2))
        if n_orient > 1:
            num = freq - _TWO_LN2 * sigma_u**2 / freq
            den = np.sqrt(_TWO_LN2 - _TWO_LN2**2 * sigma_u**2 / freq**2)
            sigma_v = np.tan(np.pi / (2.0 * n_orient)) * num / den
        else:
            sigma_v = sigma_u
        sigma_x = 1.0 / (2.0 * np.pi * sigma_u)
        sigma_y = 1.0 / (2.0 * np.pi * sigma_v)
        amplitude = 1.0 / (2.0 * np.pi * sigma_x * sigma_y)
        for n in range(n_orient):
            angle = n * np.pi / n_orient
            xr = xx * np.cos(angle) + yy * np.sin(angle)
            yr = -xx * np.sin(angle) + yy * np.cos(angle)
            envelope = np.exp(-0.5 * (xr**2 / sigma_x**2 + yr**2 / sigma_y**2))
            carrier = np.exp(2j * np.pi * freq * xr)
            taps = amplitude * envelope * carrier
            taps = taps - taps.mean()
            kernels.append(GaborKernel(scale=m, orientation=n, frequency=freq,
                                       angle=angle, taps=taps))
    return kernels


def convolve_response(image: np.ndarray, kernel: GaborKernel) -> np.ndarray:
    """Filter response of a grayscale image: same-size, reflect-padded.

    The image is correlated with the conjugated taps, so a unit impulse
    reproduces the conjugated, doubly flipped kernel around its position.
    """
    return correlate_same(image, np.conj(kernel.taps))


def texture_stats(response: np.ndarray) -> tuple[float, float]:
    """Mean and population standard deviation of the response magnitude.

    Both are normalized by pixel count so the statistics are comparable
    across image resolutions.
    """
    if response.size == 0:
        raise ValueError("response has no samples")
    mag = np.abs(response)
    return float(mag.mean()), float(mag.std())


def extract_texture_vector(image: np.ndarray, bank: list[GaborKernel]) -> np.ndarray:
    """Texture feature of an image under a filter bank.

    Entries are [mean_00, std_00, mean_01, std_01, ...] following the bank
    order (orientation fastest).
    """
    if not bank:
        raise InvalidParams("filter bank is empty")
    image = np.asarray(image, dtype=np.float64)
    out = np.empty(2 * len(bank))
    for i, kernel in enumerate(bank):
        mean, std = texture_stats(convolve_response(image, kernel))
        out[2 * i] = mean
        out[2 * i + 1] = std
    return out
