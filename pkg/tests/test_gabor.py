"""Filter bank construction, responses, and texture statistics."""

import numpy as np
import pytest

from mfir.errors import InvalidParams
from mfir.gabor import (
    GaborBankParams,
    build_filter_bank,
    convolve_response,
    extract_texture_vector,
    texture_stats,
)


def grating(side: int, freq: float, theta: float, phase: float = 0.0) -> np.ndarray:
    coords = np.arange(side, dtype=np.float64)
    xx, yy = np.meshgrid(coords, coords)
    return 0.5 + 0.5 * np.cos(2 * np.pi * freq * (xx * np.cos(theta) + yy * np.sin(theta)) + phase)


class TestBankConstruction:
    def test_default_bank_shape_and_anchors(self):
        params = GaborBankParams()
        bank = build_filter_bank(params)
        assert len(bank) == 24
        first = bank[0]
        assert (first.scale, first.orientation) == (0, 0)
        assert first.frequency == pytest.approx(0.05, abs=1e-15)
        assert first.angle == 0.0
        # orientation varies fastest
        assert [(k.scale, k.orientation) for k in bank[:7]] == [
            (0, 0), (0, 1), (0, 2), (0, 3), (0, 4), (0, 5), (1, 0)
        ]

    def test_two_scale_single_orientation_frequency_ladder(self):
        bank = build_filter_bank(GaborBankParams(scales=2, orientations=1,
                                                 u_low=0.1, u_high=0.4))
        assert len(bank) == 2
        # ladder step is (0.4/0.1)**(1/1) = 4
        assert bank[1].frequency == pytest.approx(0.4, abs=1e-15)

    def test_top_scale_reaches_u_high(self):
        params = GaborBankParams(scales=3, orientations=2, u_low=0.06, u_high=0.3)
        bank = build_filter_bank(params)
        assert bank[-1].frequency == pytest.approx(0.3, rel=1e-12)

    def test_zero_dc_taps(self):
        for kernel in build_filter_bank(GaborBankParams()):
            assert abs(kernel.taps.sum()) < 1e-9
            assert np.all(np.isfinite(kernel.taps))
            assert kernel.taps.shape == (31, 31)

    @pytest.mark.parametrize("bad", [
        dict(scales=1),
        dict(orientations=0),
        dict(u_low=0.0),
        dict(u_low=0.3, u_high=0.2),
        dict(u_high=0.5),
        dict(kernel_radius=0),
    ])
    def test_invalid_params_rejected(self, bad):
        with pytest.raises(InvalidParams):
            build_filter_bank(GaborBankParams(**bad))


class TestConvolveResponse:
    def test_zero_image_gives_zero_response(self, small_bank):
        out = convolve_response(np.zeros((20, 20)), small_bank[0])
        assert out.shape == (20, 20)
        assert np.all(out == 0.0)

    def test_impulse_reproduces_flipped_conjugated_taps(self, default_bank):
        image = np.zeros((65, 65))
        image[32, 32] = 1.0
        kernel = default_bank[9]
        response = convolve_response(image, kernel)
        expected = np.conj(kernel.taps)[::-1, ::-1]
        got = response[32 - 15:32 + 16, 32 - 15:32 + 16]
        np.testing.assert_allclose(got, expected, atol=1e-9)

    def test_constant_image_suppressed_by_dc_correction(self, default_bank):
        c = 0.7
        response = convolve_response(np.full((40, 40), c), default_bank[3])
        assert np.max(np.abs(response)) < 1e-6 * c


class TestTextureStats:
    def test_zero_response(self):
        assert texture_stats(np.zeros((5, 5), dtype=complex)) == (0.0, 0.0)

    def test_constant_magnitude(self):
        response = np.full((6, 6), 0.3 - 0.4j)
        mean, std = texture_stats(response)
        assert mean == pytest.approx(0.5, abs=1e-12)
        assert std == pytest.approx(0.0, abs=1e-12)

    def test_two_level_magnitudes(self):
        response = np.array([[0.0, 2.0], [2.0, 0.0]], dtype=complex)
        mean, std = texture_stats(response)
        assert (mean, std) == (1.0, 1.0)

    def test_matches_naive_two_pass_reference(self):
        rng = np.random.default_rng(10)
        response = rng.standard_normal((17, 23)) + 1j * rng.standard_normal((17, 23))
        mean, std = texture_stats(response)
        mags = [abs(response[y, x]) for y in range(17) for x in range(23)]
        ref_mean = sum(mags) / len(mags)
        ref_std = (sum((m - ref_mean) ** 2 for m in mags) / len(mags)) ** 0.5
        assert mean == pytest.approx(ref_mean, rel=1e-12)
        assert std == pytest.approx(ref_std, rel=1e-12)


class TestExtractTextureVector:
    def test_zero_image_gives_zero_vector(self, small_bank):
        vec = extract_texture_vector(np.zeros((16, 16)), small_bank)
        assert vec.shape == (2 * len(small_bank),)
        assert np.all(vec == 0.0)

    def test_entry_order_follows_bank(self, small_bank):
        rng = np.random.default_rng(12)
        image = rng.random((16, 16))
        vec = extract_texture_vector(image, small_bank)
        for i, kernel in enumerate(small_bank):
            mean, std = texture_stats(convolve_response(image, kernel))
            assert vec[2 * i] == mean
            assert vec[2 * i + 1] == std

    def test_std_entries_nonnegative_and_finite(self, small_bank):
        rng = np.random.default_rng(13)
        vec = extract_texture_vector(rng.random((20, 20)), small_bank)
        assert np.all(np.isfinite(vec))
        assert np.all(vec[1::2] >= 0.0)

    def test_intensity_scaling_scales_all_entries(self, small_bank):
        rng = np.random.default_rng(14)
        image = rng.random((18, 18))
        base = extract_texture_vector(image, small_bank)
        doubled = extract_texture_vector(2.0 * image, small_bank)
        np.testing.assert_allclose(doubled, 2.0 * base, rtol=1e-12)

    def test_empty_bank_rejected(self):
        with pytest.raises(InvalidParams):
            extract_texture_vector(np.zeros((8, 8)), [])

    def test_grating_energy_lands_near_matched_filter(self, default_bank):
        # target filter (1, 0): second scale, horizontal wave vector
        params = GaborBankParams()
        target = next(k for k in default_bank if (k.scale, k.orientation) == (1, 0))
        image = grating(128, target.frequency, target.angle)
        vec = extract_texture_vector(image, default_bank)
        means = vec[0::2].reshape(params.scales, params.orientations)
        m, n = np.unravel_index(np.argmax(means), means.shape)
        wrap = min((n - 0) % params.orientations, (0 - n) % params.orientations)
        assert abs(m - 1) <= 1 and wrap <= 1
