"""Shared fixtures: tiny images on disk, small filter banks, random systems."""

from __future__ import annotations

import numpy as np
import pytest
from PIL import Image

from mfir.fusion import ColumnStats, FeatureMatrix
from mfir.gabor import GaborBankParams, build_filter_bank
from mfir.index import RetrievalIndex
from mfir.roughset import InformationSystem


def write_png(path, pixels: np.ndarray) -> None:
    """Write an (H, W, 3) uint8 array as a PNG."""
    path.parent.mkdir(parents=True, exist_ok=True)
    Image.fromarray(pixels.astype(np.uint8), "RGB").save(path, format="PNG")


def solid_png(path, rgb: tuple[int, int, int], side: int = 4) -> None:
    pixels = np.full((side, side, 3), rgb, dtype=np.uint8)
    write_png(path, pixels)


def random_system(rng: np.random.Generator,
                  max_objects: int = 30,
                  max_attrs: int = 8,
                  n_values: int = 4,
                  max_classes: int = 3) -> InformationSystem:
    """Random small information system for reduct/dependency properties."""
    n = int(rng.integers(2, max_objects + 1))
    a = int(rng.integers(1, max_attrs + 1))
    codes = rng.integers(0, n_values, size=(n, a))
    n_classes = int(rng.integers(2, max_classes + 1))
    labels = tuple(f"c{v}" for v in rng.integers(0, n_classes, size=n))
    return InformationSystem(codes=codes, labels=labels)


def random_index(rng: np.random.Generator, rows: int = 4) -> RetrievalIndex:
    """Structurally valid index with random contents (no image extraction)."""
    params = GaborBankParams(scales=2, orientations=2, u_low=0.1, u_high=0.3,
                             kernel_radius=int(rng.integers(2, 6)))
    n_tex = params.n_features
    tex = rng.standard_normal((rows, n_tex)) * rng.uniform(0.5, 3.0)
    hist = rng.random((rows, 72))
    hist /= hist.sum(axis=1, keepdims=True)
    matrix = FeatureMatrix(
        values=np.hstack([tex, hist]),
        labels=tuple(f"class{int(v)}" for v in rng.integers(0, 3, rows)),
        paths=tuple(f"dir{i}/img{i}.png" for i in range(rows)),
    )
    stats = ColumnStats(mean=tex.mean(axis=0), std=tex.std(axis=0))
    n_ret = int(rng.integers(0, n_tex + 1))
    retained = tuple(sorted(rng.choice(n_tex, size=n_ret, replace=False).tolist()))
    gamma = float(rng.integers(0, 5)) / 4.0
    return RetrievalIndex(params=params, hist_scheme="hsv-8x3x3", matrix=matrix,
                          stats=stats, retained=retained,
                          gamma_full=gamma, gamma_reduct=gamma)


@pytest.fixture(scope="session")
def small_params() -> GaborBankParams:
    """Cheap bank for tests that only need structural behavior."""
    return GaborBankParams(scales=2, orientations=2, u_low=0.1, u_high=0.3, kernel_radius=4)


@pytest.fixture(scope="session")
def small_bank(small_params):
    return build_filter_bank(small_params)


@pytest.fixture(scope="session")
def default_bank():
    return build_filter_bank(GaborBankParams())
