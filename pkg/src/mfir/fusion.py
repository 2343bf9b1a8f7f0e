"""Feature normalization, per-channel distances, and fused ranking.

Feature columns are z-scored against corpus statistics ("internal"
normalization); per-candidate raw distances are then mapped through a
3-sigma affine transform into [0, 1] ("external" normalization) so the two
channels can be combined with explicit weights.  Texture vectors compare by
Euclidean distance over the retained columns, color histograms by
Jensen-Shannon distance.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    EmptyIndex,
    InvalidWeights,
    LengthMismatch,
    TooFewCandidates,
)

DEFAULT_WEIGHTS = (0.5, 0.5)


@dataclass(frozen=True)
class FeatureMatrix:
    """One feature row per image, with its class label and source path."""

    values: np.ndarray           # (n_images, n_features) float64
    labels: tuple[str, ...]
    paths: tuple[str, ...]

    def __post_init__(self):
        if self.values.ndim != 2:
            raise ValueError(f"feature matrix must be 2-D, got {self.values.shape}")
        if self.values.shape[0] == 0:
            raise ValueError("feature matrix needs at least one row")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("feature matrix entries must be finite")
        n = self.values.shape[0]
        if len(self.labels) != n or len(self.paths) != n:
            raise ValueError(
                f"{n} rows but {len(self.labels)} labels / {len(self.paths)} paths"
            )

    @property
    def n_rows(self) -> int:
        return self.values.shape[0]

    @property
    def n_cols(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class ColumnStats:
    """Per-column mean and population standard deviation."""

    mean: np.ndarray
    std: np.ndarray

    def __post_init__(self):
        if self.mean.shape != self.std.shape or self.mean.ndim != 1:
            raise ValueError("mean/std must be 1-D arrays of equal length")
        if np.any(self.std < 0):
            raise ValueError("standard deviations must be nonnegative")


@dataclass(frozen=True)
class ImageFeatures:
    """Extracted features of a single image: raw texture vector + histogram."""

    texture: np.ndarray
    histogram: np.ndarray


@dataclass(frozen=True)
class SearchResult:
    """One ranked candidate with its per-channel and fused distances."""

    row: int
    path: str
    label: str
    texture_raw: float
    color_raw: float
    texture_norm: float
    color_norm: float
    fused: float


def _zscore(values: np.ndarray, mean: np.ndarray, std: np.ndarray) -> np.ndarray:
    # constant columns (std 0) map to all-zero rather than dividing by zero
    denom = np.where(std == 0.0, 1.0, std)
    out = (values - mean) / denom
    return np.where(std == 0.0, 0.0, out)


def internal_normalize(matrix: FeatureMatrix) -> tuple[FeatureMatrix, ColumnStats]:
    """Z-score every column by its own mean and population std.

    Constant columns become all-zero.  Returns the stats so queries can be
    normalized identically later.
    """
    mean = matrix.values.mean(axis=0)
    std = matrix.values.std(axis=0)
    normalized = _zscore(matrix.values, mean, std)
    stats = ColumnStats(mean=mean, std=std)
    return FeatureMatrix(values=normalized, labels=matrix.labels, paths=matrix.paths), stats


def apply_column_stats(vector: np.ndarray, stats: ColumnStats) -> np.ndarray:
    """Normalize one feature vector with previously fitted column stats."""
    vector = np.asarray(vector, dtype=np.float64)
    if vector.shape != stats.mean.shape:
        raise LengthMismatch(
            f"vector has {vector.shape[0]} entries, stats cover {stats.mean.shape[0]}"
        )
    return _zscore(vector, stats.mean, stats.std)


def jsd_distance(h1: np.ndarray, h2: np.ndarray) -> float:
    """Jensen-Shannon distance between two histograms (natural log).

    Terms with a zero numerator contribute nothing, as do bins empty in both
    histograms.  Symmetric, nonnegative, and at most 2 ln 2 for normalized
    inputs.
    """
    h1 = np.asarray(h1, dtype=np.float64)
    h2 = np.asarray(h2, dtype=np.float64)
    if h1.shape != h2.shape:
        raise LengthMismatch(f"histogram lengths differ: {h1.shape} vs {h2.shape}")
    total = h1 + h2
    safe = np.where(total > 0.0, total, 1.0)

    def side(h):
        ratio = np.where(h > 0.0, 2.0 * h / safe, 1.0)
        return np.where(h > 0.0, h * np.log(ratio), 0.0)

    return float(np.sum(side(h1) + side(h2)))


def texture_distance(a: np.ndarray, b: np.ndarray, retained: Sequence[int]) -> float:
    """Euclidean distance over the retained columns of two normalized vectors."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise LengthMismatch(f"vector lengths differ: {a.shape} vs {b.shape}")
    idx = np.asarray(sorted(retained), dtype=np.intp)
    if idx.size == 0:
        return 0.0
    diff = a[idx] - b[idx]
    return float(np.sqrt(np.sum(diff * diff)))


def external_normalize(raw: np.ndarray) -> np.ndarray:
    """Map raw distances through the 3-sigma affine transform into [0, 1].

    A distance at the mean maps to 0.5; three population standard deviations
    below or above map to 0 and 1, with anything further clamped.  An
    all-equal input (sigma 0) maps uniformly to 0.5.

    Raises:
        TooFewCandidates: fewer than two distances.
    """
    raw = np.asarray(raw, dtype=np.float64)
    if raw.size < 2:
        raise TooFewCandidates(f"need at least 2 distances, got {raw.size}")
    mu = raw.mean()
    sigma = raw.std()
    if sigma == 0.0:
        return np.full(raw.shape, 0.5)
    out = 0.5 * (1.0 + (raw - mu) / (3.0 * sigma))
    return np.clip(out, 0.0, 1.0)


def _check_weights(weights: Sequence[float]) -> tuple[float, float]:
    if len(weights) != 2:
        raise InvalidWeights(f"expected (texture, color) weights, got {weights!r}")
    wt, wc = float(weights[0]), float(weights[1])
    if wt < 0.0 or wc < 0.0 or abs(wt + wc - 1.0) > 1e-9:
        raise InvalidWeights(f"weights must be nonnegative and sum to 1, got {weights!r}")
    return wt, wc


def fuse(d_texture: float, d_color: float, weights: Sequence[float] = DEFAULT_WEIGHTS) -> float:
    """Weighted sum of the two externally normalized channel distances."""
    wt, wc = _check_weights(weights)
    return wt * d_texture + wc * d_color


def rank(query: ImageFeatures, index, k: int,
         weights: Sequence[float] = DEFAULT_WEIGHTS) -> list[SearchResult]:
    """Rank all indexed images against a query, ascending fused distance.

    The query texture vector is normalized with the index's column stats;
    raw per-channel distances to every candidate are externally normalized
    over the candidate set, fused, and sorted (stable, so ties keep index
    row order).  Returns the best ``min(k, index size)`` candidates.

    Raises:
        EmptyIndex: the index has no rows.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    wt, wc = _check_weights(weights)
    n = index.matrix.n_rows
    if n == 0:
        raise EmptyIndex("cannot rank against an empty index")

    texture_cols = index.n_texture_cols
    tex_matrix = index.matrix.values[:, :texture_cols]
    hist_matrix = index.matrix.values[:, texture_cols:]

    q_tex = apply_column_stats(np.asarray(query.texture, dtype=np.float64), index.stats)
    tex_norm = _zscore(tex_matrix, index.stats.mean, index.stats.std)

    retained = np.asarray(index.retained, dtype=np.intp)
    if retained.size:
        diff = tex_norm[:, retained] - q_tex[retained]
        raw_t = np.sqrt(np.sum(diff * diff, axis=1))
    else:
        raw_t = np.zeros(n)

    q_hist = np.asarray(query.histogram, dtype=np.float64)
    raw_c = np.array([jsd_distance(q_hist, hist_matrix[i]) for i in range(n)])

    if n == 1:
        # a single candidate has no distance spread; both channels sit at 0.5
        t_star = np.array([0.5])
        c_star = np.array([0.5])
    else:
        t_star = external_normalize(raw_t)
        c_star = external_normalize(raw_c)
    fused = wt * t_star + wc * c_star

    order = np.argsort(fused, kind="stable")[:min(k, n)]
    return [
        SearchResult(
            row=int(i),
            path=index.matrix.paths[i],
            label=index.matrix.labels[i],
            texture_raw=float(raw_t[i]),
            color_raw=float(raw_c[i]),
            texture_norm=float(t_star[i]),
            color_norm=float(c_star[i]),
            fused=float(fused[i]),
        )
        for i in order
    ]
