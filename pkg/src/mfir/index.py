"""Build, persist, and load the retrieval index.

On disk an index is the 6-byte magic ``MFIR1\\n``, a little-endian uint32
header length, a UTF-8 JSON header (params, column layout, labels, paths,
stats, retained columns), and the raw feature matrix as row-major IEEE-754
binary64 little-endian.  Everything round-trips bit-exactly.
"""

from __future__ import annotations

import dataclasses
import json
import logging
import os
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import colorhist
from .colorhist import extract_color_histogram
from .errors import (
    CorruptIndex,
    MfirError,
    NoImagesFound,
    UnsupportedVersion,
)
from .fusion import ColumnStats, FeatureMatrix, ImageFeatures
from .gabor import GaborBankParams, GaborKernel, build_filter_bank, extract_texture_vector
from .images import ANALYSIS_SIDE, load_grayscale, load_rgb
from .roughset import discretize, greedy_reduct

log = logging.getLogger(__name__)

MAGIC = b"MFIR1\n"
FORMAT_VERSION = 1
DEFAULT_BINS = 4

_HIST_SCHEMES = {colorhist.SCHEME: colorhist.N_BINS}
_IMAGE_SUFFIXES = {".png", ".jpg", ".jpeg"}


@dataclass(frozen=True)
class RetrievalIndex:
    """Persisted corpus: raw features, fitted stats, retained texture columns."""

    params: GaborBankParams
    hist_scheme: str
    matrix: FeatureMatrix          # texture columns first, then histogram bins
    stats: ColumnStats             # over the texture columns
    retained: tuple[int, ...]      # texture columns kept by the reduct
    gamma_full: float
    gamma_reduct: float
    version: int = FORMAT_VERSION

    def __post_init__(self):
        if self.version != FORMAT_VERSION:
            raise UnsupportedVersion(f"unknown index version {self.version}")
        if self.hist_scheme not in _HIST_SCHEMES:
            raise ValueError(f"unknown histogram scheme {self.hist_scheme!r}")
        expected = self.params.n_features + _HIST_SCHEMES[self.hist_scheme]
        if self.matrix.n_cols != expected:
            raise ValueError(
                f"matrix has {self.matrix.n_cols} columns, expected {expected}"
            )
        if self.stats.mean.shape[0] != self.params.n_features:
            raise ValueError("stats length must equal the texture column count")
        for col in self.retained:
            if not 0 <= col < self.params.n_features:
                raise ValueError(f"retained column {col} outside texture columns")

    @property
    def n_texture_cols(self) -> int:
        return self.params.n_features

    @property
    def n_hist_cols(self) -> int:
        return _HIST_SCHEMES[self.hist_scheme]


def extract_features(path: str | Path, bank: list[GaborKernel],
                     side: int = ANALYSIS_SIDE) -> ImageFeatures:
    """Texture vector and color histogram of one image file."""
    texture = extract_texture_vector(load_grayscale(path, side), bank)
    histogram = extract_color_histogram(load_rgb(path))
    return ImageFeatures(texture=texture, histogram=histogram)


def _find_images(root: Path) -> list[Path]:
    files = [p for p in root.rglob("*") if p.is_file() and p.suffix.lower() in _IMAGE_SUFFIXES]
    return sorted(files, key=lambda p: p.relative_to(root).as_posix())


def build_index(image_root: str | Path,
                params: GaborBankParams = GaborBankParams(),
                bins: int = DEFAULT_BINS) -> RetrievalIndex:
    """Extract features for every image under ``image_root`` and fit the index.

    Images are ingested in sorted relative-path order; the class label of an
    image is its immediate parent directory name.  Undecodable files are
    skipped with a warning.  Column stats and the retained texture columns
    are fitted on the full extracted matrix.

    Raises:
        NoImagesFound: no decodable image under the root.
    """
    root = Path(image_root)
    params.validate()
    bank = build_filter_bank(params)

    rows: list[np.ndarray] = []
    labels: list[str] = []
    paths: list[str] = []
    skipped = 0
    for file in _find_images(root):
        try:
            feats = extract_features(file, bank)
        except MfirError as exc:
            skipped += 1
            log.warning("skipping %s: %s", file, exc)
            continue
        rows.append(np.concatenate([feats.texture, feats.histogram]))
        labels.append(file.parent.name)
        paths.append(file.relative_to(root).as_posix())
    if skipped:
        log.warning("skipped %d undecodable file(s) under %s", skipped, root)
    if not rows:
        raise NoImagesFound(f"no decodable images under {root}")

    matrix = FeatureMatrix(values=np.vstack(rows), labels=tuple(labels), paths=tuple(paths))
    return fit_index(matrix, params, bins=bins)


def fit_index(matrix: FeatureMatrix, params: GaborBankParams,
              bins: int = DEFAULT_BINS,
              fit_matrix: FeatureMatrix | None = None) -> RetrievalIndex:
    """Assemble an index from extracted features.

    ``fit_matrix`` (defaulting to ``matrix`` itself) supplies the rows used
    to fit the column stats and the attribute reduction; ``matrix`` supplies
    the searchable rows.
    """
    n_tex = params.n_features
    fit = matrix if fit_matrix is None else fit_matrix
    tex = fit.values[:, :n_tex]
    stats = ColumnStats(mean=tex.mean(axis=0), std=tex.std(axis=0))
    system = discretize(tex, fit.labels, bins=bins)
    reduct = greedy_reduct(system)
    return RetrievalIndex(
        params=params,
        hist_scheme=colorhist.SCHEME,
        matrix=matrix,
        stats=stats,
        retained=reduct.retained,
        gamma_full=reduct.gamma_full,
        gamma_reduct=reduct.gamma_reduct,
    )


def refit_reduct(index: RetrievalIndex, bins: int = DEFAULT_BINS) -> RetrievalIndex:
    """Recompute the retained texture columns of an index.

    Column stats are left untouched; only the discretization, the reduct,
    and the dependency degrees are refreshed.
    """
    tex = index.matrix.values[:, :index.n_texture_cols]
    system = discretize(tex, index.matrix.labels, bins=bins)
    reduct = greedy_reduct(system)
    return dataclasses.replace(
        index,
        retained=reduct.retained,
        gamma_full=reduct.gamma_full,
        gamma_reduct=reduct.gamma_reduct,
    )


def save_index(index: RetrievalIndex, path: str | Path) -> None:
    """Write the index file, fsync-completed."""
    header = {
        "version": index.version,
        "gabor": {
            "scales": index.params.scales,
            "orientations": index.params.orientations,
            "u_low": index.params.u_low,
            "u_high": index.params.u_high,
            "kernel_radius": index.params.kernel_radius,
        },
        "hist_scheme": index.hist_scheme,
        "rows": index.matrix.n_rows,
        "cols": index.matrix.n_cols,
        "labels": list(index.matrix.labels),
        "paths": list(index.matrix.paths),
        "stats": {
            "mean": index.stats.mean.tolist(),
            "std": index.stats.std.tolist(),
        },
        "retained": list(index.retained),
        "gamma_full": index.gamma_full,
        "gamma_reduct": index.gamma_reduct,
    }
    blob = json.dumps(header, ensure_ascii=False, separators=(",", ":")).encode("utf-8")
    payload = np.ascontiguousarray(index.matrix.values, dtype="<f8").tobytes()
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<I", len(blob)))
        fh.write(blob)
        fh.write(payload)
        fh.flush()
        os.fsync(fh.fileno())


def load_index(path: str | Path) -> RetrievalIndex:
    """Read and validate an index file.

    Raises:
        CorruptIndex: bad magic, truncated data, or invariant violations.
        UnsupportedVersion: unknown format version.
        OSError: unreadable path.
    """
    with open(path, "rb") as fh:
        data = fh.read()
    if len(data) < len(MAGIC) + 4 or data[:len(MAGIC)] != MAGIC:
        raise CorruptIndex(f"{path}: bad magic")
    (header_len,) = struct.unpack_from("<I", data, len(MAGIC))
    header_start = len(MAGIC) + 4
    if header_start + header_len > len(data):
        raise CorruptIndex(f"{path}: truncated header")
    try:
        header = json.loads(data[header_start:header_start + header_len].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise CorruptIndex(f"{path}: unparsable header ({exc})") from exc

    try:
        version = int(header["version"])
    except (KeyError, TypeError, ValueError) as exc:
        raise CorruptIndex(f"{path}: missing version") from exc
    if version != FORMAT_VERSION:
        raise UnsupportedVersion(f"{path}: unsupported index version {version}")

    try:
        rows = int(header["rows"])
        cols = int(header["cols"])
        if rows <= 0 or cols <= 0:
            raise ValueError(f"bad matrix shape {rows}x{cols}")
        gp = header["gabor"]
        params = GaborBankParams(
            scales=int(gp["scales"]),
            orientations=int(gp["orientations"]),
            u_low=float(gp["u_low"]),
            u_high=float(gp["u_high"]),
            kernel_radius=int(gp["kernel_radius"]),
        )
        params.validate()
        labels = tuple(str(x) for x in header["labels"])
        paths = tuple(str(x) for x in header["paths"])
        stats = ColumnStats(
            mean=np.asarray(header["stats"]["mean"], dtype=np.float64),
            std=np.asarray(header["stats"]["std"], dtype=np.float64),
        )
        retained = tuple(int(c) for c in header["retained"])
        hist_scheme = str(header["hist_scheme"])
        gamma_full = float(header["gamma_full"])
        gamma_reduct = float(header["gamma_reduct"])
    except (KeyError, TypeError, ValueError, MfirError) as exc:
        raise CorruptIndex(f"{path}: malformed header ({exc})") from exc

    payload = data[header_start + header_len:]
    expected_bytes = rows * cols * 8
    if len(payload) != expected_bytes:
        raise CorruptIndex(
            f"{path}: payload has {len(payload)} bytes, expected {expected_bytes}"
        )
    values = np.frombuffer(payload, dtype="<f8").reshape(rows, cols).astype(np.float64)

    try:
        matrix = FeatureMatrix(values=values, labels=labels, paths=paths)
        return RetrievalIndex(
            params=params,
            hist_scheme=hist_scheme,
            matrix=matrix,
            stats=stats,
            retained=retained,
            gamma_full=gamma_full,
            gamma_reduct=gamma_reduct,
            version=version,
        )
    except UnsupportedVersion:
        raise
    except (MfirError, ValueError) as exc:
        raise CorruptIndex(f"{path}: invalid index contents ({exc})") from exc
