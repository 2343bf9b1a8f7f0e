"""Synthetic corpora, retrieval metrics, and training/database-size sweeps."""

from __future__ import annotations

import colorsys
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np
from PIL import Image

from .errors import EmptyIndex, InsufficientCorpus
from .fusion import DEFAULT_WEIGHTS, FeatureMatrix, ImageFeatures, SearchResult, rank
from .gabor import GaborBankParams, build_filter_bank
from .index import DEFAULT_BINS, RetrievalIndex, extract_features, fit_index

SYNTH_SIDE = 128
NOISE_SIGMA = 0.05


@dataclass(frozen=True)
class ExperimentSpec:
    """One sweep: training sizes per class crossed with database sizes."""

    training_sizes: tuple[int, ...]
    database_sizes: tuple[int, ...]
    k: int = 10
    seed: int = 42
    weights: tuple[float, float] = DEFAULT_WEIGHTS

    def __post_init__(self):
        if not self.training_sizes or not self.database_sizes:
            raise ValueError("need at least one training size and one database size")
        if any(t < 1 for t in self.training_sizes) or any(s < 1 for s in self.database_sizes):
            raise ValueError("all sizes must be >= 1")
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")


@dataclass(frozen=True)
class ReportRow:
    training_size: int
    db_size: int
    overall_accuracy: float
    mean_precision_at_k: float


@dataclass(frozen=True)
class AccuracyReport:
    rows: tuple[ReportRow, ...]

    def as_tsv(self) -> str:
        lines = ["training_size\tdb_size\toverall_accuracy\tmean_precision_at_k"]
        for r in self.rows:
            lines.append(
                f"{r.training_size}\t{r.db_size}\t{r.overall_accuracy:.6f}\t{r.mean_precision_at_k:.6f}"
            )
        return "\n".join(lines) + "\n"


def generate_synthetic_corpus(classes: int, per_class: int, seed: int,
                              out: str | Path) -> list[Path]:
    """Write a labeled corpus of colorized sinusoidal gratings.

    Class ``c`` gets orientation ``c*pi/classes``, a frequency from the
    default filter bank's ladder (cycling), and a class hue ``c/classes``.
    Each image adds a random phase and per-pixel Gaussian noise
    (sigma 0.05).  Deterministic for a fixed seed.

    Returns the written file paths in generation order.
    """
    if classes < 2 or per_class < 2:
        raise ValueError("need at least 2 classes and 2 images per class")
    root = Path(out)
    rng = np.random.default_rng(seed)
    params = GaborBankParams()
    step = (params.u_high / params.u_low) ** (1.0 / (params.scales - 1))
    frequencies = [params.u_low * step**m for m in range(params.scales)]

    coords = np.arange(SYNTH_SIDE, dtype=np.float64)
    xx, yy = np.meshgrid(coords, coords)

    written = []
    for c in range(classes):
        theta = c * np.pi / classes
        freq = frequencies[c % len(frequencies)]
        tint = np.array(colorsys.hsv_to_rgb(c / classes, 1.0, 1.0))
        class_dir = root / f"class_{c:02d}"
        class_dir.mkdir(parents=True, exist_ok=True)
        for i in range(per_class):
            phase = rng.uniform(0.0, 2.0 * np.pi)
            pattern = 0.5 + 0.4 * np.cos(
                2.0 * np.pi * freq * (xx * np.cos(theta) + yy * np.sin(theta)) + phase
            )
            rgb = pattern[..., None] * tint
            rgb = rgb + rng.normal(0.0, NOISE_SIGMA, rgb.shape)
            pixels = (np.clip(rgb, 0.0, 1.0) * 255.0).round().astype(np.uint8)
            path = class_dir / f"img_{i:03d}.png"
            Image.fromarray(pixels, "RGB").save(path, format="PNG")
            written.append(path)
    return written


def precision_at_k(results: Sequence[SearchResult], query_label: str, k: int,
                   query_path: str | None = None) -> float:
    """Fraction of the top-k results (self-match excluded) sharing the label."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    window = results[:min(k, len(results))]
    kept = [r for r in window if query_path is None or r.path != query_path]
    if not kept:
        return 0.0
    return sum(1 for r in kept if r.label == query_label) / len(kept)


def _majority_correct(results: Sequence[SearchResult], query_label: str, k: int,
                      query_path: str | None) -> bool:
    """Strict plurality of the query's class among top-k non-self results."""
    kept = [r for r in results if query_path is None or r.path != query_path][:k]
    if not kept:
        return False
    counts: dict[str, int] = {}
    for r in kept:
        counts[r.label] = counts.get(r.label, 0) + 1
    own = counts.get(query_label, 0)
    best_other = max((c for lbl, c in counts.items() if lbl != query_label), default=0)
    return own > best_other


def evaluate_queries(index: RetrievalIndex,
                     queries: Sequence[tuple[ImageFeatures, str, str]],
                     k: int = 10,
                     weights: Sequence[float] = DEFAULT_WEIGHTS) -> tuple[float, float]:
    """Overall accuracy and mean precision@k over (features, label, path) queries.

    A query scores correct when its class holds a strict plurality among the
    top-k retrieved results, self-matches excluded.
    """
    if not queries:
        raise ValueError("no queries given")
    if index.matrix.n_rows == 0:
        raise EmptyIndex("cannot evaluate against an empty index")
    correct = 0
    precisions = []
    for features, label, path in queries:
        results = rank(features, index, k + 1, weights)
        correct += _majority_correct(results, label, k, path)
        precisions.append(precision_at_k(results, label, k, path))
    return correct / len(queries), float(np.mean(precisions))


def overall_accuracy(index: RetrievalIndex,
                     queries: Sequence[tuple[ImageFeatures, str, str]],
                     k: int = 10,
                     weights: Sequence[float] = DEFAULT_WEIGHTS) -> float:
    """Fraction of queries whose top-k majority class matches their own."""
    accuracy, _ = evaluate_queries(index, queries, k, weights)
    return accuracy


def _corpus_by_class(corpus: Path) -> dict[str, list[Path]]:
    classes: dict[str, list[Path]] = {}
    for d in sorted(p for p in corpus.iterdir() if p.is_dir()):
        files = sorted(f for f in d.iterdir()
                       if f.is_file() and f.suffix.lower() in {".png", ".jpg", ".jpeg"})
        if files:
            classes[d.name] = files
    return classes


def run_experiment(spec: ExperimentSpec, corpus: str | Path,
                   params: GaborBankParams = GaborBankParams(),
                   bins: int = DEFAULT_BINS) -> AccuracyReport:
    """Sweep training and database sizes over a labeled corpus.

    Per cell (t, s): t images per class are sampled to fit the column stats
    and the texture reduct; s further images (disjoint from training, spread
    round-robin over classes) form the searchable database, and every
    database image is used as a leave-itself-out query.

    Raises:
        InsufficientCorpus: a cell needs more images than the corpus has.
    """
    corpus = Path(corpus)
    by_class = _corpus_by_class(corpus)
    if not by_class:
        raise InsufficientCorpus(f"no class subdirectories with images under {corpus}")
    bank = build_filter_bank(params)

    cache: dict[Path, ImageFeatures] = {}

    def features_of(path: Path) -> ImageFeatures:
        if path not in cache:
            cache[path] = extract_features(path, bank)
        return cache[path]

    rows = []
    for t in spec.training_sizes:
        for s in spec.database_sizes:
            cell_rng = np.random.default_rng([spec.seed, t, s])
            train_files: list[Path] = []
            leftovers: dict[str, list[Path]] = {}
            for name, files in by_class.items():
                if len(files) < t:
                    raise InsufficientCorpus(
                        f"class {name} has {len(files)} images; cell (t={t}, s={s}) "
                        f"needs {t} for training"
                    )
                order = cell_rng.permutation(len(files))
                train_files.extend(files[i] for i in order[:t])
                leftovers[name] = [files[i] for i in order[t:]]

            db_files: list[Path] = []
            depth = 0
            while len(db_files) < s:
                added = False
                for name in leftovers:
                    pool = leftovers[name]
                    if depth < len(pool) and len(db_files) < s:
                        db_files.append(pool[depth])
                        added = True
                if not added:
                    raise InsufficientCorpus(
                        f"cell (t={t}, s={s}) needs {s} database images; only "
                        f"{len(db_files)} remain outside training"
                    )
                depth += 1

            def matrix_for(files: list[Path]) -> FeatureMatrix:
                feats = [features_of(f) for f in files]
                values = np.vstack([np.concatenate([f.texture, f.histogram]) for f in feats])
                labels = tuple(f.parent.name for f in files)
                paths = tuple(f.relative_to(corpus).as_posix() for f in files)
                return FeatureMatrix(values=values, labels=labels, paths=paths)

            train_matrix = matrix_for(train_files)
            db_matrix = matrix_for(db_files)
            cell_index = fit_index(db_matrix, params, bins=bins, fit_matrix=train_matrix)

            queries = [
                (features_of(f), f.parent.name, f.relative_to(corpus).as_posix())
                for f in db_files
            ]
            accuracy, mean_precision = evaluate_queries(
                cell_index, queries, spec.k, spec.weights
            )
            rows.append(ReportRow(
                training_size=t,
                db_size=s,
                overall_accuracy=accuracy,
                mean_precision_at_k=mean_precision,
            ))
    return AccuracyReport(rows=tuple(rows))
