"""Multi-feature image retrieval.

Gabor-bank texture statistics fused with HSV color histograms; rough-set
attribute reduction prunes the texture columns; two-stage normalization
(per-column z-scoring, then a 3-sigma map of raw distances into [0, 1])
makes the channels commensurable before weighted fusion and ranking.
"""

from .colorhist import extract_color_histogram
from .convolve import backend_name
from .evaluate import (
    AccuracyReport,
    ExperimentSpec,
    evaluate_queries,
    generate_synthetic_corpus,
    overall_accuracy,
    precision_at_k,
    run_experiment,
)
from .fusion import (
    ColumnStats,
    FeatureMatrix,
    ImageFeatures,
    SearchResult,
    apply_column_stats,
    external_normalize,
    fuse,
    internal_normalize,
    jsd_distance,
    rank,
    texture_distance,
)
from .gabor import (
    GaborBankParams,
    GaborKernel,
    build_filter_bank,
    convolve_response,
    extract_texture_vector,
    texture_stats,
)
from .images import load_grayscale, load_rgb
from .index import (
    RetrievalIndex,
    build_index,
    extract_features,
    load_index,
    save_index,
)
from .roughset import (
    InformationSystem,
    ReductResult,
    dependency,
    discretize,
    exhaustive_reduct,
    greedy_reduct,
    indiscernibility_partition,
    lower_approximation,
    positive_region,
)

__version__ = "0.1.0"

__all__ = [
    "AccuracyReport",
    "ExperimentSpec",
    "GaborBankParams",
    "GaborKernel",
    "ColumnStats",
    "FeatureMatrix",
    "ImageFeatures",
    "InformationSystem",
    "ReductResult",
    "RetrievalIndex",
    "SearchResult",
    "apply_column_stats",
    "backend_name",
    "build_filter_bank",
    "build_index",
    "convolve_response",
    "dependency",
    "discretize",
    "evaluate_queries",
    "exhaustive_reduct",
    "external_normalize",
    "extract_color_histogram",
    "extract_features",
    "extract_texture_vector",
    "fuse",
    "generate_synthetic_corpus",
    "greedy_reduct",
    "indiscernibility_partition",
    "internal_normalize",
    "jsd_distance",
    "load_grayscale",
    "load_index",
    "load_rgb",
    "lower_approximation",
    "overall_accuracy",
    "positive_region",
    "precision_at_k",
    "rank",
    "run_experiment",
    "save_index",
    "texture_distance",
    "texture_stats",
    "__version__",
]
