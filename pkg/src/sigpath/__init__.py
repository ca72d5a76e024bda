"""Truncated path-signature features for sampled multivariate sequences.

Pipeline: raw stream -> embedding -> (windowed) signature features ->
small learner.  See signature, embeddings, windows, learners, arsim,
and cli for the pieces; everything numerical is plain float64 numpy
with one compiled kernel for batch featurization.
"""

from .signature import (
    Signature,
    Polyline,
    trivial_signature,
    segment_signature,
    chen_concat,
    polyline_signature,
    signature_on_interval,
    oracle_coefficient,
    feature_count,
    flatten,
    batch_signature_features,
)
from .embeddings import (
    Stream,
    EmbeddingSpec,
    EMBEDDING_KINDS,
    parse_embedding,
    embedding_label,
    embedded_dim,
    embed,
    embed_linear,
    embed_rectilinear,
    embed_time,
    embed_leadlag,
    embed_stroke_v1,
    embed_stroke_v2,
    embed_stroke_v3,
)
from .windows import WindowSpec, dyadic_features
from .learners import (
    Normalizer,
    LinearModel,
    fit_normalizer,
    apply_normalizer,
    fit_ridge,
    predict,
    fit_softmax,
    classify,
    knn_classify,
    accuracy,
    l2_error,
    map3,
    macro_f1,
)
from .arsim import (
    ARProcessSpec,
    RegressionDataset,
    simulate_ar,
    run_embedding_comparison,
    run_lag_sweep,
    run_truncation_sweep,
    write_results_csv,
    RESULT_COLUMNS,
)

__version__ = "0.1.0"

__all__ = [
    "Signature",
    "Polyline",
    "trivial_signature",
    "segment_signature",
    "chen_concat",
    "polyline_signature",
    "signature_on_interval",
    "oracle_coefficient",
    "feature_count",
    "flatten",
    "batch_signature_features",
    "Stream",
    "EmbeddingSpec",
    "EMBEDDING_KINDS",
    "parse_embedding",
    "embedding_label",
    "embedded_dim",
    "embed",
    "embed_linear",
    "embed_rectilinear",
    "embed_time",
    "embed_leadlag",
    "embed_stroke_v1",
    "embed_stroke_v2",
    "embed_stroke_v3",
    "WindowSpec",
    "dyadic_features",
    "Normalizer",
    "LinearModel",
    "fit_normalizer",
    "apply_normalizer",
    "fit_ridge",
    "predict",
    "fit_softmax",
    "classify",
    "knn_classify",
    "accuracy",
    "l2_error",
    "map3",
    "macro_f1",
    "ARProcessSpec",
    "RegressionDataset",
    "simulate_ar",
    "run_embedding_comparison",
    "run_lag_sweep",
    "run_truncation_sweep",
    "write_results_csv",
    "RESULT_COLUMNS",
    "__version__",
]
