"""Landmark spectral-shifting attention.

Thin re-export of the compiled core. Matrices are 2-D float64 arrays; inputs
are copied into row-major storage on the way in.
"""

from ._core import (
    IoError,
    NumericalError,
    UsageError,
    error_bound,
    exact_attention,
    exact_scores,
    numerical_rank,
    nystrom_attention,
    pinv_iterative,
    pinv_svd,
    random_problem,
    row_softmax,
    run_cli,
    segment_means,
    spectrum,
    ss_attention,
    ss_attention_materialized,
    theorem1_check,
)

__all__ = [
    "IoError",
    "NumericalError",
    "UsageError",
    "error_bound",
    "exact_attention",
    "exact_scores",
    "numerical_rank",
    "nystrom_attention",
    "pinv_iterative",
    "pinv_svd",
    "random_problem",
    "row_softmax",
    "run_cli",
    "segment_means",
    "spectrum",
    "ss_attention",
    "ss_attention_materialized",
    "theorem1_check",
]
