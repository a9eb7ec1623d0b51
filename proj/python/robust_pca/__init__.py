"""Robust PCA: classical, M-estimator, rank-correlation, projection-pursuit and MaxEnt fits."""

from ._core import (
    FitOptions,
    RpcaError,
    compare,
    fit,
    generate,
    kendall,
    l1_median,
    mad,
    methods,
    qn,
    scores,
    spearman,
)

__all__ = [
    "FitOptions",
    "RpcaError",
    "compare",
    "fit",
    "generate",
    "kendall",
    "l1_median",
    "mad",
    "methods",
    "qn",
    "scores",
    "spearman",
]
