"""Pareto smoothed importance sampling."""

from ._psis import (
    Diagnostic,
    EstimateSummary,
    Method,
    ParetoFit,
    SmoothedWeights,
    diagnose,
    effective_sample_size,
    estimate_with_diagnostics,
    gpd_cdf,
    gpd_fit,
    gpd_logpdf,
    gpd_quantile,
    gpd_sample,
    psis_transform,
    raw_transform,
    run_toy,
    self_normalized_estimate,
    summarize_toy,
    tail_length,
    tis_transform,
    transform,
)

__all__ = [
    "Diagnostic",
    "EstimateSummary",
    "Method",
    "ParetoFit",
    "SmoothedWeights",
    "diagnose",
    "effective_sample_size",
    "estimate_with_diagnostics",
    "gpd_cdf",
    "gpd_fit",
    "gpd_logpdf",
    "gpd_quantile",
    "gpd_sample",
    "psis_transform",
    "raw_transform",
    "run_toy",
    "self_normalized_estimate",
    "summarize_toy",
    "tail_length",
    "tis_transform",
    "transform",
]
