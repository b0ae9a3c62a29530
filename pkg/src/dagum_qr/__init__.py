"""Dagum income distribution and confidence intervals for quantile ratios."""

from .dagum import DagumParams
from .estimation import EstimationError, FitResult, Method, SampleSummary, fit, fit_mm, fit_pwm, summarize
from .gof import KsResult, ks_test
from .ratio import (
    QUINTILES,
    DegenerateRatioError,
    QuantilePair,
    RatioCI,
    confidence_interval,
    normal_quantile,
    sample_ratio,
    sigma2,
    true_ratio,
    v_from_ratio,
    w2,
)
from .simulation import CoverageReport, SimConfig, run_cell, run_study
from .special import lambert_w0, lambert_wm1, ln_gamma

__version__ = "0.1.0"

__all__ = [
    "DagumParams",
    "EstimationError",
    "FitResult",
    "Method",
    "SampleSummary",
    "fit",
    "fit_mm",
    "fit_pwm",
    "summarize",
    "KsResult",
    "ks_test",
    "QUINTILES",
    "DegenerateRatioError",
    "QuantilePair",
    "RatioCI",
    "confidence_interval",
    "normal_quantile",
    "sample_ratio",
    "sigma2",
    "true_ratio",
    "v_from_ratio",
    "w2",
    "CoverageReport",
    "SimConfig",
    "run_cell",
    "run_study",
    "lambert_w0",
    "lambert_wm1",
    "ln_gamma",
]
