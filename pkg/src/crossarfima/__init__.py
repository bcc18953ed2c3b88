"""Correlated bivariate long-memory processes: simulation and estimation.

Simulate pairs of series built from fractionally integrated, AR(1) or
white-noise components with correlated innovations, compute their
theoretical cross-correlation structure, and estimate univariate and
bivariate Hurst exponents with DFA, DCCA and HXA.
"""

from .config import ExperimentConfig, default_config, parse_config, serialize_config
from .errors import (
    ConfigError,
    CrossArfimaError,
    DegenerateSeriesError,
    InsufficientDataError,
    NotPositiveSemiDefiniteError,
)
from .estimators import (
    CcfSeries,
    FluctuationSeries,
    ScalingFit,
    dcca,
    dfa,
    fit_hurst,
    hxa,
    powerlaw_fit,
    sample_ccf,
)
from .filters import (
    WeightVector,
    ar1_weights,
    causal_filter,
    ma_weights,
    white_weights,
)
from .innovations import CovarianceSpec, InnovationBlock, cholesky_factor, sample
from .models import (
    BivariateSeries,
    ComponentSpec,
    ExponentReport,
    ModelSpec,
    ar1,
    cross_spectrum,
    fractional,
    model1,
    model2,
    model3,
    simulate,
    theoretical_ccf,
    theoretical_exponents,
    white,
)
from .reports import CcfComparison, LagScatter, ccf_comparison, lag_scatter, truncation_bound

__version__ = "0.1.0"

__all__ = [
    "ExperimentConfig",
    "default_config",
    "parse_config",
    "serialize_config",
    "CrossArfimaError",
    "ConfigError",
    "DegenerateSeriesError",
    "InsufficientDataError",
    "NotPositiveSemiDefiniteError",
    "CcfSeries",
    "FluctuationSeries",
    "ScalingFit",
    "dcca",
    "dfa",
    "fit_hurst",
    "hxa",
    "powerlaw_fit",
    "sample_ccf",
    "WeightVector",
    "ar1_weights",
    "causal_filter",
    "ma_weights",
    "white_weights",
    "CovarianceSpec",
    "InnovationBlock",
    "cholesky_factor",
    "sample",
    "BivariateSeries",
    "ComponentSpec",
    "ExponentReport",
    "ModelSpec",
    "ar1",
    "cross_spectrum",
    "fractional",
    "model1",
    "model2",
    "model3",
    "simulate",
    "theoretical_ccf",
    "theoretical_exponents",
    "white",
    "CcfComparison",
    "LagScatter",
    "ccf_comparison",
    "lag_scatter",
    "truncation_bound",
    "__version__",
]
