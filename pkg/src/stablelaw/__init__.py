"""Levy alpha-stable laws: density, sampling, characteristic-function
regression fits and rolling-window analysis of daily returns."""

from .density import ConvergenceError, DensityGrid, gaussian_pdf, pdf_at, pdf_grid, pdf_values, quadrature_oracle, total_mass
from .estimator import (
    ecf_comparison,
    BranchCutError,
    DegenerateDataError,
    EcfGrid,
    EstimationConfig,
    EstimationError,
    FitResult,
    NearAlphaOneError,
    empirical_cf,
    fit_alpha_gamma,
    fit_beta_delta,
    normalize_and_fit,
)
from .estimators import LevyStableEstimator, RollingLevyStable
from .market import (
    PriceFormatError,
    PriceSeries,
    ReturnSeries,
    RollingResult,
    find_local_min,
    fit_series,
    log_returns,
    parse_prices,
    rolling_fit,
)
from .params import (
    StableDomainError,
    StableParams,
    TailCoefficients,
    beta_from_tails,
    char_fn,
    make_params,
    tail_exponent,
)
from .sampler import SampleBatch, gclt_sum_demo, sample

__version__ = "0.1.0"
