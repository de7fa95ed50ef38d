"""Simulation, stationarity analysis and QML estimation of periodic GARCH models."""

from pgarch.likelihood import (
    InitScheme,
    LikelihoodWork,
    kappa_hat,
    neg_avg_loglik,
    score_and_info,
    volatility_filter,
)
from pgarch.model import (
    ParameterSpace,
    PGarchSpec,
    Series,
    StandardGaussian,
    StandardizedStudentT,
    UnitConstant,
    season_of,
    validate_spec,
)
from pgarch.qmle import FitOptions, FitResult, asymptotic_covariance, fit
from pgarch.simulation import (
    SimConfig,
    simulate_path,
    truncated_series_sample,
    truncated_series_state,
)
from pgarch.stationarity import (
    Decision,
    LyapunovEstimate,
    beta_spectral_radius,
    build_companion,
    build_stacked_companion,
    lyapunov_mc,
    moment_delta_search,
    parch1_stationarity_bound,
    unconditional_variance_p11,
)

__version__ = "0.1.0"
