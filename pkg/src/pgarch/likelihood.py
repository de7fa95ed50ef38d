"""
Gaussian quasi-likelihood of a periodic GARCH model.

The criterion minimised by the QMLE is

    C(theta) = (1/T) * sum_t [ y_t**2 / h_t + log h_t ]

where ``h_t`` is produced by the volatility filter started from one of two
presample schemes (:class:`InitScheme`).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
import warnings

import numpy as np

from pgarch._recursions import garch_filter
from pgarch.exceptions import DegenerateResidualWarning
from pgarch.model import PGarchSpec, Series, require_valid

__all__ = [
    "InitScheme",
    "LikelihoodWork",
    "kappa_hat",
    "neg_avg_loglik",
    "score_and_info",
    "volatility_filter",
]


class InitScheme(str, Enum):
    """
    Presample values for the filter.

    OMEGA
        ``y_t**2 = h_t = omega_{season(t)}`` for ``t <= 0``.
    SAMPLE
        ``y_t**2 = h_t = y_{[t]}**2`` where ``[t]`` is the first in-sample
        time of the same season as ``t``.
    """

    OMEGA = "omega"
    SAMPLE = "sample"


OmegaInit = InitScheme.OMEGA
SampleInit = InitScheme.SAMPLE


@dataclass(frozen=True, eq=False)
class LikelihoodWork:
    """
    Filter output with first-order quantities.

    Attributes
    ----------
    h_tilde : ndarray, shape (T,)
    dh : ndarray, shape (T, n_params)
        Derivatives of ``h_tilde`` with presample values held fixed; these
        feed ``J_hat``.
    objective : float
        Criterion value ``C(theta)``.
    score : ndarray, shape (n_params,)
        Exact gradient of ``objective``.
    J_hat : ndarray
        ``(1/N) sum_t dh_t dh_t' / h_t**2``, normalised per year.
    kappa_hat : float
        Mean fourth power of the standardized residuals.
    residuals : ndarray
        Standardized residuals ``y_t / sqrt(h~_t)``.
    """

    h_tilde: np.ndarray
    dh: np.ndarray
    objective: float
    score: np.ndarray
    J_hat: np.ndarray
    kappa_hat: float
    residuals: np.ndarray
    d2h: np.ndarray | None = None


def _presample(theta: PGarchSpec, y2: np.ndarray, init: InitScheme):
    S, q, p = theta.period, theta.q, theta.p
    d = max(p, q, 1)
    # season (0-based) of time -j
    pre_season = (-np.arange(d) - 1) % S
    if InitScheme(init) is InitScheme.OMEGA:
        vals = theta.omega[pre_season]
    else:
        if y2.shape[0] < S:
            raise ValueError("sample-based presample values need T >= S")
        vals = y2[pre_season]
    return (
        np.ascontiguousarray(vals[:q]),
        np.ascontiguousarray(vals[:p]),
        pre_season.astype(np.int64),
    )


def _run_filter(theta: PGarchSpec, y: np.ndarray, init: InitScheme, grad: bool,
                pre_dep: bool | None = None):
    S = theta.period
    if y.shape[0] < max(theta.p, theta.q):
        raise ValueError("series shorter than the model order")
    y2 = y * y
    season = np.arange(y.shape[0], dtype=np.int64) % S
    y2_pre, h_pre, pre_season = _presample(theta, y2, init)
    if pre_dep is None:
        pre_dep = InitScheme(init) is InitScheme.OMEGA
    h, dh = garch_filter(
        y2, season, np.asarray(theta.omega), np.ascontiguousarray(theta.alpha),
        np.ascontiguousarray(theta.beta), y2_pre, h_pre, pre_season,
        pre_dep, grad,
    )
    return y2, h, dh


def _values(series) -> np.ndarray:
    return np.asarray(series.values if isinstance(series, Series) else series,
                      dtype=float)


def volatility_filter(theta: PGarchSpec, series: Series,
                      init: InitScheme = InitScheme.OMEGA) -> np.ndarray:
    """
    Filtered conditional variances ``h~_1, ..., h~_T``.

    Every entry is at least the intercept of its season.
    """
    require_valid(theta)
    _, h, _ = _run_filter(theta, _values(series), init, grad=False)
    assert np.all(h > 0)
    return h


def neg_avg_loglik(theta: PGarchSpec, series: Series,
                   init: InitScheme = InitScheme.OMEGA) -> float:
    """Averaged criterion ``(1/T) sum (y**2 / h + log h)``; the QMLE minimises it."""
    require_valid(theta)
    y2, h, _ = _run_filter(theta, _values(series), init, grad=False)
    return float(np.mean(y2 / h + np.log(h)))


def score_and_info(theta: PGarchSpec, series: Series,
                   init: InitScheme = InitScheme.OMEGA) -> LikelihoodWork:
    """
    Criterion, exact score, per-year information matrix and kurtosis.

    Under the omega presample scheme the presample values depend on the
    intercepts, so the score tracks those derivatives too while ``J_hat`` is
    built from derivatives with presample values held fixed.
    """
    require_valid(theta)
    y = _values(series)
    S = theta.period
    y2, h, dh = _run_filter(theta, y, init, grad=True)
    ratio = y2 / h
    objective = float(np.mean(ratio + np.log(h)))
    score = ((1.0 - ratio) / h) @ dh / y.shape[0]
    if InitScheme(init) is InitScheme.OMEGA:
        _, _, dh0 = _run_filter(theta, y, init, grad=True, pre_dep=False)
    else:
        dh0 = dh
    g = dh0 / h[:, None]
    n_years = y.shape[0] / S
    J = g.T @ g / n_years
    J = 0.5 * (J + J.T)
    return LikelihoodWork(
        h_tilde=h, dh=dh0, objective=objective, score=score, J_hat=J,
        kappa_hat=float(np.mean(ratio * ratio)), residuals=y / np.sqrt(h),
    )


def evaluate(theta_vec: np.ndarray, y: np.ndarray, S: int, q: int, p: int,
             init: InitScheme, grad: bool = True):
    """
    Optimizer entry point on the flattened vector.

    Returns ``(C, score, H)`` where ``H = (1/T) sum dh dh' / h**2`` is the
    outer-product curvature of ``C``; only ``C`` when ``grad`` is false.
    """
    theta = PGarchSpec.from_vector(theta_vec, S, q, p)
    y2, h, dh = _run_filter(theta, y, init, grad=grad)
    ratio = y2 / h
    C = float(np.mean(ratio + np.log(h)))
    if not grad:
        return C
    T = y.shape[0]
    score = ((1.0 - ratio) / h) @ dh / T
    g = dh / h[:, None]
    H = g.T @ g / T
    return C, score, H


def kappa_hat(residuals) -> float:
    """
    Mean of the fourth powers of standardized residuals.

    All-zero input returns 0.0 with a :class:`DegenerateResidualWarning`.
    """
    r = np.asarray(residuals, dtype=float)
    if r.size == 0:
        raise ValueError("kappa_hat needs at least one residual")
    k = float(np.mean(r ** 4))
    if k == 0.0:
        warnings.warn("all residuals are zero; unit-variance premise violated",
                      DegenerateResidualWarning, stacklevel=2)
    return k
