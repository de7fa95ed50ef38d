"""
Sample paths of periodic GARCH processes and the truncated series solution.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import warnings

import numpy as np

from pgarch._recursions import garch_simulate
from pgarch.exceptions import OrderError
from pgarch.model import (
    InnovationDist,
    PGarchSpec,
    Series,
    StandardGaussian,
    require_valid,
)
from pgarch.stationarity import _companions

__all__ = [
    "SimConfig",
    "simulate_path",
    "truncated_series_sample",
    "truncated_series_state",
]


@dataclass(frozen=True)
class SimConfig:
    """
    Path length, burn-in, seed and innovation law for :func:`simulate_path`.

    ``burn_in`` counts observations and must be a multiple of the period;
    ``None`` means ``50 * S``.
    """

    n_years: int
    seed: int | tuple = 0
    dist: InnovationDist = field(default_factory=StandardGaussian)
    burn_in: int | None = None

    def __post_init__(self) -> None:
        if self.n_years < 1:
            raise ValueError("n_years must be >= 1")
        if self.burn_in is not None and self.burn_in < 0:
            raise ValueError("burn_in must be >= 0")

    def burn_in_for(self, S: int) -> int:
        b = 50 * S if self.burn_in is None else self.burn_in
        if b % S:
            raise ValueError(f"burn_in {b} is not a multiple of the period {S}")
        return b


def simulate_path(spec: PGarchSpec, cfg: SimConfig) -> Series:
    """
    Simulate ``y_t = sqrt(h_t) eta_t`` with the periodic variance recursion.

    The recursion starts from seasonal intercepts, runs ``burn_in + N S``
    steps and drops the burn-in, so observation 1 is season 1.  The same
    ``(spec, cfg)`` always produces the same path.
    """
    require_valid(spec)
    S = spec.period
    burn = cfg.burn_in_for(S)
    n = burn + cfg.n_years * S
    rng = np.random.default_rng(cfg.seed)
    eta = np.ascontiguousarray(cfg.dist.sample(rng, n), dtype=float)
    season = np.arange(n, dtype=np.int64) % S
    y, h = garch_simulate(
        eta, season, np.asarray(spec.omega), np.ascontiguousarray(spec.alpha),
        np.ascontiguousarray(spec.beta),
    )
    if not np.all(np.isfinite(h[burn:])):
        warnings.warn("simulated variances overflowed; spec is likely explosive",
                      RuntimeWarning, stacklevel=2)
    return Series(y[burn:], S, h[burn:])


def _series_terms(spec: PGarchSpec, eta2: np.ndarray, v: int):
    """
    Partial sums of the series solution for each row of ``eta2``.

    ``eta2[:, k]`` is the squared innovation at time ``v - k``.  Returns the
    state after each truncation level and the norm of the last term.
    """
    S = spec.period
    R, K1 = eta2.shape
    lag_seasons = (v - 1 - np.arange(K1)) % S
    A, B = _companions(spec, lag_seasons[None, :], eta2)
    r = A.shape[-1]
    state = B[:, 0].copy()
    prod = np.broadcast_to(np.eye(r), (R, r, r)).copy()
    term = state
    for k in range(1, K1):
        prod = prod @ A[:, k - 1]
        term = np.einsum("nij,nj->ni", prod, B[:, k])
        state = state + term
    return state, np.abs(term).sum(axis=1)


def truncated_series_state(
    spec: PGarchSpec,
    dist: InnovationDist,
    K: int,
    seed: int,
    v: int,
) -> np.ndarray:
    """
    Series solution ``B_v + sum_{k=1}^{K} A_v ... A_{v-k+1} B_{v-k}`` truncated at ``K``.

    Innovations are drawn for lags ``0, 1, ..., K`` in that order, so a
    larger ``K`` with the same seed extends the same stream and the result is
    coordinate-wise nondecreasing in ``K``.

    Returns
    -------
    ndarray, shape (p + q,)
        ``(y_v**2, ..., y_{v-q+1}**2, h_v, ..., h_{v-p+1})``.
    """
    if spec.p < 1 or spec.q < 1:
        raise OrderError("truncated series state needs p >= 1 and q >= 1")
    if K < 1:
        raise ValueError("K must be >= 1")
    rng = np.random.default_rng(seed)
    eta = dist.sample(rng, K + 1)
    state, _ = _series_terms(spec, (eta * eta)[None, :], v)
    return state[0]


def truncated_series_sample(
    spec: PGarchSpec,
    dist: InnovationDist,
    K: int,
    n_reps: int,
    seed: int,
    v: int,
    tail_tol: float = 1e-8,
):
    """
    Independent replications of :func:`truncated_series_state`.

    Replication ``i`` uses the generator seeded with ``(seed, i)``.

    Returns
    -------
    states : ndarray, shape (n_reps, p + q)
    converged : float
        Fraction of replications whose last term is below
        ``tail_tol`` times the running sum.
    """
    if spec.p < 1 or spec.q < 1:
        raise OrderError("truncated series state needs p >= 1 and q >= 1")
    eta = np.empty((n_reps, K + 1))
    for i in range(n_reps):
        eta[i] = dist.sample(np.random.default_rng([seed, i]), K + 1)
    states, last = _series_terms(spec, eta * eta, v)
    converged = float(np.mean(last < tail_tol * np.abs(states).sum(axis=1)))
    return states, converged
