"""
Random companion matrices and existence checks for periodic GARCH.

The squared process ``Y_t = (y_t**2, ..., y_{t-q+1}**2, h_t, ..., h_{t-p+1})``
obeys ``Y_t = A_t Y_{t-1} + B_t``.  Strict periodic stationarity holds iff the
top Lyapunov exponent of the season-blocked products ``A_{nS} ... A_1`` is
negative; here it is estimated by Monte Carlo with per-block renormalisation.

Products are always taken with the latest season leftmost (``A_S ... A_1``)
and norms are operator 1-norms (maximum absolute column sum).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
import math
from typing import NamedTuple

import numpy as np
from scipy import integrate, stats

from pgarch.exceptions import DegenerateError, OrderError
from pgarch.model import (
    InnovationDist,
    PGarchSpec,
    StandardGaussian,
    UnitConstant,
)

__all__ = [
    "CompanionMatrix",
    "Decision",
    "LyapunovEstimate",
    "MomentOrder",
    "beta_spectral_radius",
    "build_companion",
    "build_stacked_companion",
    "expected_log_eta_sq",
    "lyapunov_mc",
    "lyapunov_stacked_mc",
    "moment_delta_search",
    "parch1_stationarity_bound",
    "unconditional_variance_p11",
]

DEFAULT_Z = 2.58
DELTA_GRID = (1.0, 0.5, 0.25, 0.1, 0.05, 0.01)


@dataclass(frozen=True, eq=False)
class CompanionMatrix:
    """One realisation ``(A_t, B_t)`` of the random coefficients."""

    A: np.ndarray
    B: np.ndarray

    @property
    def entries(self) -> np.ndarray:
        return self.A


class Decision(str, Enum):
    STRICTLY_NEGATIVE = "StrictlyNegative"
    NON_NEGATIVE = "NonNegative"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class LyapunovEstimate:
    gamma_hat: float
    std_error: float
    n_blocks: int
    decision: Decision
    z: float = DEFAULT_Z

    def to_dict(self) -> dict:
        return {
            "gamma_hat": self.gamma_hat,
            "std_error": self.std_error,
            "n_blocks": self.n_blocks,
            "decision": self.decision.value,
            "z": self.z,
        }


class MomentOrder(NamedTuple):
    delta: float
    n0: int


def _decide(gamma: float, se: float, z: float) -> Decision:
    if gamma + z * se < 0:
        return Decision.STRICTLY_NEGATIVE
    if gamma - z * se >= 0:
        return Decision.NON_NEGATIVE
    return Decision.INCONCLUSIVE


def _state_dim(spec: PGarchSpec) -> int:
    q, p = spec.q, spec.p
    if q == 0 and p == 0:
        raise OrderError("companion form needs p + q >= 1")
    return q + p


def _companions(spec: PGarchSpec, seasons: np.ndarray, eta2: np.ndarray):
    """
    Batched companion matrices for 0-based ``seasons`` and ``eta2`` of equal shape.

    When ``p = 0`` (or ``q = 0``) the volatility (or squared-observation) part of
    the state is dropped, leaving the ``q x q`` (``p x p``) recursion.
    """
    q, p = spec.q, spec.p
    r = _state_dim(spec)
    shape = np.shape(eta2)
    eta2 = np.asarray(eta2, dtype=float)
    seasons = np.broadcast_to(seasons, shape)
    A = np.zeros(shape + (r, r))
    B = np.zeros(shape + (r,))
    a = spec.alpha[seasons]
    b = spec.beta[seasons]
    w = spec.omega[seasons]
    if q > 0:
        A[..., 0, :q] = a * eta2[..., None]
        A[..., 0, q:] = b * eta2[..., None]
        B[..., 0] = w * eta2
        for i in range(1, q):
            A[..., i, i - 1] = 1.0
    if p > 0:
        A[..., q, :q] = a
        A[..., q, q:] = b
        B[..., q] = w
        for j in range(1, p):
            A[..., q + j, q + j - 1] = 1.0
    return A, B


def build_companion(spec: PGarchSpec, v: int, eta_sq: float) -> CompanionMatrix:
    """
    Companion pair for season ``v`` (1-based, periodic) and innovation ``eta**2``.

    Row 1 holds ``(alpha_v eta**2, beta_v eta**2)``, row ``q + 1`` holds
    ``(alpha_v, beta_v)`` and the remaining rows shift the lags.
    """
    if spec.p < 1 or spec.q < 1:
        raise OrderError(
            f"companion matrix needs p >= 1 and q >= 1, got p={spec.p}, q={spec.q}"
        )
    if eta_sq < 0:
        raise ValueError("eta_sq must be nonnegative")
    A, B = _companions(spec, np.array((v - 1) % spec.period), np.array(eta_sq))
    return CompanionMatrix(A, B)


def build_stacked_companion(spec: PGarchSpec, eta_sq_by_season):
    """
    Year-blocked coefficients of the stacked (vector) representation.

    Only the last block column of the ``rS x rS`` matrix is nonzero: block
    ``k`` equals ``A_k ... A_1``.  Block ``k`` of the vector is
    ``sum_{m <= k} (A_k ... A_{m+1}) B_m``.

    Also accepts the reduced ``p = 0`` state used by P-ARCH models.
    """
    S = spec.period
    eta2 = np.asarray(eta_sq_by_season, dtype=float)
    if eta2.shape != (S,):
        raise ValueError(f"need one eta**2 per season ({S})")
    A, B = _companions(spec, np.arange(S), eta2)
    r = A.shape[-1]
    Abar = np.zeros((r * S, r * S))
    Bbar = np.zeros(r * S)
    prod = np.eye(r)
    acc = np.zeros(r)
    for k in range(S):
        prod = A[k] @ prod
        acc = A[k] @ acc + B[k]
        Abar[k * r:(k + 1) * r, (S - 1) * r:] = prod
        Bbar[k * r:(k + 1) * r] = acc
    return Abar, Bbar


def _check_nondegenerate(spec: PGarchSpec) -> None:
    if spec.p == 0 and np.any(np.all(spec.alpha == 0, axis=1)):
        raise DegenerateError(
            "an all-zero alpha row with p = 0 makes the companion product zero"
        )


def _block_logs(A: np.ndarray) -> np.ndarray:
    """Log 1-norm increments of the renormalised running product of S-blocks."""
    n, S, r, _ = A.shape
    logs = np.empty(n)
    carry = np.eye(r)
    for k in range(n):
        M = carry
        for v in range(S):
            M = A[k, v] @ M
        nrm = np.abs(M).sum(axis=0).max()
        if nrm == 0.0:
            raise DegenerateError("companion product collapsed to the zero matrix")
        logs[k] = math.log(nrm)
        carry = M / nrm
    return logs


def _draw_eta2(dist: InnovationDist, rng: np.random.Generator, shape) -> np.ndarray:
    eta = dist.sample(rng, shape)
    return eta * eta


def lyapunov_mc(
    spec: PGarchSpec,
    dist: InnovationDist,
    n_blocks: int = 10_000,
    seed: int = 0,
    z: float = DEFAULT_Z,
) -> LyapunovEstimate:
    """
    Monte Carlo estimate of the top Lyapunov exponent per year.

    Parameters
    ----------
    spec : PGarchSpec
    dist : InnovationDist
    n_blocks : int
        Number of consecutive S-products averaged (at least 100).
    seed : int
    z : float
        One-sided critical value behind the decision.

    Returns
    -------
    LyapunovEstimate
        ``gamma_hat`` is the mean log-norm increment; ``std_error`` comes
        from the sample variance of the increments.

    Notes
    -----
    For a P-ARCH(1) the product is scalar and the increments are exactly
    ``sum_v log(alpha_v eta_v**2)``.
    """
    if n_blocks < 100:
        raise ValueError("n_blocks must be >= 100")
    _check_nondegenerate(spec)
    S = spec.period
    rng = np.random.default_rng(seed)
    eta2 = _draw_eta2(dist, rng, (n_blocks, S))
    if spec.q == 1 and spec.p == 0:
        with np.errstate(divide="ignore"):
            logs = (np.log(spec.alpha[:, 0])[None, :] + np.log(eta2)).sum(axis=1)
        if not np.all(np.isfinite(logs)):
            raise DegenerateError("zero scalar companion product")
    else:
        A, _ = _companions(spec, np.arange(S)[None, :], eta2)
        logs = _block_logs(A)
    return _estimate(logs, z)


def _estimate(logs: np.ndarray, z: float) -> LyapunovEstimate:
    n = logs.shape[0]
    gamma = float(logs.mean())
    se = float(logs.std(ddof=1) / math.sqrt(n))
    return LyapunovEstimate(gamma, se, n, _decide(gamma, se, z), z)


def lyapunov_stacked_mc(
    spec: PGarchSpec,
    dist: InnovationDist,
    n_blocks: int = 10_000,
    seed: int = 0,
    z: float = DEFAULT_Z,
) -> LyapunovEstimate:
    """
    Lyapunov exponent of the stacked year-to-year matrices.

    Uses the same innovation stream as :func:`lyapunov_mc` for equal
    ``seed``, so the two estimates are directly comparable.
    """
    if n_blocks < 100:
        raise ValueError("n_blocks must be >= 100")
    _check_nondegenerate(spec)
    S = spec.period
    rng = np.random.default_rng(seed)
    eta2 = _draw_eta2(dist, rng, (n_blocks, S))
    mats = np.stack([build_stacked_companion(spec, e)[0] for e in eta2])
    logs = _block_logs(mats[:, None])
    return _estimate(logs, z)


def _beta_companion(beta_row: np.ndarray) -> np.ndarray:
    p = beta_row.shape[0]
    M = np.zeros((p, p))
    M[0] = beta_row
    M[1:, :-1] = np.eye(p - 1)
    return M


def beta_spectral_radius(spec: PGarchSpec) -> float:
    """Spectral radius of ``beta_S ... beta_1`` built from the GARCH lags."""
    if spec.p < 1:
        raise OrderError("beta_spectral_radius needs p >= 1")
    prod = np.eye(spec.p)
    for v in range(spec.period):
        prod = _beta_companion(spec.beta[v]) @ prod
    return float(np.max(np.abs(np.linalg.eigvals(prod))))


def moment_delta_search(
    spec: PGarchSpec,
    dist: InnovationDist,
    n0_max: int = 20,
    mc_size: int = 10_000,
    seed: int = 0,
    z: float = DEFAULT_Z,
    deltas=DELTA_GRID,
) -> MomentOrder | None:
    """
    Find ``(delta, n0)`` with ``E ||A_{n0 S} ... A_1||**delta < 1``.

    Scans ``n0 = 1, 2, ...`` and, for each, ``delta`` from the largest grid
    value down; the first pair whose Monte Carlo upper confidence bound is
    below one is returned.  ``None`` means nothing was found, which is not a
    proof that no such pair exists.
    """
    _check_nondegenerate(spec)
    S = spec.period
    rng = np.random.default_rng(seed)
    seasons = np.arange(S)
    for n0 in range(1, n0_max + 1):
        eta2 = _draw_eta2(dist, rng, (mc_size, n0 * S))
        A, _ = _companions(spec, np.tile(seasons, n0)[None, :], eta2)
        r = A.shape[-1]
        P = np.broadcast_to(np.eye(r), (mc_size, r, r)).copy()
        lognorm = np.zeros(mc_size)
        for t in range(n0 * S):
            P = A[:, t] @ P
            nrm = np.abs(P).sum(axis=1).max(axis=1)
            with np.errstate(divide="ignore"):
                lognorm += np.log(nrm)
            P /= np.where(nrm > 0, nrm, 1.0)[:, None, None]
        for delta in sorted(deltas, reverse=True):
            with np.errstate(over="ignore", invalid="ignore"):
                vals = np.exp(delta * lognorm)
            mean = vals.mean()
            se = vals.std(ddof=1) / math.sqrt(mc_size)
            if np.isfinite(mean) and mean + z * se < 1.0:
                return MomentOrder(float(delta), n0)
    return None


def expected_log_eta_sq(
    dist: InnovationDist, mc_size: int = 1_000_000, seed: int = 0
) -> tuple[float, float]:
    """
    ``E log eta**2`` and its standard error.

    Gaussian: adaptive quadrature (standard error 0).  Unit constant: exactly
    0.  Otherwise Monte Carlo.
    """
    if isinstance(dist, UnitConstant):
        return 0.0, 0.0
    if isinstance(dist, StandardGaussian):
        f = lambda x: 2.0 * math.log(x) * stats.norm.pdf(x)  # noqa: E731
        lo, _ = integrate.quad(f, 0.0, 1.0, limit=200)
        hi, _ = integrate.quad(f, 1.0, np.inf, limit=200)
        return 2.0 * (lo + hi), 0.0
    rng = np.random.default_rng(seed)
    eta = dist.sample(rng, mc_size)
    logs = np.log(eta * eta)
    return float(logs.mean()), float(logs.std(ddof=1) / math.sqrt(mc_size))


def parch1_stationarity_bound(
    dist: InnovationDist, mc_size: int = 1_000_000, seed: int = 0
) -> float:
    """
    ``a = exp(-E log eta**2)``; a P-ARCH(1) is strictly periodically
    stationary iff ``prod_v alpha_v < a``.
    """
    m, _ = expected_log_eta_sq(dist, mc_size, seed)
    return math.exp(-m)


def unconditional_variance_p11(spec: PGarchSpec, v: int) -> float | None:
    """
    Mean of ``h_t`` in season ``v`` for a P-GARCH(1,1).

    Returns ``None`` when the persistence ``prod_v (alpha_v + beta_v)`` is at
    least one, where the closed form breaks down.
    """
    if spec.q != 1 or spec.p != 1:
        raise OrderError("unconditional_variance_p11 needs q = 1 and p = 1")
    S = spec.period
    persist = lambda u: float(spec.alpha_of(u)[0] + spec.beta_of(u)[0])  # noqa: E731
    num = spec.omega_of(v)
    run = 1.0
    for j in range(1, S):
        run *= persist(v - j + 1)
        num += run * spec.omega_of(v - j)
    den = 1.0
    for i in range(S):
        den *= persist(v - i)
    den = 1.0 - den
    if den <= 0:
        return None
    return num / den
