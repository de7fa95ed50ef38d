"""
Quasi-maximum likelihood fitting on a parameter box.

The criterion is minimised by a projected Newton iteration whose curvature is
the outer-product (Gauss-Newton) matrix of the volatility derivatives, with a
backtracking line search along the projection arc.  Data are rescaled to unit
mean square before optimising so that tolerances do not depend on units; the
estimate is mapped back afterwards.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import math
import warnings

import numpy as np

from pgarch.exceptions import (
    AllStartsFailedError,
    DegenerateError,
    DegenerateResidualWarning,
    IllConditionedWarning,
    SingularInformationError,
)
from pgarch.likelihood import InitScheme, evaluate, score_and_info
from pgarch.model import ParameterSpace, PGarchSpec, Series
from pgarch.stationarity import beta_spectral_radius

__all__ = ["FitOptions", "FitResult", "asymptotic_covariance", "fit"]


@dataclass(frozen=True)
class FitOptions:
    """
    Settings for :func:`fit`.

    ``space=None`` selects :meth:`ParameterSpace.default` scaled to the data.
    With ``enforce_beta_radius`` every iterate must satisfy
    ``rho(beta_S ... beta_1) < 1 - margin``.
    """

    init: InitScheme = InitScheme.OMEGA
    space: ParameterSpace | None = None
    n_starts: int = 5
    max_iters: int = 200
    grad_tol: float = 1e-6
    enforce_beta_radius: bool = True
    margin: float = 1e-3
    seed: int = 0

    def __post_init__(self) -> None:
        if self.n_starts < 1:
            raise ValueError("n_starts must be >= 1")
        if not self.grad_tol > 0:
            raise ValueError("grad_tol must be positive")
        if not 0 < self.margin < 1:
            raise ValueError("margin must lie in (0, 1)")


@dataclass(frozen=True, eq=False)
class FitResult:
    theta_hat: PGarchSpec
    objective: float
    score_norm: float
    J_hat: np.ndarray
    kappa_hat: float
    covariance: np.ndarray
    std_errors: np.ndarray
    residuals: np.ndarray
    converged: bool
    n_iters: int
    boundary_flags: np.ndarray
    init: InitScheme = InitScheme.OMEGA
    starts: list = field(default_factory=list)

    @property
    def param_names(self) -> list[str]:
        return self.theta_hat.param_names()

    def j_cross_block_mass(self) -> float:
        return cross_block_mass(self.J_hat, self.theta_hat.period)

    def to_dict(self) -> dict:
        names = self.param_names
        theta = self.theta_hat.to_vector()
        return {
            "model": self.theta_hat.to_dict(),
            "param_names": names,
            "theta_hat": dict(zip(names, theta.tolist())),
            "std_errors": dict(zip(names, self.std_errors.tolist())),
            "boundary_flags": dict(zip(names, self.boundary_flags.tolist())),
            "objective": self.objective,
            "score_norm": self.score_norm,
            "kappa_hat": self.kappa_hat,
            "J_hat": self.J_hat.tolist(),
            "covariance": self.covariance.tolist(),
            "converged": self.converged,
            "n_iters": self.n_iters,
            "init": InitScheme(self.init).value,
            "n_obs": int(self.residuals.shape[0]),
        }


def cross_block_mass(J: np.ndarray, S: int) -> float:
    """Share of squared Frobenius mass of ``J`` lying outside the season blocks."""
    J = np.asarray(J, dtype=float)
    k = J.shape[0] // S
    total = float(np.sum(J * J))
    if total == 0:
        return 0.0
    off = np.kron(np.eye(S), np.ones((k, k))) == 0
    return math.sqrt(float(np.sum(J[off] ** 2)) / total)


def asymptotic_covariance(
    J_hat: np.ndarray,
    kappa_hat: float,
    N: int,
    S: int,
    allow_pinv: bool = True,
    cond_limit: float = 1e12,
):
    """
    Sandwich covariance ``(kappa - 1) J^{-1} / N`` of the estimator.

    Parameters
    ----------
    J_hat : ndarray
        Information matrix normalised per year (sum over the sample divided
        by the number of years ``N``).
    kappa_hat : float
        Estimated fourth moment of the innovations.
    N : int
        Number of years.
    S : int
        Period; ``J_hat`` must split into ``S`` equal season blocks.

    Returns
    -------
    covariance : ndarray
    std_errors : ndarray
    """
    J = np.asarray(J_hat, dtype=float)
    if J.ndim != 2 or J.shape[0] != J.shape[1] or J.shape[0] % S:
        raise ValueError("J_hat must be square with S equal season blocks")
    if N < 1:
        raise ValueError("N must be >= 1")
    J = 0.5 * (J + J.T)
    scale = kappa_hat - 1.0
    if scale <= 1e-8:
        warnings.warn(
            f"kappa_hat - 1 = {scale:.3g}: innovations look degenerate, "
            "covariance is near zero", DegenerateResidualWarning, stacklevel=2)
        scale = max(scale, 0.0)
    cond = np.linalg.cond(J)
    if not np.isfinite(cond) or cond > cond_limit:
        if not allow_pinv:
            raise SingularInformationError(
                f"information matrix is singular (condition number {cond:.3g})")
        warnings.warn(f"information matrix condition number {cond:.3g}; "
                      "using a pseudo-inverse", IllConditionedWarning, stacklevel=2)
        Jinv = np.linalg.pinv(J, hermitian=True)
    else:
        Jinv = np.linalg.inv(J)
    cov = scale * Jinv / N
    cov = 0.5 * (cov + cov.T)
    se = np.sqrt(np.clip(np.diag(cov), 0.0, None))
    return cov, se


# --- optimizer -------------------------------------------------------------


class _Problem:
    def __init__(self, y, S, q, p, init, lower, upper, enforce_beta, margin):
        self.y, self.S, self.q, self.p = y, S, q, p
        self.init = init
        self.lower, self.upper = lower, upper
        self.enforce_beta = enforce_beta and p >= 1
        self.margin = margin

    def feasible(self, x) -> bool:
        if not self.enforce_beta:
            return True
        spec = PGarchSpec.from_vector(x, self.S, self.q, self.p)
        return beta_spectral_radius(spec) < 1.0 - self.margin

    def value(self, x) -> float:
        C = evaluate(x, self.y, self.S, self.q, self.p, self.init, grad=False)
        return C if np.isfinite(C) else np.inf

    def full(self, x):
        return evaluate(x, self.y, self.S, self.q, self.p, self.init, grad=True)

    def projected_gradient(self, x, g):
        return x - np.clip(x - g, self.lower, self.upper)


def _minimize(prob: _Problem, x0: np.ndarray, max_iters: int, grad_tol: float):
    """Projected Gauss-Newton with Armijo backtracking. Returns (x, C, pg, iters)."""
    x = np.clip(x0, prob.lower, prob.upper)
    C, g, H = prob.full(x)
    if not np.isfinite(C):
        raise FloatingPointError("non-finite criterion at the start")
    width = prob.upper - prob.lower
    n_iter = 0
    for n_iter in range(1, max_iters + 1):
        pg = prob.projected_gradient(x, g)
        if np.max(np.abs(pg)) <= grad_tol:
            return x, C, pg, n_iter - 1
        tol_b = 1e-10 * np.maximum(1.0, np.abs(x)) + 1e-12 * width
        active = ((x <= prob.lower + tol_b) & (g > 0)) | (
            (x >= prob.upper - tol_b) & (g < 0))
        free = ~active
        directions = []
        d = np.zeros_like(x)
        if np.any(free):
            Hf = H[np.ix_(free, free)]
            lam = 1e-10 * max(np.trace(Hf) / Hf.shape[0], 1e-300)
            try:
                d[free] = -np.linalg.solve(Hf + lam * np.eye(Hf.shape[0]), g[free])
                directions.append(d)
            except np.linalg.LinAlgError:
                pass
        dg = np.where(free, -g / np.maximum(np.diag(H), 1e-12), 0.0)
        directions.append(dg)
        moved = False
        for d in directions:
            step = 1.0
            while step > 1e-14:
                xn = np.clip(x + step * d, prob.lower, prob.upper)
                if prob.feasible(xn):
                    Cn = prob.value(xn)
                    if Cn <= C + 1e-4 * float(g @ (xn - x)):
                        moved = True
                        break
                step *= 0.5
            if moved:
                break
        if not moved:
            return x, C, pg, n_iter
        x = xn
        C, g, H = prob.full(x)
    pg = prob.projected_gradient(x, g)
    return x, C, pg, n_iter


def _starts(y2: np.ndarray, S: int, q: int, p: int, space: ParameterSpace,
            n_starts: int, seed: int, feasible) -> list[np.ndarray]:
    k = 1 + q + p
    lo = space.lower.reshape(S, k)
    up = space.upper.reshape(S, k)
    season_mean = np.array([y2[v::S].mean() for v in range(S)])
    first = np.zeros((S, k))
    first[:, 0] = season_mean
    first[:, 1:1 + q] = 0.05
    if p:
        first[:, 1 + q:] = 0.8 / p
    starts = [np.clip(first.ravel(), space.lower, space.upper)]
    rng = np.random.default_rng([seed, 7919])
    tries = 0
    while len(starts) < n_starts and tries < 1000 * n_starts:
        tries += 1
        x = np.empty((S, k))
        w_lo = np.maximum(lo[:, 0], season_mean / 100)
        w_hi = np.minimum(up[:, 0], season_mean * 100)
        x[:, 0] = np.exp(rng.uniform(np.log(w_lo), np.log(np.maximum(w_hi, w_lo))))
        c_lo = np.maximum(lo[:, 1:], 1e-3)
        c_hi = np.maximum(np.minimum(up[:, 1:], 1.0), c_lo)
        x[:, 1:] = np.exp(rng.uniform(np.log(c_lo), np.log(c_hi)))
        x = np.clip(x.ravel(), space.lower, space.upper)
        if feasible(x):
            starts.append(x)
    return starts


def fit(series, S: int, q: int, p: int, opts: FitOptions | None = None) -> FitResult:
    """
    Gaussian QMLE of a periodic GARCH(p, q) with period ``S``.

    Parameters
    ----------
    series : Series or array_like
        Observations, the first belonging to season 1.  Length must be a
        multiple of ``S`` covering at least 10 years.
    S, q, p : int
        Period, ARCH order and GARCH order.
    opts : FitOptions, optional

    Returns
    -------
    FitResult
        Best local minimiser over the starts, with the sandwich covariance
        evaluated at the estimate.
    """
    opts = FitOptions() if opts is None else opts
    y = np.asarray(series.values if isinstance(series, Series) else series,
                   dtype=float)
    T = y.shape[0]
    if T % S:
        raise ValueError(f"length {T} is not a multiple of period {S}")
    N = T // S
    if N < 10:
        raise ValueError(f"need at least 10 years of data, got {N}")
    y2 = y * y
    scale2 = float(np.mean(y2))
    if not np.isfinite(scale2) or scale2 <= 0:
        raise DegenerateError("series is identically zero or non-finite")
    space = opts.space or ParameterSpace.default(S, q, p, scale=scale2)
    if space.lower.shape != (S * (1 + q + p),):
        raise ValueError("parameter space dimension does not match (S, q, p)")

    # optimise on unit mean-square data
    k = 1 + q + p
    unscale = np.tile(np.r_[scale2, np.ones(q + p)], S)
    yn = y / math.sqrt(scale2)
    prob = _Problem(yn, S, q, p, InitScheme(opts.init), space.lower / unscale,
                    space.upper / unscale, opts.enforce_beta_radius, opts.margin)
    starts = _starts(yn * yn, S, q, p, ParameterSpace(prob.lower, prob.upper, 1.0),
                     opts.n_starts, opts.seed, prob.feasible)

    runs = []
    for x0 in starts:
        if not (prob.feasible(x0) and np.isfinite(prob.value(x0))):
            continue
        try:
            x, C, pg, it = _minimize(prob, x0, opts.max_iters, opts.grad_tol)
        except (FloatingPointError, np.linalg.LinAlgError, ValueError):
            continue
        if np.isfinite(C):
            runs.append((C, tuple(x), x, pg, it, x0))
    if not runs:
        raise AllStartsFailedError("no starting point produced a finite criterion")
    runs.sort(key=lambda r: (r[0], r[1]))
    C, _, x, pg, it, _ = runs[0]

    theta_hat = PGarchSpec.from_vector(x * unscale, S, q, p)
    work = score_and_info(theta_hat, y, opts.init)
    cov, se = asymptotic_covariance(work.J_hat, work.kappa_hat, N, S)
    tol_b = 1e-8 * np.maximum(1.0, np.abs(x))
    flags = (x <= prob.lower + tol_b) | (x >= prob.upper - tol_b)
    if prob.enforce_beta:
        # the radius constraint also bounds the interior
        radius = beta_spectral_radius(theta_hat)
        if radius >= 1.0 - opts.margin - 1e-8:
            flags = flags | np.tile(np.r_[np.zeros(1 + q, bool), np.ones(p, bool)], S)
    score_norm = float(np.max(np.abs(pg)))
    return FitResult(
        theta_hat=theta_hat,
        objective=work.objective,
        score_norm=score_norm,
        J_hat=work.J_hat,
        kappa_hat=work.kappa_hat,
        covariance=cov,
        std_errors=se,
        residuals=work.residuals,
        converged=score_norm <= opts.grad_tol,
        n_iters=it,
        boundary_flags=flags,
        init=InitScheme(opts.init),
        starts=[r[5] * unscale for r in runs],
    )
