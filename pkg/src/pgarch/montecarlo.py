"""
Replicated simulate-then-fit experiments.

Replication ``r`` at sample size ``N`` always simulates with the generator
seeded by ``(seed, N, r)``, so results do not depend on worker scheduling or
on which other cells are run.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
import json
import math
import warnings

import numpy as np
from scipy import stats

from pgarch.exceptions import (
    DegenerateError,
    ExcessiveExclusionsError,
    MomentWarning,
    PreconditionError,
)
from pgarch.likelihood import InitScheme, score_and_info
from pgarch.model import (
    InnovationDist,
    PGarchSpec,
    StandardGaussian,
    require_non_degenerate,
    require_valid,
)
from pgarch.qmle import FitOptions, cross_block_mass, fit
from pgarch.simulation import SimConfig, simulate_path
from pgarch.stationarity import Decision, lyapunov_mc

__all__ = [
    "MonteCarloReport",
    "j_reference",
    "run_consistency",
    "run_normality",
]

MAX_EXCLUDED = 0.05


@dataclass(frozen=True, eq=False)
class MonteCarloReport:
    """
    Summary of a Monte Carlo experiment.

    Arrays indexed by coordinate follow the flattened parameter order given
    by ``param_names``.  Fields that an experiment does not compute are
    ``None``.
    """

    spec0: PGarchSpec
    dist: dict
    n_grid: list
    R: int
    param_names: list
    bias: np.ndarray | None = None
    rmse: np.ndarray | None = None
    scaled_errors: np.ndarray | None = None
    ci_coverage: np.ndarray | None = None
    ks_distance: np.ndarray | None = None
    ks_pvalue: np.ndarray | None = None
    ks_critical_1pct: float | None = None
    sandwich_ratio: np.ndarray | None = None
    j_cross_block_mass: float | None = None
    n_excluded: list = field(default_factory=list)
    n_boundary: list = field(default_factory=list)
    warnings: list = field(default_factory=list)

    def _per_coord(self, arr) -> dict | None:
        if arr is None:
            return None
        return dict(zip(self.param_names, np.asarray(arr, dtype=float).tolist()))

    def to_dict(self) -> dict:
        per_n = lambda arr: None if arr is None else {  # noqa: E731
            str(N): self._per_coord(row) for N, row in zip(self.n_grid, arr)}
        return {
            "spec0": self.spec0.to_dict(),
            "dist": self.dist,
            "n_grid": [int(n) for n in self.n_grid],
            "R": int(self.R),
            "param_names": list(self.param_names),
            "bias": per_n(self.bias),
            "rmse": per_n(self.rmse),
            "scaled_errors": None if self.scaled_errors is None
            else np.asarray(self.scaled_errors).tolist(),
            "ci_coverage": self._per_coord(self.ci_coverage),
            "normality_stats": None if self.ks_distance is None else {
                "ks_distance": self._per_coord(self.ks_distance),
                "ks_pvalue": self._per_coord(self.ks_pvalue),
                "ks_critical_1pct": self.ks_critical_1pct,
            },
            "sandwich_ratio": self._per_coord(self.sandwich_ratio),
            "j_cross_block_mass": self.j_cross_block_mass,
            "n_excluded": [int(n) for n in self.n_excluded],
            "n_boundary": [int(n) for n in self.n_boundary],
            "warnings": list(self.warnings),
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)


def _replicate(args):
    spec0, dist, N, r, seed, opts = args
    series = simulate_path(spec0, SimConfig(N, seed=(seed, N, r), dist=dist))
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            res = fit(series, spec0.period, spec0.q, spec0.p, opts)
    except (ValueError, RuntimeError, np.linalg.LinAlgError, FloatingPointError):
        return None
    return (res.theta_hat.to_vector(), res.std_errors, res.boundary_flags,
            np.diag(res.covariance), res.J_hat)


def _run_cell(spec0, dist, N, R, seed, opts, n_jobs):
    jobs = [(spec0, dist, N, r, seed, opts) for r in range(R)]
    if n_jobs > 1:
        with ProcessPoolExecutor(max_workers=n_jobs) as ex:
            out = list(ex.map(_replicate, jobs, chunksize=max(1, R // (4 * n_jobs))))
    else:
        out = [_replicate(j) for j in jobs]
    kept = [o for o in out if o is not None]
    n_excl = R - len(kept)
    if n_excl > MAX_EXCLUDED * R:
        raise ExcessiveExclusionsError(
            f"{n_excl} of {R} replications failed at N={N}")
    return kept, n_excl


def _check_stationary(spec0, dist, seed, lyapunov_blocks):
    require_valid(spec0)
    require_non_degenerate(dist)
    if spec0.p + spec0.q == 0:
        return
    try:
        est = lyapunov_mc(spec0, dist, lyapunov_blocks, seed)
    except DegenerateError:
        # products collapse to zero: the exponent is -inf
        return
    if est.decision is not Decision.STRICTLY_NEGATIVE:
        raise PreconditionError(
            f"spec0 is not shown strictly periodically stationary "
            f"(gamma_hat={est.gamma_hat:.4g}, se={est.std_error:.2g}, "
            f"decision={est.decision.value})")


def _moment_warnings(dist) -> list[str]:
    msgs = []
    m4 = dist.fourth_moment
    if not math.isfinite(m4):
        raise PreconditionError("innovations lack a finite fourth moment")
    dof = getattr(dist, "dof", None)
    if dof is not None and dof <= 8:
        msgs.append(
            f"student-t dof={dof:g}: eta**8 has infinite mean, so kappa_hat "
            "converges slowly and standard errors are unreliable")
    for m in msgs:
        warnings.warn(m, MomentWarning, stacklevel=3)
    return msgs


def run_consistency(
    spec0: PGarchSpec,
    dist: InnovationDist | None = None,
    n_grid=(250, 1000, 4000),
    R: int = 200,
    opts: FitOptions | None = None,
    seed: int = 0,
    n_jobs: int = 1,
    lyapunov_blocks: int = 5000,
) -> MonteCarloReport:
    """
    Bias and RMSE of the QMLE across sample sizes.

    Parameters
    ----------
    spec0 : PGarchSpec
        True parameter; must pass the Lyapunov stationarity check.
    n_grid : sequence of int
        Strictly increasing numbers of years (at least two).
    R : int
        Replications per sample size.

    Raises
    ------
    PreconditionError
        If the stationarity decision for ``spec0`` is not strictly negative.
    ExcessiveExclusionsError
        If more than 5% of fits fail in any cell.
    """
    dist = StandardGaussian() if dist is None else dist
    n_grid = [int(n) for n in n_grid]
    if len(n_grid) < 2 or any(b <= a for a, b in zip(n_grid, n_grid[1:])):
        raise ValueError("n_grid must be strictly increasing with >= 2 entries")
    _check_stationary(spec0, dist, seed, lyapunov_blocks)
    theta0 = spec0.to_vector()
    bias, rmse, n_excl, n_bnd = [], [], [], []
    for N in n_grid:
        kept, excl = _run_cell(spec0, dist, N, R, seed, opts, n_jobs)
        est = np.array([k[0] for k in kept])
        err = est - theta0
        bias.append(err.mean(axis=0))
        rmse.append(np.sqrt((err ** 2).mean(axis=0)))
        n_excl.append(excl)
        n_bnd.append(int(sum(np.any(k[2]) for k in kept)))
    return MonteCarloReport(
        spec0=spec0, dist=dist.to_dict(), n_grid=n_grid, R=R,
        param_names=spec0.param_names(), bias=np.array(bias),
        rmse=np.array(rmse), scaled_errors=math.sqrt(n_grid[-1]) * err,
        n_excluded=n_excl, n_boundary=n_bnd,
    )


def run_normality(
    spec0: PGarchSpec,
    dist: InnovationDist | None = None,
    N: int = 4000,
    R: int = 500,
    opts: FitOptions | None = None,
    seed: int = 0,
    n_jobs: int = 1,
    lyapunov_blocks: int = 5000,
    level: float = 0.95,
) -> MonteCarloReport:
    """
    Sampling distribution of the QMLE at one sample size.

    Errors are standardised by each replication's own standard errors and
    compared with the standard normal: interval coverage at ``level`` and a
    Kolmogorov-Smirnov distance per coordinate.  Replications with an
    estimate on the boundary of the box are excluded from these statistics.

    ``sandwich_ratio`` is the Monte Carlo variance of each coordinate divided
    by the average estimated variance.
    """
    dist = StandardGaussian() if dist is None else dist
    msgs = _moment_warnings(dist)
    _check_stationary(spec0, dist, seed, lyapunov_blocks)
    theta0 = spec0.to_vector()
    kept, excl = _run_cell(spec0, dist, int(N), R, seed, opts, n_jobs)
    interior = [k for k in kept if not np.any(k[2])]
    est = np.array([k[0] for k in interior])
    se = np.array([k[1] for k in interior])
    var_hat = np.array([k[3] for k in interior])
    z_crit = stats.norm.ppf(0.5 + level / 2)
    zs = (est - theta0) / se
    coverage = np.mean(np.abs(zs) <= z_crit, axis=0)
    ks = [stats.kstest(zs[:, j], "norm") for j in range(zs.shape[1])]
    n_int = est.shape[0]
    J_mean = np.mean([k[4] for k in kept], axis=0)
    all_est = np.array([k[0] for k in kept])
    return MonteCarloReport(
        spec0=spec0, dist=dist.to_dict(), n_grid=[int(N)], R=R,
        param_names=spec0.param_names(),
        bias=(all_est - theta0).mean(axis=0)[None, :],
        rmse=np.sqrt(((all_est - theta0) ** 2).mean(axis=0))[None, :],
        scaled_errors=math.sqrt(N) * (all_est - theta0),
        ci_coverage=coverage,
        ks_distance=np.array([k.statistic for k in ks]),
        ks_pvalue=np.array([k.pvalue for k in ks]),
        ks_critical_1pct=float(stats.kstwo.ppf(0.99, n_int)),
        sandwich_ratio=est.var(axis=0, ddof=1) / var_hat.mean(axis=0),
        j_cross_block_mass=cross_block_mass(J_mean, spec0.period),
        n_excluded=[excl], n_boundary=[len(kept) - n_int], warnings=msgs,
    )


def j_reference(
    spec0: PGarchSpec,
    dist: InnovationDist | None = None,
    M: int = 100_000,
    seed: int = 0,
    lyapunov_blocks: int = 5000,
) -> np.ndarray:
    """
    Long-run information matrix at the true parameter.

    Evaluates the per-year information estimate on one simulated path of
    ``M`` years, which approximates the population matrix for large ``M``.
    """
    dist = StandardGaussian() if dist is None else dist
    _check_stationary(spec0, dist, seed, lyapunov_blocks)
    series = simulate_path(spec0, SimConfig(M, seed=seed, dist=dist))
    return score_and_info(spec0, series, InitScheme.SAMPLE).J_hat
