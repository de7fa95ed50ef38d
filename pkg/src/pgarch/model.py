"""
Periodic GARCH model specification, parameter boxes, innovation laws and
observed series.

Seasons are 1-based throughout: observation ``t = 1`` belongs to season 1 and
``season_of(t, S) = ((t - 1) mod S) + 1``.  Presample times ``t <= 0`` follow
the same rule, so time 0 is season ``S``.

The flattened parameter vector is season-major::

    (omega_1, alpha_{1,1..q}, beta_{1,1..p}, omega_2, ..., beta_{S,1..p})
"""

from __future__ import annotations

from dataclasses import dataclass, field
import math
from typing import Union

import numpy as np

__all__ = [
    "InnovationDist",
    "ParameterSpace",
    "PGarchSpec",
    "Series",
    "StandardGaussian",
    "StandardizedStudentT",
    "UnitConstant",
    "season_of",
    "validate_spec",
]


def season_of(t: int, S: int) -> int:
    """Season index in ``{1, ..., S}`` of time ``t`` (``t = 1`` is season 1)."""
    if S < 1:
        raise ValueError("period S must be >= 1")
    return (t - 1) % S + 1


def _frozen(a, ndim: int) -> np.ndarray:
    arr = np.array(a, dtype=float, copy=True)
    if arr.ndim != ndim:
        raise ValueError(f"expected a {ndim}-d array, got shape {arr.shape}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class PGarchSpec:
    """
    One point of the periodic GARCH parameter space.

    Parameters
    ----------
    omega : array_like, shape (S,)
        Seasonal variance intercepts.
    alpha : array_like, shape (S, q)
        ARCH coefficients, row ``v - 1`` holds season ``v``.
    beta : array_like, shape (S, p)
        GARCH coefficients, row ``v - 1`` holds season ``v``.

    Notes
    -----
    Construction only checks shapes.  Sign constraints are reported by
    :func:`validate_spec` so that invalid points can still be represented.
    """

    omega: np.ndarray
    alpha: np.ndarray
    beta: np.ndarray

    def __post_init__(self) -> None:
        omega = _frozen(self.omega, 1)
        S = omega.shape[0]
        if S < 1:
            raise ValueError("omega must have at least one season")
        alpha = np.array(self.alpha, dtype=float)
        beta = np.array(self.beta, dtype=float)
        if alpha.size == 0:
            alpha = np.zeros((S, 0))
        if beta.size == 0:
            beta = np.zeros((S, 0))
        alpha = _frozen(alpha, 2)
        beta = _frozen(beta, 2)
        if alpha.shape[0] != S or beta.shape[0] != S:
            raise ValueError(
                f"alpha and beta need {S} rows (one per season), got "
                f"{alpha.shape[0]} and {beta.shape[0]}"
            )
        object.__setattr__(self, "omega", omega)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)

    @property
    def period(self) -> int:
        return self.omega.shape[0]

    @property
    def q(self) -> int:
        return self.alpha.shape[1]

    @property
    def p(self) -> int:
        return self.beta.shape[1]

    @property
    def n_params(self) -> int:
        return self.period * (1 + self.q + self.p)

    def omega_of(self, v: int) -> float:
        """Intercept of season ``v``, extended periodically to any integer."""
        return float(self.omega[(v - 1) % self.period])

    def alpha_of(self, v: int) -> np.ndarray:
        return self.alpha[(v - 1) % self.period]

    def beta_of(self, v: int) -> np.ndarray:
        return self.beta[(v - 1) % self.period]

    def to_vector(self) -> np.ndarray:
        return np.hstack([self.omega[:, None], self.alpha, self.beta]).ravel()

    @classmethod
    def from_vector(cls, theta, S: int, q: int, p: int) -> "PGarchSpec":
        theta = np.asarray(theta, dtype=float)
        k = 1 + q + p
        if theta.shape != (S * k,):
            raise ValueError(f"theta must have length {S * k}, got {theta.shape}")
        blocks = theta.reshape(S, k)
        return cls(blocks[:, 0], blocks[:, 1:1 + q], blocks[:, 1 + q:])

    def param_names(self) -> list[str]:
        return param_names(self.period, self.q, self.p)

    def season_blocks(self) -> list[slice]:
        """Slices of the flattened vector belonging to each season."""
        k = 1 + self.q + self.p
        return [slice(v * k, (v + 1) * k) for v in range(self.period)]

    def __eq__(self, other) -> bool:
        if not isinstance(other, PGarchSpec):
            return NotImplemented
        return (
            self.omega.shape == other.omega.shape
            and self.alpha.shape == other.alpha.shape
            and self.beta.shape == other.beta.shape
            and np.array_equal(self.to_vector(), other.to_vector())
        )

    def __repr__(self) -> str:
        return (
            f"PGarchSpec(S={self.period}, q={self.q}, p={self.p}, "
            f"omega={self.omega.tolist()}, alpha={self.alpha.tolist()}, "
            f"beta={self.beta.tolist()})"
        )

    def to_dict(self) -> dict:
        return {
            "period": self.period,
            "q": self.q,
            "p": self.p,
            "omega": self.omega.tolist(),
            "alpha": self.alpha.tolist(),
            "beta": self.beta.tolist(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "PGarchSpec":
        S = len(d["omega"])
        q = int(d.get("q", len(d["alpha"][0]) if len(d.get("alpha", [])) else 0))
        p = int(d.get("p", len(d["beta"][0]) if len(d.get("beta", [])) else 0))
        alpha = np.asarray(d.get("alpha", []), dtype=float).reshape(S, q)
        beta = np.asarray(d.get("beta", []), dtype=float).reshape(S, p)
        return cls(d["omega"], alpha, beta)


def param_names(S: int, q: int, p: int) -> list[str]:
    names = []
    for v in range(1, S + 1):
        names.append(f"omega[{v}]")
        names.extend(f"alpha[{v}][{i}]" for i in range(1, q + 1))
        names.extend(f"beta[{v}][{j}]" for j in range(1, p + 1))
    return names


def validate_spec(spec: PGarchSpec) -> list[str]:
    """
    Check the sign constraints of a specification.

    Returns
    -------
    list of str
        One message per violated constraint; empty when the spec is valid.
    """
    problems = []
    for v, w in enumerate(spec.omega, start=1):
        if not (np.isfinite(w) and w > 0):
            problems.append(f"omega[{v}] must be > 0")
    for v, row in enumerate(spec.alpha, start=1):
        for i, a in enumerate(row, start=1):
            if not (np.isfinite(a) and a >= 0):
                problems.append(f"alpha[{v}][{i}] must be ≥ 0")
    for v, row in enumerate(spec.beta, start=1):
        for j, b in enumerate(row, start=1):
            if not (np.isfinite(b) and b >= 0):
                problems.append(f"beta[{v}][{j}] must be ≥ 0")
    return problems


def require_valid(spec: PGarchSpec) -> None:
    problems = validate_spec(spec)
    if problems:
        raise ValueError("invalid P-GARCH spec: " + "; ".join(problems))


@dataclass(frozen=True)
class ParameterSpace:
    """Coordinate-wise box for the flattened parameter vector."""

    lower: np.ndarray
    upper: np.ndarray
    epsilon: float

    def __post_init__(self) -> None:
        lower = _frozen(self.lower, 1)
        upper = _frozen(self.upper, 1)
        if lower.shape != upper.shape:
            raise ValueError("lower and upper must have the same length")
        if np.any(lower > upper):
            raise ValueError("lower must not exceed upper")
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @classmethod
    def default(cls, S: int, q: int, p: int, scale: float = 1.0) -> "ParameterSpace":
        """Wide box: omega in [1e-6, 1e6 * scale], alpha and beta in [0, 10]."""
        eps = 1e-6
        k = 1 + q + p
        lower = np.zeros((S, k))
        upper = np.full((S, k), 10.0)
        lower[:, 0] = eps
        upper[:, 0] = max(1e6 * scale, 10 * eps)
        return cls(lower.ravel(), upper.ravel(), eps)

    @classmethod
    def compact(
        cls,
        S: int,
        q: int,
        p: int,
        epsilon: float,
        alpha_upper: float | None = None,
    ) -> "ParameterSpace":
        """
        Compact box ``([eps, 1/eps] x [0, alpha_upper]^q x [0, 1 - eps]^p)^S``.

        ``alpha_upper`` defaults to ``1 / eps``.  For a P-ARCH(1) pass
        ``a ** (1 / S) - 1`` with ``a`` from
        :func:`pgarch.stationarity.parch1_stationarity_bound`.
        """
        if not 0 < epsilon < 1:
            raise ValueError("epsilon must lie in (0, 1)")
        k = 1 + q + p
        a_up = 1.0 / epsilon if alpha_upper is None else float(alpha_upper)
        lower = np.zeros((S, k))
        upper = np.empty((S, k))
        lower[:, 0] = epsilon
        upper[:, 0] = 1.0 / epsilon
        upper[:, 1:1 + q] = a_up
        upper[:, 1 + q:] = 1.0 - epsilon
        return cls(lower.ravel(), upper.ravel(), epsilon)

    def contains(self, theta) -> bool:
        theta = np.asarray(theta)
        return bool(np.all(theta >= self.lower) and np.all(theta <= self.upper))

    def project(self, theta) -> np.ndarray:
        return np.clip(theta, self.lower, self.upper)

    def scaled(self, c2: float, S: int, q: int, p: int) -> "ParameterSpace":
        """Box for data multiplied by ``sqrt(c2)``: omega bounds scale by ``c2``."""
        k = 1 + q + p
        lo = self.lower.reshape(S, k).copy()
        up = self.upper.reshape(S, k).copy()
        lo[:, 0] *= c2
        up[:, 0] *= c2
        return ParameterSpace(lo.ravel(), up.ravel(), self.epsilon * c2)


# --- innovations -----------------------------------------------------------


@dataclass(frozen=True)
class StandardGaussian:
    name: str = field(default="gaussian", init=False)

    @property
    def fourth_moment(self) -> float:
        return 3.0

    @property
    def non_degenerate(self) -> bool:
        return True

    def sample(self, rng: np.random.Generator, size) -> np.ndarray:
        return rng.standard_normal(size)

    def to_dict(self) -> dict:
        return {"name": self.name}


@dataclass(frozen=True)
class StandardizedStudentT:
    """Student-t scaled by ``sqrt((dof - 2) / dof)`` to unit variance."""

    dof: float
    name: str = field(default="student_t", init=False)

    def __post_init__(self) -> None:
        if not self.dof > 2:
            raise ValueError("StandardizedStudentT needs dof > 2")

    @property
    def fourth_moment(self) -> float:
        if self.dof <= 4:
            return math.inf
        return 3.0 * (self.dof - 2) / (self.dof - 4)

    @property
    def non_degenerate(self) -> bool:
        return True

    def sample(self, rng: np.random.Generator, size) -> np.ndarray:
        return rng.standard_t(self.dof, size) * math.sqrt((self.dof - 2) / self.dof)

    def to_dict(self) -> dict:
        return {"name": self.name, "dof": self.dof}


@dataclass(frozen=True)
class UnitConstant:
    """Degenerate law with ``eta = 1`` (so ``eta**2 = 1``); for tests only."""

    name: str = field(default="unit", init=False)

    @property
    def fourth_moment(self) -> float:
        return 1.0

    @property
    def non_degenerate(self) -> bool:
        return False

    def sample(self, rng: np.random.Generator, size) -> np.ndarray:
        return np.ones(size)

    def to_dict(self) -> dict:
        return {"name": self.name}


InnovationDist = Union[StandardGaussian, StandardizedStudentT, UnitConstant]


def dist_from_dict(d: dict) -> InnovationDist:
    name = d.get("name", "gaussian")
    if name == "gaussian":
        return StandardGaussian()
    if name == "student_t":
        return StandardizedStudentT(float(d["dof"]))
    if name == "unit":
        return UnitConstant()
    raise ValueError(f"unknown innovation distribution {name!r}")


def require_non_degenerate(dist: InnovationDist) -> None:
    # identifiability needs a non-degenerate eta**2, not just eta
    if not dist.non_degenerate:
        raise ValueError(f"{type(dist).__name__} has degenerate eta**2")


@dataclass(frozen=True, eq=False)
class Series:
    """
    Observed or simulated path ``y_1, ..., y_T`` with observation 1 in season 1.

    ``h_true`` carries the simulator's conditional variances when known.
    """

    values: np.ndarray
    period: int
    h_true: np.ndarray | None = None

    def __post_init__(self) -> None:
        values = _frozen(self.values, 1)
        if self.period < 1:
            raise ValueError("period must be >= 1")
        object.__setattr__(self, "values", values)
        if self.h_true is not None:
            h = _frozen(self.h_true, 1)
            if h.shape != values.shape:
                raise ValueError("h_true must have the same length as values")
            if np.any(h <= 0):
                raise ValueError("h_true entries must be positive")
            object.__setattr__(self, "h_true", h)

    @property
    def T(self) -> int:
        return self.values.shape[0]

    @property
    def N(self) -> int:
        """Number of complete years; raises if ``T`` is not a multiple of ``S``."""
        self.check_whole_years()
        return self.T // self.period

    def check_whole_years(self) -> None:
        if self.T % self.period:
            raise ValueError(
                f"length {self.T} is not a multiple of period {self.period}"
            )

    @property
    def seasons(self) -> np.ndarray:
        """1-based season of each observation."""
        return np.arange(self.T) % self.period + 1

    def by_season(self, v: int) -> np.ndarray:
        return self.values[(v - 1) % self.period::self.period]

    def scaled(self, c: float) -> "Series":
        h = None if self.h_true is None else self.h_true * c * c
        return Series(self.values * c, self.period, h)
