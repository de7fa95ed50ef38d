"""Independent reference computations shared by the test modules."""

import numpy as np

from pgarch.likelihood import InitScheme, neg_avg_loglik
from pgarch.model import PGarchSpec
from pgarch.simulation import SimConfig, simulate_path


def hand_filter(spec, y, init):
    """Plain-loop volatility filter with explicit presample lookups."""
    S, q, p = spec.period, spec.q, spec.p
    y = np.asarray(y, dtype=float)
    T = y.size
    h = np.zeros(T)

    def pre(t):
        # value for time t <= 0 (0-based index t - 1 < 0)
        v = (t - 1) % S
        if init == InitScheme.OMEGA:
            return spec.omega[v]
        return y[v] ** 2

    for t in range(1, T + 1):
        v = (t - 1) % S
        ht = spec.omega[v]
        for i in range(1, q + 1):
            ht += spec.alpha[v, i - 1] * (y[t - i - 1] ** 2 if t - i >= 1 else pre(t - i))
        for j in range(1, p + 1):
            ht += spec.beta[v, j - 1] * (h[t - j - 1] if t - j >= 1 else pre(t - j))
        h[t - 1] = ht
    return h


def fd_gradient(spec, y, init, rel_step=1e-6):
    """
    Central differences of the criterion, one-sided at a zero lower bound.
    """
    theta = spec.to_vector()
    S, q, p = spec.period, spec.q, spec.p
    f = lambda x: neg_avg_loglik(PGarchSpec.from_vector(x, S, q, p), y, init)  # noqa: E731
    g = np.empty_like(theta)
    for k in range(theta.size):
        h = rel_step * (1 + abs(theta[k]))
        e = np.zeros_like(theta)
        e[k] = h
        if theta[k] - h < 0 and k % (1 + q + p) != 0:
            g[k] = (-3 * f(theta) + 4 * f(theta + e) - f(theta + 2 * e)) / (2 * h)
        else:
            g[k] = (f(theta + e) - f(theta - e)) / (2 * h)
    return g


def gradient_grid(n=10, seed=2024, T_years=300):
    """
    Seeded instances over S in {1, 2, 4} and (p, q) in {(1, 1), (0, 1)}.

    Each yields ``(spec, y)`` with ``spec`` a perturbation of the generating
    parameter, so the gradient is not near zero.
    """
    rng = np.random.default_rng(seed)
    out = []
    for i in range(n):
        S = (1, 2, 4)[i % 3]
        p, q = ((1, 1), (0, 1))[(i // 3) % 2]
        omega = rng.uniform(0.3, 2.0, S)
        alpha = rng.uniform(0.05, 0.4, (S, q))
        beta = rng.uniform(0.1, 0.5, (S, p))
        spec0 = PGarchSpec(omega, alpha, beta)
        y = simulate_path(spec0, SimConfig(T_years, seed=(seed, i))).values
        theta = spec0.to_vector() * rng.uniform(0.7, 1.3, spec0.n_params)
        out.append((PGarchSpec.from_vector(theta, S, q, p), y))
    return out


def max_rel_error(a, b):
    scale = np.maximum(np.maximum(np.abs(a), np.abs(b)), 1e-8)
    return float(np.max(np.abs(a - b) / scale))


def forgetting_grid(n=10, seed=77, T=2000):
    """Seeded P-GARCH(1,1) instances with ``rho(prod beta) <= 0.5``."""
    rng = np.random.default_rng(seed)
    out = []
    for i in range(n):
        S = (1, 2, 4)[i % 3]
        omega = rng.uniform(0.3, 2.0, S)
        alpha = rng.uniform(0.05, 0.3, (S, 1))
        beta = rng.uniform(0.1, 0.7, (S, 1))
        beta[0, 0] = min(beta[0, 0], 0.5 / np.prod(beta[1:, 0]))
        spec = PGarchSpec(omega, alpha, beta)
        y = simulate_path(spec, SimConfig(T // S, seed=(seed, i))).values
        out.append((spec, y))
    return out
