import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from pgarch.exceptions import OrderError
from pgarch.model import PGarchSpec, StandardGaussian, UnitConstant
from pgarch.simulation import (
    SimConfig,
    simulate_path,
    truncated_series_sample,
    truncated_series_state,
)
from pgarch.stationarity import unconditional_variance_p11

THETA0 = PGarchSpec([0.5, 1.0], [[0.2], [0.3]], [[0.3], [0.3]])


def hand_simulate(spec, eta):
    # straight-line recursion used as an oracle
    S, q, p = spec.period, spec.q, spec.p
    n = eta.size
    y = np.zeros(n)
    h = np.zeros(n)
    for t in range(n):
        v = t % S
        ht = spec.omega[v]
        for i in range(1, q + 1):
            ht += spec.alpha[v, i - 1] * (y[t - i] ** 2 if t - i >= 0 else spec.omega[(t - i) % S])
        for j in range(1, p + 1):
            ht += spec.beta[v, j - 1] * (h[t - j] if t - j >= 0 else spec.omega[(t - j) % S])
        h[t] = ht
        y[t] = np.sqrt(ht) * eta[t]
    return y, h


def test_matches_hand_recursion():
    spec = PGarchSpec([0.5, 1.0, 0.7], [[0.2, 0.1], [0.3, 0.0], [0.1, 0.2]],
                      [[0.3], [0.2], [0.1]])
    cfg = SimConfig(20, seed=9, burn_in=0)
    s = simulate_path(spec, cfg)
    eta = StandardGaussian().sample(np.random.default_rng(9), 60)
    y, h = hand_simulate(spec, eta)
    assert_allclose(s.values, y, rtol=1e-13)
    assert_allclose(s.h_true, h, rtol=1e-13)


def test_white_noise_variances():
    spec = PGarchSpec([1.0, 4.0], np.zeros((2, 0)), np.zeros((2, 0)))
    s = simulate_path(spec, SimConfig(5000, seed=1))
    assert_allclose(s.h_true.reshape(-1, 2), np.broadcast_to([1.0, 4.0], (5000, 2)))
    var = (s.values.reshape(-1, 2) ** 2).mean(axis=0)
    assert_allclose(var, [1.0, 4.0], rtol=0.05)


def test_deterministic():
    a = simulate_path(THETA0, SimConfig(100, seed=42))
    b = simulate_path(THETA0, SimConfig(100, seed=42))
    assert_array_equal(a.values, b.values)
    assert_array_equal(a.h_true, b.h_true)
    c = simulate_path(THETA0, SimConfig(100, seed=43))
    assert not np.array_equal(a.values, c.values)


def test_alignment_and_positivity():
    s = simulate_path(THETA0, SimConfig(1000, seed=0))
    assert s.T == 2000 and s.period == 2
    assert np.all(s.h_true >= THETA0.omega.min())
    # season 1 never falls below omega_1, season 2 never below omega_2
    assert np.all(s.h_true.reshape(-1, 2) >= THETA0.omega)


def test_burn_in_must_keep_alignment():
    with pytest.raises(ValueError):
        simulate_path(THETA0, SimConfig(10, burn_in=3))


def test_mean_h_matches_closed_form():
    s = simulate_path(THETA0, SimConfig(100_000, seed=5))
    h = s.h_true.reshape(-1, 2)
    for v in (1, 2):
        col = h[:, v - 1]
        # batch means absorb serial dependence
        batches = col.reshape(100, -1).mean(axis=1)
        se = batches.std(ddof=1) / 10
        assert abs(col.mean() - unconditional_variance_p11(THETA0, v)) < 3 * se


def test_periodic_law():
    s = simulate_path(THETA0, SimConfig(200_000, seed=6))
    y2 = (s.values ** 2).reshape(2, -1, 2)
    first, second = y2[0].mean(axis=0), y2[1].mean(axis=0)
    assert_allclose(first, second, rtol=0.05)
    assert abs(first[0] - first[1]) > 0.2


def test_burn_in_sufficiency():
    base = simulate_path(THETA0, SimConfig(20_000, seed=8))
    longer = simulate_path(THETA0, SimConfig(20_000, seed=8, burn_in=200))
    for v in range(2):
        a = base.values[v::2] ** 2
        b = longer.values[v::2] ** 2
        se = a.std(ddof=1) / np.sqrt(a.size)
        assert abs(a.mean() - b.mean()) < se


def test_series_state_zero_coefficients():
    spec = PGarchSpec([1.5], [[0.0]], [[0.0]])
    for K in (1, 5, 30):
        Y = truncated_series_state(spec, StandardGaussian(), K, seed=0, v=1)
        eta = np.random.default_rng(0).standard_normal(K + 1)
        assert_allclose(Y, [1.5 * eta[0] ** 2, 1.5])


def test_series_state_geometric_sum():
    spec = PGarchSpec([1.0], [[0.5]], [[0.0]])
    for K in (1, 4, 10):
        Y = truncated_series_state(spec, UnitConstant(), K, seed=0, v=1)
        assert Y[1] == pytest.approx(2 - 0.5 ** K, rel=1e-14)


def test_series_state_monotone_in_K():
    prev = None
    for K in (1, 2, 5, 10, 50):
        Y = truncated_series_state(THETA0, StandardGaussian(), K, seed=3, v=2)
        if prev is not None:
            assert np.all(Y >= prev)
        prev = Y


def test_series_state_needs_both_orders():
    spec = PGarchSpec([1.0], [[0.5]], np.zeros((1, 0)))
    with pytest.raises(OrderError):
        truncated_series_state(spec, StandardGaussian(), 5, 0, 1)


def test_series_sample_matches_closed_form():
    states, conv = truncated_series_sample(THETA0, StandardGaussian(), 200, 10_000, seed=1, v=1)
    assert conv == 1.0
    h = states[:, 1]
    se = h.std(ddof=1) / np.sqrt(h.size)
    assert abs(h.mean() - unconditional_variance_p11(THETA0, 1)) < 3 * se


def test_series_matches_simulated_squares():
    states, _ = truncated_series_sample(THETA0, StandardGaussian(), 200, 10_000, seed=2, v=2)
    y2 = simulate_path(THETA0, SimConfig(50_000, seed=2)).values[1::2] ** 2
    se = np.hypot(states[:, 0].std(ddof=1) / np.sqrt(10_000),
                  y2.reshape(100, -1).mean(axis=1).std(ddof=1) / 10)
    assert abs(states[:, 0].mean() - y2.mean()) < 3 * se
