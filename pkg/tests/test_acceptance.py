"""
Acceptance criteria, each run at its stated tolerance.

Every test prints one ``PASS``/``FAIL`` line (also collected into the
terminal summary) before asserting.
"""

import json
import time
import warnings

import numpy as np
import pytest

from oracles import fd_gradient, forgetting_grid, gradient_grid, max_rel_error
from pgarch.cli import dispatch
from pgarch.likelihood import InitScheme, neg_avg_loglik, score_and_info
from pgarch.model import PGarchSpec, StandardGaussian, UnitConstant
from pgarch.montecarlo import j_reference, run_consistency, run_normality
from pgarch.qmle import fit
from pgarch.simulation import SimConfig, simulate_path, truncated_series_sample
from pgarch.stationarity import (
    beta_spectral_radius,
    lyapunov_mc,
    parch1_stationarity_bound,
    unconditional_variance_p11,
)

THETA0 = PGarchSpec([0.5, 1.0], [[0.2], [0.3]], [[0.3], [0.3]])
E_LOG_CHI2 = -1.2703628454614782


@pytest.fixture
def verdict(acceptance_log):
    def record(n, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail}"
        print(line)
        acceptance_log.append(line)
        assert ok, line
    return record


@pytest.fixture(scope="module")
def normality_report():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        t0 = time.perf_counter()
        rep = run_normality(THETA0, StandardGaussian(), N=4000, R=500, seed=2)
    return rep, time.perf_counter() - t0


def test_c01_lyapunov_closed_forms(verdict):
    t0 = time.perf_counter()
    scalar = lyapunov_mc(PGarchSpec([1.0, 1.0], [[0.5], [0.8]], np.zeros((2, 0))),
                         StandardGaussian(), 10_000, seed=0)
    oracle = np.log(0.4) + 2 * E_LOG_CHI2
    z = abs(scalar.gamma_hat - oracle) / scalar.std_error
    spec = PGarchSpec([1.0, 1.0], [[0.3], [0.2]], [[0.1], [0.2]])
    A1 = np.array([[0.3, 0.1], [0.3, 0.1]])
    A2 = np.array([[0.2, 0.2], [0.2, 0.2]])
    eig = np.log(np.max(np.abs(np.linalg.eigvals(A2 @ A1))))
    det = lyapunov_mc(spec, UnitConstant(), 10_000)
    gap = abs(det.gamma_hat - eig)
    dt = time.perf_counter() - t0
    ok = abs(oracle - -3.4570) < 5e-5 and z < 3 and gap < 1e-3 and dt < 30
    verdict(1, ok, f"scalar gamma {scalar.gamma_hat:.4f} vs {oracle:.4f} ({z:.2f} se); "
                   f"deterministic gap {gap:.2e}; {dt:.1f}s")


def test_c02_stationarity_bound(verdict):
    t0 = time.perf_counter()
    a = parch1_stationarity_bound(StandardGaussian())
    dt = time.perf_counter() - t0
    ok = 3.555 <= a <= 3.570 and abs(a - 2 * np.exp(np.euler_gamma)) < 1e-6 and dt < 10
    verdict(2, ok, f"a = {a:.6f} (oracle {2 * np.exp(np.euler_gamma):.6f}); {dt:.2f}s")


def test_c03_gradient(verdict):
    t0 = time.perf_counter()
    errs = [max_rel_error(score_and_info(s, y, init).score, fd_gradient(s, y, init))
            for init in InitScheme for s, y in gradient_grid()]
    dt = time.perf_counter() - t0
    worst = max(errs)
    verdict(3, worst < 1e-6 and dt < 60,
            f"max relative error {worst:.2e} over {len(errs)} cases; {dt:.1f}s")


def test_c04_initial_value_forgetting(verdict):
    t0 = time.perf_counter()
    gaps = []
    for spec, y in forgetting_grid(T=2000):
        assert beta_spectral_radius(spec) <= 0.5 + 1e-12
        gaps.append(abs(neg_avg_loglik(spec, y, InitScheme.OMEGA)
                        - neg_avg_loglik(spec, y, InitScheme.SAMPLE)))
    dt = time.perf_counter() - t0
    worst = max(gaps)
    verdict(4, worst < 1e-8 and dt < 60,
            f"max |C_omega - C_sample| = {worst:.2e} at T=2000 (needs < 1e-8); {dt:.2f}s")


@pytest.mark.slow
def test_c05_consistency(verdict):
    t0 = time.perf_counter()
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        rep = run_consistency(THETA0, StandardGaussian(), (250, 1000, 4000), R=200, seed=1)
    dt = time.perf_counter() - t0
    rmse = rep.rmse
    decreasing = bool(np.all(np.diff(rmse, axis=0) < 0))
    ratio = rmse[1] / rmse[2]
    in_band = bool(np.all((1.4 <= ratio) & (ratio <= 2.9)))
    verdict(5, decreasing and in_band and dt < 900,
            f"RMSE decreasing={decreasing}; RMSE(1000)/RMSE(4000) = "
            f"{np.array2string(ratio, precision=2)}; excluded {rep.n_excluded}; {dt:.0f}s")


@pytest.mark.slow
def test_c06_normality(verdict, normality_report):
    rep, dt = normality_report
    cov = rep.ci_coverage
    cov_ok = bool(np.all((0.92 <= cov) & (cov <= 0.98)))
    ks_pass = int(np.sum(rep.ks_distance < rep.ks_critical_1pct))
    verdict(6, cov_ok and ks_pass >= 5 and dt < 1800,
            f"coverage {np.array2string(cov, precision=3)}; KS below 1% critical on "
            f"{ks_pass}/6; boundary {rep.n_boundary}; {dt:.0f}s")


def test_c07_information_oracle(verdict):
    spec = PGarchSpec([1.0, 1.0], [[0.0], [0.0]], np.zeros((2, 0)))
    J = j_reference(spec, StandardGaussian(), M=1_000_000, seed=3)
    target = np.array([[1.0, 1.0], [1.0, 3.0]])
    rel = max(np.max(np.abs(J[b, b] - target) / target)
              for b in (slice(0, 2), slice(2, 4)))
    parch = PGarchSpec([0.5, 1.0], [[0.2], [0.5]], np.zeros((2, 0)))
    res = fit(simulate_path(parch, SimConfig(2000, seed=4)), 2, 1, 0)
    cross = max(np.max(np.abs(res.J_hat[:2, 2:])), np.max(np.abs(res.J_hat[2:, :2])))
    verdict(7, rel < 0.02 and cross == 0.0,
            f"J block max relative deviation {rel:.4f}; fitted P-ARCH(1) cross block max {cross}")


@pytest.mark.slow
def test_c08_sandwich(verdict, normality_report):
    rep, _ = normality_report
    r = rep.sandwich_ratio
    verdict(8, bool(np.all((0.7 <= r) & (r <= 1.4))),
            f"empirical/estimated variance {np.array2string(r, precision=3)}")


def test_c09_series_oracle(verdict):
    parts, ok = [], True
    for v in (1, 2):
        states, conv = truncated_series_sample(THETA0, StandardGaussian(), 200, 10_000,
                                               seed=5, v=v)
        h = states[:, 1]
        se = h.std(ddof=1) / np.sqrt(h.size)
        target = unconditional_variance_p11(THETA0, v)
        z = abs(h.mean() - target) / se
        ok &= z < 3
        parts.append(f"season {v}: {h.mean():.4f} vs {target:.4f} ({z:.2f} se, tail ok {conv:.2f})")
    verdict(9, ok, "; ".join(parts))


def test_c10_determinism(verdict, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(json.dumps({
        "model": {"omega": [0.5, 1.0], "alpha": [[0.2], [0.3]], "beta": [[0.3], [0.3]]},
        "sim": {"n_years": 1000},
        "mc": {"experiment": "normality", "N": 300, "R": 10},
    }))
    same = {}
    for tag in ("a", "b"):
        codes = [
            dispatch(["simulate", "--config", str(cfg), "--seed", "9",
                      "--out", str(tmp_path / f"sim_{tag}.csv")]),
            dispatch(["fit", "--data", str(tmp_path / "sim_a.csv"), "--period", "2",
                      "--p", "1", "--q", "1", "--seed", "9",
                      "--out", str(tmp_path / f"fit_{tag}.json")]),
            dispatch(["montecarlo", "--config", str(cfg), "--seed", "9",
                      "--out", str(tmp_path / f"mc_{tag}.json")]),
        ]
        assert codes == [0, 0, 0]
    for kind, ext in (("sim", "csv"), ("fit", "json"), ("mc", "json")):
        same[kind] = ((tmp_path / f"{kind}_a.{ext}").read_bytes()
                      == (tmp_path / f"{kind}_b.{ext}").read_bytes())
    verdict(10, all(same.values()), f"byte-identical reruns {same}")
