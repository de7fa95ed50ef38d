"""
Command line front end.

Subcommands: ``simulate``, ``fit``, ``lyapunov``, ``stationarity`` and
``montecarlo``.  Settings come from an optional JSON config file with the
sections ``model``, ``data``, ``sim``, ``fit``, ``lyapunov`` and ``mc`` plus
top-level ``seed`` and ``output``; command line flags override the file.

Exit codes: 0 success, 2 usage or configuration error, 3 data error,
4 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import warnings

import numpy as np

from pgarch import montecarlo
from pgarch.exceptions import (
    AllStartsFailedError,
    DegenerateError,
    ExcessiveExclusionsError,
    OrderError,
    PreconditionError,
)
from pgarch.likelihood import InitScheme
from pgarch.model import (
    PGarchSpec,
    Series,
    dist_from_dict,
    param_names,
    validate_spec,
)
from pgarch.qmle import FitOptions, fit
from pgarch.simulation import SimConfig, simulate_path
from pgarch.stationarity import (
    Decision,
    beta_spectral_radius,
    lyapunov_mc,
    moment_delta_search,
    unconditional_variance_p11,
)

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 0, 2, 3, 4


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


NUMERIC_ERRORS = (
    AllStartsFailedError,
    DegenerateError,
    ExcessiveExclusionsError,
    OrderError,
    PreconditionError,
    np.linalg.LinAlgError,
    FloatingPointError,
)


# --- config handling -------------------------------------------------------


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except OSError as exc:
        raise UsageError(f"--config: cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"--config: {path} line {exc.lineno}: {exc.msg}") from exc
    if not isinstance(cfg, dict):
        raise UsageError(f"--config: {path} must hold a JSON object")
    return cfg


def _pick(flag, section: dict, key: str, default=None):
    if flag is not None:
        return flag
    return section.get(key, default)


def _model_from_config(cfg: dict) -> PGarchSpec:
    model = cfg.get("model")
    if not model or "omega" not in model:
        raise UsageError("config section 'model' with omega/alpha/beta is required")
    try:
        spec = PGarchSpec.from_dict(model)
    except (KeyError, ValueError, TypeError) as exc:
        raise UsageError(f"config 'model': {exc}") from exc
    if "period" in model and int(model["period"]) != spec.period:
        raise UsageError(
            f"config 'model': period {model['period']} but {spec.period} omega values")
    problems = validate_spec(spec)
    if problems:
        raise UsageError("config 'model': " + "; ".join(problems))
    return spec


def _dist(section: dict, name: str | None, dof: float | None):
    d = dict(section.get("dist", {"name": "gaussian"}))
    if name is not None:
        d = {"name": name}
    if dof is not None:
        d["dof"] = dof
    try:
        return dist_from_dict(d)
    except (KeyError, ValueError) as exc:
        raise UsageError(f"--dist: {exc}") from exc


def _write_text(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", newline="") as fh:
        fh.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


# --- data ------------------------------------------------------------------


def read_series_csv(path: str, column: str | None = None) -> np.ndarray:
    """Read one column of a headed CSV file into a float array."""
    try:
        fh = open(path, newline="")
    except OSError as exc:
        raise DataError(f"{path}: {exc.strerror}") from exc
    with fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{path}: file is empty") from None
        header = [h.strip() for h in header]
        if column is None:
            column = "y" if "y" in header else header[-1]
        if column not in header:
            raise DataError(f"{path}: no column named {column!r} in header {header}")
        idx = header.index(column)
        values = []
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            try:
                values.append(float(row[idx]))
            except (ValueError, IndexError):
                raise DataError(
                    f"{path} line {lineno}: cannot parse {column!r} as a number"
                ) from None
    if not values:
        raise DataError(f"{path}: no observations")
    arr = np.array(values)
    if not np.all(np.isfinite(arr)):
        raise DataError(f"{path}: non-finite observation")
    return arr


def write_series_csv(series: Series) -> str:
    lines = ["t,season,y,h"]
    h = series.h_true if series.h_true is not None else np.full(series.T, np.nan)
    for t, (s, y, hv) in enumerate(zip(series.seasons.tolist(), series.values, h),
                                   start=1):
        lines.append(f"{t},{s},{float(y):.17g},{float(hv):.17g}")
    return "\n".join(lines) + "\n"


# --- subcommands -----------------------------------------------------------


def cmd_simulate(args, cfg) -> int:
    spec = _model_from_config(cfg)
    sim = cfg.get("sim", {})
    n_years = _pick(args.n_years, sim, "n_years")
    if n_years is None:
        raise UsageError("--n-years (or sim.n_years) is required")
    burn = _pick(args.burn_in, sim, "burn_in")
    if burn is not None and int(burn) % spec.period:
        raise UsageError(f"--burn-in {burn} is not a multiple of period {spec.period}")
    seed = int(_pick(args.seed, cfg, "seed", 0))
    dist = _dist(sim, args.dist, args.dof)
    series = simulate_path(spec, SimConfig(int(n_years), seed, dist,
                                           None if burn is None else int(burn)))
    _write_text(_pick(args.out, cfg, "output"), write_series_csv(series))
    return EXIT_OK


def _rotate(names_S: int, k: int, offset: int) -> np.ndarray:
    """Index map taking fitted (relabelled) coordinates to calendar seasons."""
    order = np.arange(names_S * k).reshape(names_S, k)
    return np.roll(order, offset, axis=0).ravel()


def cmd_fit(args, cfg) -> int:
    model = cfg.get("model", {})
    data = cfg.get("data", {})
    fcfg = cfg.get("fit", {})
    S = _pick(args.period, model, "period")
    q = _pick(args.q, model, "q")
    p = _pick(args.p, model, "p")
    path = _pick(args.data, data, "path")
    missing = [flag for flag, val in (("--data", path), ("--period", S), ("--q", q),
                                      ("--p", p)) if val is None]
    if missing:
        raise UsageError(f"missing {', '.join(missing)} (flags or config keys)")
    S, q, p = int(S), int(q), int(p)
    if S < 1 or q < 0 or p < 0:
        raise UsageError("--period must be >= 1 and --p, --q >= 0")
    offset = int(_pick(args.offset, data, "offset", 0))
    if not 0 <= offset < S:
        raise UsageError(f"--offset must lie in [0, {S - 1}]")
    try:
        init = InitScheme(_pick(args.init, fcfg, "init", "omega"))
    except ValueError:
        raise UsageError("--init must be 'omega' or 'sample'") from None
    opts = FitOptions(
        init=init,
        n_starts=int(_pick(args.n_starts, fcfg, "n_starts", 5)),
        max_iters=int(fcfg.get("max_iters", 200)),
        grad_tol=float(fcfg.get("grad_tol", 1e-6)),
        seed=int(_pick(args.seed, cfg, "seed", 0)),
    )
    y = read_series_csv(path, _pick(args.column, data, "column"))
    if y.shape[0] % S:
        raise DataError(f"length {y.shape[0]} is not a multiple of period {S}")
    if y.shape[0] // S < 10:
        raise DataError(f"{path}: need at least 10 years, got {y.shape[0] // S}")
    try:
        res = fit(y, S, q, p, opts)
    except DegenerateError as exc:
        raise DataError(f"{path}: {exc}") from exc
    out = res.to_dict()
    if offset:
        # observation 1 is calendar season offset + 1
        k = 1 + q + p
        idx = _rotate(S, k, offset)
        theta = res.theta_hat.to_vector()[idx]
        spec = PGarchSpec.from_vector(theta, S, q, p)
        names = param_names(S, q, p)
        out["model"] = spec.to_dict()
        out["theta_hat"] = dict(zip(names, theta.tolist()))
        out["std_errors"] = dict(zip(names, res.std_errors[idx].tolist()))
        out["boundary_flags"] = dict(zip(names, res.boundary_flags[idx].tolist()))
        out["J_hat"] = res.J_hat[np.ix_(idx, idx)].tolist()
        out["covariance"] = res.covariance[np.ix_(idx, idx)].tolist()
    out["season_offset"] = offset
    _write_text(_pick(args.out, cfg, "output"), _dump(out))
    return EXIT_OK


def _lyap_settings(args, cfg):
    lcfg = cfg.get("lyapunov", {})
    return (
        int(_pick(args.n_blocks, lcfg, "n_blocks", 10_000)),
        float(lcfg.get("z", 2.58)),
        _dist(lcfg, args.dist, args.dof),
        int(_pick(args.seed, cfg, "seed", 0)),
    )


def cmd_lyapunov(args, cfg) -> int:
    spec = _model_from_config(cfg)
    n_blocks, z, dist, seed = _lyap_settings(args, cfg)
    lcfg = cfg.get("lyapunov", {})
    est = lyapunov_mc(spec, dist, n_blocks, seed, z)
    found = moment_delta_search(
        spec, dist, int(lcfg.get("n0_max", 20)), int(lcfg.get("mc_size", 10_000)),
        seed, z)
    out = {
        "model": spec.to_dict(),
        "lyapunov": est.to_dict(),
        "beta_spectral_radius": beta_spectral_radius(spec) if spec.p else None,
        "delta_search": None if found is None
        else {"delta": found.delta, "n0": found.n0},
    }
    _write_text(_pick(args.out, cfg, "output"), _dump(out))
    return EXIT_OK


def cmd_stationarity(args, cfg) -> int:
    spec = _model_from_config(cfg)
    n_blocks, z, dist, seed = _lyap_settings(args, cfg)
    est = lyapunov_mc(spec, dist, n_blocks, seed, z)
    radius = beta_spectral_radius(spec) if spec.p else None
    uncond = None
    if spec.p == 1 and spec.q == 1:
        uncond = [unconditional_variance_p11(spec, v) for v in range(1, spec.period + 1)]
    out = {
        "model": spec.to_dict(),
        "decision": est.decision.value,
        "gamma_hat": est.gamma_hat,
        "std_error": est.std_error,
        "beta_spectral_radius": radius,
        "necessary_condition_holds": radius is None or radius < 1,
        "unconditional_variance": uncond,
    }
    _write_text(_pick(args.out, cfg, "output"), _dump(out))
    if est.decision is not Decision.STRICTLY_NEGATIVE:
        sys.stderr.write(f"decision: {est.decision.value}\n")
    return EXIT_OK


def cmd_montecarlo(args, cfg) -> int:
    spec = _model_from_config(cfg)
    mc = cfg.get("mc", {})
    kind = _pick(args.experiment, mc, "experiment", "normality")
    R = int(_pick(args.replications, mc, "R", 200))
    seed = int(_pick(args.seed, cfg, "seed", 0))
    dist = _dist(mc, args.dist, args.dof)
    fcfg = cfg.get("fit", {})
    opts = FitOptions(
        init=InitScheme(fcfg.get("init", "omega")),
        n_starts=int(fcfg.get("n_starts", 5)),
        grad_tol=float(fcfg.get("grad_tol", 1e-6)),
        seed=seed,
    )
    n_jobs = max(1, int(args.threads or mc.get("threads", 1)))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        if kind == "consistency":
            grid = args.n_grid or mc.get("n_grid", [250, 1000, 4000])
            report = montecarlo.run_consistency(spec, dist, grid, R, opts, seed, n_jobs)
        elif kind == "normality":
            N = int(_pick(args.n_years, mc, "N", 4000))
            report = montecarlo.run_normality(spec, dist, N, R, opts, seed, n_jobs)
        else:
            raise UsageError("--experiment must be 'consistency' or 'normality'")
    _write_text(_pick(args.out, cfg, "output"), report.to_json(indent=2) + "\n")
    return EXIT_OK


# --- parser ----------------------------------------------------------------


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pgarch", description="Periodic GARCH simulation, stationarity and QMLE.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, dist=True):
        sp.add_argument("--config", help="JSON configuration file")
        sp.add_argument("--seed", type=int, help="seed for all randomness")
        sp.add_argument("--out", help="output path (default: stdout)")
        sp.add_argument("--threads", type=int, help="maximum worker processes")
        if dist:
            sp.add_argument("--dist", choices=["gaussian", "student_t", "unit"])
            sp.add_argument("--dof", type=float, help="student-t degrees of freedom")

    sp = sub.add_parser("simulate", help="simulate a path to CSV (t, season, y, h)")
    common(sp)
    sp.add_argument("--n-years", type=int)
    sp.add_argument("--burn-in", type=int)
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("fit", help="fit a P-GARCH model to a CSV column")
    common(sp, dist=False)
    sp.add_argument("--data", help="input CSV with a header row")
    sp.add_argument("--column", help="value column (default: y, else the last)")
    sp.add_argument("--period", type=int)
    sp.add_argument("--p", type=int, help="GARCH order")
    sp.add_argument("--q", type=int, help="ARCH order")
    sp.add_argument("--offset", type=int,
                    help="the first observation belongs to season offset + 1")
    sp.add_argument("--init", choices=["omega", "sample"])
    sp.add_argument("--n-starts", type=int)
    sp.set_defaults(func=cmd_fit)

    for name, func, text in (
        ("lyapunov", cmd_lyapunov, "Lyapunov exponent, beta radius and moment order"),
        ("stationarity", cmd_stationarity, "strict periodic stationarity summary"),
    ):
        sp = sub.add_parser(name, help=text)
        common(sp)
        sp.add_argument("--n-blocks", type=int)
        sp.set_defaults(func=func)

    sp = sub.add_parser("montecarlo", help="replicated simulate-and-fit experiment")
    common(sp)
    sp.add_argument("--experiment", choices=["consistency", "normality"])
    sp.add_argument("--replications", type=int)
    sp.add_argument("--n-grid", type=_int_list)
    sp.add_argument("--n-years", type=int, help="N for the normality experiment")
    sp.set_defaults(func=cmd_montecarlo)
    return parser


def dispatch(argv: list[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        cfg = _load_config(args.config)
        return args.func(args, cfg)
    except UsageError as exc:
        sys.stderr.write(f"pgarch {args.command}: usage error: {exc}\n")
        return EXIT_USAGE
    except DataError as exc:
        sys.stderr.write(f"pgarch {args.command}: data error: {exc}\n")
        return EXIT_DATA
    except NUMERIC_ERRORS as exc:
        sys.stderr.write(
            f"pgarch {args.command}: numerical failure: {type(exc).__name__}: {exc}\n")
        return EXIT_NUMERIC


def main(argv: list[str] | None = None) -> int:
    return dispatch(sys.argv[1:] if argv is None else list(argv))


if __name__ == "__main__":
    sys.exit(main())
