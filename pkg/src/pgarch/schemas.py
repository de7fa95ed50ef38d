"""JSON Schemas of the documents written by the command line tool."""

_number_map = {"type": "object", "additionalProperties": {"type": "number"}}
_nullable_number_map = {"anyOf": [_number_map, {"type": "null"}]}
_per_n = {
    "anyOf": [
        {"type": "object", "additionalProperties": _number_map},
        {"type": "null"},
    ]
}

MODEL = {
    "type": "object",
    "required": ["period", "q", "p", "omega", "alpha", "beta"],
    "properties": {
        "period": {"type": "integer", "minimum": 1},
        "q": {"type": "integer", "minimum": 0},
        "p": {"type": "integer", "minimum": 0},
        "omega": {"type": "array", "items": {"type": "number"}},
        "alpha": {"type": "array", "items": {"type": "array", "items": {"type": "number"}}},
        "beta": {"type": "array", "items": {"type": "array", "items": {"type": "number"}}},
    },
}

_matrix = {"type": "array", "items": {"type": "array", "items": {"type": "number"}}}

FIT_RESULT = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "FitResult",
    "type": "object",
    "required": [
        "model", "param_names", "theta_hat", "std_errors", "boundary_flags",
        "objective", "score_norm", "kappa_hat", "J_hat", "covariance",
        "converged", "n_iters", "init", "n_obs",
    ],
    "properties": {
        "model": MODEL,
        "param_names": {"type": "array", "items": {"type": "string"}},
        "theta_hat": _number_map,
        "std_errors": _number_map,
        "boundary_flags": {"type": "object", "additionalProperties": {"type": "boolean"}},
        "objective": {"type": "number"},
        "score_norm": {"type": "number", "minimum": 0},
        "kappa_hat": {"type": "number", "minimum": 0},
        "J_hat": _matrix,
        "covariance": _matrix,
        "converged": {"type": "boolean"},
        "n_iters": {"type": "integer", "minimum": 0},
        "init": {"enum": ["omega", "sample"]},
        "n_obs": {"type": "integer", "minimum": 1},
        "season_offset": {"type": "integer", "minimum": 0},
    },
}

LYAPUNOV_ESTIMATE = {
    "type": "object",
    "required": ["gamma_hat", "std_error", "n_blocks", "decision", "z"],
    "properties": {
        "gamma_hat": {"type": "number"},
        "std_error": {"type": "number", "minimum": 0},
        "n_blocks": {"type": "integer", "minimum": 1},
        "decision": {"enum": ["StrictlyNegative", "NonNegative", "Inconclusive"]},
        "z": {"type": "number"},
    },
}

LYAPUNOV = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "LyapunovReport",
    "type": "object",
    "required": ["model", "lyapunov", "beta_spectral_radius", "delta_search"],
    "properties": {
        "model": MODEL,
        "lyapunov": LYAPUNOV_ESTIMATE,
        "beta_spectral_radius": {"type": ["number", "null"], "minimum": 0},
        "delta_search": {
            "anyOf": [
                {"type": "null"},
                {
                    "type": "object",
                    "required": ["delta", "n0"],
                    "properties": {
                        "delta": {"type": "number", "exclusiveMinimum": 0, "maximum": 1},
                        "n0": {"type": "integer", "minimum": 1},
                    },
                },
            ]
        },
    },
}

STATIONARITY = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "StationaritySummary",
    "type": "object",
    "required": ["model", "decision", "gamma_hat", "std_error",
                 "beta_spectral_radius", "necessary_condition_holds"],
    "properties": {
        "model": MODEL,
        "decision": {"enum": ["StrictlyNegative", "NonNegative", "Inconclusive"]},
        "gamma_hat": {"type": "number"},
        "std_error": {"type": "number", "minimum": 0},
        "beta_spectral_radius": {"type": ["number", "null"], "minimum": 0},
        "necessary_condition_holds": {"type": "boolean"},
        "unconditional_variance": {"type": ["array", "null"]},
    },
}

MONTE_CARLO_REPORT = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "MonteCarloReport",
    "type": "object",
    "required": ["spec0", "dist", "n_grid", "R", "param_names", "bias", "rmse",
                 "ci_coverage", "normality_stats", "j_cross_block_mass",
                 "n_excluded", "n_boundary", "warnings"],
    "properties": {
        "spec0": MODEL,
        "dist": {"type": "object", "required": ["name"]},
        "n_grid": {"type": "array", "items": {"type": "integer", "minimum": 1}},
        "R": {"type": "integer", "minimum": 1},
        "param_names": {"type": "array", "items": {"type": "string"}},
        "bias": _per_n,
        "rmse": _per_n,
        "scaled_errors": {"anyOf": [_matrix, {"type": "null"}]},
        "ci_coverage": {
            "anyOf": [
                {"type": "object",
                 "additionalProperties": {"type": "number", "minimum": 0, "maximum": 1}},
                {"type": "null"},
            ]
        },
        "normality_stats": {
            "anyOf": [
                {"type": "null"},
                {
                    "type": "object",
                    "required": ["ks_distance", "ks_pvalue", "ks_critical_1pct"],
                    "properties": {
                        "ks_distance": _number_map,
                        "ks_pvalue": _number_map,
                        "ks_critical_1pct": {"type": "number"},
                    },
                },
            ]
        },
        "sandwich_ratio": _nullable_number_map,
        "j_cross_block_mass": {"type": ["number", "null"]},
        "n_excluded": {"type": "array", "items": {"type": "integer", "minimum": 0}},
        "n_boundary": {"type": "array", "items": {"type": "integer", "minimum": 0}},
        "warnings": {"type": "array", "items": {"type": "string"}},
    },
}
