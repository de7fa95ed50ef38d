# %% [markdown]
# # Does the estimator behave as the asymptotics say?
#
# Two small experiments: RMSE across sample sizes, and the coverage of
# nominal 95% intervals.  The replication counts here are kept small so the
# script runs in about a minute; the acceptance suite uses the full sizes.

# %%
import numpy as np

from pgarch import PGarchSpec, StandardGaussian
from pgarch.montecarlo import run_consistency, run_normality

theta0 = PGarchSpec([0.5, 1.0], [[0.2], [0.3]], [[0.3], [0.3]])

# %%
rep = run_consistency(theta0, StandardGaussian(), n_grid=(250, 1000, 4000), R=50, seed=0)
print("RMSE by N:")
for N, row in zip(rep.n_grid, rep.rmse):
    print(f"  N={N:5d}", np.round(row, 4))
print("RMSE(1000)/RMSE(4000):", np.round(rep.rmse[1] / rep.rmse[2], 2))

# %% [markdown]
# Quadrupling the sample should roughly halve the RMSE.

# %%
rep = run_normality(theta0, StandardGaussian(), N=4000, R=100, seed=1)
print("coverage:", dict(zip(rep.param_names, np.round(rep.ci_coverage, 2))))
print("KS distance:", np.round(rep.ks_distance, 3), "critical", round(rep.ks_critical_1pct, 3))
print("empirical / estimated variance:", np.round(rep.sandwich_ratio, 2))

# %% [markdown]
# The report serializes to JSON keyed by parameter name.

# %%
print(rep.to_json(indent=1)[:400])
