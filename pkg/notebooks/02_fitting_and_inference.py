# %% [markdown]
# # Fitting a periodic GARCH by quasi-maximum likelihood
#
# We fit 4000 simulated years of the two-season model and read standard
# errors off the sandwich covariance.

# %%
import numpy as np

from pgarch import FitOptions, InitScheme, PGarchSpec, SimConfig, fit, simulate_path
from pgarch.qmle import cross_block_mass

theta0 = PGarchSpec([0.5, 1.0], [[0.2], [0.3]], [[0.3], [0.3]])
series = simulate_path(theta0, SimConfig(4000, seed=7))

res = fit(series, S=2, q=1, p=1)
print(f"converged={res.converged} after {res.n_iters} iterations, C={res.objective:.5f}")
for name, est, se, true in zip(res.param_names, res.theta_hat.to_vector(),
                               res.std_errors, theta0.to_vector()):
    print(f"{name:12s} {est:8.4f}  ({se:.4f})   true {true:.2f}")

# %% [markdown]
# The innovations are Gaussian, so the estimated fourth moment should sit
# near 3.

# %%
print("kappa_hat =", round(res.kappa_hat, 3))

# %% [markdown]
# ## How much do the presample values matter?
#
# The two presample rules give slightly different criteria, but the
# estimates move by a small fraction of a standard error.

# %%
alt = fit(series, 2, 1, 1, FitOptions(init=InitScheme.SAMPLE))
gap = np.abs(alt.theta_hat.to_vector() - res.theta_hat.to_vector())
print("gap / std error:", np.round(gap / res.std_errors, 3))

# %% [markdown]
# ## Are the seasons independent blocks?
#
# Through the GARCH lag each season's variance carries the other season's
# parameters, so the information matrix is not block diagonal here.  The
# share of its Frobenius mass outside the season blocks:

# %%
print(round(cross_block_mass(res.J_hat, 2), 3))

# %% [markdown]
# With p = 0 there is no such carry-over and the off-season blocks are
# exactly zero.

# %%
parch = PGarchSpec([0.5, 1.0], [[0.2], [0.5]], np.zeros((2, 0)))
res_arch = fit(simulate_path(parch, SimConfig(2000, seed=8)), 2, 1, 0)
print(res_arch.J_hat.round(3))
