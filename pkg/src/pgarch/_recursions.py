"""
Compiled inner loops for the volatility filter and path simulation.

All season arrays here are 0-based.  Presample arrays are indexed by lag from
time 0: entry ``j`` holds the value at time ``-j``.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def garch_filter(y2, season, omega, alpha, beta, y2_pre, h_pre, pre_season,
                 pre_dep, grad):
    """
    Conditional variances and (optionally) their parameter derivatives.

    ``pre_dep`` marks presample values that equal the intercept of their own
    season, in which case they contribute to the omega derivatives.
    """
    T = y2.shape[0]
    S = omega.shape[0]
    q = alpha.shape[1]
    p = beta.shape[1]
    k = 1 + q + p
    dim = S * k
    h = np.empty(T)
    if grad:
        dh = np.zeros((T, dim))
    else:
        dh = np.zeros((1, dim))
    for t in range(T):
        v = season[t]
        base = v * k
        ht = omega[v]
        if grad:
            dh[t, base] += 1.0
        for i in range(q):
            s = t - i - 1
            a = alpha[v, i]
            if s >= 0:
                x = y2[s]
            else:
                jj = -s - 1
                x = y2_pre[jj]
                if grad and pre_dep:
                    dh[t, pre_season[jj] * k] += a
            ht += a * x
            if grad:
                dh[t, base + 1 + i] += x
        for j in range(p):
            s = t - j - 1
            b = beta[v, j]
            if s >= 0:
                x = h[s]
                if grad and b != 0.0:
                    for m in range(dim):
                        dh[t, m] += b * dh[s, m]
            else:
                jj = -s - 1
                x = h_pre[jj]
                if grad and pre_dep:
                    dh[t, pre_season[jj] * k] += b
            ht += b * x
            if grad:
                dh[t, base + 1 + q + j] += x
        h[t] = ht
    return h, dh


@njit(cache=True)
def garch_simulate(eta, season, omega, alpha, beta):
    """Run the recursion forward; presample ``y**2`` and ``h`` equal seasonal omega."""
    n = eta.shape[0]
    S = omega.shape[0]
    q = alpha.shape[1]
    p = beta.shape[1]
    y = np.empty(n)
    h = np.empty(n)
    for t in range(n):
        v = season[t]
        ht = omega[v]
        for i in range(q):
            s = t - i - 1
            if s >= 0:
                x = y[s] * y[s]
            else:
                x = omega[((v - i - 1) % S + S) % S]
            ht += alpha[v, i] * x
        for j in range(p):
            s = t - j - 1
            if s >= 0:
                x = h[s]
            else:
                x = omega[((v - j - 1) % S + S) % S]
            ht += beta[v, j] * x
        h[t] = ht
        y[t] = np.sqrt(ht) * eta[t]
    return y, h
