"""Least-squares trend fits shared by the classifiers and the MC engine."""

from __future__ import annotations

import numpy as np


def fit_line(x, y):
    """Ordinary least squares y ~ a + b x.  Returns (slope, intercept, slope_se)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.size < 2:
        return 0.0, float(y[0]) if y.size else 0.0, np.inf
    xm = x - x.mean()
    sxx = float(np.dot(xm, xm))
    if sxx == 0.0:
        return 0.0, float(y.mean()), np.inf
    slope = float(np.dot(xm, y) / sxx)
    intercept = float(y.mean() - slope * x.mean())
    resid = y - (intercept + slope * x)
    dof = max(x.size - 2, 1)
    se = float(np.sqrt(np.dot(resid, resid) / dof / sxx))
    return slope, intercept, se


def fit_loglog_exponent(t, f):
    """Fit f ~ C t^(-beta) on positive samples; returns (beta, se)."""
    t = np.asarray(t, dtype=float)
    f = np.asarray(f, dtype=float)
    ok = (f > 0) & (t > 0)
    if np.count_nonzero(ok) < 2:
        return 0.0, np.inf
    slope, _, se = fit_line(np.log(t[ok]), np.log(f[ok]))
    return -slope, se


def fit_log_exponent(t, g):
    """Fit g ~ C (ln t)^(-lam) on positive samples; returns (lam, se)."""
    t = np.asarray(t, dtype=float)
    g = np.asarray(g, dtype=float)
    ok = (g > 0) & (t > np.e)
    if np.count_nonzero(ok) < 2:
        return 0.0, np.inf
    slope, _, se = fit_line(np.log(np.log(t[ok])), np.log(g[ok]))
    return -slope, se
