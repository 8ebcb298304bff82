"""Residual diagnostics printed beneath OLS tables."""

from __future__ import annotations

import math

import numpy as np

from ballotlens.errors import DegenerateResiduals
from ballotlens.regress.distributions import Dist, tail_probability


def durbin_watson(resid) -> float:
    e = np.asarray(resid, dtype=float)
    ss = float(e @ e)
    if ss == 0.0:
        raise DegenerateResiduals("all residuals are zero")
    d = np.diff(e)
    return float(d @ d) / ss


def moments(resid) -> tuple[float, float]:
    """Sample skewness and (non-excess) kurtosis with 1/n central moments."""
    e = np.asarray(resid, dtype=float)
    c = e - e.mean()
    m2 = float(np.mean(c**2))
    if m2 == 0.0:
        raise DegenerateResiduals("residuals have zero variance")
    return float(np.mean(c**3)) / m2**1.5, float(np.mean(c**4)) / m2**2


def jarque_bera(resid) -> tuple[float, float]:
    """JB statistic and its chi-square(2) p-value."""
    n = len(resid)
    s, k = moments(resid)
    jb = n / 6.0 * (s * s + (k - 3.0) ** 2 / 4.0)
    return jb, tail_probability(Dist.CHI_SQUARE, jb, 2)


def condition_number(X) -> float:
    sv = np.linalg.svd(np.asarray(X, dtype=float), compute_uv=False)
    return float(sv[0] / sv[-1]) if sv[-1] > 0 else math.inf


def _is_degenerate(e: np.ndarray, y: np.ndarray) -> bool:
    scale = max(1.0, float(np.max(np.abs(y)))) if y.size else 1.0
    return bool(np.all(np.abs(e) <= 1e-12 * scale))


def residual_diagnostics(d, fit) -> dict[str, float]:
    """Durbin-Watson, Jarque-Bera, moments and condition number of an OLS fit.

    Parameters
    ----------
    d : DesignMatrix
        The design the fit was computed on; residuals are taken in row order.
    fit : FitResult
        An OLS result over ``d``.

    Raises
    ------
    DegenerateResiduals
        If the fit is exact to rounding, or fewer than three rows remain.
    """
    e = d.y - d.X @ fit.coefficients
    if d.n < 3 or _is_degenerate(e, d.y):
        raise DegenerateResiduals("residuals are identically zero; diagnostics are undefined")
    skew, kurt = moments(e)
    jb, jb_p = jarque_bera(e)
    return {
        "durbin_watson": durbin_watson(e),
        "jarque_bera": jb,
        "jb_pvalue": jb_p,
        "skew": skew,
        "kurtosis": kurt,
        "condition_number": condition_number(d.X),
    }
