"""Ordinary least squares via QR."""

from __future__ import annotations

import math
from dataclasses import replace

import numpy as np

from ballotlens.errors import DegenerateResiduals, RankDeficient, TooFewObservations
from ballotlens.regress.design import INTERCEPT, DesignMatrix
from ballotlens.regress.diagnostics import residual_diagnostics
from ballotlens.regress.distributions import Dist, t_critical, tail_probability
from ballotlens.regress.results import Family, FitResult

RANK_TOL = 1e-10


def check_rank(d: DesignMatrix) -> None:
    """Raise :class:`RankDeficient` naming the columns involved in any near-collinearity."""
    if d.n <= d.p:
        raise TooFewObservations(f"need more rows than columns, got n={d.n}, p={d.p}")
    _, s, vt = np.linalg.svd(d.X, full_matrices=False)
    weak = s <= RANK_TOL * s[0] if s[0] > 0 else np.ones_like(s, dtype=bool)
    if weak.any():
        loadings = np.abs(vt[weak]).max(axis=0)
        bad = [d.labels[j] for j in range(d.p) if loadings[j] > 1e-6]
        raise RankDeficient(bad)


def _has_intercept(d: DesignMatrix) -> bool:
    return bool(d.labels) and d.labels[0] == INTERCEPT


def ols_fit(d: DesignMatrix) -> FitResult:
    """Least-squares fit of ``d.y`` on ``d.X``.

    Standard errors use the classical homoskedastic covariance. Diagnostics
    are omitted (``None``) when the fit is exact.
    """
    check_rank(d)
    n, p = d.n, d.p
    X, y = d.X, d.y
    Q, R = np.linalg.qr(X)
    beta = np.linalg.solve(R, Q.T @ y)
    resid = y - X @ beta
    rss = float(resid @ resid)
    df_resid = n - p
    sigma2 = rss / df_resid

    r_inv = np.linalg.solve(R, np.eye(p))
    xtx_inv = r_inv @ r_inv.T
    cov = sigma2 * 0.5 * (xtx_inv + xtx_inv.T)
    se = np.sqrt(np.diag(cov))
    with np.errstate(divide="ignore", invalid="ignore"):
        tstat = np.where(se > 0, beta / np.where(se > 0, se, 1.0), np.copysign(np.inf, beta))
    pvals = np.array([tail_probability(Dist.STUDENT_T, float(t), df_resid) for t in tstat])
    tcrit = t_critical(df_resid)
    ci = np.column_stack([beta - tcrit * se, beta + tcrit * se])

    intercept = _has_intercept(d)
    tss = float(np.sum((y - y.mean()) ** 2)) if intercept else float(y @ y)
    r2 = 1.0 - rss / tss if tss > 0 else 1.0
    r2 = min(1.0, max(0.0, r2))
    df_model = p - int(intercept)
    denom_n = n - 1 if intercept else n
    adj_r2 = 1.0 - (1.0 - r2) * denom_n / df_resid
    if df_model > 0:
        if rss > 0:
            f_stat = ((tss - rss) / df_model) / sigma2
            f_p = tail_probability(Dist.F, f_stat, (df_model, df_resid))
        else:
            f_stat, f_p = math.inf, 0.0
    else:
        f_stat = f_p = math.nan
    ll = -0.5 * n * (math.log(2 * math.pi) + math.log(rss / n) + 1.0) if rss > 0 else math.inf
    fit = FitResult(
        family=Family.OLS,
        labels=d.labels,
        response=d.response,
        coefficients=beta,
        covariance=cov,
        std_errors=se,
        test_stats=tstat,
        p_values=pvals,
        conf_intervals_95=ci,
        fit_stats={
            "r2": r2,
            "adj_r2": adj_r2,
            "f_stat": f_stat,
            "f_pvalue": f_p,
            "log_likelihood": ll,
            "aic": 2 * p - 2 * ll,
            "bic": p * math.log(n) - 2 * ll,
            "rss": rss,
        },
        nobs=n,
        df_resid=df_resid,
        n_excluded=d.n_excluded,
    )
    try:
        diag = residual_diagnostics(d, fit)
    except DegenerateResiduals:
        return fit
    return replace(fit, diagnostics=diag)
