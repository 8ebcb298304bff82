"""Binomial-logistic maximum likelihood by damped Newton-Raphson."""

from __future__ import annotations

import math

import numpy as np

from ballotlens.errors import NotConverged, Separation
from ballotlens.regress.design import DesignMatrix
from ballotlens.regress.distributions import NORMAL_975, Dist, tail_probability
from ballotlens.regress.ols import _has_intercept, check_rank
from ballotlens.regress.results import Family, FitResult

MAX_ITER = 100
MAX_HALVINGS = 10
GRAD_TOL = 1e-8
LL_TOL = 1e-10
SEPARATION_BOUND = 30.0
_SINGULAR_COND = 1e13


def sigmoid(eta):
    """Numerically stable logistic function."""
    return np.exp(-np.logaddexp(0.0, -np.asarray(eta, dtype=float)))


def log_likelihood(beta, X, y) -> float:
    eta = X @ beta
    return float(np.sum(y * eta - np.logaddexp(0.0, eta)))


def score(beta, X, y) -> np.ndarray:
    """Gradient of :func:`log_likelihood` with respect to ``beta``."""
    return X.T @ (y - sigmoid(X @ beta))


def information(beta, X) -> np.ndarray:
    """Negative Hessian of the log-likelihood."""
    p = sigmoid(X @ beta)
    w = p * (1.0 - p)
    return (X.T * w) @ X


def _null_loglik(y: np.ndarray, intercept: bool) -> float:
    n = y.size
    if not intercept:
        return n * math.log(0.5)
    k = float(y.sum())
    ll = 0.0
    if k > 0:
        ll += k * math.log(k / n)
    if k < n:
        ll += (n - k) * math.log((n - k) / n)
    return ll


def logit_fit(d: DesignMatrix, max_iter: int = MAX_ITER) -> FitResult:
    """Maximum-likelihood logistic regression of a 0/1 response.

    Starts from zero coefficients, so repeated calls are bit-identical.

    Raises
    ------
    Separation
        A coefficient leaves ``[-30, 30]``, the information matrix becomes
        numerically singular while the likelihood still improves, or the fit
        classifies every row perfectly.
    NotConverged
        Neither convergence criterion is met within ``max_iter`` steps.
    """
    if not np.all((d.y == 0) | (d.y == 1)):
        raise ValueError("logit response must be 0/1")
    check_rank(d)
    X, y = d.X, d.y
    beta = np.zeros(d.p)
    ll = log_likelihood(beta, X, y)
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        g = score(beta, X, y)
        if np.max(np.abs(g)) < GRAD_TOL:
            converged = True
            break
        info = information(beta, X)
        if np.linalg.cond(info) > _SINGULAR_COND:
            raise Separation(f"information matrix singular at iteration {it}; likelihood still improving")
        step = np.linalg.solve(info, g)
        cand = beta + step
        cand_ll = log_likelihood(cand, X, y)
        halvings = 0
        while cand_ll < ll and halvings < MAX_HALVINGS:
            step = step / 2.0
            cand = beta + step
            cand_ll = log_likelihood(cand, X, y)
            halvings += 1
        if cand_ll < ll:
            # no ascent along the Newton direction: already at the numerical optimum
            converged = bool(np.max(np.abs(g)) < 1e-6 * max(1.0, abs(ll)))
            break
        gain = cand_ll - ll
        beta, ll = cand, cand_ll
        if np.max(np.abs(beta)) > SEPARATION_BOUND:
            raise Separation(f"coefficient magnitude exceeded {SEPARATION_BOUND:g} at iteration {it}")
        if gain < LL_TOL:
            converged = True
            break
    if not converged:
        raise NotConverged(f"logit fit did not converge in {max_iter} iterations")
    fitted = sigmoid(X @ beta)
    if np.max(np.abs(y - fitted)) < 1e-6:
        raise Separation("fitted probabilities reproduce every outcome; data are perfectly separated")

    info = information(beta, X)
    cov = np.linalg.inv(info)
    cov = 0.5 * (cov + cov.T)
    se = np.sqrt(np.diag(cov))
    z = beta / se
    pvals = np.array([tail_probability(Dist.NORMAL, float(v)) for v in z])
    ci = np.column_stack([beta - NORMAL_975 * se, beta + NORMAL_975 * se])

    intercept = _has_intercept(d)
    n, p = d.n, d.p
    df_model = p - int(intercept)
    ll_null = ll if (intercept and p == 1) else _null_loglik(y, intercept)
    pseudo = 1.0 - ll / ll_null if ll_null != 0 else 0.0
    pseudo = min(1.0, max(0.0, pseudo))
    llr = max(0.0, 2.0 * (ll - ll_null))
    llr_p = tail_probability(Dist.CHI_SQUARE, llr, df_model) if df_model > 0 else math.nan
    return FitResult(
        family=Family.LOGIT,
        labels=d.labels,
        response=d.response,
        coefficients=beta,
        covariance=cov,
        std_errors=se,
        test_stats=z,
        p_values=pvals,
        conf_intervals_95=ci,
        fit_stats={
            "log_likelihood": ll,
            "ll_null": ll_null,
            "pseudo_r2_mcfadden": pseudo,
            "llr": llr,
            "llr_pvalue": llr_p,
            "aic": 2 * p - 2 * ll,
            "bic": p * math.log(n) - 2 * ll,
        },
        nobs=n,
        df_resid=n - p,
        converged=True,
        iterations=it,
        n_excluded=d.n_excluded,
    )
