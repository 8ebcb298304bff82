from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from ballotlens.errors import DimensionMismatch
from ballotlens.regress.design import DesignSpec, build_design
from ballotlens.regress.logit import sigmoid
from ballotlens.regress.results import Family, FitResult


def _coefficients(fit_or_coefs) -> np.ndarray:
    if isinstance(fit_or_coefs, FitResult):
        if fit_or_coefs.family is not Family.LOGIT:
            raise ValueError("predicted probabilities need a Logit fit")
        return fit_or_coefs.coefficients
    return np.asarray(fit_or_coefs, dtype=float)


def predict_prob(fit_or_coefs: FitResult | Sequence[float], x: Sequence[float]) -> float:
    """Logistic probability ``1 / (1 + exp(-beta . x))``.

    ``x`` must include the leading 1 for the intercept when the model has one.

    Examples
    --------
    >>> round(predict_prob([-1.1237, 2.3281], [1, 0.5]), 4)
    0.5101
    """
    beta = _coefficients(fit_or_coefs)
    x = np.asarray(x, dtype=float)
    if x.shape != beta.shape:
        raise DimensionMismatch(f"{x.size} covariates for {beta.size} coefficients")
    return float(sigmoid(float(beta @ x)))


def classify_accuracy(fit: FitResult, rows: Iterable, threshold: float = 0.5) -> float:
    """Share of rows whose thresholded probability equals ``win_lose``.

    Rows lacking any covariate the fit uses are skipped.
    """
    if fit.family is not Family.LOGIT:
        raise ValueError("classification accuracy needs a Logit fit")
    d = build_design(rows, DesignSpec.from_labels(fit.labels), fit.response)
    predicted = (sigmoid(d.X @ fit.coefficients) > threshold).astype(float)
    return float(np.mean(predicted == d.y))
