"""Design matrices, OLS and logit fitting, tail probabilities and diagnostics."""

from ballotlens.regress.design import INTERCEPT, DesignMatrix, DesignSpec, build_design
from ballotlens.regress.diagnostics import (
    condition_number,
    durbin_watson,
    jarque_bera,
    residual_diagnostics,
)
from ballotlens.regress.distributions import Dist, t_critical, tail_probability
from ballotlens.regress.logit import log_likelihood, logit_fit, score, sigmoid
from ballotlens.regress.ols import ols_fit
from ballotlens.regress.predict import classify_accuracy, predict_prob
from ballotlens.regress.results import Family, FitResult, render_table, stars

__all__ = [
    "INTERCEPT",
    "DesignMatrix",
    "DesignSpec",
    "Dist",
    "Family",
    "FitResult",
    "build_design",
    "classify_accuracy",
    "condition_number",
    "durbin_watson",
    "jarque_bera",
    "log_likelihood",
    "logit_fit",
    "ols_fit",
    "predict_prob",
    "render_table",
    "residual_diagnostics",
    "score",
    "sigmoid",
    "stars",
    "t_critical",
    "tail_probability",
]
