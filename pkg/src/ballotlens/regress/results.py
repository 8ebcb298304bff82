"""Fitted-model values, their JSON form and a plain-text table renderer."""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, replace

import numpy as np


class Family(str, enum.Enum):
    OLS = "OLS"
    LOGIT = "Logit"


def stars(p: float | None) -> str:
    """Significance marks: * p<0.05, ** p<0.01, *** p<0.001."""
    if p is None or math.isnan(p):
        return ""
    if p < 0.001:
        return "***"
    if p < 0.01:
        return "**"
    if p < 0.05:
        return "*"
    return ""


def _jsonable(v):
    if isinstance(v, np.ndarray):
        return _jsonable(v.tolist())
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return v if math.isfinite(v) else None
    if isinstance(v, np.integer):
        return int(v)
    return v


def _unjson(v):
    return math.nan if v is None else float(v)


@dataclass(frozen=True, eq=False)
class FitResult:
    family: Family
    labels: tuple[str, ...]
    response: str
    coefficients: np.ndarray
    covariance: np.ndarray
    std_errors: np.ndarray
    test_stats: np.ndarray
    p_values: np.ndarray
    conf_intervals_95: np.ndarray
    fit_stats: dict[str, float]
    nobs: int
    df_resid: int
    diagnostics: dict[str, float] | None = None
    converged: bool = True
    iterations: int = 0
    n_excluded: int = 0
    name: str = ""

    def __post_init__(self):
        for name in ("coefficients", "covariance", "std_errors", "test_stats", "p_values", "conf_intervals_95"):
            arr = np.array(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        object.__setattr__(self, "family", Family(self.family))
        object.__setattr__(self, "labels", tuple(self.labels))

    def __eq__(self, other):
        if not isinstance(other, FitResult):
            return NotImplemented
        return self.to_json() == other.to_json()

    def __hash__(self):
        return hash(self.to_json())

    @property
    def model_pvalue(self) -> float:
        key = "f_pvalue" if self.family is Family.OLS else "llr_pvalue"
        return self.fit_stats.get(key, math.nan)

    @property
    def stars(self) -> str:
        return stars(self.model_pvalue)

    def coef(self, label: str) -> float:
        return float(self.coefficients[self.labels.index(label)])

    def se(self, label: str) -> float:
        return float(self.std_errors[self.labels.index(label)])

    def with_name(self, name: str) -> "FitResult":
        return replace(self, name=name)

    # -- serialization -------------------------------------------------------

    def to_dict(self) -> dict:
        return _jsonable(
            {
                "name": self.name,
                "family": self.family.value,
                "response": self.response,
                "labels": list(self.labels),
                "coefficients": self.coefficients,
                "se": self.std_errors,
                "stat": self.test_stats,
                "p": self.p_values,
                "ci95": self.conf_intervals_95,
                "covariance": self.covariance,
                "fit_stats": dict(sorted(self.fit_stats.items())),
                "diagnostics": None if self.diagnostics is None else dict(sorted(self.diagnostics.items())),
                "converged": self.converged,
                "iterations": self.iterations,
                "nobs": self.nobs,
                "df_resid": self.df_resid,
                "n_excluded": self.n_excluded,
            }
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2, allow_nan=False) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> "FitResult":
        diag = d.get("diagnostics")
        return cls(
            family=Family(d["family"]),
            labels=tuple(d["labels"]),
            response=d["response"],
            coefficients=np.array([_unjson(v) for v in d["coefficients"]]),
            covariance=np.array([[_unjson(v) for v in row] for row in d["covariance"]]),
            std_errors=np.array([_unjson(v) for v in d["se"]]),
            test_stats=np.array([_unjson(v) for v in d["stat"]]),
            p_values=np.array([_unjson(v) for v in d["p"]]),
            conf_intervals_95=np.array([[_unjson(v) for v in row] for row in d["ci95"]]),
            fit_stats={k: _unjson(v) for k, v in d["fit_stats"].items()},
            diagnostics=None if diag is None else {k: _unjson(v) for k, v in diag.items()},
            converged=d["converged"],
            iterations=d["iterations"],
            nobs=d["nobs"],
            df_resid=d["df_resid"],
            n_excluded=d.get("n_excluded", 0),
            name=d.get("name", ""),
        )

    @classmethod
    def from_json(cls, text: str) -> "FitResult":
        return cls.from_dict(json.loads(text))

    # -- text ----------------------------------------------------------------

    def summary(self) -> str:
        return render_table(self)


_RULE = "=" * 78
_THIN = "-" * 78


def _num(v: float, width: int = 10, digits: int = 4) -> str:
    if v is None or (isinstance(v, float) and math.isnan(v)):
        return "nan".rjust(width)
    if isinstance(v, float) and math.isinf(v):
        return ("inf" if v > 0 else "-inf").rjust(width)
    if v != 0 and (abs(v) < 10 ** -(digits - 1) or abs(v) >= 1e6):
        return f"{v:.{digits - 1}e}".rjust(width)
    return f"{v:.{digits}f}".rjust(width)


def _pair(left: list[tuple[str, str]], right: list[tuple[str, str]]) -> list[str]:
    lines = []
    for i in range(max(len(left), len(right))):
        l = left[i] if i < len(left) else ("", "")
        r = right[i] if i < len(right) else ("", "")
        lines.append(f"{l[0]:<18}{l[1]:>18}   {r[0]:<22}{r[1]:>17}".rstrip())
    return lines


def render_table(fit: FitResult) -> str:
    """Appendix-style text table for one fit."""
    fs = fit.fit_stats
    title = "OLS Regression Results" if fit.family is Family.OLS else "Logit Regression Results"
    left = [
        ("Dep. Variable:", fit.response),
        ("Model:", fit.family.value),
        ("No. Observations:", str(fit.nobs)),
        ("Df Residuals:", str(fit.df_resid)),
        ("Df Model:", str(len(fit.labels) - int("Intercept" in fit.labels))),
        ("Converged:", str(fit.converged)),
    ]
    if fit.family is Family.OLS:
        right = [
            ("R-squared:", _num(fs["r2"], 0, 3).strip()),
            ("Adj. R-squared:", _num(fs["adj_r2"], 0, 3).strip()),
            ("F-statistic:", _num(fs["f_stat"], 0, 4).strip()),
            ("Prob (F-statistic):", _num(fs["f_pvalue"], 0, 3).strip()),
            ("Log-Likelihood:", _num(fs["log_likelihood"], 0, 4).strip()),
            ("AIC:", _num(fs["aic"], 0, 4).strip()),
            ("BIC:", _num(fs["bic"], 0, 4).strip()),
        ]
        stat_head = "t      P>|t|"
    else:
        right = [
            ("Pseudo R-squ.:", _num(fs["pseudo_r2_mcfadden"], 0, 4).strip()),
            ("Log-Likelihood:", _num(fs["log_likelihood"], 0, 4).strip()),
            ("LL-Null:", _num(fs["ll_null"], 0, 4).strip()),
            ("LLR p-value:", _num(fs["llr_pvalue"], 0, 3).strip()),
            ("AIC:", _num(fs["aic"], 0, 4).strip()),
            ("BIC:", _num(fs["bic"], 0, 4).strip()),
        ]
        stat_head = "z      P>|z|"

    width = max(14, max(len(l) for l in fit.labels) + 2)
    lines = [title.center(78), _RULE, *_pair(left, right), _RULE]
    lines.append(
        " " * width + f"{'coef':>10}{'std err':>10}{stat_head.split()[0]:>10}{stat_head.split()[1]:>10}"
        f"{'[0.025':>10}{'0.975]':>10}"
    )
    lines.append(_THIN)
    for i, label in enumerate(fit.labels):
        lo, hi = fit.conf_intervals_95[i]
        lines.append(
            f"{label:<{width}}{_num(fit.coefficients[i])}{_num(fit.std_errors[i], 10, 3)}"
            f"{_num(fit.test_stats[i], 10, 3)}{_num(fit.p_values[i], 10, 3)}"
            f"{_num(lo, 10, 3)}{_num(hi, 10, 3)}"
        )
    lines.append(_RULE)
    if fit.diagnostics:
        dg = fit.diagnostics
        lines.extend(
            _pair(
                [("Skew:", _num(dg["skew"], 0, 3).strip()), ("Kurtosis:", _num(dg["kurtosis"], 0, 3).strip())],
                [
                    ("Durbin-Watson:", _num(dg["durbin_watson"], 0, 3).strip()),
                    ("Jarque-Bera (JB):", _num(dg["jarque_bera"], 0, 3).strip()),
                    ("Prob(JB):", _num(dg["jb_pvalue"], 0, 3).strip()),
                    ("Cond. No.", _num(dg["condition_number"], 0, 3).strip()),
                ],
            )
        )
        lines.append(_RULE)
    if fit.stars:
        lines.append(f"Model significance: {fit.stars}  (* p<0.05, ** p<0.01, *** p<0.001)")
    return "\n".join(lines) + "\n"
