"""Published reference values, kept for comparison rather than as gates."""

from __future__ import annotations

import json
import math
from functools import lru_cache
from importlib import resources

from ballotlens.regress.results import FitResult


@lru_cache(maxsize=1)
def load_reference_targets() -> dict:
    text = resources.files("ballotlens.analysis").joinpath("reference_targets.json").read_text(encoding="utf-8")
    return json.loads(text)


def compare_to_targets(name: str, fit: FitResult, accuracy: float | None = None) -> list[dict]:
    """Target-versus-observed rows for one fitted model (empty if none documented)."""
    target = load_reference_targets()["models"].get(name)
    if not target:
        return []
    observed: dict[str, float] = {"nobs": float(fit.nobs)}
    observed.update({f"coef[{k}]": v for k, v in zip(fit.labels, map(float, fit.coefficients))})
    observed.update(fit.fit_stats)
    if fit.diagnostics:
        observed.update(fit.diagnostics)
    if accuracy is not None:
        observed["accuracy"] = accuracy
    rows = []
    for key, value in target.items():
        items = [(f"coef[{k}]", v) for k, v in value.items()] if key == "coefficients" else [(key, value)]
        for stat, want in items:
            got = observed.get(stat, math.nan)
            rows.append({"model": name, "statistic": stat, "target": float(want), "observed": got})
    return rows
