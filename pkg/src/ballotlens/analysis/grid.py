"""Challenger win probabilities over opponent, viability and pageview factors."""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Mapping

from ballotlens.errors import MissingCovariate
from ballotlens.regress.design import INTERCEPT
from ballotlens.regress.predict import predict_prob
from ballotlens.regress.results import FitResult

REQUIRED = ("challenger", "open_seat", "via_win", "view_win")


class OpponentType(str, enum.Enum):
    INCUMBENT = "Incumbent"
    OPEN_SEAT = "OpenSeat"


class Viability(str, enum.Enum):
    LESS = "LessViable"
    MORE = "MoreViable"


class PageviewOutcome(str, enum.Enum):
    FEWER = "Fewer"
    MORE = "More"


@dataclass(frozen=True)
class ProbabilityGridRow:
    opponent_type: OpponentType
    viability: Viability
    pageview_outcome: PageviewOutcome
    probability: float


def probability_grid(fit: FitResult | Mapping[str, float], stronghold_value: int = 0) -> list[ProbabilityGridRow]:
    """Evaluate a challenger's win probability at all eight factor settings.

    ``fit`` is a logit result or a mapping from coefficient label to value.
    A ``stronghold`` coefficient, when present, is evaluated at
    ``stronghold_value``; any other covariate is an error.
    """
    if stronghold_value not in (0, 1):
        raise ValueError("stronghold_value must be 0 or 1")
    coefs = dict(zip(fit.labels, fit.coefficients)) if isinstance(fit, FitResult) else dict(fit)
    missing = [c for c in REQUIRED if c not in coefs]
    if missing:
        raise MissingCovariate(f"grid needs coefficients for {missing}")
    extra = set(coefs) - set(REQUIRED) - {INTERCEPT, "stronghold"}
    if extra:
        raise ValueError(f"no grid setting for covariates {sorted(extra)}")
    labels = list(coefs)
    beta = [float(coefs[k]) for k in labels]
    rows = []
    for opp, via, views in itertools.product(OpponentType, Viability, PageviewOutcome):
        setting = {
            INTERCEPT: 1.0,
            "challenger": 1.0,
            "open_seat": float(opp is OpponentType.OPEN_SEAT),
            "via_win": float(via is Viability.MORE),
            "view_win": float(views is PageviewOutcome.MORE),
            "stronghold": float(stronghold_value),
        }
        rows.append(ProbabilityGridRow(opp, via, views, predict_prob(beta, [setting[k] for k in labels])))
    return rows
