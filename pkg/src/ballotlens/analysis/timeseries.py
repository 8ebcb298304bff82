"""Weekly traces: fit quality over the cycle and group means."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

from ballotlens.errors import EmptyGroup, GroupTooSmall
from ballotlens.features.assemble import FeatureRow
from ballotlens.regress.design import DesignSpec, build_design
from ballotlens.regress.ols import ols_fit


@dataclass
class WeeklyFeatures:
    """Feature tables per week, built from running totals and from single weeks."""

    cumulative: dict[int, list[FeatureRow]] = field(default_factory=dict)
    noncumulative: dict[int, list[FeatureRow]] = field(default_factory=dict)

    def table(self, cumulative: bool) -> dict[int, list[FeatureRow]]:
        return self.cumulative if cumulative else self.noncumulative


def rsq_timeseries(
    weekly: WeeklyFeatures | Mapping[int, Sequence[FeatureRow]],
    spec: DesignSpec,
    cumulative: bool = True,
    *,
    response: str = "vote_share",
    weeks: Iterable[int] | None = None,
    where: Callable[[FeatureRow], bool] | None = None,
) -> dict[int, float]:
    """Adjusted R-squared of one OLS fit per week.

    Parameters
    ----------
    weekly : WeeklyFeatures or mapping
        A plain mapping is taken as the table matching ``cumulative``.
    where : callable, optional
        Row filter applied before fitting (for example a chamber).

    Any fit error is re-raised with a ``week`` attribute naming the week.
    """
    table = weekly.table(cumulative) if isinstance(weekly, WeeklyFeatures) else weekly
    out: dict[int, float] = {}
    for week in sorted(table if weeks is None else weeks):
        rows = table[week]
        if where is not None:
            rows = [r for r in rows if where(r)]
        try:
            fit = ols_fit(build_design(rows, spec, response))
        except Exception as exc:
            exc.week = week
            raise
        out[week] = fit.fit_stats["adj_r2"]
    return out


class Group(str, enum.Enum):
    INCUMBENT = "Incumbent"
    CHALLENGER = "Challenger"

    def contains(self, row: FeatureRow) -> bool:
        return bool(row.incumbent) == (self is Group.INCUMBENT)


def group_average_timeseries(
    weekly: Mapping[int, Sequence[FeatureRow]],
    group: Group | str,
    metric: str = "view_ratio",
    where: Callable[[FeatureRow], bool] | None = None,
) -> dict[int, float]:
    """Unweighted mean of ``metric`` across the group's candidates, per week.

    Candidates whose ratio is undefined in a week (zero race total) are left
    out of that week's mean.
    """
    group = Group(group)
    out: dict[int, float] = {}
    for week in sorted(weekly):
        vals = [
            getattr(r, metric)
            for r in weekly[week]
            if group.contains(r) and (where is None or where(r)) and getattr(r, metric) is not None
        ]
        if not vals:
            raise EmptyGroup(f"no {group.value.lower()} values for {metric} in week {week}")
        out[week] = math.fsum(vals) / len(vals)
    return out


@dataclass(frozen=True)
class GroupSlope:
    group: str
    n: int
    intercept: float
    slope: float
    se: float


def group_slopes(
    rows: Sequence[FeatureRow],
    group_field: str = "challenger",
    x: str = "view_ratio",
    y: str = "vote_share",
) -> dict:
    """Simple OLS slope of ``y`` on ``x`` within each value of ``group_field``."""
    groups: dict = {}
    for r in rows:
        groups.setdefault(getattr(r, group_field), []).append(r)
    out = {}
    for key in sorted(groups):
        members = groups[key]
        if len(members) <= 2:
            raise GroupTooSmall(f"{group_field}={key} has {len(members)} rows; need at least 3")
        fit = ols_fit(build_design(members, DesignSpec([x]), y))
        out[key] = GroupSlope(
            str(key), fit.nobs, float(fit.coefficients[0]), float(fit.coefficients[1]), float(fit.std_errors[1])
        )
    return out
