from __future__ import annotations

import math
from dataclasses import dataclass
from datetime import date

from ballotlens.errors import AlreadyCumulative, WindowMismatch
from ballotlens.ingest.calendar import WEEKS, WINDOW_DAYS
from ballotlens.ingest.types import DailySeries, Metric


@dataclass(frozen=True)
class WeeklySeries:
    """52 values indexed by election-anchored week; week 51 ends on election day."""

    candidate_id: str
    metric: Metric
    values: tuple[float, ...]
    cumulative: bool = False

    def __post_init__(self):
        if len(self.values) != WEEKS:
            raise WindowMismatch(f"weekly series needs {WEEKS} values, got {len(self.values)}")
        if not self.cumulative and any(v < 0 for v in self.values):
            raise ValueError("non-cumulative weekly values must be non-negative")
        if self.cumulative and any(b < a for a, b in zip(self.values, self.values[1:])):
            raise ValueError("cumulative series must be non-decreasing")


def weekly_average(daily: DailySeries, eday: date) -> WeeklySeries:
    """Average 364 daily counts into 52 weekly means ending on ``eday``."""
    n = len(daily.counts)
    if n != WINDOW_DAYS or daily.window.end != eday:
        raise WindowMismatch(
            f"expected {WINDOW_DAYS} days ending {eday}, got {n} days ending {daily.window.end}"
        )
    c = daily.counts
    values = tuple(math.fsum(c[7 * w : 7 * w + 7]) / 7.0 for w in range(WEEKS))
    return WeeklySeries(daily.candidate_id, daily.metric, values, cumulative=False)


def to_cumulative(weekly: WeeklySeries) -> WeeklySeries:
    if weekly.cumulative:
        raise AlreadyCumulative(f"series for {weekly.candidate_id} is already cumulative")
    # exact-rounded prefix sums keep week 51 equal to the window total
    v = weekly.values
    out = tuple(math.fsum(v[: w + 1]) for w in range(len(v)))
    return WeeklySeries(weekly.candidate_id, weekly.metric, out, cumulative=True)
