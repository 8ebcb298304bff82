from __future__ import annotations

import math
from typing import Mapping


class RaceRatios(dict):
    """Candidate -> share of the race total; ``None`` everywhere when the total is zero."""

    flagged: bool = False


def race_ratios(values: Mapping[str, float]) -> RaceRatios:
    """Each candidate's share of the race-wide total.

    A zero total leaves every ratio absent and sets ``flagged`` instead of
    inventing a uniform split.
    """
    if not values:
        raise ValueError("a race needs at least one candidate")
    if any(v < 0 or not math.isfinite(v) for v in values.values()):
        raise ValueError("race values must be finite and non-negative")
    total = math.fsum(values.values())
    out = RaceRatios()
    if total == 0:
        out.update((k, None) for k in values)
        out.flagged = True
        return out
    out.update((k, v / total) for k, v in values.items())
    return out


def binary_outcome(values: Mapping[str, float]) -> dict[str, int]:
    """1 for the race's unique strict maximizer, 0 for everyone else.

    A tie for the maximum awards nobody.
    """
    if not values:
        raise ValueError("a race needs at least one candidate")
    best = max(values.values())
    leaders = [k for k, v in values.items() if v == best]
    winner = leaders[0] if len(leaders) == 1 else None
    return {k: int(k == winner) for k in values}
