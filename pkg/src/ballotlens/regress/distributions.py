from __future__ import annotations

import enum
import math
from typing import Sequence

from ballotlens.errors import InvalidDf
from ballotlens.regress.special import betainc, gammainc_upper


class Dist(str, enum.Enum):
    NORMAL = "Normal"
    STUDENT_T = "StudentT"
    CHI_SQUARE = "ChiSquare"
    F = "F"


def _df(df, n: int) -> tuple[float, ...]:
    if df is None:
        df = ()
    elif not isinstance(df, Sequence):
        df = (df,)
    if len(df) < n:
        raise InvalidDf(f"need {n} degree(s) of freedom, got {tuple(df)}")
    out = tuple(float(v) for v in df[:n])
    if any(not (v > 0) for v in out):
        raise InvalidDf(f"degrees of freedom must be positive, got {out}")
    return out


def tail_probability(dist: Dist | str, stat: float, df=None) -> float:
    """p-value of ``stat``: two-sided for Normal and StudentT, upper tail otherwise.

    ``df`` is a number for StudentT/ChiSquare and a ``(numerator,
    denominator)`` pair for F; Normal ignores it.
    """
    dist = Dist(dist)
    if math.isnan(stat):
        return math.nan
    if dist is Dist.NORMAL:
        return math.erfc(abs(stat) / math.sqrt(2.0))
    if dist is Dist.STUDENT_T:
        (nu,) = _df(df, 1)
        if math.isinf(stat):
            return 0.0
        t2 = stat * stat
        return betainc(nu / 2.0, 0.5, nu / (nu + t2), t2 / (nu + t2))
    if dist is Dist.CHI_SQUARE:
        (k,) = _df(df, 1)
        if stat <= 0:
            return 1.0
        if math.isinf(stat):
            return 0.0
        return gammainc_upper(k / 2.0, stat / 2.0)
    d1, d2 = _df(df, 2)
    if stat <= 0:
        return 1.0
    if math.isinf(stat):
        return 0.0
    denom = d2 + d1 * stat
    return betainc(d2 / 2.0, d1 / 2.0, d2 / denom, d1 * stat / denom)


def t_critical(df: float, alpha: float = 0.05) -> float:
    """Positive t with two-sided tail probability ``alpha``, by bisection."""
    lo, hi = 0.0, 1.0
    while tail_probability(Dist.STUDENT_T, hi, df) > alpha:
        hi *= 2.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if tail_probability(Dist.STUDENT_T, mid, df) > alpha:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-15 * hi:
            break
    return 0.5 * (lo + hi)


NORMAL_975 = 1.959963984540054
