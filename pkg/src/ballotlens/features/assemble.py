"""Race-relative feature rows, one per candidate and week."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field, fields
from functools import cached_property
from typing import Literal, Union

from ballotlens.errors import MissingIncumbency, MissingResults
from ballotlens.features.ratios import binary_outcome, race_ratios
from ballotlens.features.series import WeeklySeries, to_cumulative
from ballotlens.ingest.types import CandidateRecord, RaceKey, ReceiptsRow, ResultsRow

FINAL = "Final"
Week = Union[int, Literal["Final"]]


@dataclass(frozen=True)
class FeatureRow:
    candidate_id: str
    race: RaceKey
    week: Week
    view_ratio: float | None
    receipt_ratio: float | None
    news_ratio: float | None
    incumbent: int
    challenger: int
    open_seat: int
    has_page: int
    view_win: int
    via_win: int
    news_win: int
    stronghold: int | None
    vote_share: float
    win_lose: int


FEATURE_FIELDS = tuple(f.name for f in fields(FeatureRow))
# numeric fields usable in a design specification
NUMERIC_FIELDS = tuple(f for f in FEATURE_FIELDS if f not in ("candidate_id", "race", "week"))


@dataclass
class RawDataset:
    """Everything ingest produces, aligned by candidate_id.

    ``pageviews`` and ``mentions`` hold non-cumulative weekly series. A
    candidate missing from ``pageviews`` has no article (or it could not be
    fetched); a candidate missing from ``mentions`` or ``receipts`` counts as
    zero raw mentions or dollars.
    """

    candidates: list[CandidateRecord]
    results: list[ResultsRow]
    receipts: list[ReceiptsRow] = field(default_factory=list)
    pageviews: dict[str, WeeklySeries] = field(default_factory=dict)
    mentions: dict[str, WeeklySeries] = field(default_factory=dict)

    @cached_property
    def cumulative_pageviews(self) -> dict[str, WeeklySeries]:
        return {k: to_cumulative(v) for k, v in self.pageviews.items()}

    @cached_property
    def cumulative_mentions(self) -> dict[str, WeeklySeries]:
        return {k: to_cumulative(v) for k, v in self.mentions.items()}

    @cached_property
    def races(self) -> dict[RaceKey, list[CandidateRecord]]:
        out: dict[RaceKey, list[CandidateRecord]] = defaultdict(list)
        for c in sorted(self.candidates, key=lambda c: (c.race, c.candidate_id)):
            out[c.race].append(c)
        return dict(sorted(out.items()))


def _metric_value(
    series: dict[str, WeeklySeries], cumulative: dict[str, WeeklySeries], cid: str, week: Week, use_cum: bool
) -> float:
    if cid not in series:
        return 0.0
    if week == FINAL:
        return cumulative[cid].values[-1]
    return (cumulative if use_cum else series)[cid].values[week]


def assemble_features(
    raw: RawDataset,
    week: Week = FINAL,
    *,
    cumulative: bool = True,
    news_final: Literal["cumulative", "election_week"] = "cumulative",
) -> list[FeatureRow]:
    """Build one :class:`FeatureRow` per candidate for ``week``.

    Weekly ratios use running totals through ``week`` unless ``cumulative``
    is off, in which case that week's mean alone is compared. ``Final``
    always uses election-day cumulative totals for views; ``news_final``
    selects between cumulative mentions and election-week mentions.
    """
    if week != FINAL and not (isinstance(week, int) and 0 <= week <= 51):
        raise ValueError(f"week must be 0..51 or {FINAL!r}, got {week!r}")
    results = {r.candidate_id: r for r in raw.results}
    receipts = {r.candidate_id: r.receipts_usd for r in raw.receipts}

    rows: list[FeatureRow] = []
    for race, members in raw.races.items():
        ids = [c.candidate_id for c in members]
        missing = [i for i in ids if i not in results]
        if missing:
            raise MissingResults(f"no vote share for {missing}")
        unknown = [c.candidate_id for c in members if c.incumbent is None]
        if unknown:
            raise MissingIncumbency(
                f"incumbency unknown for {unknown}; supply a prior-cycle results file or an override"
            )

        views = {
            i: _metric_value(raw.pageviews, raw.cumulative_pageviews, i, week, cumulative) for i in ids
        }
        if week == FINAL and news_final == "election_week":
            news = {i: raw.mentions[i].values[-1] if i in raw.mentions else 0.0 for i in ids}
        else:
            news = {
                i: _metric_value(raw.mentions, raw.cumulative_mentions, i, week, cumulative) for i in ids
            }
        money = {i: receipts.get(i, 0.0) for i in ids}

        view_r, news_r, money_r = race_ratios(views), race_ratios(news), race_ratios(money)
        view_w, news_w, money_w = binary_outcome(views), binary_outcome(news), binary_outcome(money)
        open_seat = int(not any(c.incumbent for c in members))
        for c in members:
            i = c.candidate_id
            res = results[i]
            rows.append(
                FeatureRow(
                    candidate_id=i,
                    race=race,
                    week=week,
                    view_ratio=view_r[i],
                    receipt_ratio=money_r[i],
                    news_ratio=news_r[i],
                    incumbent=int(c.incumbent),
                    challenger=1 - int(c.incumbent),
                    open_seat=open_seat,
                    has_page=int(i in raw.pageviews),
                    view_win=view_w[i],
                    via_win=money_w[i],
                    news_win=news_w[i],
                    stronghold=c.stronghold,
                    vote_share=res.vote_share,
                    win_lose=int(res.win_lose),
                )
            )
    return rows


def flagged_races(rows: list[FeatureRow]) -> dict[str, list[str]]:
    """Races whose metric total was zero, by ratio field."""
    out: dict[str, set[str]] = defaultdict(set)
    for r in rows:
        for name in ("view_ratio", "receipt_ratio", "news_ratio"):
            if getattr(r, name) is None:
                out[name].add(r.race.label)
    return {k: sorted(v) for k, v in sorted(out.items())}
