"""Outcome counts and value histograms."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from ballotlens.errors import MissingIncumbency
from ballotlens.ingest.types import CandidateRecord, Chamber, ResultsRow

TALLY_COLUMNS = (
    "total_candidates",
    "open_seat_races",
    "challenger_victory",
    "challenger_defeat",
    "incumbent_victory",
    "incumbent_defeat",
)


def outcome_tally(
    candidates: Iterable[CandidateRecord], results: Iterable[ResultsRow]
) -> dict[Chamber, dict[str, int]]:
    """Candidate outcomes by incumbency, plus open-seat race counts, per chamber.

    Open-seat candidates count as challengers.
    """
    won = {r.candidate_id: bool(r.win_lose) for r in results}
    out = {ch: dict.fromkeys(TALLY_COLUMNS, 0) for ch in Chamber}
    races: dict = defaultdict(list)
    for c in candidates:
        if c.candidate_id not in won:
            continue
        if c.incumbent is None:
            raise MissingIncumbency(f"incumbency unknown for {c.candidate_id}")
        races[c.race].append(c)
        row = out[c.race.chamber]
        row["total_candidates"] += 1
        role = "incumbent" if c.incumbent else "challenger"
        row[f"{role}_{'victory' if won[c.candidate_id] else 'defeat'}"] += 1
    for race, members in races.items():
        if not any(m.incumbent for m in members):
            out[race.chamber]["open_seat_races"] += 1
    return out


@dataclass(frozen=True)
class Histogram:
    edges: tuple[float, ...]
    counts: tuple[int, ...]


def distribution_histogram(values: Sequence[float | None], bins: int = 20) -> Histogram:
    """Counts in ``bins`` equal-width bins over [0, 1]; 1.0 falls in the last bin.

    Absent values are skipped.
    """
    if bins < 2:
        raise ValueError("need at least two bins")
    vals = np.array([v for v in values if v is not None], dtype=float)
    if vals.size and (vals.min() < 0 or vals.max() > 1):
        raise ValueError("histogram values must lie in [0, 1]")
    edges = np.linspace(0.0, 1.0, bins + 1)
    idx = np.minimum((vals * bins).astype(int), bins - 1)
    counts = np.bincount(idx, minlength=bins)
    return Histogram(tuple(float(e) for e in edges), tuple(int(c) for c in counts))
