"""Feature-table persistence and invariant checks."""

from __future__ import annotations

import csv
import json
import math
from collections import defaultdict
from pathlib import Path
from typing import Iterable

from ballotlens.errors import SchemaError
from ballotlens.features.assemble import FINAL, FeatureRow
from ballotlens.ingest.types import Chamber, RaceKey

CSV_COLUMNS = (
    "candidate_id", "year", "chamber", "state", "district", "week",
    "view_ratio", "receipt_ratio", "news_ratio",
    "incumbent", "challenger", "open_seat", "has_page",
    "view_win", "via_win", "news_win", "stronghold",
    "vote_share", "win_lose",
)
_INT_FIELDS = ("incumbent", "challenger", "open_seat", "has_page", "view_win", "via_win", "news_win", "win_lose")
_RATIO_FIELDS = ("view_ratio", "receipt_ratio", "news_ratio")


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def row_to_dict(r: FeatureRow) -> dict:
    return {
        "candidate_id": r.candidate_id,
        "year": r.race.year,
        "chamber": r.race.chamber.value,
        "state": r.race.state,
        "district": r.race.district,
        "week": r.week,
        "view_ratio": r.view_ratio,
        "receipt_ratio": r.receipt_ratio,
        "news_ratio": r.news_ratio,
        "incumbent": r.incumbent,
        "challenger": r.challenger,
        "open_seat": r.open_seat,
        "has_page": r.has_page,
        "view_win": r.view_win,
        "via_win": r.via_win,
        "news_win": r.news_win,
        "stronghold": r.stronghold,
        "vote_share": r.vote_share,
        "win_lose": r.win_lose,
    }


def row_from_dict(d: dict) -> FeatureRow:
    def opt_float(x):
        return None if x in ("", None) else float(x)

    def opt_int(x):
        return None if x in ("", None) else int(x)

    week = d["week"]
    week = FINAL if week == FINAL else int(week)
    race = RaceKey(int(d["year"]), Chamber(d["chamber"]), d["state"], int(d["district"]))
    return FeatureRow(
        candidate_id=d["candidate_id"],
        race=race,
        week=week,
        **{k: opt_float(d[k]) for k in _RATIO_FIELDS},
        **{k: int(d[k]) for k in _INT_FIELDS},
        stronghold=opt_int(d["stronghold"]),
        vote_share=float(d["vote_share"]),
    )


def write_csv(rows: Iterable[FeatureRow], path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in rows:
            d = row_to_dict(r)
            w.writerow([_fmt(d[c]) for c in CSV_COLUMNS])


def read_csv(path: str | Path) -> list[FeatureRow]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
            raise SchemaError(f"unexpected feature header {reader.fieldnames}", path=str(path), line=1)
        return [row_from_dict(d) for d in reader]


def write_json(rows: Iterable[FeatureRow], path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    # one list per row, ordered as ``columns``, keeps week tables compact
    payload = {"columns": list(CSV_COLUMNS), "rows": [list(row_to_dict(r).values()) for r in rows]}
    path.write_text(json.dumps(payload, separators=(",", ":")) + "\n", encoding="utf-8")


def read_json(path: str | Path) -> list[FeatureRow]:
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    cols = payload["columns"]
    if tuple(cols) != CSV_COLUMNS:
        raise SchemaError(f"unexpected feature columns {cols}", path=str(path))
    return [row_from_dict(dict(zip(cols, values))) for values in payload["rows"]]


def check_invariants(rows: Iterable[FeatureRow], tol: float = 1e-9) -> list[str]:
    """Human-readable descriptions of every violated feature-table invariant."""
    problems: list[str] = []
    groups: dict[tuple, list[FeatureRow]] = defaultdict(list)
    for r in rows:
        groups[(r.race, r.week)].append(r)
        if r.challenger + r.incumbent != 1:
            problems.append(f"{r.candidate_id} week {r.week}: challenger and incumbent not complementary")
        for name in _RATIO_FIELDS:
            v = getattr(r, name)
            if v is not None and not (0.0 <= v <= 1.0):
                problems.append(f"{r.candidate_id} week {r.week}: {name}={v} outside [0,1]")
    for (race, week), members in groups.items():
        tag = f"{race.label} week {week}"
        for name in _RATIO_FIELDS:
            vals = [getattr(m, name) for m in members]
            if all(v is not None for v in vals) and abs(math.fsum(vals) - 1.0) > tol:
                problems.append(f"{tag}: {name} sums to {math.fsum(vals)!r}")
        for name in ("view_win", "via_win", "news_win"):
            if sum(getattr(m, name) for m in members) > 1:
                problems.append(f"{tag}: more than one {name}")
        if sum(m.win_lose for m in members) != 1:
            problems.append(f"{tag}: expected exactly one winner")
        open_seat = int(not any(m.incumbent for m in members))
        if any(m.open_seat != open_seat for m in members):
            problems.append(f"{tag}: open_seat flag inconsistent")
    return problems
