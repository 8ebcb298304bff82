"""Parsers for the results, receipts, and overrides CSV files."""

from __future__ import annotations

import csv
import math
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path

from ballotlens.errors import DuplicateCandidate, SchemaError
from ballotlens.ingest.names import linkage_key
from ballotlens.ingest.types import CandidateRecord, Chamber, RaceKey, ReceiptsRow, ResultsRow

RESULTS_COLUMNS = ("year", "chamber", "state", "district", "candidate", "party", "votes", "totalvotes")
RECEIPTS_COLUMNS = ("candidate_id", "receipts_usd")
OVERRIDE_COLUMNS = ("candidate_id", "wikipedia_title", "fec_id", "incumbent")

SHARE_SUM_TOL = 1e-9


def _read(path: str | Path, required: tuple[str, ...]) -> tuple[list[tuple[int, dict]], list[str]]:
    path = str(path)
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = [h.strip() for h in (reader.fieldnames or [])]
        missing = [c for c in required if c not in header]
        if missing:
            raise SchemaError(f"missing column(s) {missing}", path=path, line=1)
        reader.fieldnames = header
        rows = [(reader.line_num, {k: (v or "").strip() for k, v in row.items() if k}) for row in reader]
    return rows, header


def _int(value: str, name: str, path: str, line: int) -> int:
    try:
        out = int(float(value))
    except ValueError:
        raise SchemaError(f"{name} is not a number: {value!r}", path=path, line=line) from None
    if out < 0:
        raise SchemaError(f"{name} must be non-negative, got {out}", path=path, line=line)
    return out


def candidate_id_for(race: RaceKey, name: str) -> str:
    return f"{race.label}-{linkage_key(name).replace(' ', '-')}"


def _derive_incumbency(records: list[dict]) -> None:
    """Mark candidates who won the same seat in the prior cycle.

    House seats turn over every cycle; a senator up for re-election won the
    same state's seat two, four or six years earlier. When the file holds no
    prior-cycle rows for a chamber, incumbency stays ``None``.
    """
    winners: dict[tuple, set[str]] = defaultdict(set)
    years_present: dict[Chamber, set[int]] = defaultdict(set)
    for r in records:
        race = r["race"]
        years_present[race.chamber].add(race.year)
        if r["win"]:
            winners[(race.year, race.chamber, race.state, race.district)].add(r["key"])
    for r in records:
        race = r["race"]
        if race.year - 2 not in years_present[race.chamber]:
            r["incumbent"] = None
            continue
        lookback = (2,) if race.chamber is Chamber.HOUSE else (2, 4, 6)
        r["incumbent"] = any(
            r["key"] in winners.get((race.year - k, race.chamber, race.state, race.district), ())
            for k in lookback
        )


def load_results(path: str | Path) -> tuple[list[ResultsRow], list[CandidateRecord]]:
    """Parse an election results CSV into results rows and candidate records.

    ``vote_share`` is taken from the file when present, otherwise computed as
    ``votes / totalvotes``. Rows with an empty ``totalvotes`` fall back to the
    race's summed votes. The single highest vote getter in each race wins.
    """
    path = str(path)
    rows, header = _read(path, RESULTS_COLUMNS)
    has_share = "vote_share" in header
    has_id = "candidate_id" in header

    parsed: list[dict] = []
    seen_ids: set[str] = set()
    seen_keys: set[tuple] = set()
    for line, row in rows:
        try:
            chamber = Chamber.parse(row["chamber"])
            district = 0 if chamber is Chamber.SENATE else _int(row["district"] or "0", "district", path, line)
            race = RaceKey(int(row["year"]), chamber, row["state"].upper(), district)
        except ValueError as exc:
            raise SchemaError(str(exc), path=path, line=line) from None
        name = row["candidate"]
        if not name:
            raise SchemaError("empty candidate name", path=path, line=line)
        key = linkage_key(name)
        if (race, key) in seen_keys:
            raise DuplicateCandidate(f"{name!r} appears twice in {race.label}", path=path, line=line)
        seen_keys.add((race, key))
        cid = row.get("candidate_id") if has_id and row.get("candidate_id") else candidate_id_for(race, name)
        if cid in seen_ids:
            raise DuplicateCandidate(f"duplicate candidate_id {cid!r}", path=path, line=line)
        seen_ids.add(cid)
        votes = _int(row["votes"], "votes", path, line)
        total = _int(row["totalvotes"], "totalvotes", path, line) if row["totalvotes"] else None
        share = None
        if has_share and row.get("vote_share"):
            share = float(row["vote_share"])
            if not 0.0 <= share <= 1.0:
                raise SchemaError(f"vote_share out of [0,1]: {share}", path=path, line=line)
        parsed.append(
            dict(line=line, race=race, name=name, key=key, cid=cid, party=row["party"],
                 votes=votes, total=total, share=share)
        )

    by_race: dict[RaceKey, list[dict]] = defaultdict(list)
    for r in parsed:
        by_race[r["race"]].append(r)
    for race, members in by_race.items():
        summed = sum(m["votes"] for m in members)
        for m in members:
            if m["share"] is None:
                denom = m["total"] if m["total"] else summed
                m["share"] = m["votes"] / denom if denom else 0.0
        share_sum = math.fsum(m["share"] for m in members)
        if share_sum > 1.0 + SHARE_SUM_TOL:
            raise SchemaError(f"vote shares in {race.label} sum to {share_sum:.6f} > 1", path=path)
        best = max(m["votes"] for m in members)
        leaders = [m for m in members if m["votes"] == best]
        if len(leaders) != 1:
            raise SchemaError(f"no unique winner in {race.label}", path=path, line=leaders[0]["line"])
        for m in members:
            m["win"] = m is leaders[0]

    _derive_incumbency(parsed)
    parsed.sort(key=lambda r: r["cid"])
    results = [ResultsRow(r["cid"], r["race"], r["votes"], r["share"], r["win"]) for r in parsed]
    candidates = [
        CandidateRecord(candidate_id=r["cid"], full_name=r["name"], party=r["party"], race=r["race"],
                        incumbent=r["incumbent"])
        for r in parsed
    ]
    return results, candidates


@dataclass
class ReceiptsLoad:
    rows: list[ReceiptsRow]
    unmatched_candidates: list[str] = field(default_factory=list)
    unmatched_rows: list[str] = field(default_factory=list)


def load_receipts(path: str | Path, candidates: list[CandidateRecord] | None = None) -> ReceiptsLoad:
    """Parse cycle-total receipts, keyed by candidate_id or FEC id.

    With ``candidates`` given, rows are matched to candidate records (by
    ``candidate_id`` first, then ``fec_id``); candidates without a row and rows
    without a candidate are both listed rather than silently dropped.
    """
    path = str(path)
    rows, _ = _read(path, RECEIPTS_COLUMNS)
    amounts: dict[str, float] = {}
    for line, row in rows:
        ident = row["candidate_id"]
        if not ident:
            raise SchemaError("empty candidate_id", path=path, line=line)
        try:
            usd = float(row["receipts_usd"].replace(",", "").replace("$", ""))
        except ValueError:
            raise SchemaError(f"receipts_usd is not a number: {row['receipts_usd']!r}", path=path, line=line) from None
        if not math.isfinite(usd) or usd < 0:
            raise SchemaError(f"receipts_usd must be a non-negative amount, got {usd}", path=path, line=line)
        if ident in amounts:
            raise DuplicateCandidate(f"duplicate receipts row for {ident!r}", path=path, line=line)
        amounts[ident] = usd

    if candidates is None:
        return ReceiptsLoad([ReceiptsRow(k, v) for k, v in sorted(amounts.items())])

    matched: list[ReceiptsRow] = []
    used: set[str] = set()
    unmatched_candidates: list[str] = []
    for c in sorted(candidates, key=lambda c: c.candidate_id):
        ident = c.candidate_id if c.candidate_id in amounts else c.fec_id if c.fec_id in amounts else None
        if ident is None:
            unmatched_candidates.append(c.full_name)
            continue
        used.add(ident)
        matched.append(ReceiptsRow(c.candidate_id, amounts[ident]))
    unmatched_rows = sorted(set(amounts) - used)
    return ReceiptsLoad(matched, unmatched_candidates, unmatched_rows)


@dataclass(frozen=True)
class Override:
    wikipedia_title: str | None = None
    no_page: bool = False
    fec_id: str | None = None
    incumbent: bool | None = None
    stronghold: int | None = None


def _flag(value: str, name: str, path: str, line: int) -> int | None:
    if value == "":
        return None
    v = value.casefold()
    if v in ("1", "true", "t", "yes", "y"):
        return 1
    if v in ("0", "false", "f", "no", "n"):
        return 0
    raise SchemaError(f"{name} must be a boolean, got {value!r}", path=path, line=line)


def load_overrides(path: str | Path | None) -> dict[str, Override]:
    """Read the manual linkage/incumbency overrides file.

    A ``wikipedia_title`` of ``-`` records that the candidate has no article.
    An optional ``stronghold`` column supplies that covariate per candidate.
    """
    if path is None or not Path(path).exists() or Path(path).stat().st_size == 0:
        return {}
    path = str(path)
    rows, _ = _read(path, OVERRIDE_COLUMNS)
    out: dict[str, Override] = {}
    for line, row in rows:
        cid = row["candidate_id"]
        if not cid:
            raise SchemaError("empty candidate_id", path=path, line=line)
        if cid in out:
            raise DuplicateCandidate(f"duplicate override for {cid!r}", path=path, line=line)
        title = row.get("wikipedia_title", "")
        inc = _flag(row.get("incumbent", ""), "incumbent", path, line)
        out[cid] = Override(
            wikipedia_title=title if title and title != "-" else None,
            no_page=title == "-",
            fec_id=row.get("fec_id") or None,
            incumbent=None if inc is None else bool(inc),
            stronghold=_flag(row.get("stronghold", ""), "stronghold", path, line),
        )
    return out
