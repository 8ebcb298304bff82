from __future__ import annotations

import csv
from collections import defaultdict
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Mapping

from ballotlens.errors import AmbiguousLink, SchemaError
from ballotlens.ingest.loaders import Override
from ballotlens.ingest.names import linkage_key
from ballotlens.ingest.types import CandidateRecord


@dataclass(frozen=True)
class CatalogEntry:
    wikipedia_title: str | None = None
    fec_id: str | None = None
    state: str | None = None


@dataclass
class LinkResult:
    records: list[CandidateRecord]
    conflicts: dict[str, list[str]] = field(default_factory=dict)


def load_catalog(path: str | Path) -> dict[str, list[CatalogEntry]]:
    """Read a ``name,state,wikipedia_title,fec_id`` lookup table keyed by linkage key."""
    out: dict[str, list[CatalogEntry]] = defaultdict(list)
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if not reader.fieldnames or "name" not in reader.fieldnames:
            raise SchemaError("catalog needs a 'name' column", path=str(path), line=1)
        for row in reader:
            out[linkage_key(row["name"])].append(
                CatalogEntry(
                    wikipedia_title=(row.get("wikipedia_title") or "").strip() or None,
                    fec_id=(row.get("fec_id") or "").strip() or None,
                    state=(row.get("state") or "").strip().upper() or None,
                )
            )
    return dict(out)


def _default_title(name: str) -> str:
    return "_".join(name.split())


def link_candidates(
    records: Iterable[CandidateRecord],
    overrides: Mapping[str, Override] | None = None,
    catalog: Mapping[str, list[CatalogEntry]] | None = None,
    *,
    strict: bool = True,
) -> LinkResult:
    """Attach Wikipedia titles and FEC ids to candidate records.

    Explicit overrides always win. Otherwise candidates are matched on
    :func:`linkage_key`; records sharing a key are one person only when they
    share a state and sit in different cycles. A key that reaches several people, or several catalog
    targets, is a conflict: with ``strict`` it raises :class:`AmbiguousLink`,
    otherwise the affected candidates are left unlinked and the conflicts are
    returned for the validation report.

    Override columns ``incumbent`` and ``stronghold`` are applied here too.
    """
    overrides = overrides or {}
    catalog = catalog or {}
    records = sorted(records, key=lambda r: r.candidate_id)

    # (state, year) pairs of unresolved records per key; one person runs in
    # one state and at most one race per cycle
    seats_by_key: dict[str, list[tuple[str, int]]] = defaultdict(list)
    ids_by_key: dict[str, list[str]] = defaultdict(list)
    for r in records:
        key = linkage_key(r.full_name)
        ids_by_key[key].append(r.candidate_id)
        ov = overrides.get(r.candidate_id)
        if ov is None or (ov.wikipedia_title is None and not ov.no_page):
            seats_by_key[key].append((r.race.state, r.race.year))

    def _many_people(key: str) -> bool:
        seats = seats_by_key[key]
        return len({s for s, _ in seats}) > 1 or len({y for _, y in seats}) < len(seats)

    conflicts: dict[str, list[str]] = {}
    linked: list[CandidateRecord] = []
    for r in records:
        key = linkage_key(r.full_name)
        ov = overrides.get(r.candidate_id, Override())
        entries = [e for e in catalog.get(key, []) if e.state in (None, r.race.state)]

        title = ov.wikipedia_title
        if title is None and not ov.no_page:
            titles = sorted({e.wikipedia_title for e in entries if e.wikipedia_title})
            if _many_people(key) or len(titles) > 1:
                conflicts[key] = sorted(ids_by_key[key])
            elif titles:
                title = titles[0]
            elif not catalog:
                title = _default_title(r.full_name)

        fec_id = ov.fec_id
        if fec_id is None:
            fec_ids = sorted({e.fec_id for e in entries if e.fec_id})
            if len(fec_ids) > 1:
                conflicts[key] = sorted(ids_by_key[key])
            elif fec_ids:
                fec_id = fec_ids[0]

        if key in conflicts and ov.wikipedia_title is None and not ov.no_page:
            title = None
        linked.append(
            replace(
                r,
                wikipedia_title=title,
                fec_id=fec_id,
                incumbent=r.incumbent if ov.incumbent is None else ov.incumbent,
                stronghold=r.stronghold if ov.stronghold is None else ov.stronghold,
            )
        )

    conflicts = dict(sorted(conflicts.items()))
    if conflicts and strict:
        raise AmbiguousLink(conflicts)
    return LinkResult(linked, conflicts)
