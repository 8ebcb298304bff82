"""Pipeline stages: fetch, features, fit and report.

Each command reads a :class:`PipelineConfig`, writes its artifacts under the
output directory and raises a :class:`BallotLensError` subclass on failure;
the exception's ``exit_code`` becomes the process exit status.
"""

from __future__ import annotations

import json
import logging
from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from ballotlens.analysis.registry import REGISTRY, resolve
from ballotlens.analysis.report import ReportInputs, build_report
from ballotlens.analysis.timeseries import WeeklyFeatures
from ballotlens.cli.config import PipelineConfig
from ballotlens.errors import (
    BallotLensError,
    CacheMiss,
    EmptyName,
    InvariantViolation,
    MissingFit,
    NetworkError,
    PageNotFound,
)
from ballotlens.features.assemble import FINAL, RawDataset, assemble_features, flagged_races
from ballotlens.features.io import check_invariants, read_csv, write_csv, write_json
from ballotlens.features.series import weekly_average
from ballotlens.ingest.cache import ResponseCache
from ballotlens.ingest.calendar import collection_window, election_day
from ballotlens.ingest.http import HttpFetcher
from ballotlens.ingest.linking import link_candidates, load_catalog
from ballotlens.ingest.loaders import ReceiptsLoad, load_overrides, load_receipts, load_results
from ballotlens.ingest.pageviews import fetch_pageviews
from ballotlens.ingest.tvnews import fetch_tv_mentions
from ballotlens.ingest.types import CandidateRecord, ResultsRow
from ballotlens.regress.results import FitResult

logger = logging.getLogger(__name__)


def _write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def _write_doc(path: Path, doc) -> None:
    _write_text(path, json.dumps(doc, sort_keys=True, indent=2) + "\n")


@dataclass
class Inputs:
    candidates: list[CandidateRecord]
    results: list[ResultsRow]
    receipts: ReceiptsLoad
    conflicts: dict[str, list[str]]


def load_inputs(cfg: PipelineConfig) -> Inputs:
    """Parse and link the input files, keeping the configured years and chambers."""
    cfg.require("results")
    results, candidates = load_results(cfg.results)
    keep = {c.candidate_id for c in candidates if c.race.year in cfg.years and c.race.chamber in cfg.chambers}
    results = [r for r in results if r.candidate_id in keep]
    candidates = [c for c in candidates if c.candidate_id in keep]
    overrides = load_overrides(cfg.overrides)
    catalog = load_catalog(cfg.catalog) if cfg.catalog else None
    linked = link_candidates(candidates, overrides, catalog, strict=False)
    receipts = load_receipts(cfg.receipts, linked.records) if cfg.receipts else ReceiptsLoad([])
    return Inputs(linked.records, results, receipts, linked.conflicts)


def make_fetcher(cfg: PipelineConfig, session=None, *, offline: bool | None = None) -> HttpFetcher:
    return HttpFetcher(
        ResponseCache(cfg.cache_dir),
        session,
        offline=cfg.offline if offline is None else offline,
        attempts=cfg.attempts,
        backoff=cfg.backoff,
        per_host=cfg.workers,
        min_interval=cfg.min_interval,
    )


# -- fetch -------------------------------------------------------------------


def cmd_fetch(cfg: PipelineConfig, session=None) -> dict:
    """Populate the cache with every linked candidate's pageviews and mentions.

    Writes ``fetch_summary.json``. Whatever was fetched stays cached even when
    the run fails; unknown titles exit 1 and network failures exit 3.
    """
    cfg.validate()
    inputs = load_inputs(cfg)
    fetcher = make_fetcher(cfg, session)
    tasks = []
    for c in inputs.candidates:
        window = collection_window(c.race.year)
        if c.wikipedia_title:
            tasks.append(("pageviews", c, window))
        if cfg.fetch_tv:
            tasks.append(("mentions", c, window))

    def run(task):
        kind, c, window = task
        try:
            if kind == "pageviews":
                fetch_pageviews(c.wikipedia_title, window, fetcher=fetcher, candidate_id=c.candidate_id)
            else:
                fetch_tv_mentions(c.full_name, cfg.channels, window, fetcher=fetcher, candidate_id=c.candidate_id)
        except PageNotFound as exc:
            return "not_found", exc.title
        except EmptyName as exc:
            return "skipped", f"{c.candidate_id}: {exc}"
        except NetworkError as exc:
            return "failed", f"{c.candidate_id} {kind}: {exc}"
        return "ok", None

    with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
        outcomes = list(pool.map(run, tasks))
    found: dict[str, list[str]] = defaultdict(list)
    for status, detail in outcomes:
        if detail is not None:
            found[status].append(detail)
    summary = {
        "candidates": len(inputs.candidates),
        "requests": fetcher.stats["cached"] + fetcher.stats["fetched"],
        "cached": fetcher.stats["cached"],
        "fetched": fetcher.stats["fetched"],
        "failed": len(found["failed"]),
        "not_found": sorted(found["not_found"]),
        "skipped": sorted(found["skipped"]),
        "errors": sorted(found["failed"]),
    }
    _write_doc(cfg.out_dir / "fetch_summary.json", summary)
    logger.info("fetch: cached %d, fetched %d, failed %d", summary["cached"], summary["fetched"], summary["failed"])
    if found["failed"]:
        cls = CacheMiss if cfg.offline else NetworkError
        raise cls(f"{len(found['failed'])} series could not be fetched; first: {sorted(found['failed'])[0]}")
    if found["not_found"]:
        raise BallotLensError(f"{len(found['not_found'])} title(s) have no article: {', '.join(summary['not_found'])}")
    return summary


# -- features ----------------------------------------------------------------


def _weekly_series(cfg: PipelineConfig, inputs: Inputs):
    # the feature stage never touches the network
    fetcher = make_fetcher(cfg, offline=True)
    views, mentions, missing = {}, {}, []
    for c in inputs.candidates:
        window = collection_window(c.race.year)
        eday = election_day(c.race.year)
        try:
            if c.wikipedia_title:
                daily = fetch_pageviews(c.wikipedia_title, window, fetcher=fetcher, candidate_id=c.candidate_id)
                views[c.candidate_id] = weekly_average(daily, eday)
        except PageNotFound as exc:
            missing.append(exc.title)
        except CacheMiss as exc:
            raise CacheMiss(f"{exc}; run the fetch stage first") from None
        if cfg.fetch_tv:
            try:
                daily = fetch_tv_mentions(
                    c.full_name, cfg.channels, window, fetcher=fetcher, candidate_id=c.candidate_id
                )
            except EmptyName:
                continue
            except CacheMiss as exc:
                raise CacheMiss(f"{exc}; run the fetch stage first") from None
            mentions[c.candidate_id] = weekly_average(daily, eday)
    return views, mentions, sorted(missing)


def _weekly_flags(tables: dict) -> dict:
    out = {}
    for week, rows in tables.items():
        flags = flagged_races(rows)
        if flags:
            out[str(week)] = flags
    return out


def cmd_features(cfg: PipelineConfig) -> dict:
    """Write the Final and per-week feature tables plus ``validation.json``."""
    cfg.validate()
    inputs = load_inputs(cfg)
    views, mentions, not_found = _weekly_series(cfg, inputs)
    raw = RawDataset(inputs.candidates, inputs.results, inputs.receipts.rows, views, mentions)
    final = assemble_features(raw, FINAL)
    cumulative = {w: assemble_features(raw, w, cumulative=True) for w in cfg.weeks}
    noncumulative = {w: assemble_features(raw, w, cumulative=False) for w in cfg.weeks}

    problems = check_invariants(final)
    for tables in (cumulative, noncumulative):
        problems += check_invariants(r for rows in tables.values() for r in rows)

    out = cfg.out_dir / "features"
    write_csv(final, out / "final.csv")
    write_json(final, out / "final.json")
    for label, tables in (("cumulative", cumulative), ("noncumulative", noncumulative)):
        rows = [r for w in sorted(tables) for r in tables[w]]
        write_csv(rows, out / f"weekly_{label}.csv")
        write_json(rows, out / f"weekly_{label}.json")
    validation = {
        "candidates": len(inputs.candidates),
        "zero_totals": {
            "final": flagged_races(final),
            "weekly_cumulative": _weekly_flags(cumulative),
            "weekly_noncumulative": _weekly_flags(noncumulative),
        },
        "link_conflicts": inputs.conflicts,
        "pages_not_found": not_found,
        "receipts_unmatched_candidates": inputs.receipts.unmatched_candidates,
        "receipts_unmatched_rows": inputs.receipts.unmatched_rows,
        "invariant_violations": problems,
    }
    _write_doc(out / "validation.json", validation)
    if problems:
        raise InvariantViolation(f"{len(problems)} feature invariant(s) violated; first: {problems[0]}")
    return validation


def read_features(cfg: PipelineConfig):
    folder = cfg.out_dir / "features"
    if not (folder / "final.csv").exists():
        raise BallotLensError(f"no feature tables under {folder}; run the features stage first")
    final = read_csv(folder / "final.csv")
    weekly = WeeklyFeatures()
    for label, table in (("cumulative", weekly.cumulative), ("noncumulative", weekly.noncumulative)):
        path = folder / f"weekly_{label}.csv"
        if path.exists():
            for r in read_csv(path):
                table.setdefault(r.week, []).append(r)
    return final, weekly


# -- fit ---------------------------------------------------------------------


def cmd_fit(cfg: PipelineConfig) -> dict:
    """Fit the selected registry models on the Final feature table.

    Every model is attempted; failures are recorded in ``fits/index.json``
    and the command then exits 1.
    """
    cfg.validate()
    names = resolve(cfg.models)
    final, _ = read_features(cfg)
    folder = cfg.out_dir / "fits"
    folder.mkdir(parents=True, exist_ok=True)

    def run(name):
        try:
            return REGISTRY[name].fit(final), None
        except BallotLensError as exc:
            return None, f"{type(exc).__name__}: {exc}"

    with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
        outcomes = dict(zip(names, pool.map(run, names)))

    index = {}
    for name, (fit, error) in outcomes.items():
        entry = REGISTRY[name]
        record = {"family": entry.family.value, "stratum": entry.stratum.label, "title": entry.title}
        if error is None:
            _write_text(folder / f"{name}.json", fit.to_json() + "\n")
            _write_text(folder / f"{name}.txt", fit.summary())
            record.update(status="ok", nobs=fit.nobs, converged=fit.converged)
        else:
            for suffix in (".json", ".txt"):
                (folder / f"{name}{suffix}").unlink(missing_ok=True)
            record.update(status="error", error=error)
            logger.error("%s: %s", name, error)
        index[name] = record
    _write_doc(folder / "index.json", index)
    failed = [n for n, (_, err) in outcomes.items() if err is not None]
    if failed:
        raise BallotLensError(f"{len(failed)} model(s) failed: {', '.join(failed)}")
    return index


def read_fits(cfg: PipelineConfig) -> dict[str, FitResult]:
    folder = cfg.out_dir / "fits"
    index_path = folder / "index.json"
    if not index_path.exists():
        raise MissingFit(f"no fitted models under {folder}; run the fit stage first")
    index = json.loads(index_path.read_text(encoding="utf-8"))
    fits = {}
    for name, record in index.items():
        if record.get("status") == "ok":
            fits[name] = FitResult.from_json((folder / f"{name}.json").read_text(encoding="utf-8"))
    return fits


# -- report ------------------------------------------------------------------


def cmd_report(cfg: PipelineConfig) -> list[str]:
    """Write figure CSVs, the probability grid, tallies, JSON and markdown."""
    cfg.validate()
    fits = read_fits(cfg)
    final, weekly = read_features(cfg)
    inputs = load_inputs(cfg)
    files = build_report(ReportInputs(final, weekly, fits, inputs.candidates, inputs.results, cfg.cumulative))
    folder = cfg.out_dir / "report"
    for name, text in files.items():
        _write_text(folder / name, text)
    return sorted(files)


def cmd_all(cfg: PipelineConfig, session=None) -> None:
    cmd_fetch(cfg, session)
    cmd_features(cfg)
    cmd_fit(cfg)
    cmd_report(cfg)
