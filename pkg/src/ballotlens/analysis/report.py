"""Assemble every report artifact as in-memory text, keyed by file name."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

from ballotlens.analysis.grid import probability_grid
from ballotlens.analysis.registry import REGISTRY
from ballotlens.analysis.tally import TALLY_COLUMNS, distribution_histogram, outcome_tally
from ballotlens.analysis.targets import compare_to_targets, load_reference_targets
from ballotlens.analysis.timeseries import (
    Group,
    WeeklyFeatures,
    group_average_timeseries,
    group_slopes,
    rsq_timeseries,
)
from ballotlens.errors import BallotLensError, MissingFit
from ballotlens.features.assemble import FeatureRow
from ballotlens.ingest.calendar import WEEKS
from ballotlens.ingest.types import CandidateRecord, Chamber, ResultsRow
from ballotlens.regress.design import DesignSpec
from ballotlens.regress.predict import classify_accuracy
from ballotlens.regress.results import Family, FitResult

HIST_BINS = 20
# running-total trace is sampled every fourth week, ending on election week
CUMULATIVE_WEEKS = tuple(range(3, WEEKS, 4))
VIEW_SPEC = DesignSpec(["view_ratio"])
NEWS_SPEC = DesignSpec(["news_ratio"])


@dataclass
class ReportInputs:
    final: Sequence[FeatureRow]
    weekly: WeeklyFeatures
    fits: Mapping[str, FitResult]
    candidates: Sequence[CandidateRecord]
    results: Sequence[ResultsRow]
    # running totals or single weeks for the group-mean and media traces
    cumulative: bool = True


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return "" if math.isnan(v) else repr(v)
    return str(v)


def _csv(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_fmt(v) for v in r])
    return buf.getvalue()


def _chamber(ch: Chamber):
    return lambda r: r.race.chamber is ch


def _safe_rsq(table, spec, week, where, response="vote_share") -> float | None:
    if week not in table:
        return None
    try:
        return rsq_timeseries(table, spec, response=response, weeks=[week], where=where)[week]
    except BallotLensError:
        return None


def figure1(final: Sequence[FeatureRow]) -> str:
    rows = []
    for ch in Chamber:
        members = [r for r in final if r.race.chamber is ch]
        for field in ("vote_share", "view_ratio"):
            h = distribution_histogram([getattr(r, field) for r in members], HIST_BINS)
            for lo, hi, n in zip(h.edges, h.edges[1:], h.counts):
                rows.append((ch.value, field, lo, hi, n))
    return _csv(("chamber", "field", "bin_lo", "bin_hi", "count"), rows)


def figure2(weekly: WeeklyFeatures) -> tuple[str, dict]:
    trace: dict[str, dict[int, float | None]] = {}
    for ch in (Chamber.HOUSE, Chamber.SENATE):
        key = ch.value.lower()
        trace[f"{key}_cumulative"] = {
            w: _safe_rsq(weekly.cumulative, VIEW_SPEC, w, _chamber(ch)) for w in CUMULATIVE_WEEKS
        }
        trace[f"{key}_noncumulative"] = {
            w: _safe_rsq(weekly.noncumulative, VIEW_SPEC, w, _chamber(ch)) for w in range(WEEKS)
        }
    cols = ("house_cumulative", "house_noncumulative", "senate_cumulative", "senate_noncumulative")
    rows = [(w, *(trace[c].get(w) for c in cols)) for w in range(WEEKS)]
    return _csv(("week", *cols), rows), trace


def _group_trace(table, metric, where):
    out = {}
    for g in Group:
        try:
            out[g] = group_average_timeseries(table, g, metric, where)
        except BallotLensError:
            out[g] = {}
    return out


def figure3a(weekly: WeeklyFeatures, cumulative: bool = True) -> str:
    tr = _group_trace(weekly.table(cumulative), "view_ratio", _chamber(Chamber.HOUSE))
    rows = [(w, tr[Group.INCUMBENT].get(w), tr[Group.CHALLENGER].get(w)) for w in range(WEEKS)]
    return _csv(("week", "incumbent_mean_view_ratio", "challenger_mean_view_ratio"), rows)


def figure3b(final: Sequence[FeatureRow]) -> tuple[str, dict]:
    house = [r for r in final if r.race.chamber is Chamber.HOUSE]
    slopes = group_slopes(house, "challenger")
    names = {0: "Incumbent", 1: "Challenger"}
    rows = [(names[k], s.n, s.intercept, s.slope, s.se) for k, s in slopes.items()]
    return _csv(("group", "n", "intercept", "slope", "se"), rows), {names[k]: s for k, s in slopes.items()}


def figure4(weekly: WeeklyFeatures, cumulative: bool = True) -> str:
    senate = _chamber(Chamber.SENATE)
    table = weekly.table(cumulative)
    rows = []
    for w in range(WEEKS):
        inc = _safe_rsq(table, NEWS_SPEC, w, lambda r: senate(r) and r.incumbent == 1, "view_ratio")
        chal = _safe_rsq(table, NEWS_SPEC, w, lambda r: senate(r) and r.incumbent == 0, "view_ratio")
        rows.append((w, inc, chal))
    return _csv(("week", "incumbent_adj_r2", "challenger_adj_r2"), rows)


def appendix_g(weekly: WeeklyFeatures, cumulative: bool = True) -> str:
    tr = _group_trace(weekly.table(cumulative), "news_ratio", _chamber(Chamber.SENATE))
    rows = [(w, tr[Group.INCUMBENT].get(w), tr[Group.CHALLENGER].get(w)) for w in range(WEEKS)]
    return _csv(("week", "incumbent_mean_news_ratio", "challenger_mean_news_ratio"), rows)


def appendix_e(candidates, results) -> tuple[str, dict]:
    tally = outcome_tally(candidates, results)
    rows = [(ch.value, *(tally[ch][c] for c in TALLY_COLUMNS)) for ch in (Chamber.SENATE, Chamber.HOUSE)]
    return _csv(("chamber", *TALLY_COLUMNS), rows), tally


def grid_csv(fits: Mapping[str, FitResult]) -> tuple[str, list]:
    if "appendixH" not in fits:
        raise MissingFit("probability grid needs the appendixH fit")
    grid = probability_grid(fits["appendixH"], stronghold_value=0)
    ref = {
        (c["opponent_type"], c["viability"], c["pageview_outcome"]): c["probability"]
        for c in load_reference_targets()["probability_grid"]["cells"]
    }
    rows = [
        (
            g.opponent_type.value, g.viability.value, g.pageview_outcome.value, 0, g.probability,
            ref[(g.opponent_type.value, g.viability.value, g.pageview_outcome.value)],
        )
        for g in grid
    ]
    header = ("opponent_type", "viability", "pageview_outcome", "stronghold", "probability", "reference_probability")
    return _csv(header, rows), grid


def _accuracies(final, fits) -> dict[str, float]:
    out = {}
    for name, fit in fits.items():
        if fit.family is Family.LOGIT and name in REGISTRY:
            out[name] = classify_accuracy(fit, REGISTRY[name].stratum.select(final))
    return out


def _md_table(header, rows) -> list[str]:
    lines = ["| " + " | ".join(header) + " |", "|" + "---|" * len(header)]
    lines += ["| " + " | ".join(str(c) for c in r) + " |" for r in rows]
    return lines


def _r(v, digits=4) -> str:
    if v is None or (isinstance(v, float) and math.isnan(v)):
        return "n/a"
    return f"{v:.{digits}f}"


def build_report(inp: ReportInputs) -> dict[str, str]:
    """All report files as ``{file name: text}``; deterministic for fixed inputs."""
    fits = dict(sorted(inp.fits.items(), key=lambda kv: list(REGISTRY).index(kv[0]) if kv[0] in REGISTRY else 1e9))
    files: dict[str, str] = {}
    files["figure1_hist.csv"] = figure1(inp.final)
    files["figure2.csv"], trace = figure2(inp.weekly)
    files["figure3a.csv"] = figure3a(inp.weekly, inp.cumulative)
    files["figure3b.csv"], slopes = figure3b(inp.final)
    files["figure4.csv"] = figure4(inp.weekly, inp.cumulative)
    files["appendixG.csv"] = appendix_g(inp.weekly, inp.cumulative)
    files["appendixE.csv"], tally = appendix_e(inp.candidates, inp.results)
    files["probability_grid.csv"], grid = grid_csv(fits)
    acc = _accuracies(inp.final, fits)

    comparisons = []
    for name, fit in fits.items():
        comparisons.extend(compare_to_targets(name, fit, acc.get(name)))

    results = {
        "models": {
            name: {
                "family": fit.family.value,
                "nobs": fit.nobs,
                "coefficients": dict(zip(fit.labels, map(float, fit.coefficients))),
                "std_errors": dict(zip(fit.labels, map(float, fit.std_errors))),
                "fit_stats": fit.fit_stats,
                "significance": fit.stars,
                **({"accuracy": acc[name]} if name in acc else {}),
            }
            for name, fit in fits.items()
        },
        "outcome_tally": {ch.value: counts for ch, counts in tally.items()},
        "group_slopes": {k: {"n": s.n, "slope": s.slope, "se": s.se} for k, s in slopes.items()},
        "probability_grid": [
            {
                "opponent_type": g.opponent_type.value,
                "viability": g.viability.value,
                "pageview_outcome": g.pageview_outcome.value,
                "probability": g.probability,
            }
            for g in grid
        ],
        "reference_comparison": comparisons,
    }
    files["results.json"] = json.dumps(_clean(results), sort_keys=True, indent=2, allow_nan=False) + "\n"
    files["report.md"] = _markdown(fits, acc, tally, slopes, grid, trace, comparisons)
    return files


def _clean(v):
    if isinstance(v, dict):
        return {k: _clean(x) for k, x in v.items()}
    if isinstance(v, list):
        return [_clean(x) for x in v]
    if isinstance(v, float) and not math.isfinite(v):
        return None
    return v


def _markdown(fits, acc, tally, slopes, grid, trace, comparisons) -> str:
    out = ["# ballotlens report", ""]
    out += ["## Model summary", ""]
    rows = []
    for name, fit in fits.items():
        fs = fit.fit_stats
        if fit.family is Family.OLS:
            quality = f"adj R2 {_r(fs['adj_r2'], 3)}{fit.stars}"
        else:
            quality = f"pseudo R2 {_r(fs['pseudo_r2_mcfadden'], 3)}{fit.stars}"
        coefs = ", ".join(f"{l} {_r(float(b))}" for l, b in zip(fit.labels, fit.coefficients))
        rows.append((name, fit.family.value, fit.nobs, quality, _r(acc.get(name), 3) if name in acc else "", coefs))
    out += _md_table(("model", "family", "n", "fit", "accuracy", "coefficients"), rows)
    out += ["", "Significance marks follow the model F or likelihood-ratio test: * p<0.05, ** p<0.01, *** p<0.001.", ""]

    out += ["## Outcome tally", ""]
    out += _md_table(
        ("chamber", *TALLY_COLUMNS),
        [(ch.value, *(tally[ch][c] for c in TALLY_COLUMNS)) for ch in (Chamber.SENATE, Chamber.HOUSE)],
    )
    out += ["", "## Slope of vote share on pageview ratio by group (House)", ""]
    out += _md_table(("group", "n", "slope", "se"), [(k, s.n, _r(s.slope), _r(s.se)) for k, s in slopes.items()])
    out += ["", "## Challenger win probability (appendixH, stronghold = 0)", ""]
    out += _md_table(
        ("opponent", "viability", "pageviews", "probability"),
        [(g.opponent_type.value, g.viability.value, g.pageview_outcome.value, _r(g.probability, 3)) for g in grid],
    )
    out += ["", "## Adjusted R2 of vote share on pageview ratio, running totals", ""]
    out += _md_table(
        ("week", "House", "Senate"),
        [(w, _r(trace["house_cumulative"][w], 3), _r(trace["senate_cumulative"][w], 3)) for w in CUMULATIVE_WEEKS],
    )
    out += ["", "## Reference comparison", ""]
    out += [
        "Published values for the live 2016/2018 corpus. They are documented targets, "
        "not expected to match a synthetic or re-collected corpus.",
        "",
    ]
    out += _md_table(
        ("model", "statistic", "target", "observed"),
        [(c["model"], c["statistic"], _r(c["target"]), _r(c["observed"])) for c in comparisons],
    )
    out += ["", "## Fitted tables", ""]
    for name, fit in fits.items():
        out += [f"### {name}", "", "```", fit.summary().rstrip("\n"), "```", ""]
    return "\n".join(out).rstrip("\n") + "\n"
