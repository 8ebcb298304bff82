import itertools
import math
from dataclasses import replace

import numpy as np
import pytest

import oracles
from ballotlens.analysis import (
    REGISTRY,
    Group,
    OpponentType,
    PageviewOutcome,
    ReportInputs,
    Viability,
    WeeklyFeatures,
    build_report,
    compare_to_targets,
    distribution_histogram,
    group_average_timeseries,
    group_slopes,
    load_reference_targets,
    outcome_tally,
    page_groups,
    probability_grid,
    resolve,
    rsq_timeseries,
    run_registry,
)
from ballotlens.errors import EmptyGroup, EmptyStratum, GroupTooSmall, MissingCovariate, UnknownModel
from ballotlens.features import FINAL, NUMERIC_FIELDS
from ballotlens.features.assemble import FeatureRow
from ballotlens.ingest.types import CandidateRecord, Chamber, RaceKey, ResultsRow
from ballotlens.regress.design import DesignSpec
from ballotlens.regress.predict import predict_prob

APPENDIX_H = load_reference_targets()["models"]["appendixH"]["coefficients"]


def _pair(race, rng, v, week, *, open_seat=False, pages=(1, 1), slope=0.4, noise=0.02):
    """Two candidates with view ratios v and 1 - v and antisymmetric vote shares."""
    rec = rng.uniform(0.05, 0.95)
    news = rng.uniform(0.05, 0.95)
    e = float(rng.normal(0.0, noise))
    # shares follow the latent v; a missing page then zeroes the observed ratio
    share = 0.5 + slope * (v - 0.5) + e
    v = {(1, 0): 1.0, (0, 1): 0.0, (0, 0): 0.5}.get(pages, v)
    shares = (share, 1.0 - share)
    views = (v, 1.0 - v)
    recs = (rec, 1.0 - rec)
    newss = (news, 1.0 - news)
    rows = []
    for k in range(2):
        inc = 0 if open_seat else int(k == 0)
        rows.append(
            FeatureRow(
                candidate_id=f"{race.state}{race.district or 0}{race.year}{k}",
                race=race,
                week=week,
                view_ratio=views[k] if pages != (0, 0) else None,
                receipt_ratio=recs[k],
                news_ratio=newss[k],
                incumbent=inc,
                challenger=1 - inc,
                open_seat=int(open_seat),
                has_page=pages[k],
                view_win=int(views[k] > views[1 - k]),
                via_win=int(recs[k] > recs[1 - k]),
                news_win=int(newss[k] > newss[1 - k]),
                stronghold=int(rng.random() < 0.3),
                vote_share=shares[k],
                win_lose=int(shares[k] > shares[1 - k]),
            )
        )
    return rows


def _table(seed=0, n_house=200, n_senate=40, week=FINAL, slope=0.4, noise=0.06, mixed=0.3):
    rng = np.random.default_rng(seed)
    rows = []
    for i in range(n_house + n_senate):
        chamber = Chamber.HOUSE if i < n_house else Chamber.SENATE
        state = chr(65 + i // 26 % 26) + chr(65 + i % 26)
        race = RaceKey(2018, chamber, state, 1 if chamber is Chamber.HOUSE else 0)
        u = rng.random()
        pages = (1, 0) if u < mixed / 2 else (0, 1) if u < mixed else (1, 1)
        rows += _pair(
            race, rng, float(rng.uniform(0.05, 0.95)), week,
            open_seat=rng.random() < 0.15, pages=pages, slope=slope, noise=noise,
        )
    return rows


@pytest.fixture(scope="module")
def table():
    return _table()


# -- registry ----------------------------------------------------------------


def test_registry_contents():
    assert len(REGISTRY) == 23
    counts = {}
    for name in REGISTRY:
        counts[name.split(".")[0]] = counts.get(name.split(".")[0], 0) + 1
    assert counts == {
        "table3": 5, "table4": 6, "table6": 4, "appendixA": 2, "appendixC": 1, "appendixD": 2, "appendixF": 2,
        "appendixH": 1,
    }
    for entry in REGISTRY.values():
        assert set(entry.spec.fields) <= set(NUMERIC_FIELDS)
        assert entry.response in NUMERIC_FIELDS
    assert all(REGISTRY[n].stratum.chamber is Chamber.SENATE for n in REGISTRY if n.startswith("table6"))
    assert set(REGISTRY["appendixH"].spec.fields) == {"challenger", "open_seat", "stronghold", "via_win", "view_win"}


def test_resolve():
    assert resolve(None) == list(REGISTRY)
    assert resolve(["appendixH", "table3.model1"]) == ["table3.model1", "appendixH"]
    with pytest.raises(UnknownModel):
        resolve(["table3.model1", "table9.model1"])


def test_full_registry_fits(table):
    fits = run_registry(table)
    assert list(fits) == list(REGISTRY)
    for name, fit in fits.items():
        assert fit.name == name
        assert np.all(np.isfinite(fit.coefficients)), name
    house = [r for r in table if r.race.chamber is Chamber.HOUSE]
    X = np.column_stack([np.ones(len(house)), [r.view_ratio for r in house]])
    beta = np.linalg.lstsq(X, [r.vote_share for r in house], rcond=None)[0]
    assert fits["table3.model1"].coefficients == pytest.approx(beta, abs=1e-10)


def test_registry_order_independence(table):
    names = ["appendixD.binary", "table3.model4", "appendixH", "table6.model2"]
    forward = run_registry(table, names)
    backward = run_registry(table, list(reversed(names)))
    alone = {n: run_registry(table, [n])[n] for n in names}
    for n in names:
        assert forward[n] == backward[n] == alone[n]


def test_empty_stratum(table):
    house_only = [r for r in table if r.race.chamber is Chamber.HOUSE]
    with pytest.raises(EmptyStratum):
        run_registry(house_only, ["table6.model1"])
    with pytest.raises(EmptyStratum):
        run_registry([], ["table3.model1"])


def test_page_groups():
    rng = np.random.default_rng(1)
    races = [RaceKey(2018, Chamber.HOUSE, "CA", d) for d in (1, 2, 3, 4)]
    rows = (
        _pair(races[0], rng, 0.3, FINAL, pages=(1, 0))
        + _pair(races[1], rng, 0.3, FINAL, pages=(1, 1))
        + _pair(races[2], rng, 0.3, FINAL, pages=(0, 0))
    )
    # a third candidate without a page far behind does not change the grouping
    third = replace(rows[2], candidate_id="x", vote_share=0.01, has_page=0)
    solo = replace(rows[0], race=races[3], candidate_id="solo")
    groups = page_groups(rows + [third, solo])
    assert groups == {races[0]: "mixed", races[1]: "both", races[2]: "none"}


# -- probability grid ---------------------------------------------------------


def test_grid_anchor_cell():
    grid = probability_grid(APPENDIX_H, stronghold_value=0)
    first = grid[0]
    assert (first.opponent_type, first.viability, first.pageview_outcome) == (
        OpponentType.INCUMBENT, Viability.LESS, PageviewOutcome.FEWER,
    )
    assert first.probability == pytest.approx(0.0206, abs=1e-4)
    exact = 1.0 / (1.0 + math.exp(-(APPENDIX_H["Intercept"] + APPENDIX_H["challenger"])))
    assert first.probability == pytest.approx(exact, rel=1e-12)


def test_grid_covers_each_setting_once():
    grid = probability_grid(APPENDIX_H, stronghold_value=1)
    keys = [(g.opponent_type, g.viability, g.pageview_outcome) for g in grid]
    assert sorted(keys) == sorted(itertools.product(OpponentType, Viability, PageviewOutcome))
    assert all(0.0 <= g.probability <= 1.0 for g in grid)
    assert all(a.probability > b.probability for a, b in zip(grid, probability_grid(APPENDIX_H)))


def test_grid_zero_coefficients():
    zero = dict.fromkeys(["Intercept", "challenger", "open_seat", "via_win", "view_win"], 0.0)
    assert [g.probability for g in probability_grid(zero)] == [0.5] * 8


def test_grid_monotone_in_positive_effects():
    rng = np.random.default_rng(11)
    for _ in range(50):
        coefs = {k: float(rng.normal(0, 2)) for k in ("Intercept", "challenger", "open_seat", "stronghold")}
        coefs["via_win"] = float(rng.uniform(0, 3))
        coefs["view_win"] = float(rng.uniform(0, 3))
        cell = {(g.opponent_type, g.viability, g.pageview_outcome): g.probability for g in probability_grid(coefs)}
        for opp, via in itertools.product(OpponentType, Viability):
            assert cell[opp, via, PageviewOutcome.MORE] >= cell[opp, via, PageviewOutcome.FEWER]
        for opp, views in itertools.product(OpponentType, PageviewOutcome):
            assert cell[opp, Viability.MORE, views] >= cell[opp, Viability.LESS, views]


def test_grid_errors():
    with pytest.raises(MissingCovariate):
        probability_grid({"Intercept": 0.0, "challenger": 1.0, "open_seat": 0.0, "via_win": 1.0})
    with pytest.raises(ValueError):
        probability_grid(APPENDIX_H, stronghold_value=2)
    with pytest.raises(ValueError):
        probability_grid({**APPENDIX_H, "news_win": 1.0})


def test_grid_from_fit_ignores_candidate_labels(table):
    fit = run_registry(table, ["appendixH"])["appendixH"]
    relabeled = [replace(r, candidate_id="z" + r.candidate_id[::-1]) for r in table]
    a = probability_grid(fit)
    assert probability_grid(run_registry(relabeled, ["appendixH"])["appendixH"]) == a
    # row order only moves the fit within the solver tolerance
    shuffled = probability_grid(run_registry(relabeled[::-1], ["appendixH"])["appendixH"])
    assert [g.probability for g in shuffled] == pytest.approx([g.probability for g in a], abs=1e-8)
    first = predict_prob(fit, [1.0, 1.0, 0.0, 0.0, 0.0, 0.0])
    assert a[0].probability == pytest.approx(first, rel=1e-12)


# -- tallies and histograms ---------------------------------------------------


def _tally_fixture():
    races = [RaceKey(2018, Chamber.HOUSE, "OH", d) for d in (1, 2, 3)]
    cands, results = [], []
    winners = {"I1", "I2", "C3"}
    for race, (inc, ch) in zip(races, (("I1", "C1"), ("I2", "C2"), ("I3", "C3"))):
        for cid, flag in ((inc, True), (ch, False)):
            cands.append(CandidateRecord(cid, cid, "D", race, incumbent=flag))
            results.append(ResultsRow(cid, race, 0, 0.5, cid in winners))
    senate = RaceKey(2018, Chamber.SENATE, "OH")
    for cid in ("S1", "S2"):
        cands.append(CandidateRecord(cid, cid, "R", senate, incumbent=False))
        results.append(ResultsRow(cid, senate, 0, 0.5, cid == "S1"))
    return cands, results


def test_outcome_tally():
    tally = outcome_tally(*_tally_fixture())
    house = tally[Chamber.HOUSE]
    got = (house["challenger_victory"], house["challenger_defeat"], house["incumbent_victory"], house["incumbent_defeat"])
    assert got == (1, 2, 2, 1)
    assert house["total_candidates"] == 6 and house["open_seat_races"] == 0
    assert tally[Chamber.SENATE] == {
        "total_candidates": 2, "open_seat_races": 1, "challenger_victory": 1,
        "challenger_defeat": 1, "incumbent_victory": 0, "incumbent_defeat": 0,
    }



def test_outcome_tally_winners_only():
    # two incumbent winners and one open-seat winner, losers not recorded
    races = [RaceKey(2016, Chamber.HOUSE, "KY", d) for d in (1, 2, 3)]
    cands = [CandidateRecord(f"w{k}", "x", "R", race, incumbent=k < 2) for k, race in enumerate(races)]
    results = [ResultsRow(c.candidate_id, c.race, 10, 1.0, True) for c in cands]
    house = outcome_tally(cands, results)[Chamber.HOUSE]
    got = tuple(house[k] for k in ("challenger_victory", "challenger_defeat", "incumbent_victory", "incumbent_defeat"))
    assert got == (1, 0, 2, 0) and house["open_seat_races"] == 1


def test_outcome_tally_empty():
    assert all(v == 0 for counts in outcome_tally([], []).values() for v in counts.values())


def test_histogram():
    assert distribution_histogram([0.1, 0.9], bins=2).counts == (1, 1)
    h = distribution_histogram([0.0, 1.0, 0.5, None], bins=4)
    assert h.counts == (1, 0, 1, 1) and h.edges == (0.0, 0.25, 0.5, 0.75, 1.0)
    assert distribution_histogram([], bins=5).counts == (0,) * 5
    with pytest.raises(ValueError):
        distribution_histogram([0.5], bins=1)
    with pytest.raises(ValueError):
        distribution_histogram([1.5])


def test_histogram_bimodal():
    rng = np.random.default_rng(4)
    sample = np.concatenate([rng.beta(0.3, 6, 500), rng.beta(6, 0.3, 500)])
    counts = distribution_histogram(sample.tolist(), bins=10).counts
    assert counts.index(max(counts)) in (0, 9)
    assert sorted(range(10), key=counts.__getitem__)[-2:] in ([0, 9], [9, 0])
    assert sum(counts) == 1000


# -- weekly traces -------------------------------------------------------------


def _weekly_tables(signal, seed=5, weeks=range(52)):
    return {w: _table(seed + w, n_house=300, n_senate=0, week=w, slope=signal, noise=0.02, mixed=0) for w in weeks}


def test_rsq_flat_under_constant_signal():
    trace = rsq_timeseries(_weekly_tables(0.4), DesignSpec(["view_ratio"]))
    assert len(trace) == 52
    assert max(trace.values()) - min(trace.values()) < 0.05


def test_rsq_small_without_signal():
    trace = rsq_timeseries(_weekly_tables(0.0, weeks=range(0, 52, 3)), DesignSpec(["view_ratio"]))
    assert all(v < 0.05 for v in trace.values())


def test_rsq_week_51_matches_final_fit(table):
    weekly = WeeklyFeatures(cumulative={51: [replace(r, week=51) for r in table]})
    house = rsq_timeseries(
        weekly, DesignSpec(["view_ratio"]), True, weeks=[51], where=lambda r: r.race.chamber is Chamber.HOUSE
    )
    fit = run_registry(table, ["appendixA.house"])["appendixA.house"]
    assert house == {51: fit.fit_stats["adj_r2"]}


def test_rsq_error_names_week():
    with pytest.raises(Exception) as info:
        rsq_timeseries({3: _table(n_house=5, n_senate=0, week=3), 4: []}, DesignSpec(["view_ratio"]))
    assert info.value.week == 4


def _member(cid, week, ratio, incumbent):
    race = RaceKey(2018, Chamber.HOUSE, "WA", 1)
    return FeatureRow(cid, race, week, ratio, None, None, incumbent, 1 - incumbent, 0, 1, 0, 0, 0, 0, 0.5, 0)


def test_group_mean_examples():
    rows = {10: [_member("a", 10, 0.6, 1), _member("b", 10, 0.8, 1), _member("c", 10, 0.1, 0)]}
    assert group_average_timeseries(rows, Group.INCUMBENT)[10] == pytest.approx(0.7, abs=1e-15)
    assert group_average_timeseries(rows, "Challenger") == {10: 0.1}
    single = {w: [_member("a", w, w / 100, 1)] for w in range(52)}
    assert group_average_timeseries(single, Group.INCUMBENT) == {w: w / 100 for w in range(52)}
    with pytest.raises(EmptyGroup):
        group_average_timeseries(single, Group.CHALLENGER)


def test_group_means_match_oracle(frozen):
    inc, weeks = oracles.group_fixture()
    table = {
        w: [_member(f"c{k}", w, v, flag) for k, (v, flag) in enumerate(zip(row, inc))] for w, row in enumerate(weeks)
    }
    for group in Group:
        got = group_average_timeseries(table, group)
        assert list(got.values()) == pytest.approx(frozen["group_means"][group.value], abs=1e-12)


def _slope_rows(rng, n, challenger, slope):
    rows = []
    for k in range(n):
        v = float(rng.uniform(0, 1))
        share = 0.4 + slope * v + float(rng.normal(0, 0.03))
        race = RaceKey(2018, Chamber.HOUSE, "NV", k + 1)
        rows.append(FeatureRow(f"{challenger}-{k}", race, FINAL, v, None, None, 1 - challenger, challenger, 0, 1, 0,
                               0, 0, 0, share, 0))
    return rows


def test_group_slopes_recover_planted_values():
    rng = np.random.default_rng(8)
    rows = _slope_rows(rng, 400, 0, 0.05) + _slope_rows(rng, 400, 1, 0.20)
    slopes = group_slopes(rows)
    assert abs(slopes[0].slope - 0.05) < 3 * slopes[0].se
    assert abs(slopes[1].slope - 0.20) < 3 * slopes[1].se
    assert slopes[0].n == slopes[1].n == 400


def test_group_slopes_symmetry_and_size():
    rng = np.random.default_rng(9)
    base = _slope_rows(rng, 50, 0, 0.1)
    twin = [replace(r, challenger=1, incumbent=0, candidate_id="t" + r.candidate_id) for r in base]
    slopes = group_slopes(base + twin)
    assert slopes[0].slope == pytest.approx(slopes[1].slope, abs=1e-9)
    with pytest.raises(GroupTooSmall):
        group_slopes(base + twin[:2])


# -- targets and report ----------------------------------------------------------


def test_reference_targets_are_documented():
    targets = load_reference_targets()
    assert set(targets["models"]) <= set(REGISTRY)
    assert targets["models"]["table3.model1"]["coefficients"]["view_ratio"] == 0.273
    assert APPENDIX_H["stronghold"] == 2.9877
    assert len(targets["probability_grid"]["cells"]) == 8


def test_compare_to_targets(table):
    fit = run_registry(table, ["table3.model1"])["table3.model1"]
    rows = compare_to_targets("table3.model1", fit)
    by_stat = {r["statistic"]: r for r in rows}
    assert by_stat["coef[view_ratio]"]["target"] == 0.273
    assert by_stat["coef[view_ratio]"]["observed"] == fit.coef("view_ratio")
    assert by_stat["nobs"]["observed"] == fit.nobs
    assert compare_to_targets("not.a.model", fit) == []


def test_build_report(table):
    weekly = WeeklyFeatures(
        cumulative={w: [replace(r, week=w) for r in table] for w in range(52)},
        noncumulative={w: [replace(r, week=w) for r in table] for w in range(52)},
    )
    cands = [CandidateRecord(r.candidate_id, r.candidate_id, "D", r.race, bool(r.incumbent)) for r in table]
    results = [ResultsRow(r.candidate_id, r.race, 0, r.vote_share, bool(r.win_lose)) for r in table]
    inp = ReportInputs(table, weekly, run_registry(table), cands, results)
    files = build_report(inp)
    assert {"figure1_hist.csv", "figure2.csv", "figure3a.csv", "figure3b.csv", "figure4.csv", "appendixG.csv",
            "appendixE.csv", "probability_grid.csv", "results.json", "report.md"} <= set(files)
    assert len(files["figure2.csv"].splitlines()) == 53
    assert len(files["probability_grid.csv"].splitlines()) == 9
    assert build_report(inp) == files
