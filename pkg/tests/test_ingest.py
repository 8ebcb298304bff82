import json
from datetime import date, timedelta
from pathlib import Path

import pytest
import requests

from ballotlens.errors import (
    AmbiguousLink,
    CacheMiss,
    DuplicateCandidate,
    EmptyName,
    InvalidQuery,
    InvalidWindow,
    OddYear,
    PageNotFound,
    RateLimited,
    SchemaError,
    TransportError,
)
from ballotlens.ingest import pageviews, tvnews
from ballotlens.ingest.cache import CachedResponse, ResponseCache
from ballotlens.ingest.calendar import WINDOW_DAYS, collection_window, election_day
from ballotlens.ingest.http import HttpFetcher
from ballotlens.ingest.linking import CatalogEntry, link_candidates, load_catalog
from ballotlens.ingest.loaders import Override, load_overrides, load_receipts, load_results
from ballotlens.ingest.names import first_last, linkage_key
from ballotlens.ingest.types import CandidateRecord, Chamber, DateWindow, RaceKey

FIXTURES = Path(__file__).parent / "fixtures"
WEEK = DateWindow(date(2018, 10, 31), date(2018, 11, 6))
TODAY = date(2020, 1, 1)


class Resp:
    def __init__(self, status, text="", headers=None):
        self.status_code = status
        self.text = text
        self.headers = headers or {}


class StubSession:
    def __init__(self, *responses):
        self.responses = list(responses)
        self.calls = []

    def get(self, url, params=None, headers=None, timeout=None):
        self.calls.append((url, params))
        r = self.responses.pop(0)
        if isinstance(r, Exception):
            raise r
        return r


def _fetcher(tmp_path, *responses, **kw):
    kw.setdefault("sleep", lambda s: None)
    session = StubSession(*responses)
    return HttpFetcher(ResponseCache(tmp_path / "cache"), session, **kw), session


def _write(path, text):
    path.write_text(text, encoding="utf-8")
    return path


# -- calendar ----------------------------------------------------------------


def test_election_days():
    assert election_day(2016) == date(2016, 11, 8)
    assert election_day(2018) == date(2018, 11, 6)
    with pytest.raises(OddYear):
        election_day(2015)


@pytest.mark.parametrize("year", range(1900, 2101, 2))
def test_election_day_is_a_tuesday_in_early_november(year):
    d = election_day(year)
    assert d.weekday() == 1
    assert d.month == 11 and 2 <= d.day <= 8


def test_collection_window_is_52_weeks_ending_on_election_day():
    w = collection_window(2016)
    assert len(w) == WINDOW_DAYS == 364
    assert w.end == date(2016, 11, 8)
    assert w.start == date(2016, 11, 8) - timedelta(days=363)


def test_types_reject_bad_values():
    with pytest.raises(ValueError):
        RaceKey(2017, Chamber.HOUSE, "CA", 1)
    with pytest.raises(ValueError):
        RaceKey(2018, Chamber.SENATE, "CA", 3)
    with pytest.raises(ValueError):
        RaceKey(2018, Chamber.HOUSE, "Cal", 3)
    with pytest.raises(InvalidWindow):
        DateWindow(date(2018, 1, 2), date(2018, 1, 1))
    assert Chamber.parse("US House") is Chamber.HOUSE
    assert RaceKey(2018, Chamber.HOUSE, "CA", 7).label == "2018-CA-07"


# -- cache and transport -----------------------------------------------------


def test_cache_roundtrip_and_stable_bytes(tmp_path):
    cache = ResponseCache(tmp_path)
    cache.put("ep", {"b": 2, "a": 1}, 200, "body")
    assert ("ep", {"a": 1, "b": 2}) in cache
    assert cache.get("ep", {"a": 1, "b": 2}).body == "body"
    path = cache.path_for(cache.key("ep", {"a": 1, "b": 2}))
    first = path.read_bytes()
    cache.put("ep", {"a": 1, "b": 2}, 200, "body")
    assert path.read_bytes() == first
    assert not list(tmp_path.rglob("*.part"))
    assert cache.get("ep", {"a": 2}) is None


def test_fetcher_serves_cache_before_network(tmp_path):
    f, session = _fetcher(tmp_path, Resp(200, "x"))
    assert f.get("ep", {"q": 1}, "http://h/x").body == "x"
    assert f.get("ep", {"q": 1}, "http://h/x").body == "x"
    assert len(session.calls) == 1
    assert f.stats == {"fetched": 1, "cached": 1}


def test_fetcher_retries_rate_limit_honoring_retry_after(tmp_path):
    slept = []
    f, session = _fetcher(
        tmp_path, Resp(429, headers={"Retry-After": "5"}), Resp(503), Resp(200, "ok"), sleep=slept.append
    )
    assert f.get("ep", {}, "http://h/x").body == "ok"
    assert slept == [5.0, 10.0]
    assert len(session.calls) == 3


def test_fetcher_gives_up_after_three_attempts(tmp_path):
    slept = []
    f, _ = _fetcher(tmp_path, Resp(500), requests.ConnectionError("down"), Resp(429), sleep=slept.append)
    with pytest.raises(RateLimited):
        f.get("ep", {}, "http://h/x")
    assert slept == [1.0, 2.0]
    assert ResponseCache(tmp_path / "cache").get("ep", {}) is None


def test_fetcher_transport_error_after_retries(tmp_path):
    f, _ = _fetcher(tmp_path, Resp(502), Resp(502), Resp(502))
    with pytest.raises(TransportError):
        f.get("ep", {}, "http://h/x")


def test_fetcher_does_not_retry_client_errors(tmp_path):
    f, session = _fetcher(tmp_path, Resp(400))
    with pytest.raises(TransportError):
        f.get("ep", {}, "http://h/x")
    assert len(session.calls) == 1


def test_offline_cache_miss(tmp_path):
    f, session = _fetcher(tmp_path, offline=True)
    with pytest.raises(CacheMiss):
        f.get("ep", {}, "http://h/x")
    assert session.calls == []


# -- pageviews ---------------------------------------------------------------


def _seed_pageview_fixture(cache):
    query, _ = pageviews.request_for("Jane Doe (politician)", WEEK)
    cache.put(pageviews.ENDPOINT, query, 200, (FIXTURES / "pageviews_jane_doe_7d.json").read_text())


def test_pageview_fixture_replay(tmp_path):
    f, session = _fetcher(tmp_path, offline=True)
    _seed_pageview_fixture(f.cache)
    s = pageviews.fetch_pageviews("Jane_Doe_(politician)", WEEK, fetcher=f, candidate_id="C007", today=TODAY)
    # the API leaves out 2018-11-02, a zero-view day
    assert s.counts == (412, 389, 0, 520, 611, 845, 1903)
    assert s.window == WEEK and s.candidate_id == "C007"
    again = pageviews.fetch_pageviews("Jane_Doe_(politician)", WEEK, fetcher=f, today=TODAY)
    assert again.counts == s.counts
    assert session.calls == []


def test_pageview_request_layout():
    query, url = pageviews.request_for("Jane Doe (politician)", WEEK)
    assert query["title"] == "Jane_Doe_(politician)"
    assert url.endswith("/en.wikipedia/all-access/user/Jane_Doe_%28politician%29/daily/20181031/20181106")


def test_pageview_miss_is_fetched_then_cached(tmp_path):
    body = pageviews.render_body("A_B", WEEK, [1, 2, 3, 4, 5, 6, 7])
    f, session = _fetcher(tmp_path, Resp(200, body))
    s = pageviews.fetch_pageviews("A_B", WEEK, fetcher=f, today=TODAY)
    assert s.total == 28
    offline = HttpFetcher(f.cache, offline=True)
    assert pageviews.fetch_pageviews("A_B", WEEK, fetcher=offline, today=TODAY).counts == s.counts


def test_unknown_title_raises_and_caches_the_404(tmp_path):
    f, session = _fetcher(tmp_path, Resp(404, '{"type":"not_found"}'))
    with pytest.raises(PageNotFound):
        pageviews.fetch_pageviews("No_Such_Page", WEEK, fetcher=f, today=TODAY)
    with pytest.raises(PageNotFound):
        pageviews.fetch_pageviews("No_Such_Page", WEEK, fetcher=f, today=TODAY)
    assert len(session.calls) == 1


def test_pageview_preconditions(tmp_path):
    f, _ = _fetcher(tmp_path)
    with pytest.raises(InvalidQuery):
        pageviews.fetch_pageviews("  ", WEEK, fetcher=f, today=TODAY)
    with pytest.raises(InvalidWindow):
        pageviews.fetch_pageviews("A", WEEK, fetcher=f, today=date(2018, 11, 1))


def test_malformed_payload(tmp_path):
    with pytest.raises(TransportError):
        pageviews.parse_body("not json", WEEK)


# -- tv mentions -------------------------------------------------------------


class _MemoryCache:
    def __init__(self):
        self.store = {}

    def get(self, endpoint, query):
        return self.store.get(ResponseCache.key(endpoint, query))

    def put(self, endpoint, query, status, body):
        self.store[ResponseCache.key(endpoint, query)] = r = CachedResponse(status, body)
        return r


def _seed_tv_fixture(cache):
    fx = json.loads((FIXTURES / "tv_mentions_jane_doe_7d.json").read_text())
    for channel, body in fx["bodies"].items():
        query, _, _ = tvnews.request_for(fx["name"], channel, WEEK)
        cache.put(tvnews.ENDPOINT, query, 200, body)
    return fx


def test_tv_fixture_replay_default_channels(tmp_path):
    f, session = _fetcher(tmp_path, offline=True)
    _seed_tv_fixture(f.cache)
    s = tvnews.fetch_tv_mentions("Jane Q. Doe", tvnews.DEFAULT_CHANNELS, WEEK, fetcher=f, today=TODAY)
    assert s.counts == (1, 1, 1, 3, 5, 7, 17)
    assert session.calls == []


def test_tv_channels_add():
    window = DateWindow(date(2018, 11, 5), date(2018, 11, 6))
    f = HttpFetcher(_MemoryCache(), offline=True)
    for channel, counts in (("CNN", [1, 2]), ("FOXNEWS", [3, 4])):
        query, _, _ = tvnews.request_for("Jane Doe", channel, window)
        f.cache.put(tvnews.ENDPOINT, query, 200, tvnews.render_body(channel, window, counts))
    s = tvnews.fetch_tv_mentions("Jane Doe", ["CNN", "FOXNEWS"], window, fetcher=f, today=TODAY)
    assert s.counts == (4, 6)


def test_tv_request_uses_first_and_last_name():
    query, _, params = tvnews.request_for(first_last("Jane Q. Doe Jr."), "cnn", WEEK)
    assert params["query"] == '"Jane Doe" station:CNN'
    assert query["channel"] == "CNN"


def test_tv_preconditions(tmp_path):
    f, _ = _fetcher(tmp_path)
    with pytest.raises(InvalidQuery):
        tvnews.fetch_tv_mentions("Jane Doe", [], WEEK, fetcher=f, today=TODAY)
    with pytest.raises(EmptyName):
        tvnews.fetch_tv_mentions("  ", ["CNN"], WEEK, fetcher=f, today=TODAY)


# -- loaders -----------------------------------------------------------------

RESULTS = """year,chamber,state,district,candidate,party,votes,totalvotes
2016,House,CA,1,Alice Smith,DEM,600,1000
2016,House,CA,1,Bob Jones,REP,400,1000
2018,House,CA,1,Alice Smith,DEM,550,1000
2018,House,CA,1,Carl Wu,REP,430,1000
2018,Senate,CA,0,Dana Lee,DEM,70,
2018,Senate,CA,0,Eve Park,REP,30,
"""


def test_load_results_shares_winners_and_incumbency(tmp_path):
    results, cands = load_results(_write(tmp_path / "r.csv", RESULTS))
    by_name = {(c.full_name, c.race.year): c for c in cands}
    share = {r.candidate_id: r for r in results}
    alice16 = by_name[("Alice Smith", 2016)]
    assert share[alice16.candidate_id].vote_share == pytest.approx(0.6)
    assert share[alice16.candidate_id].win_lose
    assert by_name[("Alice Smith", 2018)].incumbent is True
    assert by_name[("Carl Wu", 2018)].incumbent is False
    # no prior cycle in the file
    assert alice16.incumbent is None
    assert share[by_name[("Dana Lee", 2018)].candidate_id].vote_share == pytest.approx(0.7)
    races = {}
    for r in results:
        races.setdefault(r.race, []).append(r.win_lose)
    assert all(sum(v) == 1 for v in races.values())


def test_results_schema_errors_name_file_and_line(tmp_path):
    with pytest.raises(SchemaError, match="votes"):
        load_results(_write(tmp_path / "r.csv", "year,chamber,state,district,candidate,party,totalvotes\n"))
    bad = RESULTS.replace("Bob Jones,REP,400", "Bob Jones,REP,lots")
    with pytest.raises(SchemaError) as err:
        load_results(_write(tmp_path / "r2.csv", bad))
    assert err.value.line == 3 and "r2.csv" in str(err.value)


def test_duplicate_candidate(tmp_path):
    dup = RESULTS + "2016,House,CA,1,alice  smith,DEM,1,1000\n"
    with pytest.raises(DuplicateCandidate):
        load_results(_write(tmp_path / "r.csv", dup))


def test_tied_race_has_no_unique_winner(tmp_path):
    tie = "year,chamber,state,district,candidate,party,votes,totalvotes\n2018,House,CA,2,A B,D,5,10\n2018,House,CA,2,C D,R,5,10\n"
    with pytest.raises(SchemaError, match="winner"):
        load_results(_write(tmp_path / "r.csv", tie))


def test_receipts_parse_and_unmatched_report(tmp_path):
    _, cands = load_results(_write(tmp_path / "r.csv", RESULTS))
    ids = sorted(c.candidate_id for c in cands)
    text = "candidate_id,receipts_usd\n" + f"{ids[0]},1500000.00\nC999,\"$2,000\"\n"
    load = load_receipts(_write(tmp_path / "m.csv", text), cands)
    assert [(r.candidate_id, r.receipts_usd) for r in load.rows] == [(ids[0], 1_500_000.0)]
    assert load.unmatched_rows == ["C999"]
    assert len(load.unmatched_candidates) == len(cands) - 1
    with pytest.raises(SchemaError):
        load_receipts(_write(tmp_path / "neg.csv", "candidate_id,receipts_usd\nC1,-5\n"))


def test_overrides(tmp_path):
    text = "candidate_id,wikipedia_title,fec_id,incumbent,stronghold\nC1,-,,1,0\nC2,Jane_Doe_(politician),H8CA01,,\n"
    ov = load_overrides(_write(tmp_path / "o.csv", text))
    assert ov["C1"] == Override(None, True, None, True, 0)
    assert ov["C2"].wikipedia_title == "Jane_Doe_(politician)" and ov["C2"].incumbent is None
    assert load_overrides(_write(tmp_path / "empty.csv", "")) == {}
    assert load_overrides(None) == {}
    with pytest.raises(SchemaError):
        load_overrides(_write(tmp_path / "bad.csv", "candidate_id,wikipedia_title,fec_id,incumbent\nC1,,,maybe\n"))


# -- names and linking -------------------------------------------------------


def test_linkage_key_normalization():
    assert linkage_key("John A. Smith Jr.") == linkage_key("john smith") == "john smith"
    assert linkage_key("José  O'Neil III") == "jose oneil"
    assert first_last("Mary Anne de la Cruz") == "Mary Cruz"


def _rec(cid, name, state="CA", year=2018, district=1):
    return CandidateRecord(cid, name, "D", RaceKey(year, Chamber.HOUSE, state, district), incumbent=False)


def test_override_title_wins():
    recs = [_rec("C007", "Jane Doe")]
    catalog = {"jane doe": [CatalogEntry("Jane_Doe", "H1")]}
    out = link_candidates(recs, {"C007": Override(wikipedia_title="Jane_Doe_(politician)")}, catalog)
    assert out.records[0].wikipedia_title == "Jane_Doe_(politician)"
    assert out.records[0].fec_id == "H1"


def test_same_key_two_people_is_ambiguous():
    recs = [_rec("C1", "John Smith", "CA"), _rec("C2", "John Smith Jr.", "NY")]
    with pytest.raises(AmbiguousLink) as err:
        link_candidates(recs, {})
    assert err.value.conflicts == {"john smith": ["C1", "C2"]}
    soft = link_candidates(recs, {}, strict=False)
    assert [r.wikipedia_title for r in soft.records] == [None, None]
    resolved = link_candidates(recs, {"C1": Override("John_Smith_(CA)"), "C2": Override("John_Smith_(NY)")})
    assert [r.wikipedia_title for r in resolved.records] == ["John_Smith_(CA)", "John_Smith_(NY)"]


def test_same_person_across_cycles_links_once():
    recs = [_rec("A16", "Ann Lee", year=2016), _rec("A18", "Ann Lee", year=2018)]
    out = link_candidates(recs, {})
    assert [r.wikipedia_title for r in out.records] == ["Ann_Lee", "Ann_Lee"]


def test_catalog_with_two_targets_conflicts(tmp_path):
    path = _write(tmp_path / "cat.csv", "name,state,wikipedia_title,fec_id\nAnn Lee,CA,Ann_Lee,\nAnn Lee,,Ann_Lee_(judge),\n")
    with pytest.raises(AmbiguousLink):
        link_candidates([_rec("A", "Ann Lee")], {}, load_catalog(path))


def test_linking_is_order_independent():
    recs = [_rec(f"C{i}", n, district=i) for i, n in enumerate(["Ann Lee", "Bo Chan", "Cy Diaz", "Di Eng"])]
    a = link_candidates(recs, {"C2": Override(no_page=True)})
    b = link_candidates(list(reversed(recs)), {"C2": Override(no_page=True)})
    assert a.records == b.records
    assert a.records[2].wikipedia_title is None
