"""Daily per-article pageviews from the Wikimedia REST API."""

from __future__ import annotations

import json
from datetime import date
from urllib.parse import quote

from ballotlens.errors import InvalidQuery, InvalidWindow, PageNotFound, TransportError
from ballotlens.ingest.calendar import parse_stamp
from ballotlens.ingest.http import HttpFetcher
from ballotlens.ingest.types import DailySeries, DateWindow, Metric

ENDPOINT = "https://wikimedia.org/api/rest_v1/metrics/pageviews/per-article"
PROJECT = "en.wikipedia"
ACCESS = "all-access"
AGENT = "user"


def normalize_title(title: str) -> str:
    return title.strip().replace(" ", "_")


def _ymd(d: date) -> str:
    return d.strftime("%Y%m%d")


def request_for(title: str, window: DateWindow) -> tuple[dict, str]:
    """Normalized cache query and request URL for one article/window."""
    t = normalize_title(title)
    query = {
        "project": PROJECT,
        "access": ACCESS,
        "agent": AGENT,
        "title": t,
        "start": _ymd(window.start),
        "end": _ymd(window.end),
    }
    url = (
        f"{ENDPOINT}/{PROJECT}/{ACCESS}/{AGENT}/{quote(t, safe='')}"
        f"/daily/{query['start']}/{query['end']}"
    )
    return query, url


def render_body(title: str, window: DateWindow, counts) -> str:
    """Serialize counts in the API's response layout (fixtures, synthetic corpora)."""
    t = normalize_title(title)
    items = [
        {
            "project": PROJECT,
            "article": t,
            "granularity": "daily",
            "timestamp": day.strftime("%Y%m%d00"),
            "access": ACCESS,
            "agent": AGENT,
            "views": int(c),
        }
        for day, c in zip(window.days(), counts)
    ]
    return json.dumps({"items": items}, separators=(",", ":"))


def parse_body(body: str, window: DateWindow) -> list[int]:
    counts = [0] * len(window)
    try:
        items = json.loads(body)["items"]
    except (ValueError, KeyError) as exc:
        raise TransportError(f"malformed pageview payload: {exc}") from exc
    for item in items:
        day = parse_stamp(str(item["timestamp"]))
        offset = (day - window.start).days
        # the API omits zero-view days; out-of-window rows are ignored
        if 0 <= offset < len(counts):
            counts[offset] += int(item["views"])
    return counts


def fetch_pageviews(
    title: str,
    window: DateWindow,
    *,
    fetcher: HttpFetcher,
    candidate_id: str = "",
    today: date | None = None,
) -> DailySeries:
    """Fetch one article's daily views, one count per day of ``window``.

    Days the API leaves out are zero. Raises :class:`PageNotFound` when the
    title has no article; what to do about that is the caller's decision.
    """
    if not title or not title.strip():
        raise InvalidQuery("title must be non-empty")
    if window.end > (today or date.today()):
        raise InvalidWindow(f"window ends in the future: {window.end}")
    query, url = request_for(title, window)
    resp = fetcher.get(ENDPOINT, query, url)
    if resp.status == 404:
        raise PageNotFound(normalize_title(title))
    return DailySeries(
        candidate_id=candidate_id,
        metric=Metric.PAGEVIEWS,
        start_date=window.start,
        counts=tuple(parse_body(resp.body, window)),
    )
