"""Daily TV mention counts from the GDELT Television API keyword timeline."""

from __future__ import annotations

import json
from datetime import date
from typing import Sequence

from ballotlens.errors import EmptyName, InvalidQuery, InvalidWindow, TransportError
from ballotlens.ingest.calendar import parse_stamp
from ballotlens.ingest.http import HttpFetcher
from ballotlens.ingest.names import first_last
from ballotlens.ingest.types import DailySeries, DateWindow, Metric

ENDPOINT = "https://api.gdeltproject.org/api/v2/tv/tv"

# National cable networks plus CBS affiliates archived by the TV News Archive.
# The affiliate list is an assumption; override it in the pipeline config.
DEFAULT_CHANNELS = ("CNN", "MSNBC", "FOXNEWS", "KPIX", "WUSA", "KYW", "WBZ")


def request_for(name: str, channel: str, window: DateWindow) -> tuple[dict, str, dict]:
    query = {
        "name": name,
        "channel": channel.upper(),
        "start": window.start.strftime("%Y%m%d"),
        "end": window.end.strftime("%Y%m%d"),
    }
    params = {
        "query": f'"{name}" station:{channel.upper()}',
        "mode": "timelinevol",
        "format": "json",
        "datanorm": "raw",
        "timelinesmooth": 0,
        "startdatetime": f"{query['start']}000000",
        "enddatetime": f"{query['end']}235959",
    }
    return query, ENDPOINT, params


def render_body(channel: str, window: DateWindow, counts) -> str:
    data = [
        {"date": day.strftime("%Y%m%dT000000Z"), "value": int(c)}
        for day, c in zip(window.days(), counts)
    ]
    return json.dumps({"timeline": [{"series": channel.upper(), "data": data}]}, separators=(",", ":"))


def parse_body(body: str, window: DateWindow) -> list[int]:
    counts = [0] * len(window)
    if not body.strip():
        # the API answers an empty body when a query has no matches at all
        return counts
    try:
        timeline = json.loads(body).get("timeline", [])
    except ValueError as exc:
        raise TransportError(f"malformed GDELT payload: {exc}") from exc
    for series in timeline:
        for point in series.get("data", []):
            day = parse_stamp(point["date"])
            offset = (day - window.start).days
            if 0 <= offset < len(counts):
                counts[offset] += int(round(float(point["value"])))
    return counts


def fetch_tv_mentions(
    full_name: str,
    channels: Sequence[str],
    window: DateWindow,
    *,
    fetcher: HttpFetcher,
    candidate_id: str = "",
    today: date | None = None,
) -> DailySeries:
    """Per-day mentions of ``"First Last"`` summed over ``channels``.

    Each channel is queried (and cached) separately, so adding a channel to
    the list only costs one extra request per candidate.
    """
    if not channels:
        raise InvalidQuery("channel list must be non-empty")
    name = first_last(full_name or "")
    if not name:
        raise EmptyName(f"cannot build a mention query from name {full_name!r}")
    if window.end > (today or date.today()):
        raise InvalidWindow(f"window ends in the future: {window.end}")
    total = [0] * len(window)
    for channel in channels:
        query, url, params = request_for(name, channel, window)
        resp = fetcher.get(ENDPOINT, query, url, params=params)
        if resp.status == 404:
            continue
        for i, c in enumerate(parse_body(resp.body, window)):
            total[i] += c
    return DailySeries(
        candidate_id=candidate_id,
        metric=Metric.TV_MENTIONS,
        start_date=window.start,
        counts=tuple(total),
    )
