"""Fetch, parse, cache, and link the external data sources."""

from ballotlens.ingest.cache import ResponseCache
from ballotlens.ingest.calendar import collection_window, election_day
from ballotlens.ingest.http import HttpFetcher
from ballotlens.ingest.linking import LinkResult, link_candidates, load_catalog
from ballotlens.ingest.loaders import load_overrides, load_receipts, load_results
from ballotlens.ingest.pageviews import fetch_pageviews
from ballotlens.ingest.tvnews import DEFAULT_CHANNELS, fetch_tv_mentions
from ballotlens.ingest.types import (
    CandidateRecord,
    Chamber,
    DailySeries,
    DateWindow,
    Metric,
    RaceKey,
    ReceiptsRow,
    ResultsRow,
)

__all__ = [
    "CandidateRecord",
    "Chamber",
    "DEFAULT_CHANNELS",
    "DailySeries",
    "DateWindow",
    "HttpFetcher",
    "LinkResult",
    "Metric",
    "RaceKey",
    "ReceiptsRow",
    "ResponseCache",
    "ResultsRow",
    "collection_window",
    "election_day",
    "fetch_pageviews",
    "fetch_tv_mentions",
    "link_candidates",
    "load_catalog",
    "load_overrides",
    "load_receipts",
    "load_results",
]
