"""Cache-first HTTP GET with bounded retries and per-host concurrency limits."""

from __future__ import annotations

import logging
import threading
import time
from collections import Counter
from typing import Callable, Mapping
from urllib.parse import urlsplit

import requests

from ballotlens.errors import CacheMiss, RateLimited, TransportError
from ballotlens.ingest.cache import CachedResponse, ResponseCache

logger = logging.getLogger(__name__)

USER_AGENT = "ballotlens/0.1 (election pageview research; https://github.com/ballotlens)"

# Responses with these statuses are facts about the resource and get cached.
CACHEABLE = frozenset({200, 404})


def _retry_after(headers: Mapping[str, str]) -> float | None:
    value = headers.get("Retry-After") if headers else None
    if value is None:
        return None
    try:
        return max(0.0, float(value))
    except ValueError:
        return None


class HttpFetcher:
    """GET requests served from a :class:`ResponseCache` when possible.

    Parameters
    ----------
    cache : ResponseCache
        Where responses are persisted before they are returned.
    session : object with a ``get(url, params=, headers=, timeout=)`` method
        Defaults to a ``requests.Session``; tests pass a stub.
    offline : bool
        Forbid network access; a cache miss raises :class:`CacheMiss`.
    attempts : int
        Total tries per request for retryable failures (429, 5xx, connection).
    backoff : float
        First backoff delay in seconds; doubles per retry. A server
        ``Retry-After`` hint overrides it when larger.
    per_host : int
        Maximum in-flight requests per remote host.
    min_interval : float
        Global floor on seconds between request starts (rate ceiling).
    """

    def __init__(
        self,
        cache: ResponseCache,
        session=None,
        *,
        offline: bool = False,
        attempts: int = 3,
        backoff: float = 1.0,
        per_host: int = 4,
        min_interval: float = 0.0,
        timeout: float = 30.0,
        sleep: Callable[[float], None] = time.sleep,
    ):
        self.cache = cache
        self._session = session
        self.offline = offline
        self.attempts = attempts
        self.backoff = backoff
        self.per_host = per_host
        self.min_interval = min_interval
        self.timeout = timeout
        self.sleep = sleep
        self.stats: Counter[str] = Counter()
        self._lock = threading.Lock()
        self._host_slots: dict[str, threading.BoundedSemaphore] = {}
        self._last_start = 0.0

    @property
    def session(self):
        if self._session is None:
            self._session = requests.Session()
            self._session.headers.update({"User-Agent": USER_AGENT})
        return self._session

    def _slot(self, url: str) -> threading.BoundedSemaphore:
        host = urlsplit(url).netloc
        with self._lock:
            if host not in self._host_slots:
                self._host_slots[host] = threading.BoundedSemaphore(self.per_host)
            return self._host_slots[host]

    def _throttle(self) -> None:
        if self.min_interval <= 0:
            return
        with self._lock:
            wait = self._last_start + self.min_interval - time.monotonic()
            self._last_start = time.monotonic() + max(wait, 0.0)
        if wait > 0:
            self.sleep(wait)

    def _count(self, what: str) -> None:
        with self._lock:
            self.stats[what] += 1

    def get(
        self,
        endpoint: str,
        query: Mapping[str, object],
        url: str,
        params: Mapping[str, object] | None = None,
    ) -> CachedResponse:
        """Return the response for ``url``, cached under ``(endpoint, query)``."""
        hit = self.cache.get(endpoint, query)
        if hit is not None:
            self._count("cached")
            return hit
        if self.offline:
            raise CacheMiss(f"offline and not cached: {endpoint} {dict(query)}")

        delay = self.backoff
        last_error: Exception | None = None
        for attempt in range(1, self.attempts + 1):
            self._throttle()
            with self._slot(url):
                try:
                    resp = self.session.get(
                        url, params=params, headers={"User-Agent": USER_AGENT}, timeout=self.timeout
                    )
                except requests.RequestException as exc:
                    last_error = TransportError(f"{url}: {exc}")
                    resp = None
            if resp is not None:
                status = resp.status_code
                if status in CACHEABLE:
                    self._count("fetched")
                    return self.cache.put(endpoint, query, status, resp.text)
                hint = _retry_after(getattr(resp, "headers", {}))
                if status == 429:
                    last_error = RateLimited(f"{url}: HTTP 429", retry_after=hint)
                elif status >= 500:
                    last_error = TransportError(f"{url}: HTTP {status}")
                else:
                    raise TransportError(f"{url}: HTTP {status}")
                if hint is not None:
                    delay = max(delay, hint)
            if attempt < self.attempts:
                logger.warning("retrying %s in %.1fs after %s", url, delay, last_error)
                self.sleep(delay)
                delay *= 2
        self._count("failed")
        assert last_error is not None
        raise last_error
