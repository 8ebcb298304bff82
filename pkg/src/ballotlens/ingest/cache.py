"""Content-addressed on-disk store for raw HTTP responses.

Entries are keyed by the SHA-256 of ``(endpoint, normalized query)`` and
written with write-then-rename, so concurrent writers never expose a torn
file. Bodies are gzip-compressed with a zeroed mtime to keep bytes stable.
"""

from __future__ import annotations

import gzip
import hashlib
import json
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping

CACHE_ENV = "BALLOTLENS_CACHE"


@dataclass(frozen=True)
class CachedResponse:
    status: int
    body: str

    def json(self):
        return json.loads(self.body)


def default_cache_dir() -> Path:
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "ballotlens"


class ResponseCache:
    def __init__(self, root: str | os.PathLike | None = None):
        self.root = Path(root) if root is not None else default_cache_dir()

    @staticmethod
    def key(endpoint: str, query: Mapping[str, object]) -> str:
        canonical = json.dumps(
            {"endpoint": endpoint, "query": dict(query)},
            sort_keys=True,
            separators=(",", ":"),
            default=str,
        )
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()

    def path_for(self, key: str) -> Path:
        return self.root / key[:2] / f"{key}.json.gz"

    def get(self, endpoint: str, query: Mapping[str, object]) -> CachedResponse | None:
        path = self.path_for(self.key(endpoint, query))
        try:
            raw = path.read_bytes()
        except FileNotFoundError:
            return None
        entry = json.loads(gzip.decompress(raw))
        return CachedResponse(status=entry["status"], body=entry["body"])

    def put(self, endpoint: str, query: Mapping[str, object], status: int, body: str) -> CachedResponse:
        key = self.key(endpoint, query)
        path = self.path_for(key)
        path.parent.mkdir(parents=True, exist_ok=True)
        entry = {"endpoint": endpoint, "query": dict(query), "status": status, "body": body}
        payload = gzip.compress(
            json.dumps(entry, sort_keys=True, default=str).encode("utf-8"), compresslevel=6, mtime=0
        )
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-", suffix=".part")
        try:
            with os.fdopen(fd, "wb") as fh:
                fh.write(payload)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
        return CachedResponse(status=status, body=body)

    def __contains__(self, item: tuple[str, Mapping[str, object]]) -> bool:
        endpoint, query = item
        return self.path_for(self.key(endpoint, query)).exists()
