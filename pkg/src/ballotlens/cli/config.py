"""Pipeline configuration: a TOML file, environment, then command-line flags."""

from __future__ import annotations

import os
import sys
from dataclasses import dataclass, replace
from pathlib import Path

from ballotlens.errors import ConfigError
from ballotlens.ingest.cache import CACHE_ENV
from ballotlens.ingest.calendar import WEEKS
from ballotlens.ingest.tvnews import DEFAULT_CHANNELS
from ballotlens.ingest.types import Chamber

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib


@dataclass(frozen=True)
class PipelineConfig:
    """Everything one pipeline run needs.

    Relative paths in a config file resolve against that file's directory.
    ``cumulative`` selects running totals (true) or single-week values for
    the group-mean and media traces; the fit-quality trace always reports both.
    """

    results: Path | None = None
    receipts: Path | None = None
    overrides: Path | None = None
    catalog: Path | None = None
    years: tuple[int, ...] = (2016, 2018)
    chambers: tuple[Chamber, ...] = (Chamber.HOUSE, Chamber.SENATE)
    cache_dir: Path = Path("cache")
    out_dir: Path = Path("out")
    channels: tuple[str, ...] = DEFAULT_CHANNELS
    fetch_tv: bool = True
    offline: bool = False
    models: tuple[str, ...] | None = None
    weeks: tuple[int, ...] = tuple(range(WEEKS))
    cumulative: bool = True
    workers: int = 4
    attempts: int = 3
    backoff: float = 1.0
    min_interval: float = 0.0
    seed: int = 20181106
    synthetic_races: int = 400

    def validate(self, need_output: bool = True) -> "PipelineConfig":
        if not self.years or any(y % 2 for y in self.years):
            raise ConfigError(f"years must be even election years, got {list(self.years)}")
        if self.fetch_tv and not self.channels:
            raise ConfigError("channel list is empty but TV mention fetching is enabled")
        if not self.chambers:
            raise ConfigError("at least one chamber is required")
        if any(not 0 <= w < WEEKS for w in self.weeks):
            raise ConfigError(f"weeks must lie in 0..{WEEKS - 1}")
        if self.workers < 1:
            raise ConfigError("workers must be at least 1")
        if need_output:
            try:
                self.out_dir.mkdir(parents=True, exist_ok=True)
            except OSError as exc:
                raise ConfigError(f"cannot create output directory {self.out_dir}: {exc}") from None
            if not os.access(self.out_dir, os.W_OK):
                raise ConfigError(f"output directory {self.out_dir} is not writable")
        return self

    def require(self, *names: str) -> None:
        for name in names:
            path = getattr(self, name)
            if path is None:
                raise ConfigError(f"no {name} file configured")
            if not Path(path).exists():
                raise ConfigError(f"{name} file not found: {path}")


def parse_weeks(text: str) -> tuple[int, ...]:
    """``"0-51"``, ``"3,7,51"`` or a mix such as ``"0-3,51"``."""
    out: set[int] = set()
    try:
        for part in str(text).split(","):
            part = part.strip()
            if not part:
                continue
            if "-" in part:
                lo, hi = (int(p) for p in part.split("-", 1))
                if hi < lo:
                    raise ValueError
                out.update(range(lo, hi + 1))
            else:
                out.add(int(part))
    except ValueError:
        raise ConfigError(f"malformed week range {text!r}") from None
    if not out:
        raise ConfigError("empty week selection")
    return tuple(sorted(out))


def parse_bool(value) -> bool:
    if isinstance(value, bool):
        return value
    v = str(value).strip().casefold()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"expected a boolean, got {value!r}")


def _path(base: Path, value) -> Path | None:
    if value in (None, ""):
        return None
    p = Path(str(value)).expanduser()
    return p if p.is_absolute() else base / p


def load_config(path: str | Path | None) -> PipelineConfig:
    """Read a TOML config; ``None`` yields the defaults rooted at the cwd."""
    if path is None:
        return PipelineConfig()
    path = Path(path)
    try:
        doc = tomllib.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    base = path.resolve().parent
    data = doc.get("data", {})
    pipe = doc.get("pipeline", {})
    fetch = doc.get("fetch", {})
    synth = doc.get("synthetic", {})
    known = {"data", "pipeline", "fetch", "synthetic"}
    unknown = set(doc) - known
    if unknown:
        raise ConfigError(f"{path}: unknown section(s) {sorted(unknown)}")
    try:
        cfg = PipelineConfig(
            results=_path(base, data.get("results")),
            receipts=_path(base, data.get("receipts")),
            overrides=_path(base, data.get("overrides")),
            catalog=_path(base, data.get("catalog")),
            years=tuple(int(y) for y in pipe.get("years", (2016, 2018))),
            chambers=tuple(Chamber.parse(c) for c in pipe.get("chambers", ("House", "Senate"))),
            cache_dir=_path(base, pipe.get("cache", "cache")),
            out_dir=_path(base, pipe.get("out", "out")),
            offline=parse_bool(pipe.get("offline", False)),
            models=tuple(pipe["models"]) if pipe.get("models") else None,
            weeks=parse_weeks(pipe.get("weeks", f"0-{WEEKS - 1}")),
            cumulative=parse_bool(pipe.get("cumulative", True)),
            channels=tuple(fetch.get("channels", DEFAULT_CHANNELS)),
            fetch_tv=parse_bool(fetch.get("tv", True)),
            workers=int(fetch.get("workers", 4)),
            attempts=int(fetch.get("attempts", 3)),
            backoff=float(fetch.get("backoff", 1.0)),
            min_interval=float(fetch.get("min_interval", 0.0)),
            seed=int(synth.get("seed", 20181106)),
            synthetic_races=int(synth.get("races", 400)),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{path}: {exc}") from None
    return cfg


def apply_overrides(cfg: PipelineConfig, *, env=None, **flags) -> PipelineConfig:
    """Layer the cache environment variable, then non-``None`` flags, over ``cfg``."""
    env = os.environ if env is None else env
    changes = {}
    if env.get(CACHE_ENV):
        changes["cache_dir"] = Path(env[CACHE_ENV])
    for key, value in flags.items():
        if value is not None:
            changes[key] = value
    return replace(cfg, **changes)
