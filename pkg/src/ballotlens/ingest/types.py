"""Record types produced by the ingest stage."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from datetime import date, timedelta

from ballotlens.errors import InvalidWindow


class Chamber(str, enum.Enum):
    SENATE = "Senate"
    HOUSE = "House"

    @classmethod
    def parse(cls, value: str) -> "Chamber":
        v = value.strip().lower()
        if v in ("senate", "us senate", "s"):
            return cls.SENATE
        if v in ("house", "us house", "h", "house of representatives"):
            return cls.HOUSE
        raise ValueError(f"unknown chamber {value!r}")


class Metric(str, enum.Enum):
    PAGEVIEWS = "Pageviews"
    TV_MENTIONS = "TvMentions"


@dataclass(frozen=True, order=True)
class RaceKey:
    year: int
    chamber: Chamber
    state: str
    district: int = 0

    def __post_init__(self):
        if self.year % 2:
            raise ValueError(f"race year must be even, got {self.year}")
        if len(self.state) != 2 or not self.state.isalpha() or not self.state.isupper():
            raise ValueError(f"state must be a two-letter postal code, got {self.state!r}")
        if self.chamber is Chamber.SENATE and self.district != 0:
            raise ValueError("Senate races carry district 0")
        if self.district < 0:
            raise ValueError("district must be non-negative")

    @property
    def label(self) -> str:
        if self.chamber is Chamber.SENATE:
            return f"{self.year}-{self.state}-SEN"
        return f"{self.year}-{self.state}-{self.district:02d}"


@dataclass(frozen=True)
class CandidateRecord:
    candidate_id: str
    full_name: str
    party: str
    race: RaceKey
    # None until derived from a prior cycle or supplied by an override.
    incumbent: bool | None
    wikipedia_title: str | None = None
    fec_id: str | None = None
    stronghold: int | None = None


@dataclass(frozen=True)
class DateWindow:
    """Inclusive calendar date range."""

    start: date
    end: date

    def __post_init__(self):
        if self.end < self.start:
            raise InvalidWindow(f"window end {self.end} precedes start {self.start}")

    def __len__(self) -> int:
        return (self.end - self.start).days + 1

    def days(self) -> list[date]:
        return [self.start + timedelta(days=i) for i in range(len(self))]


@dataclass(frozen=True)
class DailySeries:
    candidate_id: str
    metric: Metric
    start_date: date
    counts: tuple[int, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if any(c < 0 for c in self.counts):
            raise ValueError("daily counts must be non-negative")

    @property
    def window(self) -> DateWindow:
        return DateWindow(self.start_date, self.start_date + timedelta(days=len(self.counts) - 1))

    @property
    def total(self) -> int:
        return sum(self.counts)


@dataclass(frozen=True)
class ResultsRow:
    candidate_id: str
    race: RaceKey
    votes: int
    vote_share: float
    win_lose: bool


@dataclass(frozen=True)
class ReceiptsRow:
    candidate_id: str
    receipts_usd: float
