from __future__ import annotations

from datetime import date, timedelta

from ballotlens.errors import OddYear, TransportError
from ballotlens.ingest.types import DateWindow

WEEKS = 52
WINDOW_DAYS = WEEKS * 7


def election_day(year: int) -> date:
    """Return the US general election date: the first Tuesday after November 1."""
    if year % 2:
        raise OddYear(year)
    nov2 = date(year, 11, 2)
    # Tuesday is weekday 1
    return nov2 + timedelta(days=(1 - nov2.weekday()) % 7)


def collection_window(year: int) -> DateWindow:
    """The 364 days (52 complete weeks) ending on election day."""
    eday = election_day(year)
    return DateWindow(eday - timedelta(days=WINDOW_DAYS - 1), eday)


def parse_stamp(stamp: str) -> date:
    """Date of a ``YYYYMMDD...`` API timestamp (much faster than strptime)."""
    try:
        return date(int(stamp[:4]), int(stamp[4:6]), int(stamp[6:8]))
    except ValueError as exc:
        raise TransportError(f"malformed date stamp {stamp!r}") from exc
