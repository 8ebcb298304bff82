"""Exception hierarchy shared by every stage of the pipeline.

Each exception carries the process exit code the CLI maps it to:
0 success, 1 validation/model error, 2 configuration error, 3 network error.
"""

from __future__ import annotations


class BallotLensError(Exception):
    exit_code = 1


# -- configuration -----------------------------------------------------------


class ConfigError(BallotLensError):
    exit_code = 2


# -- ingest ------------------------------------------------------------------


class NetworkError(BallotLensError):
    exit_code = 3


class TransportError(NetworkError):
    """Connection failure or 5xx response that survived the retry budget."""


class RateLimited(NetworkError):
    def __init__(self, message: str, retry_after: float | None = None):
        super().__init__(message)
        self.retry_after = retry_after


class CacheMiss(NetworkError):
    """Offline mode was requested and the response is not cached."""


class PageNotFound(BallotLensError):
    def __init__(self, title: str):
        super().__init__(f"no Wikipedia article for title {title!r}")
        self.title = title


class InvalidQuery(BallotLensError, ValueError):
    pass


class EmptyName(InvalidQuery):
    pass


class InvalidWindow(BallotLensError, ValueError):
    pass


class OddYear(BallotLensError, ValueError):
    def __init__(self, year: int):
        super().__init__(f"US general elections are held in even years, got {year}")
        self.year = year


class SchemaError(BallotLensError, ValueError):
    def __init__(self, message: str, path: str | None = None, line: int | None = None):
        where = ""
        if path is not None:
            where = f"{path}:{line}: " if line is not None else f"{path}: "
        super().__init__(where + message)
        self.path = path
        self.line = line


class DuplicateCandidate(SchemaError):
    pass


class AmbiguousLink(BallotLensError):
    def __init__(self, conflicts: dict[str, list[str]]):
        keys = ", ".join(sorted(conflicts))
        super().__init__(f"ambiguous linkage keys need an override: {keys}")
        self.conflicts = conflicts


# -- features ----------------------------------------------------------------


class WindowMismatch(BallotLensError, ValueError):
    pass


class AlreadyCumulative(BallotLensError, ValueError):
    pass


class MissingResults(BallotLensError):
    pass


class MissingIncumbency(BallotLensError):
    pass


# -- regress -----------------------------------------------------------------


class UnknownField(BallotLensError, KeyError):
    def __str__(self) -> str:  # KeyError quotes its message otherwise
        return str(self.args[0])


class EmptyAfterFiltering(BallotLensError):
    pass


class RankDeficient(BallotLensError):
    def __init__(self, labels: list[str]):
        super().__init__(f"design matrix is rank deficient; collinear columns: {labels}")
        self.labels = labels


class Separation(BallotLensError):
    pass


class NotConverged(BallotLensError):
    pass


class DimensionMismatch(BallotLensError, ValueError):
    pass


class InvalidDf(BallotLensError, ValueError):
    pass


class DegenerateResiduals(BallotLensError):
    pass


class TooFewObservations(BallotLensError, ValueError):
    pass


# -- analysis / cli ----------------------------------------------------------


class UnknownModel(BallotLensError, KeyError):
    def __str__(self) -> str:
        return str(self.args[0])


class EmptyStratum(BallotLensError):
    pass


class EmptyGroup(BallotLensError):
    pass


class GroupTooSmall(BallotLensError):
    pass


class MissingCovariate(BallotLensError):
    pass


class MissingFit(BallotLensError):
    pass


class InvariantViolation(BallotLensError):
    pass
