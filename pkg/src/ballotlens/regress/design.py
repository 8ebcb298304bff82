"""Design matrices with main effects and product interactions."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from ballotlens.errors import EmptyAfterFiltering, UnknownField
from ballotlens.features.assemble import NUMERIC_FIELDS

INTERCEPT = "Intercept"


@dataclass(frozen=True)
class DesignSpec:
    """Ordered model terms; a term with several fields is their product.

    Terms may be given as strings (``"view_ratio:challenger"``) or as
    sequences of field names.
    """

    terms: tuple[tuple[str, ...], ...]
    intercept: bool = True

    def __init__(self, terms: Iterable[str | Sequence[str]], intercept: bool = True):
        parsed = []
        for t in terms:
            fields = tuple(t.split(":")) if isinstance(t, str) else tuple(t)
            if not fields or len(set(fields)) != len(fields):
                raise ValueError(f"malformed term {t!r}")
            parsed.append(fields)
        seen = set()
        for fields in parsed:
            key = frozenset(fields)
            if key in seen:
                raise ValueError(f"duplicate term {':'.join(fields)}")
            seen.add(key)
            for f in fields:
                if f not in NUMERIC_FIELDS:
                    raise UnknownField(f)
        object.__setattr__(self, "terms", tuple(parsed))
        object.__setattr__(self, "intercept", bool(intercept))

    @property
    def labels(self) -> tuple[str, ...]:
        head = (INTERCEPT,) if self.intercept else ()
        return head + tuple(":".join(t) for t in self.terms)

    @property
    def fields(self) -> tuple[str, ...]:
        return tuple(dict.fromkeys(f for t in self.terms for f in t))

    @classmethod
    def from_labels(cls, labels: Sequence[str]) -> "DesignSpec":
        intercept = bool(labels) and labels[0] == INTERCEPT
        return cls(labels[1:] if intercept else labels, intercept=intercept)


@dataclass(frozen=True)
class DesignMatrix:
    X: np.ndarray
    y: np.ndarray
    labels: tuple[str, ...]
    response: str
    row_ids: tuple[str, ...] = ()
    n_excluded: int = 0

    def __post_init__(self):
        if self.X.ndim != 2 or self.X.shape[0] != self.y.shape[0] or self.X.shape[1] != len(self.labels):
            raise ValueError("design shape mismatch")
        if not (np.all(np.isfinite(self.X)) and np.all(np.isfinite(self.y))):
            raise ValueError("design contains non-finite values")

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def p(self) -> int:
        return self.X.shape[1]


def _get(row, name: str):
    if isinstance(row, Mapping):
        return row[name]
    return getattr(row, name)


def build_design(rows: Iterable, spec: DesignSpec, response: str) -> DesignMatrix:
    """Realize ``spec`` over ``rows``, dropping rows with absent values.

    Rows may be :class:`FeatureRow` objects or mappings with the same keys.
    """
    if response not in NUMERIC_FIELDS:
        raise UnknownField(response)
    needed = spec.fields + (response,)
    kept, ids, excluded = [], [], 0
    for r in rows:
        vals = {f: _get(r, f) for f in needed}
        if any(v is None or not math.isfinite(v) for v in vals.values()):
            excluded += 1
            continue
        kept.append(vals)
        ids.append(str(_get(r, "candidate_id")) if _has(r, "candidate_id") else str(len(ids)))
    if not kept:
        raise EmptyAfterFiltering(f"no complete rows for {list(spec.labels)} ~ {response}")

    n = len(kept)
    cols = []
    if spec.intercept:
        cols.append(np.ones(n))
    for term in spec.terms:
        col = np.ones(n)
        for f in term:
            col = col * np.array([float(v[f]) for v in kept])
        cols.append(col)
    X = np.column_stack(cols) if cols else np.empty((n, 0))
    y = np.array([float(v[response]) for v in kept])
    return DesignMatrix(X, y, spec.labels, response, tuple(ids), excluded)


def _has(row, name: str) -> bool:
    return name in row if isinstance(row, Mapping) else hasattr(row, name)
