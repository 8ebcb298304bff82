"""Named model specifications and the row strata they are fitted on."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Literal, Sequence

from ballotlens.errors import EmptyStratum, UnknownModel
from ballotlens.features.assemble import FeatureRow
from ballotlens.ingest.types import Chamber
from ballotlens.regress.design import DesignSpec, build_design
from ballotlens.regress.logit import logit_fit
from ballotlens.regress.ols import ols_fit
from ballotlens.regress.results import Family, FitResult

PageGroup = Literal["mixed", "both", "none"]


def page_groups(rows: Iterable[FeatureRow]) -> dict:
    """Classify each race by page availability of its top two candidates.

    Candidates are ranked by vote share (ties by id). Races with fewer than
    two candidates have no opponent and are left out of the mapping.
    """
    by_race: dict = defaultdict(list)
    for r in rows:
        by_race[r.race].append(r)
    out = {}
    for race, members in by_race.items():
        if len(members) < 2:
            continue
        top = sorted(members, key=lambda r: (-r.vote_share, r.candidate_id))[:2]
        pages = sum(r.has_page for r in top)
        out[race] = ("none", "mixed", "both")[pages]
    return out


@dataclass(frozen=True)
class Stratum:
    chamber: Chamber | None = None
    pages: PageGroup | None = None

    def select(self, rows: Sequence[FeatureRow]) -> list[FeatureRow]:
        rows = [r for r in rows if self.chamber is None or r.race.chamber is self.chamber]
        if self.pages is None:
            return rows
        groups = page_groups(rows)
        return [r for r in rows if groups.get(r.race) == self.pages]

    @property
    def label(self) -> str:
        parts = [self.chamber.value if self.chamber else "all chambers"]
        if self.pages:
            parts.append(f"{self.pages}-page races")
        return ", ".join(parts)


@dataclass(frozen=True)
class ModelRegistryEntry:
    name: str
    family: Family
    stratum: Stratum
    spec: DesignSpec
    response: str
    title: str = ""

    def fit(self, rows: Sequence[FeatureRow]) -> FitResult:
        subset = self.stratum.select(rows)
        if not subset:
            raise EmptyStratum(f"{self.name}: no rows in stratum ({self.stratum.label})")
        design = build_design(subset, self.spec, self.response)
        fitter = ols_fit if self.family is Family.OLS else logit_fit
        return fitter(design).with_name(self.name)


HOUSE = Stratum(Chamber.HOUSE)
SENATE = Stratum(Chamber.SENATE)
HOUSE_MIXED = Stratum(Chamber.HOUSE, "mixed")
HOUSE_BOTH = Stratum(Chamber.HOUSE, "both")


def _ols(name, stratum, terms, title):
    return ModelRegistryEntry(name, Family.OLS, stratum, DesignSpec(terms), "vote_share", title)


def _logit(name, stratum, terms, title):
    return ModelRegistryEntry(name, Family.LOGIT, stratum, DesignSpec(terms), "win_lose", title)


_ENTRIES = [
    _ols("table3.model1", HOUSE, ["view_ratio"], "Vote share on pageview ratio"),
    _ols("table3.model2", HOUSE, ["challenger"], "Vote share on challenger status"),
    _ols("table3.model3", HOUSE, ["view_ratio", "challenger"], "Pageview ratio and challenger status"),
    _ols(
        "table3.model4", HOUSE, ["view_ratio", "challenger", "view_ratio:challenger"],
        "Pageview ratio by challenger status",
    ),
    _ols(
        "table3.model5", HOUSE, ["view_ratio", "challenger", "open_seat", "view_ratio:open_seat"],
        "Pageview ratio by open-seat race",
    ),
    _ols("table4.model1", HOUSE, ["view_ratio"], "Vote share on pageview ratio"),
    _ols("table4.model2", HOUSE, ["receipt_ratio"], "Vote share on viability ratio"),
    _ols("table4.model3", HOUSE, ["view_ratio", "receipt_ratio"], "Pageview and viability ratios"),
    _ols(
        "table4.model4", HOUSE, ["view_ratio", "receipt_ratio", "view_ratio:receipt_ratio"],
        "Pageview ratio by viability ratio",
    ),
    _ols(
        "table4.model5", HOUSE, ["receipt_ratio", "challenger", "receipt_ratio:challenger"],
        "Viability ratio by challenger status",
    ),
    _ols(
        "table4.model6", HOUSE,
        ["view_ratio", "receipt_ratio", "challenger", "receipt_ratio:challenger:view_ratio"],
        "Viability by challenger status by pageview ratio",
    ),
    _ols("table6.model1", SENATE, ["view_ratio"], "Senate vote share on pageview ratio"),
    _ols("table6.model2", SENATE, ["news_ratio"], "Senate vote share on news ratio"),
    _ols("table6.model3", SENATE, ["view_ratio", "news_ratio"], "Pageview and news ratios"),
    _ols(
        "table6.model4", SENATE, ["view_ratio", "news_ratio", "view_ratio:news_ratio"],
        "Pageview ratio by news ratio",
    ),
    _ols("appendixA.house", HOUSE, ["view_ratio"], "House vote share on pageview ratio"),
    _ols("appendixA.senate", SENATE, ["view_ratio"], "Senate vote share on pageview ratio"),
    _logit("appendixC", HOUSE_MIXED, ["view_win"], "Winning odds where one top candidate lacks a page"),
    _logit("appendixD.binary", HOUSE_BOTH, ["view_win"], "Winning odds on pageview outcome, both pages"),
    _logit("appendixD.continuous", HOUSE_BOTH, ["view_ratio"], "Winning odds on pageview ratio, both pages"),
    _ols(
        "appendixF.house", HOUSE,
        [
            "view_ratio", "receipt_ratio", "view_ratio:receipt_ratio", "incumbent",
            "view_ratio:incumbent", "receipt_ratio:incumbent", "view_ratio:receipt_ratio:incumbent",
        ],
        "House pageview ratio, incumbency and viability",
    ),
    _ols(
        "appendixF.senate", SENATE, ["incumbent", "view_ratio", "receipt_ratio", "incumbent:receipt_ratio"],
        "Senate incumbency, pageview and viability ratios",
    ),
    _logit(
        "appendixH", HOUSE, ["challenger", "open_seat", "stronghold", "via_win", "view_win"],
        "Winning odds on categorical covariates",
    ),
]

REGISTRY: dict[str, ModelRegistryEntry] = {e.name: e for e in _ENTRIES}
if len(REGISTRY) != len(_ENTRIES):
    raise RuntimeError("duplicate registry names")


def resolve(names: Iterable[str] | None) -> list[str]:
    """Validate names (``None`` means all) and return them in registry order."""
    if names is None:
        return list(REGISTRY)
    names = list(names)
    unknown = [n for n in names if n not in REGISTRY]
    if unknown:
        raise UnknownModel(f"unknown model(s): {', '.join(unknown)}")
    wanted = set(names)
    return [n for n in REGISTRY if n in wanted]


def run_registry(features: Sequence[FeatureRow], names: Iterable[str] | None = None) -> dict[str, FitResult]:
    """Fit each named model on its stratum of ``features``.

    Output is keyed and ordered by registry order whatever the request order,
    and each fit depends only on its own entry and the rows.
    """
    return {n: REGISTRY[n].fit(features) for n in resolve(names)}
