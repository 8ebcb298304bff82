"""Seeded synthetic corpus with a planted vote-share model.

The corpus looks like the real inputs: a results CSV, a receipts CSV, an
overrides CSV and a response cache holding pageview and TV-mention payloads
in the APIs' own layouts, so the offline pipeline runs on it unchanged.

Vote shares follow

    y = a + b*v + c*ch + d*v*ch + lam + e

with ``v`` the realized final pageview ratio, ``ch`` the challenger flag,
``lam`` a race-level swing that is antisymmetric between the two candidates
and ``e`` a small idiosyncratic term. Pageview shares are drawn exchangeably
across the two slots of a race, so ``v`` is independent of ``ch`` and a
regression of ``y`` on ``v`` alone has slope ``b + d*pi`` where ``pi`` is the
challenger fraction.
"""

from __future__ import annotations

import csv
import shutil
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from ballotlens.ingest import pageviews, tvnews
from ballotlens.ingest.cache import ResponseCache
from ballotlens.ingest.calendar import WINDOW_DAYS, collection_window
from ballotlens.ingest.loaders import candidate_id_for
from ballotlens.ingest.names import first_last
from ballotlens.ingest.types import Chamber, RaceKey

YEARS = (2016, 2018)
STATES = (
    "AL", "AK", "AZ", "AR", "CA", "CO", "CT", "DE", "FL", "GA", "HI", "ID", "IL", "IN", "IA", "KS", "KY",
    "LA", "ME", "MD", "MA", "MI", "MN", "MS", "MO", "MT", "NE", "NV", "NH", "NJ", "NM", "NY", "NC", "ND",
    "OH", "OK", "OR", "PA", "RI", "SC", "SD", "TN", "TX", "UT", "VT", "VA", "WA", "WV", "WI", "WY",
)
FIRST_NAMES = (
    "Aaron", "Abigail", "Adrian", "Alice", "Andrea", "Arthur", "Beatrice", "Benjamin", "Brenda", "Caleb",
    "Camila", "Carlos", "Cecilia", "Charles", "Claire", "Daniel", "Deborah", "Dennis", "Diana", "Edgar",
    "Eleanor", "Elliot", "Emily", "Felix", "Fiona", "Frances", "Gabriel", "Gloria", "Gordon", "Hannah",
    "Harold", "Helen", "Isaac", "Irene", "Ivan", "Jacob", "Janet", "Joaquin", "Julia", "Kevin",
    "Laura", "Leonard", "Lillian", "Marcus", "Maria", "Martin", "Nadia", "Nathan", "Olivia", "Oscar",
    "Patricia", "Peter", "Quentin", "Rachel", "Raymond", "Rosa", "Samuel", "Sandra", "Theodore", "Valerie",
)
LAST_NAMES = (
    "Abbott", "Acosta", "Alvarez", "Barker", "Bennett", "Bishop", "Blackwell", "Bradford", "Caldwell", "Carver",
    "Castillo", "Chandler", "Collier", "Dalton", "Delgado", "Donovan", "Dorsey", "Ellison", "Espinoza", "Farrell",
    "Fleming", "Fowler", "Gallagher", "Garrison", "Gentry", "Goodwin", "Hale", "Harmon", "Hendricks", "Holloway",
    "Ingram", "Jennings", "Kendall", "Kirby", "Lambert", "Langley", "Lowery", "Maddox", "Manning", "Mercer",
    "Merritt", "Monroe", "Navarro", "Norris", "Oakley", "Ortega", "Pacheco", "Prescott", "Quinlan", "Ramsey",
    "Rhodes", "Salazar", "Sheridan", "Stanton", "Sutton", "Talbot", "Thornton", "Underwood", "Vance", "Wheeler",
)
# channels of the synthetic mention payloads; the generated config lists them
SYNTHETIC_CHANNELS = ("CNN", "FOXNEWS")


@dataclass(frozen=True)
class PlantedEffects:
    a: float = 0.42
    b: float = 0.1875
    c: float = -0.2
    d: float = 0.15
    open_seat_rate: float = 0.1
    swing_sd: float = 0.07
    swing_clip: float = 0.2
    noise_sd: float = 0.002
    noise_clip: float = 0.005

    @property
    def challenger_fraction(self) -> float:
        """Expected share of candidates who are challengers (two per race)."""
        return (1.0 + self.open_seat_rate) / 2.0

    @property
    def marginal_slope(self) -> float:
        """Slope of vote share on pageview ratio with challenger status left out."""
        return self.b + self.d * self.challenger_fraction

    @property
    def marginal_intercept(self) -> float:
        return self.a + self.c * self.challenger_fraction


PLANTED = PlantedEffects()


@dataclass
class _Candidate:
    name: str
    race: RaceKey
    incumbent: bool
    title: str | None
    party: str
    cid: str = ""
    target_share: float = 0.5
    vote_share: float = 0.0
    views: np.ndarray | None = None
    stronghold: int | None = None
    swing: float = 0.0
    votes: int = 0
    total_votes: int = 0


@dataclass(frozen=True)
class SyntheticCorpus:
    root: Path
    config: Path
    n_races: int
    n_candidates: int
    planted: PlantedEffects


def _seats(n_house: int, n_senate: int, year_index: int) -> list[RaceKey]:
    house = [(STATES[i % len(STATES)], i // len(STATES) + 1) for i in range(n_house)]
    senate_states = STATES[year_index * n_senate : (year_index + 1) * n_senate]
    year = YEARS[year_index]
    return [RaceKey(year, Chamber.HOUSE, s, d) for s, d in house] + [
        RaceKey(year, Chamber.SENATE, s) for s in senate_states
    ]


def _profile() -> np.ndarray:
    t = np.arange(WINDOW_DAYS) / (WINDOW_DAYS - 1)
    p = 0.5 + 1.5 * t**2
    return p / p.mean()


def generate(
    root: str | Path,
    *,
    seed: int = 20181106,
    races: int = 400,
    planted: PlantedEffects = PLANTED,
) -> SyntheticCorpus:
    """Write a synthetic corpus and a ready-to-run config under ``root``.

    ``races`` is split evenly across the two cycles, a tenth of them Senate.
    Senate seats never repeat between cycles; House seats do, and 90% of
    first-cycle House winners run again as incumbents.
    """
    if races < 20 or races % 20:
        raise ValueError("races must be a positive multiple of 20")
    root = Path(root)
    root.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)
    names = iter(
        f"{FIRST_NAMES[k // len(LAST_NAMES)]} {LAST_NAMES[k % len(LAST_NAMES)]}"
        for k in rng.permutation(len(FIRST_NAMES) * len(LAST_NAMES))
    )
    n_senate = races // 20
    n_house = races // 2 - n_senate
    profile = _profile()
    p = planted

    def new_candidate(race, incumbent):
        name = next(names)
        title = "_".join(name.split())
        if rng.random() < 0.2:
            title += "_(politician)"
        return _Candidate(name, race, incumbent, title, str(rng.choice(["DEM", "REP"])))

    everyone: list[_Candidate] = []
    prior_winner: dict[tuple, _Candidate] = {}
    for yi, year in enumerate(YEARS):
        for race in _seats(n_house, n_senate, yi):
            seat = (race.chamber, race.state, race.district)
            rerun = race.chamber is Chamber.HOUSE and seat in prior_winner and rng.random() < 0.9
            if rerun:
                old = prior_winner[seat]
                pair = [
                    _Candidate(old.name, race, True, old.title or "_".join(old.name.split()), old.party),
                    new_candidate(race, False),
                ]
            elif (race.chamber is Chamber.HOUSE and seat in prior_winner) or rng.random() < p.open_seat_rate:
                pair = [new_candidate(race, False), new_candidate(race, False)]
            else:
                pair = [new_candidate(race, True), new_candidate(race, False)]

            u = rng.random()
            if u < 0.03:
                for c in pair:
                    c.title = None
            elif u < 0.28:
                pair[int(rng.integers(2))].title = None

            s = rng.beta(0.8, 0.8)
            pair[0].target_share, pair[1].target_share = s, 1.0 - s
            scale = rng.lognormal(np.log(800.0), 1.0)
            paged = [c for c in pair if c.title]
            weight = sum(c.target_share for c in paged)
            for c in paged:
                c.views = rng.poisson(scale * c.target_share / weight * profile)
            total = sum(int(c.views.sum()) for c in paged)
            for c in pair:
                if not paged or total == 0:
                    c.target_share = 0.5
                else:
                    c.target_share = int(c.views.sum()) / total if c.views is not None else 0.0

            swing = float(np.clip(rng.normal(0.0, p.swing_sd), -p.swing_clip, p.swing_clip))
            for c, sign in zip(pair, (1.0, -1.0)):
                v = c.target_share
                ch = 0.0 if c.incumbent else 1.0
                e = float(np.clip(rng.normal(0.0, p.noise_sd), -p.noise_clip, p.noise_clip))
                c.swing = sign * swing
                c.vote_share = p.a + p.b * v + p.c * ch + p.d * v * ch + c.swing + e
                c.stronghold = int(c.swing + rng.normal(0.0, 0.04) > 0.03)
                if rng.random() < 0.03:
                    c.stronghold = None
                c.cid = candidate_id_for(race, c.name)
            total_votes = int(rng.integers(150_000, 400_000))
            votes = [int(round(c.vote_share * total_votes)) for c in pair]
            if votes[0] == votes[1]:
                votes[0] += 1
            for c, n in zip(pair, votes):
                c.votes, c.total_votes = n, total_votes
            winner = pair[int(np.argmax(votes))]
            if race.chamber is Chamber.HOUSE:
                prior_winner[seat] = winner
            everyone.extend(pair)

    _write_results(root / "results.csv", everyone)
    _write_receipts(root / "receipts.csv", everyone, rng)
    _write_overrides(root / "overrides.csv", everyone)
    _write_cache(root / "cache", everyone, rng, profile)
    config = root / "config.toml"
    template = resources.files("ballotlens.cli").joinpath("synthetic.toml").read_text(encoding="utf-8")
    config.write_text(template.format(seed=seed, races=races), encoding="utf-8")
    return SyntheticCorpus(root, config, races, len(everyone), planted)


def _write_results(path: Path, cands: list[_Candidate]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(("year", "chamber", "state", "district", "candidate", "party", "votes", "totalvotes"))
        for c in cands:
            r = c.race
            w.writerow((r.year, r.chamber.value, r.state, r.district, c.name, c.party, c.votes, c.total_votes))


def _write_receipts(path: Path, cands: list[_Candidate], rng) -> None:
    rows = []
    for first, second in zip(cands[::2], cands[1::2]):
        share = float(np.clip(first.target_share + rng.normal(0.0, 0.2), 0.02, 0.98))
        total = rng.lognormal(np.log(2e6), 0.8)
        for c, s in ((first, share), (second, 1.0 - share)):
            # a few candidates never filed
            if rng.random() >= 0.05:
                rows.append((c.cid, f"{s * total:.2f}"))
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(("candidate_id", "receipts_usd"))
        w.writerows(sorted(rows))


def _write_overrides(path: Path, cands: list[_Candidate]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(("candidate_id", "wikipedia_title", "fec_id", "incumbent", "stronghold"))
        for c in sorted(cands, key=lambda c: c.cid):
            # House incumbency in the second cycle is derived from the first
            derived = c.race.chamber is Chamber.HOUSE and c.race.year != YEARS[0]
            w.writerow((
                c.cid,
                c.title or "-",
                "",
                "" if derived else int(c.incumbent),
                "" if c.stronghold is None else c.stronghold,
            ))


def _write_cache(path: Path, cands: list[_Candidate], rng, profile: np.ndarray) -> None:
    if path.exists():
        shutil.rmtree(path)
    cache = ResponseCache(path)
    for c in cands:
        window = collection_window(c.race.year)
        if c.title:
            query, _ = pageviews.request_for(c.title, window)
            cache.put(pageviews.ENDPOINT, query, 200, pageviews.render_body(c.title, window, c.views))
        base = 3.0 if c.race.chamber is Chamber.SENATE else 0.4
        rate = base * (0.3 + 1.4 * c.target_share) / len(SYNTHETIC_CHANNELS)
        name = first_last(c.name)
        for channel in SYNTHETIC_CHANNELS:
            query, _, _ = tvnews.request_for(name, channel, window)
            counts = rng.poisson(rate * profile)
            cache.put(tvnews.ENDPOINT, query, 200, tvnews.render_body(channel, window, counts))
