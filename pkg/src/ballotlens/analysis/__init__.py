"""Named experiments over feature tables: model ladders, traces, grids and tallies."""

from ballotlens.analysis.grid import (
    OpponentType,
    PageviewOutcome,
    ProbabilityGridRow,
    Viability,
    probability_grid,
)
from ballotlens.analysis.registry import (
    REGISTRY,
    ModelRegistryEntry,
    Stratum,
    page_groups,
    resolve,
    run_registry,
)
from ballotlens.analysis.report import ReportInputs, build_report
from ballotlens.analysis.tally import TALLY_COLUMNS, Histogram, distribution_histogram, outcome_tally
from ballotlens.analysis.targets import compare_to_targets, load_reference_targets
from ballotlens.analysis.timeseries import (
    Group,
    GroupSlope,
    WeeklyFeatures,
    group_average_timeseries,
    group_slopes,
    rsq_timeseries,
)

__all__ = [
    "REGISTRY",
    "TALLY_COLUMNS",
    "Group",
    "GroupSlope",
    "Histogram",
    "ModelRegistryEntry",
    "OpponentType",
    "PageviewOutcome",
    "ProbabilityGridRow",
    "ReportInputs",
    "Stratum",
    "Viability",
    "WeeklyFeatures",
    "build_report",
    "compare_to_targets",
    "distribution_histogram",
    "group_average_timeseries",
    "group_slopes",
    "load_reference_targets",
    "outcome_tally",
    "page_groups",
    "probability_grid",
    "resolve",
    "rsq_timeseries",
    "run_registry",
]
