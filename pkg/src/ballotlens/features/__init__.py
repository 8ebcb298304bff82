"""Weekly series, race-relative ratios, binary encodings, and feature rows."""

from ballotlens.features.assemble import (
    FEATURE_FIELDS,
    FINAL,
    NUMERIC_FIELDS,
    FeatureRow,
    RawDataset,
    assemble_features,
    flagged_races,
)
from ballotlens.features.ratios import RaceRatios, binary_outcome, race_ratios
from ballotlens.features.series import WeeklySeries, to_cumulative, weekly_average

__all__ = [
    "FEATURE_FIELDS",
    "FINAL",
    "FeatureRow",
    "NUMERIC_FIELDS",
    "RaceRatios",
    "RawDataset",
    "WeeklySeries",
    "assemble_features",
    "binary_outcome",
    "flagged_races",
    "race_ratios",
    "to_cumulative",
    "weekly_average",
]
