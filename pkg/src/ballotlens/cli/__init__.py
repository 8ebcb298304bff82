"""Configuration, stage commands and the synthetic corpus generator."""

from ballotlens.cli.commands import cmd_all, cmd_features, cmd_fetch, cmd_fit, cmd_report
from ballotlens.cli.config import PipelineConfig, apply_overrides, load_config
from ballotlens.cli.synthetic import PLANTED, PlantedEffects, generate

__all__ = [
    "PLANTED",
    "PipelineConfig",
    "PlantedEffects",
    "apply_overrides",
    "cmd_all",
    "cmd_features",
    "cmd_fetch",
    "cmd_fit",
    "cmd_report",
    "generate",
    "load_config",
]
