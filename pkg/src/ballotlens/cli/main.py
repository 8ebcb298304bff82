"""``ballotlens`` command-line entry point.

Exit codes: 0 success, 1 validation or model error, 2 configuration error,
3 network error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from ballotlens.cli import commands
from ballotlens.cli.config import apply_overrides, load_config, parse_bool, parse_weeks
from ballotlens.cli.synthetic import generate
from ballotlens.errors import BallotLensError, ConfigError

logger = logging.getLogger("ballotlens")


def _flag_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    # SUPPRESS keeps a flag given before the subcommand from being reset after it
    d = argparse.SUPPRESS
    p.add_argument("--config", type=Path, default=d, help="pipeline TOML file")
    p.add_argument("--offline", action="store_true", default=d, help="serve every request from the cache")
    p.add_argument("--out", type=Path, default=d, help="output directory")
    p.add_argument("--cache", type=Path, default=d, help="response cache directory")
    p.add_argument("--models", default=d, help="comma-separated registry model names")
    p.add_argument("--weeks", default=d, help="week selection such as 0-51 or 3,7,51")
    p.add_argument("--cumulative", default=d, help="true or false")
    p.add_argument("-v", "--verbose", action="store_true", default=d)
    return p


def build_parser() -> argparse.ArgumentParser:
    flags = _flag_parser()
    parser = argparse.ArgumentParser(prog="ballotlens", description=__doc__.splitlines()[0], parents=[flags])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("fetch", parents=[flags], help="populate the response cache")
    sub.add_parser("features", parents=[flags], help="build the feature tables")
    sub.add_parser("fit", parents=[flags], help="fit the registry models")
    sub.add_parser("report", parents=[flags], help="write figures, grid, tallies and the report")
    sub.add_parser("all", parents=[flags], help="fetch, features, fit and report")
    synth = sub.add_parser("synth", parents=[flags], help="write a seeded synthetic corpus and config")
    synth.add_argument("directory", type=Path)
    synth.add_argument("--seed", type=int, default=None)
    synth.add_argument("--races", type=int, default=None)
    return parser


def config_from_args(args: argparse.Namespace):
    cfg = load_config(getattr(args, "config", None))
    models = getattr(args, "models", None)
    weeks = getattr(args, "weeks", None)
    cumulative = getattr(args, "cumulative", None)
    return apply_overrides(
        cfg,
        offline=True if getattr(args, "offline", False) else None,
        out_dir=getattr(args, "out", None),
        cache_dir=getattr(args, "cache", None),
        models=tuple(m.strip() for m in models.split(",") if m.strip()) if models is not None else None,
        weeks=parse_weeks(weeks) if weeks is not None else None,
        cumulative=parse_bool(cumulative) if cumulative is not None else None,
    )


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if getattr(args, "verbose", False) else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        cfg = config_from_args(args)
        if args.command == "synth":
            seed = args.seed if args.seed is not None else cfg.seed
            races = args.races if args.races is not None else cfg.synthetic_races
            try:
                corpus = generate(args.directory, seed=seed, races=races)
            except ValueError as exc:
                raise ConfigError(str(exc)) from None
            print(f"wrote {corpus.n_races} races ({corpus.n_candidates} candidates); config at {corpus.config}")
            return 0
        run = {
            "fetch": commands.cmd_fetch,
            "features": commands.cmd_features,
            "fit": commands.cmd_fit,
            "report": commands.cmd_report,
            "all": commands.cmd_all,
        }[args.command]
        run(cfg)
    except BallotLensError as exc:
        print(f"ballotlens {args.command}: {exc}", file=sys.stderr)
        return exc.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
