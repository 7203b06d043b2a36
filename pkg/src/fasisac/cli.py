"""Command-line entry point.

Subcommands take a TOML config plus optional overrides; progress goes to
stderr and a one-line machine-readable summary to stdout. Worker count is
controlled by the FASISAC_WORKERS environment variable (default: all CPUs).
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace

from . import __version__
from .experiments import (
    ConfigError,
    RESULT_FIELDS,
    load_config,
    read_result_rows,
    run_distortion_sweep,
    run_dof_report,
    run_frontier,
    run_rate_sweep,
    run_validation,
    write_dof_csv,
    write_result_csv,
)

_SWEEPS = {
    "rate-sweep": run_rate_sweep,
    "distortion-sweep": run_distortion_sweep,
    "frontier": run_frontier,
    "validate": run_validation,
}


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", required=True, help="TOML sweep description")
    sub.add_argument("--seed", type=int, default=None, help="override master_seed")
    sub.add_argument("--trials", type=int, default=None, help="override trial count")
    sub.add_argument("--out", default=None, help="override output CSV path")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fasisac",
        description="Capacity-distortion sweeps for bottlenecked ISAC with "
        "a port-selection fluid antenna receiver",
    )
    parser.add_argument("--version", action="version", version=__version__)
    subs = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("rate-sweep", "rate vs representation budget per scenario"),
        ("distortion-sweep", "sensing distortion vs representation budget"),
        ("frontier", "rate-distortion trade-off over the selection weight grid"),
        ("validate", "Monte Carlo vs quadrature on independent-port antennas"),
        ("dof", "numerical rank and fitted diversity per geometry"),
    ):
        _add_common(subs.add_parser(name, help=help_text))
    layout = subs.add_parser(
        "layout", help="re-emit a result CSV as gnuplot-indexable blocks"
    )
    layout.add_argument("--csv", required=True, help="result CSV to convert")
    layout.add_argument("--out", default=None, help="write here instead of stdout")
    return parser


def _resolved_config(args):
    config = load_config(args.config)
    if args.seed is not None:
        config = replace(config, master_seed=args.seed)
    if args.trials is not None:
        config = replace(config, trials=args.trials)
    if args.out is not None:
        config = replace(config, output_path=args.out)
    if config.output_path is None:
        raise ConfigError("output_path: set it in the config or pass --out")
    return config


def _run_layout(args) -> int:
    rows = read_result_rows(args.csv)
    blocks: dict[tuple[str, str], list] = {}
    for row in rows:
        blocks.setdefault((row.experiment, row.scenario), []).append(row)
    out = open(args.out, "w", encoding="utf-8", newline="\n") if args.out else sys.stdout
    try:
        columns = [f for f in RESULT_FIELDS if f not in ("experiment", "scenario")]
        for i, ((experiment, scenario), group) in enumerate(blocks.items()):
            if i:
                out.write("\n\n")  # double blank line: next gnuplot index
            out.write(f"# experiment={experiment} scenario={scenario}\n")
            out.write("# " + " ".join(columns) + "\n")
            for row in group:
                out.write(
                    " ".join(
                        "nan" if getattr(row, c) is None else repr(getattr(row, c))
                        if isinstance(getattr(row, c), float)
                        else str(getattr(row, c))
                        for c in columns
                    )
                    + "\n"
                )
    finally:
        if args.out:
            out.close()
    return 0


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(
        stream=sys.stderr, level=logging.INFO, format="%(name)s: %(message)s"
    )
    args = build_parser().parse_args(argv)
    try:
        if args.command == "layout":
            return _run_layout(args)
        config = _resolved_config(args)
        if args.command == "dof":
            reports = run_dof_report(config)
            write_dof_csv(config.output_path, reports, config.master_seed)
            print(f"wrote {config.output_path} rows={len(reports)}")
        else:
            rows = _SWEEPS[args.command](config)
            write_result_csv(config.output_path, rows)
            print(f"wrote {config.output_path} rows={len(rows)}")
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
