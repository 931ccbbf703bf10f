"""Command line interface.

Subcommands
-----------
sweep     : regularization-weight grid sweep plus stability-aware selection
compare   : algorithm comparison across impulse strength (--axis T) or
            sparsity (--axis K)
run       : the single fixed configuration cell for every algorithm
selftest  : quick invariant suite

Each experiment writes a directory containing ``config.echo`` (the fully
resolved configuration), one CSV per curve family, and for sweeps a
``selection.txt`` with the chosen value and the per-cell table.

Exit codes: 0 success, 2 invalid configuration, 3 selection infeasible
(no grid value stable for every sparsity).
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
from pathlib import Path

from . import harness
from .channel import write_channel_dump
from .config import (
    ExperimentConfig,
    InvalidConfigError,
    load_config,
    parse_algorithm_list,
    parse_float_list,
    parse_int_list,
    write_config,
)
from .metrics import write_curves_csv

EXIT_OK = 0
EXIT_INVALID_CONFIG = 2
EXIT_SELECTION_INFEASIBLE = 3

#: CLI flag name, config field, value parser (None = plain type on argparse).
_CONFIG_FLAGS = [
    ("--n", "n", int),
    ("--k-set", "k_set", parse_int_list),
    ("--snr-db", "snr_db", float),
    ("--phi", "phi", float),
    ("--t-set", "t_set", parse_float_list),
    ("--mu", "mu", float),
    ("--delta-r", "delta_r", float),
    ("--lambda-grid", "lambda_grid", parse_float_list),
    ("--algorithms", "algorithms", parse_algorithm_list),
    ("--iterations", "iterations", int),
    ("--runs", "runs", int),
    ("--root-seed", "root_seed", int),
    ("--tail-fraction", "tail_fraction", float),
    ("--lambda-fixed", "lambda_fixed", float),
    ("--t-fixed", "t_fixed", float),
    ("--k-fixed", "k_fixed", int),
]

_CONFIG_BOOL_FLAGS = [
    ("--exclude-diverged", "exclude_diverged"),
    ("--normalize-channel-per-run", "normalize_channel_per_run"),
    ("--common-random-numbers", "common_random_numbers"),
]


def _add_common_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=Path, help="config file (flat 'key = value' lines)")
    parser.add_argument("--out", type=Path, help="output directory (default results/<command>)")
    parser.add_argument("--workers", type=int, default=1, help="worker threads (no effect on results)")
    parser.add_argument(
        "--engine",
        choices=("fast", "reference"),
        default="fast",
        help="compiled kernel or the plain-Python reference loop",
    )
    parser.add_argument(
        "--paper-scale",
        action="store_true",
        help="use 1000 Monte Carlo runs instead of the config value",
    )
    for flag, field, parser_fn in _CONFIG_FLAGS:
        parser.add_argument(flag, dest=field, type=parser_fn, default=None)
    for flag, field in _CONFIG_BOOL_FLAGS:
        parser.add_argument(flag, dest=field, action=argparse.BooleanOptionalAction, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sparselms",
        description="Sparse channel estimation experiments with LMS-family adaptive filters "
        "under Gaussian-mixture impulsive noise.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sweep = sub.add_parser("sweep", help="regularization-weight sweep and selection")
    _add_common_arguments(p_sweep)

    p_compare = sub.add_parser("compare", help="algorithm comparison along one axis")
    p_compare.add_argument("--axis", choices=("T", "K"), required=True)
    _add_common_arguments(p_compare)

    p_run = sub.add_parser("run", help="single fixed configuration")
    p_run.add_argument(
        "--dump-channels",
        action="store_true",
        help="also write the per-run channel realizations as CSV",
    )
    _add_common_arguments(p_run)

    sub.add_parser("selftest", help="quick invariant suite")
    return parser


def resolve_config(args: argparse.Namespace) -> ExperimentConfig:
    """Defaults -> config file -> per-field CLI flags, then validate."""
    cfg = ExperimentConfig()
    if args.config is not None:
        cfg = load_config(args.config, base=cfg)
    overrides = {}
    for _, field, _ in _CONFIG_FLAGS:
        value = getattr(args, field, None)
        if value is not None:
            overrides[field] = value
    for _, field in _CONFIG_BOOL_FLAGS:
        value = getattr(args, field, None)
        if value is not None:
            overrides[field] = value
    if args.paper_scale:
        overrides["runs"] = 1000
    if overrides:
        cfg = dataclasses.replace(cfg, **overrides)
    return cfg.validate()


def _prepare_out_dir(args: argparse.Namespace, cfg: ExperimentConfig) -> Path:
    out = args.out if args.out is not None else Path("results") / args.command
    out.mkdir(parents=True, exist_ok=True)
    write_config(out / "config.echo", cfg)
    return out


def _selection_table(cells: dict, lambda_grid, k_set) -> str:
    lines = [f"{'lambda':>12}  {'K':>4}  {'steady_state_db':>16}  {'stable':>8}  {'diverged_runs':>14}"]
    for lam in lambda_grid:
        for k in k_set:
            cell = cells[(lam, k)]
            lines.append(
                f"{lam:>12g}  {k:>4d}  {cell.steady_state_db:>16.6g}  "
                f"{'yes' if cell.stable else 'no':>8}  {cell.curve.diverged_runs:>14d}"
            )
    return "\n".join(lines) + "\n"


def cmd_sweep(args: argparse.Namespace) -> int:
    cfg = resolve_config(args)
    out = _prepare_out_dir(args, cfg)
    cells = harness.sweep_cells(cfg, workers=args.workers, engine=args.engine)
    for k in cfg.k_set:
        labels = [f"lambda_{lam:g}" for lam in cfg.lambda_grid]
        curves = [cells[(lam, k)].curve for lam in cfg.lambda_grid]
        path = out / f"sweep_K{k}.csv"
        write_curves_csv(path, labels, curves)
        print(f"wrote {path}")
    table = _selection_table(cells, cfg.lambda_grid, cfg.k_set)
    try:
        selected = harness.select_lambda(cells, cfg.lambda_grid, cfg.k_set)
    except harness.SelectionInfeasibleError as exc:
        (out / "selection.txt").write_text(f"selected_lambda = none\n\n{table}\n{exc}\n")
        print(f"selection infeasible:\n{exc}", file=sys.stderr)
        return EXIT_SELECTION_INFEASIBLE
    (out / "selection.txt").write_text(f"selected_lambda = {selected:g}\n\n{table}")
    print(f"selected lambda = {selected:g}")
    print(f"wrote {out / 'selection.txt'}")
    return EXIT_OK


def cmd_compare(args: argparse.Namespace) -> int:
    cfg = resolve_config(args)
    out = _prepare_out_dir(args, cfg)
    results = harness.compare_algorithms(cfg, args.axis, workers=args.workers, engine=args.engine)
    path = out / f"compare_{args.axis}.csv"
    write_curves_csv(path, [r.label for r in results], [r.curve for r in results])
    print(f"wrote {path}")
    return EXIT_OK


def cmd_run(args: argparse.Namespace) -> int:
    cfg = resolve_config(args)
    out = _prepare_out_dir(args, cfg)
    results = harness.run_configuration(cfg, workers=args.workers, engine=args.engine)
    path = out / "run.csv"
    write_curves_csv(path, [r.label for r in results], [r.curve for r in results])
    print(f"wrote {path}")
    if args.dump_channels:
        for result in results:
            params = harness.fixed_cell_params(cfg, result.algorithm)
            label = None if cfg.common_random_numbers else result.label
            chans = harness.channel_realizations(params, cfg.runs, cfg.root_seed, label)
            dump_path = out / f"channels_{result.label}.csv"
            write_channel_dump(dump_path, chans)
            print(f"wrote {dump_path}")
    return EXIT_OK


def cmd_selftest(args: argparse.Namespace) -> int:
    from .selftest import run_selftest

    return EXIT_OK if run_selftest() else 1


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = {
        "sweep": cmd_sweep,
        "compare": cmd_compare,
        "run": cmd_run,
        "selftest": cmd_selftest,
    }[args.command]
    try:
        return handler(args)
    except InvalidConfigError as exc:
        print(f"invalid configuration: {exc}", file=sys.stderr)
        return EXIT_INVALID_CONFIG
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID_CONFIG


if __name__ == "__main__":
    raise SystemExit(main())
