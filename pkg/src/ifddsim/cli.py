"""Command-line entry point.

    ifddsim run <figure> [--seed N] [--desk-scale] [--out PATH]
                [--threads N] [--config FILE] [--set field=value ...]
    ifddsim validate <config>
    ifddsim sweep <config> [--seed N] [--out PATH] [--threads N]

`run` regenerates one of fig3/fig5/fig6/fig11/fig12 as CSV; `validate`
checks a config file against every static constraint without running;
`sweep` executes the config's own sweep grid.
"""

import argparse
import sys

from .config import ExperimentConfig, load_config, validate_config
from .errors import ConfigurationError
from .figures import FIGURE_NAMES, run_figure, sweep_points, write_csv
from .evaluation import RateRow, sweep as run_sweep


def _parse_overrides(pairs):
    overrides = {}
    for pair in pairs or ():
        if "=" not in pair:
            raise ConfigurationError(
                f"override '{pair}' is not of the form field=value")
        key, value = pair.split("=", 1)
        overrides[key.strip()] = value.strip()
    return overrides


def _load(args) -> ExperimentConfig:
    overrides = _parse_overrides(getattr(args, "set", None))
    config_path = getattr(args, "config", None)
    if config_path:
        return load_config(config_path, overrides)
    if overrides:
        return load_config("\n", overrides)  # defaults + overrides
    return ExperimentConfig()


def _cmd_run(args) -> int:
    cfg = _load(args)
    out = args.out or f"{args.figure}.csv"
    summary = run_figure(args.figure, cfg, out, seed=args.seed,
                         desk_scale=args.desk_scale, threads=args.threads)
    print(f"{summary['figure']}: {summary['rows']} rows "
          f"({summary['flagged']} flagged), {summary['seconds']:.2f} s, "
          f"seed {summary['seed']} -> {summary['path']}")
    return 0 if summary["flagged"] == 0 else 3


def _cmd_validate(args) -> int:
    cfg = load_config(args.config)
    violations = validate_config(cfg)
    if not violations:
        print(f"{args.config}: valid, 0 violations")
        return 0
    print(f"{args.config}: {len(violations)} violation(s)")
    for v in violations:
        print(f"  - {v}")
    return 1


def _cmd_sweep(args) -> int:
    cfg = load_config(args.config)
    seed = args.seed if args.seed is not None else cfg.master_seed
    points = sweep_points(cfg, cfg.sweep_pilot_rates, cfg.sweep_speeds_kmh)
    if args.threads > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=args.threads) as pool:
            rows = run_sweep(points, master_seed=seed, n_seeds=cfg.n_seeds,
                             executor=pool)
    else:
        rows = run_sweep(points, master_seed=seed, n_seeds=cfg.n_seeds)
    columns = RateRow.columns()
    out = args.out or "sweep.csv"
    write_csv(out, "sweep", cfg, seed, columns,
              [tuple(getattr(r, c) for c in columns) for r in rows],
              extra_meta=(("n_points", len(points)),))
    flagged = sum(r.flagged for r in rows)
    print(f"sweep: {len(rows)} rows ({flagged} flagged), seed {seed} -> {out}")
    return 0 if flagged == 0 else 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ifddsim",
        description="TDD vs subcarrier-interlaced FDD link-level simulator",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="regenerate one figure as CSV")
    run_p.add_argument("figure", choices=FIGURE_NAMES)
    run_p.add_argument("--seed", type=int, default=None)
    run_p.add_argument("--desk-scale", action="store_true",
                       help="reduced defaults: 16 antennas, 256/512 subcarriers")
    run_p.add_argument("--out", default=None)
    run_p.add_argument("--threads", type=int, default=1)
    run_p.add_argument("--config", default=None,
                       help="INI config file (defaults otherwise)")
    run_p.add_argument("--set", action="append", metavar="FIELD=VALUE",
                       help="override one config field")
    run_p.set_defaults(func=_cmd_run)

    val_p = sub.add_parser("validate", help="check a config without running")
    val_p.add_argument("config")
    val_p.set_defaults(func=_cmd_validate)

    sweep_p = sub.add_parser("sweep", help="run the config's sweep grid")
    sweep_p.add_argument("config")
    sweep_p.add_argument("--seed", type=int, default=None)
    sweep_p.add_argument("--out", default=None)
    sweep_p.add_argument("--threads", type=int, default=1)
    sweep_p.set_defaults(func=_cmd_sweep)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigurationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
