"""Command-line front end: ``dot11ah capacity|simulate|reproduce|validate-config``."""

from __future__ import annotations

import argparse
import logging
import sys
from fractions import Fraction

from .capacity import capacity_sweep
from .config import SCENARIOS, RunManifest, config_snapshot, load_config, scenario
from .core import MCS_TABLE, ConfigError, SignallingMode, TrafficPattern
from .reproduce import (
    CAPACITY_COLUMNS,
    RUN_COLUMNS,
    aggregate,
    capacity_rows,
    default_station_count,
    reproduce,
    run_row,
    run_seeds,
    write_table,
)

EXIT_CONFIG = 2
EXIT_RUNTIME = 3

log = logging.getLogger("dot11ah")


def _modes(args, cfg) -> list[SignallingMode]:
    if not args.mode:
        return [cfg.mode]
    if "both" in args.mode:
        return list(SignallingMode)
    return [SignallingMode.parse(m) for m in args.mode]


def _patterns(args, cfg) -> list[TrafficPattern]:
    if args.alpha_dl is not None or args.alpha_ul is not None:
        if args.scenario:
            raise ConfigError("give either --scenario or --alpha-dl/--alpha-ul, not both")
        dl = Fraction(args.alpha_dl) if args.alpha_dl is not None else cfg.traffic.alpha_dl
        ul = Fraction(args.alpha_ul) if args.alpha_ul is not None else cfg.traffic.alpha_ul
        return [TrafficPattern(dl, ul)]
    if args.scenario:
        if "all" in args.scenario:
            return [s.pattern for s in SCENARIOS.values()]
        return [scenario(s).pattern for s in args.scenario]
    return [cfg.traffic]


def _rates(args, cfg) -> list:
    if args.rate:
        return [Fraction(r) for r in args.rate]
    if args.mcs:
        if "all" in args.mcs:
            return list(MCS_TABLE)
        by_index = {str(e.index): e for e in MCS_TABLE}
        unknown = [i for i in args.mcs if i not in by_index]
        if unknown:
            raise ConfigError(f"unknown MCS index: {', '.join(unknown)}")
        return [by_index[i] for i in args.mcs]
    return [cfg.data_rate]


def cmd_capacity(args) -> int:
    cfg = load_config(args.config)
    modes, patterns, rates = _modes(args, cfg), _patterns(args, cfg), _rates(args, cfg)
    rows = capacity_rows(capacity_sweep(modes, patterns, rates, cfg))
    manifest = RunManifest("capacity", config_snapshot(cfg),
                           extra={"modes": [m.value for m in modes],
                                  "patterns": [[str(p.alpha_dl), str(p.alpha_ul)] for p in patterns],
                                  "rates": [str(getattr(r, "data_rate", r)) for r in rates]})
    write_table(rows, CAPACITY_COLUMNS, args.out, manifest.digest, args.json)
    return 0


def cmd_simulate(args) -> int:
    cfg = load_config(args.config)
    modes, patterns, rates = _modes(args, cfg), _patterns(args, cfg), _rates(args, cfg)
    if len(modes) * len(patterns) * len(rates) != 1:
        raise ConfigError("simulate takes a single mode, traffic pattern and rate")
    rate = rates[0]
    cfg = cfg.with_mode(modes[0]).with_traffic(patterns[0].alpha_dl, patterns[0].alpha_ul) \
        .with_rate(getattr(rate, "data_rate", rate))
    n_sta = args.n_sta if args.n_sta is not None else default_station_count(cfg)
    seeds = args.seeds if args.seeds else list(range(args.n_seeds))
    log.info("simulating %s, %d stations, %d seed(s)", cfg.mode.value, n_sta, len(seeds))
    runs = run_seeds(cfg, n_sta, seeds, n_dtim=args.n_dtim, jobs=args.jobs)
    manifest = RunManifest("simulate", config_snapshot(cfg), seeds=list(seeds),
                           extra={"n_sta": n_sta, "n_dtim": args.n_dtim})
    rows = [run_row(m) for m in runs]
    write_table(rows, RUN_COLUMNS, args.out, manifest.digest, args.json)
    if args.aggregate_out:
        stats = aggregate(rows, RUN_COLUMNS[1:])
        cols = ["runs"] + [k for k in stats if k != "runs"]
        write_table([stats], cols, args.aggregate_out, manifest.digest)
    return 0


def cmd_reproduce(args) -> int:
    cfg = load_config(args.config)
    seeds = args.seeds if args.seeds else list(range(args.n_seeds))
    paths = reproduce(args.figures, cfg, args.out_dir, seeds, n_dtim=args.n_dtim,
                      jobs=args.jobs, write_json=args.json)
    for p in paths:
        print(p)
    return 0


def cmd_validate(args) -> int:
    cfg = load_config(args.config)
    for key, value in config_snapshot(cfg).items():
        print(f"{key} = {value}")
    return 0


def _add_point_args(p: argparse.ArgumentParser, multi: bool) -> None:
    nargs = "+" if multi else None
    p.add_argument("--config", help="key-value config file (default: paper-defaults)")
    p.add_argument("--mode", nargs=nargs, action="store" if multi else "append",
                   help="tim-offset, non-tim-offset" + (" or both" if multi else ""))
    p.add_argument("--scenario", nargs=nargs, action="store" if multi else "append",
                   help="traffic preset A, B or C" + (" (or all)" if multi else ""))
    p.add_argument("--alpha-dl", help="share of stations receiving a packet per period")
    p.add_argument("--alpha-ul", help="share of stations sending a packet per period")
    p.add_argument("--mcs", nargs=nargs, action="store" if multi else "append",
                   help="MCS table row(s)" + (" or all" if multi else ""))
    p.add_argument("--rate", nargs=nargs, action="store" if multi else "append",
                   help="explicit PHY rate(s) in bit/s")
    p.add_argument("--out", default="-", help="CSV output path (default stdout)")
    p.add_argument("--json", help="also write a JSON mirror here")


def _seeds_args(p: argparse.ArgumentParser, default_n: int) -> None:
    p.add_argument("--seeds", type=int, nargs="+", help="explicit seed list")
    p.add_argument("--n-seeds", type=int, default=default_n,
                   help=f"use seeds 0..N-1 (default {default_n})")
    p.add_argument("--n-dtim", type=int, help="override the number of DTIM periods")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dot11ah", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("capacity", help="maximum supported stations from the analytical model")
    _add_point_args(p, multi=True)
    p.set_defaults(func=cmd_capacity, mode=["both"])

    p = sub.add_parser("simulate", help="run the MAC simulator over several seeds")
    _add_point_args(p, multi=False)
    p.add_argument("--n-sta", type=int, help="station count (default: model maximum)")
    p.add_argument("--aggregate-out", help="CSV with mean/std over seeds")
    _seeds_args(p, 1)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("reproduce", help="write the figure tables")
    p.add_argument("figures", nargs="+", choices=["fig7", "fig8", "fig9"])
    p.add_argument("--out-dir", default="results")
    p.add_argument("--config")
    p.add_argument("--json", action="store_true", help="write JSON mirrors next to the CSVs")
    _seeds_args(p, 10)
    p.set_defaults(func=cmd_reproduce)

    p = sub.add_parser("validate-config", help="check a config file and print the resolved values")
    p.add_argument("config")
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ValueError, OSError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
