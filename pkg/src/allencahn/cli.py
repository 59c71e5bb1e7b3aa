"""Command-line interface.

Verbs:
    run <config>                      advance a configured simulation
    preset <name> [--emit-config]    run (or print) a benchmark preset
    converge <preset> --ns ...       temporal refinement study
    check <csv>                      re-verify bound/energy monotonicity

Exit codes: 0 success, 2 monitor abort / failed check, 3 solver failure,
4 configuration error.  The environment variable ALLENCAHN_OUTDIR
overrides the configured output directory.
"""

from __future__ import annotations

import argparse
import dataclasses
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .config import (
    ConfigError,
    PRESET_NAMES,
    RunConfig,
    build_setup,
    convergence_error,
    parse_config,
    preset_experiment,
    serialize_config,
)
from .diagnostics import ConvergenceTable, check_energy_dissipation, check_mbp, estimate_order
from .io import read_csv_records, write_csv, write_snapshot
from .linsolve import KrylovError
from .timestepping import MonitorAbort, run_simulation

__all__ = ["main", "entry"]

EXIT_OK = 0
EXIT_MONITOR = 2
EXIT_SOLVER = 3
EXIT_CONFIG = 4


class _Parser(argparse.ArgumentParser):
    # argparse exits with code 2 on bad usage; route that to the config code
    def error(self, message):
        raise ConfigError(message)


def _output_dir(cfg: RunConfig) -> Path:
    out = os.environ.get("ALLENCAHN_OUTDIR") or cfg.output.dir
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _run_config(cfg: RunConfig) -> int:
    setup = build_setup(cfg)
    outdir = _output_dir(cfg)
    every = cfg.output.snapshot_every

    def observer(n, t, field):
        if every and n % every == 0:
            write_snapshot(field, t, cfg.physics.eps, outdir / f"snap_{n:06d}.dat")

    result = run_simulation(setup, observer=observer if every else None)
    if cfg.output.csv_every:
        kept = [r for r in result.records if r.n % cfg.output.csv_every == 0]
        write_csv(kept, outdir / "diagnostics.csv")
    write_snapshot(result.final, cfg.time.horizon, cfg.physics.eps, outdir / "final.dat")
    if result.records:
        print(
            f"completed {len(result.records)} steps to t={cfg.time.horizon:g}; "
            f"energy {result.initial_energy:.6g} -> {result.records[-1].energy:.6g}"
        )
    else:
        print("completed 0 steps")
    print(f"output written to {outdir}")
    return EXIT_OK


def _cmd_run(args) -> int:
    path = Path(args.config)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    return _run_config(parse_config(path.read_text()))


def _cmd_preset(args) -> int:
    cfg = preset_experiment(args.name)
    if args.emit_config:
        print(serialize_config(cfg))
        return EXIT_OK
    return _run_config(cfg)


def _converge_case(task):
    preset, scheme, mobility, steps, n, cells, seed = task
    return n, convergence_error(preset, scheme, mobility, steps, n, cells=cells, seed=seed)


def _cmd_converge(args) -> int:
    ns = sorted({int(part) for part in args.ns.split(",") if part.strip()})
    if len(ns) < 2:
        raise ConfigError("--ns needs at least two step counts")
    cfg = preset_experiment(args.preset)
    mobility = args.mobility or cfg.physics.mobility
    scheme = args.scheme or cfg.scheme.kind

    tasks = [(args.preset, scheme, mobility, args.steps, n, args.cells, args.seed) for n in ns]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = dict(pool.map(_converge_case, tasks))
    else:
        results = dict(map(_converge_case, tasks))

    errors = [results[n] for n in ns]
    orders = estimate_order(ConvergenceTable(ns, errors))
    print(f"# {scheme} scheme, {mobility} mobility, {args.steps} steps")
    print(f"{'N':>6}  {'max_error':>12}  {'order':>6}")
    for i, n in enumerate(ns):
        order = f"{orders[i-1]:6.2f}" if i else "   ---"
        print(f"{n:>6}  {errors[i]:>12.4e}  {order}")

    outdir = _output_dir(cfg)
    table_path = outdir / f"convergence_{scheme}_{mobility}_{args.steps}.csv"
    with open(table_path, "w") as fh:
        fh.write("n,max_error,order\n")
        for i, n in enumerate(ns):
            fh.write(f"{n},{errors[i]!r},{'' if i == 0 else repr(orders[i-1])}\n")
    print(f"table written to {table_path}")
    return EXIT_OK


def _cmd_check(args) -> int:
    records = read_csv_records(args.csv)
    failures = 0
    prev_energy = None
    for rec in records:
        if not check_mbp(rec, args.mbp_slack):
            failures += 1
            print(f"step {rec.n}: bound violated, max_norm={rec.max_norm!r}")
        if prev_energy is not None and not check_energy_dissipation(
            prev_energy, rec.energy, args.energy_slack
        ):
            failures += 1
            print(f"step {rec.n}: energy increased, {prev_energy!r} -> {rec.energy!r}")
        prev_energy = rec.energy
    if failures:
        print(f"{failures} violation(s) in {len(records)} steps")
        return EXIT_MONITOR
    print(f"ok: {len(records)} steps, bound and energy checks passed")
    return EXIT_OK


def _build_parser() -> _Parser:
    parser = _Parser(prog="allencahn", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a simulation from a config file")
    p_run.add_argument("config")
    p_run.set_defaults(func=_cmd_run)

    p_preset = sub.add_parser("preset", help="run or print a benchmark preset")
    p_preset.add_argument("name", help=f"one of: {', '.join(PRESET_NAMES)}")
    p_preset.add_argument("--emit-config", action="store_true", help="print the config and exit")
    p_preset.set_defaults(func=_cmd_preset)

    p_conv = sub.add_parser("converge", help="temporal refinement study for a forced preset")
    p_conv.add_argument("preset")
    p_conv.add_argument("--ns", required=True, help="comma-separated step counts, e.g. 20,40,80")
    p_conv.add_argument("--steps", choices=("uniform", "random"), default="uniform")
    p_conv.add_argument("--scheme", choices=("dsbe", "dscn"), default=None)
    p_conv.add_argument("--mobility", choices=("constant", "two_sided", "one_sided"), default=None)
    p_conv.add_argument("--cells", type=int, default=None, help="override spatial resolution")
    p_conv.add_argument("--seed", type=int, default=0, help="base seed for random steps")
    p_conv.add_argument("--jobs", type=int, default=1, help="parallel workers")
    p_conv.set_defaults(func=_cmd_converge)

    p_check = sub.add_parser("check", help="re-verify a diagnostics CSV")
    p_check.add_argument("csv")
    p_check.add_argument("--mbp-slack", type=float, default=1e-8)
    p_check.add_argument("--energy-slack", type=float, default=1e-8)
    p_check.set_defaults(func=_cmd_check)

    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except MonitorAbort as exc:
        print(f"monitor abort: {exc}", file=sys.stderr)
        return EXIT_MONITOR
    except KrylovError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except (OSError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


def entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
