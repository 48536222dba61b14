"""Command-line front end: tour | dtrp | bounds | tile | scaling.

Global flags ``--seed``, ``--out`` and ``--format`` apply to every
subcommand; ``--config FILE`` loads a JSON object whose keys mirror the
flags (explicit flags win).  Exit status is 0 iff every assertion the
invoked command makes holds (e.g. stability for ``dtrp``, slope windows for
``scaling`` when requested).
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

import numpy as np

from ditsp.bounds import bound_set
from ditsp.dtrp import DtrpConfig, run_bta, run_cca
from ditsp.geometry import BeadGrid, BeadSpec, CylinderGrid, CylinderSpec
from ditsp.harness import (ExperimentConfig, TOUR_CSV_FIELDS, fit_experiment,
                           run_experiment, run_trial, write_tour_csv)
from ditsp.vehicle import VehicleParams

DTRP_CSV_FIELDS = ("policy", "lambda", "seed", "mean_system_time",
                   "mean_queue_len", "served", "divergent_flag")

_ALGO_NAMES = {"sgs": "sgs", "recbta": "rec_bta", "reccca": "rec_cca",
               "sgs_grid": "sgs_grid"}


def _emit(rows, fields, fmt, out):
    fh = open(out, "w", newline="") if out else sys.stdout
    try:
        if fmt == "json":
            json.dump([dict(zip(fields, r)) for r in rows], fh, indent=2)
            fh.write("\n")
        else:
            writer = csv.writer(fh)
            writer.writerow(fields)
            writer.writerows(rows)
    finally:
        if out:
            fh.close()


def _emit_obj(obj, out):
    text = json.dumps(obj, indent=2) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dims(args):
    if args.dim == 3:
        if args.D is None:
            raise SystemExit("--D is required for --dim 3")
        return (args.W, args.H, args.D)
    return (args.W, args.H)


def _params(args) -> VehicleParams:
    return VehicleParams(r_vel=args.rvel, r_ctr=args.rctr)


def cmd_tour(args) -> int:
    algo = _ALGO_NAMES[args.algo]
    config = ExperimentConfig(algo=algo, dims=_dims(args), params=_params(args),
                              ns=(args.n,), n_seeds=args.trials,
                              master_seed=args.seed)
    rows = []
    for seed in range(args.trials):
        r = run_trial(config, args.n, seed)
        rows.append([r.algo, r.n, r.seed, r.total_time, r.total_length,
                     r.leftover_after_phases, r.phase_count])
    _emit(rows, TOUR_CSV_FIELDS, args.format, args.out)
    return 0


def cmd_dtrp(args) -> int:
    dims = _dims(args)
    run = run_bta if args.policy == "bta" else run_cca
    if args.policy == "cca" and len(dims) != 3:
        raise SystemExit("policy cca requires --dim 3")
    if args.policy == "bta" and len(dims) != 2:
        raise SystemExit("policy bta requires --dim 2")
    rows = []
    ok = True
    trace = [] if args.trace else None
    for seed in range(args.seeds):
        config = DtrpConfig(dims=dims, params=_params(args), lam=args.lam,
                            n_slots=args.horizon, seed=args.seed + seed)
        stats = run(config, trace=trace if seed == 0 else None)
        ok = ok and not stats.divergent
        rows.append([args.policy, args.lam, seed, stats.mean_system_time,
                     stats.mean_queue_len, stats.served, int(stats.divergent)])
    _emit(rows, DTRP_CSV_FIELDS, args.format, args.out)
    if args.trace:
        trace.sort(key=lambda e: e["t"])
        with open(args.trace, "w") as fh:
            json.dump(trace, fh, indent=2)
    return 0 if ok else 1


def cmd_bounds(args) -> int:
    out = bound_set(_dims(args), _params(args), n=args.n)
    _emit_obj(out, args.out)
    return 0


def cmd_tile(args) -> int:
    dims = _dims(args)
    rho = args.rho
    if args.dim == 2:
        spec = BeadSpec.create(rho, args.ell)
        grid = BeadGrid(dims[0], dims[1], spec)
        cells = []
        for row, col in grid.cells():
            cx, cy = grid.cell_center(row, col)
            cx, cy = float(cx), float(cy)
            half_l, half_w = spec.ell / 2.0, spec.w / 2.0
            cells.append({
                "index": [row, col],
                "anchor": [cx, cy],
                "vertices": [[cx - half_l, cy], [cx, cy + half_w],
                             [cx + half_l, cy], [cx, cy - half_w]],
            })
        obj = {"spec": {"rho": rho, "ell": spec.ell, "w": spec.w},
               "cells": cells}
    else:
        spec = CylinderSpec.create(rho, args.ell)
        grid = CylinderGrid(dims[0], dims[1], dims[2], spec)
        cells = []
        for layer in range(grid.layer_min, grid.layer_max + 1):
            for row in range(grid.row_min, grid.row_max + 1):
                y, z = grid.axis_center(layer, row)
                y, z = float(y), float(z)
                for col in range(grid.n_cols):
                    x0 = col * spec.ell
                    cells.append({
                        "index": [layer, row, col],
                        "anchor": [x0 + spec.ell / 2.0, y, z],
                        "axis": [[x0, y, z], [x0 + spec.ell, y, z]],
                    })
        obj = {"spec": {"rho": rho, "ell": spec.ell, "w": spec.w},
               "cells": cells}
    _emit_obj(obj, args.out)
    return 0


def cmd_scaling(args) -> int:
    algo = _ALGO_NAMES[args.algo]
    config = ExperimentConfig(algo=algo, dims=_dims(args), params=_params(args),
                              ns=tuple(args.ns), n_seeds=args.trials,
                              master_seed=args.seed, workers=args.workers)
    results = run_experiment(config)
    if args.out:
        write_tour_csv(results, args.out)
    fit = fit_experiment(results)
    report = {"algo": algo, "slope": fit.slope, "intercept": fit.intercept,
              "r_squared": fit.r_squared, "n_points": fit.n_points}
    sys.stdout.write(json.dumps(report, indent=2) + "\n")
    if args.slope_min is not None and fit.slope < args.slope_min:
        return 1
    if args.slope_max is not None and fit.slope > args.slope_max:
        return 1
    return 0


def _add_common(p, dim_default=2):
    # the global flags are re-declared with SUPPRESS so they may appear either
    # before or after the subcommand without clobbering root-level values
    p.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    p.add_argument("--out", type=str, default=argparse.SUPPRESS)
    p.add_argument("--format", choices=("csv", "json"),
                   default=argparse.SUPPRESS)
    p.add_argument("--config", type=str, default=argparse.SUPPRESS)
    p.add_argument("--dim", type=int, choices=(2, 3), default=dim_default)
    p.add_argument("--W", type=float, default=1.0)
    p.add_argument("--H", type=float, default=1.0)
    p.add_argument("--D", type=float, default=None)
    p.add_argument("--rvel", type=float, default=0.1)
    p.add_argument("--rctr", type=float, default=1.0)


def build_parser() -> argparse.ArgumentParser:
    root = argparse.ArgumentParser(prog="ditsp", description=__doc__)
    root.add_argument("--config", type=str, default=None,
                      help="JSON file of default flag values")
    root.add_argument("--seed", type=int, default=0)
    root.add_argument("--out", type=str, default=None)
    root.add_argument("--format", choices=("csv", "json"), default="csv")
    sub = root.add_subparsers(dest="command", required=True)

    p = sub.add_parser("tour", help="run tour trials, emit one CSV row each")
    _add_common(p)
    p.add_argument("--algo", choices=tuple(_ALGO_NAMES), default="sgs")
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--trials", type=int, default=1)
    p.set_defaults(func=cmd_tour)

    p = sub.add_parser("dtrp", help="simulate a repair policy")
    _add_common(p)
    p.add_argument("--policy", choices=("bta", "cca"), default="bta")
    p.add_argument("--lambda", dest="lam", type=float, default=20.0)
    p.add_argument("--horizon", type=int, default=200,
                   help="simulation length in sweep periods")
    p.add_argument("--seeds", type=int, default=1)
    p.add_argument("--trace", type=str, default=None,
                   help="write a JSON event trace for the first run here")
    p.set_defaults(func=cmd_dtrp)

    p = sub.add_parser("bounds", help="print all bound coefficients as JSON")
    _add_common(p)
    p.add_argument("--n", type=int, default=1000)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("tile", help="dump cell geometry as JSON")
    _add_common(p)
    p.add_argument("--rho", type=float, default=0.01)
    p.add_argument("--ell", type=float, default=0.02)
    p.set_defaults(func=cmd_tile)

    p = sub.add_parser("scaling", help="fit a log-log growth exponent")
    _add_common(p)
    p.add_argument("--algo", choices=tuple(_ALGO_NAMES), default="recbta")
    p.add_argument("--ns", type=int, nargs="+", default=[1000, 10000, 100000])
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--slope-min", type=float, default=None)
    p.add_argument("--slope-max", type=float, default=None)
    p.set_defaults(func=cmd_scaling)
    return root


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        with open(args.config) as fh:
            defaults = json.load(fh)
        passed = argv if argv is not None else sys.argv[1:]
        for key, value in defaults.items():
            attr = key.replace("-", "_")
            if attr == "lambda":
                attr = "lam"
            flag = "--" + key
            if hasattr(args, attr) and flag not in passed:
                setattr(args, attr, value)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
