"""Command-line front end: models -> trees -> measures -> curves -> reports.

Commands: validate, exponent, curve, branching, compare. Every command is
a pure function of (config, files, seed): seeds only come from flags,
output files carry a model-digest/seed/version header, and re-running a
command reproduces its outputs byte for byte.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from functools import partial
from pathlib import Path
from typing import List, Optional, Sequence

import numpy as np

from . import __version__
from . import branching as br
from . import exponent as ex
from .ifs import IfsModel, load_model, model_digest, random_model, validate_model
from .measure import atomize, build_cells, leaf_cells
from .stieltjes import StieltjesString, check_bracketing, counting_curve, export_curve_csv
from .tree import StopRule, sample_tree


def _header(model: IfsModel, seed) -> str:
    return f"# model={model_digest(model)} seed={seed} version={__version__}"


def _load_model_or_exit(path: str) -> IfsModel:
    try:
        model = load_model(path)
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as err:
        print(f"cannot read model file {path}: {err}", file=sys.stderr)
        raise SystemExit(2)
    violations = validate_model(model)
    if violations:
        for v in violations:
            print(v, file=sys.stderr)
        raise SystemExit(2)
    return model


def _parse_grid(spec: str) -> np.ndarray:
    try:
        xmin_s, xmax_s, pts_s = spec.split(":")
        xmin, xmax, points = float(xmin_s), float(xmax_s), int(pts_s)
    except ValueError:
        raise SystemExit(f"grid must be XMIN:XMAX:POINTS, got {spec!r}")
    if not (0.0 < xmin < xmax) or points < 2:
        raise SystemExit(f"grid needs 0 < XMIN < XMAX and POINTS >= 2, got {spec!r}")
    return np.geomspace(xmin, xmax, points)


def _parse_seeds(text: str) -> List[int]:
    if ".." in text:
        a, _, b = text.partition("..")
        lo, hi = int(a), int(b)
        if hi < lo:
            raise SystemExit(f"empty seed range {text!r}")
        return list(range(lo, hi + 1))
    return [int(text)]


def _stop_rule(args) -> StopRule:
    if (args.depth is None) == (args.epsilon is None):
        raise SystemExit("exactly one of --depth / --epsilon is required")
    if args.depth is not None:
        return StopRule.depth(args.depth)
    return StopRule.resolution(args.epsilon)


def _write_json(payload: dict, out: Optional[str]) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_validate(args) -> int:
    _load_model_or_exit(args.model)
    print("ok")
    return 0


def cmd_exponent(args) -> int:
    model = _load_model_or_exit(args.model)
    report = ex.build_report(model).to_dict()
    report["meta"] = {"model_digest": model_digest(model), "seed": None,
                      "version": __version__}
    _write_json(report, args.out)
    return 0


def cmd_curve(args) -> int:
    model = _load_model_or_exit(args.model)
    stop = _stop_rule(args)
    grid = _parse_grid(args.grid)
    tree = sample_tree(model, stop, args.seed)
    if stop.kind == "depth":
        measure = build_cells(tree, int(stop.value))
    else:
        measure = leaf_cells(tree)
    string = StieltjesString.from_measure(atomize(measure))
    samples = counting_curve(string, grid)
    export_curve_csv(samples, args.out, header=_header(model, args.seed),
                     boundary=args.boundary)
    if args.check_bracketing:
        if stop.kind != "depth" or int(stop.value) < 1:
            raise SystemExit("--check-bracketing requires --depth >= 1")
        for x in grid:
            ok = check_bracketing(tree, int(stop.value), float(x))
            print(f"x={float(x)!r} bracketing={'true' if ok else 'false'}")
    return 0


def _mean_r_for_seed(model: IfsModel, tmax: float, at_n: int, alpha: float,
                     seed: int) -> float:
    return br.martingale_R(br.simulate_population(model, tmax, seed), at_n, alpha)


def cmd_branching(args) -> int:
    model = _load_model_or_exit(args.model)
    seeds = [args.seed] if args.seed is not None else _parse_seeds(args.seeds)
    alpha = ex.solve_recursive_exponent(model)
    if args.stat == "mean-R":
        task = partial(_mean_r_for_seed, model, args.tmax, args.at_n, alpha)
        values = _map_seeds(task, seeds, args.workers)
        arr = np.asarray(values)
        se = float(arr.std(ddof=1) / math.sqrt(len(arr))) if len(arr) > 1 else 0.0
        _write_json({"stat": "mean-R", "n": args.at_n, "seeds": len(seeds),
                     "mean": float(arr.mean()), "stderr": se,
                     "meta": {"model_digest": model_digest(model),
                              "seed": args.seeds, "version": __version__}},
                    args.out)
        return 0
    if len(seeds) != 1:
        raise SystemExit("event/martingale/z output needs a single --seed")
    run = br.simulate_population(model, args.tmax, seeds[0])
    header = _header(model, seeds[0])
    if args.out:
        br.export_events_csv(run, args.out, header=header)
    if args.martingale_out:
        br.export_martingale_csv(run, args.martingale_out, alpha, header=header)
    if args.z_out:
        ts = np.linspace(0.0, args.tmax, args.z_points)
        br.export_z_csv(run, [float(t) for t in ts], alpha, args.z_out, header=header)
    return 0


def cmd_compare(args) -> int:
    if args.random:
        rows = []
        worst_gap = -math.inf
        tallies = {ex.EQUAL: 0, ex.STRICTLY_LESS: 0}
        for k in range(args.random):
            model = random_model(args.seed + k, balanced=(k % 4 == 0))
            gr = ex.solve_recursive_exponent(model)
            gh = ex.solve_homogeneous_exponent(model)
            verdict = ex.check_equality_condition(model)
            tallies[verdict] += 1
            worst_gap = max(worst_gap, gh - gr)
            rows.append({"seed": args.seed + k, "gamma_r": gr, "gamma_h": gh,
                         "verdict": verdict})
        violations = sum(1 for r in rows if r["gamma_h"] > r["gamma_r"] + 1e-12)
        _write_json({"models": args.random, "violations": violations,
                     "worst_gap": worst_gap, "equal": tallies[ex.EQUAL],
                     "strictly_less": tallies[ex.STRICTLY_LESS],
                     "meta": {"model_digest": None, "seed": args.seed,
                              "version": __version__}},
                    args.out)
        return 0
    model = _load_model_or_exit(args.model)
    gr = ex.solve_recursive_exponent(model)
    gh = ex.solve_homogeneous_exponent(model)
    _write_json({"gamma_r": gr, "gamma_h": gh, "difference": gr - gh,
                 "verdict": ex.check_equality_condition(model),
                 "meta": {"model_digest": model_digest(model), "seed": None,
                          "version": __version__}},
                args.out)
    return 0


def _map_seeds(fn, seeds: Sequence[int], workers: int) -> List:
    # fn must be picklable (module-level function or partial of one)
    if workers > 1:
        from multiprocessing import Pool
        with Pool(workers) as pool:
            return pool.map(fn, seeds)
    return [fn(s) for s in seeds]


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cantorstring",
        description="Random recursive Cantor measures and their string spectra.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a model file, exit 2 on violations")
    p.add_argument("--model", required=True)
    p.set_defaults(fn=cmd_validate)

    p = sub.add_parser("exponent", help="spectral exponent report (JSON)")
    p.add_argument("--model", required=True)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_exponent)

    p = sub.add_parser("curve", help="counting curve of a sampled measure (CSV)")
    p.add_argument("--model", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--depth", type=int)
    p.add_argument("--epsilon", type=float)
    p.add_argument("--grid", default="1:1e6:60", help="XMIN:XMAX:POINTS geometric grid")
    p.add_argument("--boundary", choices=["dirichlet", "neumann", "both"], default="both")
    p.add_argument("--out", required=True)
    p.add_argument("--check-bracketing", action="store_true",
                   help="also verify the four-term chain at every grid point")
    p.set_defaults(fn=cmd_curve)

    p = sub.add_parser("branching", help="population event logs and martingale stats")
    p.add_argument("--model", required=True)
    p.add_argument("--seed", type=int, help="single seed (overrides --seeds)")
    p.add_argument("--seeds", default="0", help="single seed N or range A..B")
    p.add_argument("--tmax", type=float, required=True)
    p.add_argument("--out", help="events CSV (single seed) or stat JSON")
    p.add_argument("--martingale-out")
    p.add_argument("--z-out")
    p.add_argument("--z-points", type=int, default=50)
    p.add_argument("--stat", choices=["mean-R"])
    p.add_argument("--at-n", type=int, default=50)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(fn=cmd_branching)

    p = sub.add_parser("compare", help="recursive vs homogeneous exponent")
    p.add_argument("--model")
    p.add_argument("--random", type=int, help="compare over N random models instead")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_compare)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "compare" and not args.random and not args.model:
        raise SystemExit("compare needs --model or --random N")
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
