"""``smti`` command line: solve, sweep, trajectory, gen, oracle.

Exit status: 0 on success (for ``solve``: the returned marriage is stable),
1 on input/IO/generation errors, 2 on bad usage, 3 when ``solve`` could only
return an unstable marriage.
"""

from __future__ import annotations

import argparse
import contextlib
import os
import sys
from dataclasses import replace

from . import bench
from .generator import GRID_P1, GRID_P2, GenerationError, generate, grid_params
from .instance import InstanceError, read_instance, write_instance
from .localsearch import SearchConfig, Variant, search
from .matching import MatchingError
from .oracle import OracleSizeError, enumerate_stable

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_UNSTABLE = 3

SOLVE_COLUMNS = ["matching", "stable", "perfect", "f", "nbp", "ns", "size", "steps",
                 "restarts", "walks", "distinct_stable", "wall_time"]


def _floats(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma list of numbers, got {text!r}")


def _ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma list of integers, got {text!r}")


@contextlib.contextmanager
def _output(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", encoding="ascii", newline="\n") as fh:
            yield fh


def _config(args) -> SearchConfig:
    return SearchConfig(variant=Variant(args.variant), max_steps=args.max_steps,
                        walk_probability=args.walk_prob, seed=args.seed)


def _add_search_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--variant", choices=[v.value for v in Variant], default="ltiu")
    p.add_argument("--max-steps", type=int, default=50000)
    p.add_argument("--walk-prob", type=float, default=0.2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="output path (default stdout)")


def _add_grid_flags(p: argparse.ArgumentParser, n_default=(100,)) -> None:
    p.add_argument("--n", type=_ints, default=n_default, help="comma list of sizes")
    p.add_argument("--p1", type=_floats, default=GRID_P1, help="comma list (default 0.1..0.8)")
    p.add_argument("--p2", type=_floats, default=GRID_P2, help="comma list (default 0..1)")
    p.add_argument("--per-cell", type=int, default=10, help="instances per (p1, p2) cell")
    p.add_argument("--max-rejects", type=int, default=10000)


def cmd_solve(args) -> int:
    inst = read_instance(args.file, strict=not args.lenient)
    cfg = _config(args)
    res = search(inst, cfg)
    row = {"matching": res.best.to_row(), "stable": res.stable, "perfect": res.perfect,
           "f": res.best_f.f, "nbp": res.best_f.nbp, "ns": res.best_f.ns, "size": res.size,
           "steps": res.steps_taken, "restarts": res.restarts, "walks": res.walks,
           "distinct_stable": res.distinct_stable, "wall_time": res.wall_time}
    meta = {"kind": "solve", "schema_version": bench.SCHEMA_VERSION, "instance": args.file,
            "n": inst.n, "variant": cfg.variant.value, "max_steps": cfg.max_steps,
            "walk_prob": cfg.walk_probability, "seed": cfg.seed}
    with _output(args.out) as fh:
        bench.write_csv([row], SOLVE_COLUMNS, meta, fh)
    return EXIT_OK if res.stable else EXIT_UNSTABLE


def cmd_sweep(args) -> int:
    spec = bench.SweepSpec(sizes=args.n, p1_values=args.p1, p2_values=args.p2,
                           instances_per_cell=args.per_cell, runs_per_instance=args.runs,
                           config=_config(args), base_seed=args.seed,
                           max_rejects=args.max_rejects, jobs=args.jobs)
    cells, runs = bench.run_sweep(spec)
    with _output(args.out) as fh:
        bench.write_sweep(cells, spec, fh)
    if args.runs_log:
        with _output(args.runs_log) as fh:
            bench.write_runs(runs, spec, fh)
    for c in cells:
        if c.error:
            print(f"cell n={c.n} p1={c.p1} p2={c.p2}: {c.error}", file=sys.stderr)
    return EXIT_OK


def cmd_trajectory(args) -> int:
    if args.files:
        instances = [read_instance(f, strict=not args.lenient) for f in args.files]
        source = {"instances": len(instances)}
    else:
        instances = [generate(p) for n in args.n
                     for p in grid_params(n, args.p1, args.p2, args.per_cell, args.seed,
                                          args.max_rejects)]
        source = {"n": ",".join(map(str, args.n)), "p1": ",".join(map(str, args.p1)),
                  "p2": ",".join(map(str, args.p2)), "per_cell": args.per_cell}
    cfg = replace(_config(args), trajectory_stride=args.stride)
    steps = range(0, args.until + 1, args.stride)
    stats = bench.trajectory_stats(instances, cfg, steps, args.runs, args.seed)
    meta = dict(source, variant=cfg.variant.value, max_steps=cfg.max_steps,
                walk_prob=cfg.walk_probability, base_seed=args.seed, stride=args.stride)
    with _output(args.out) as fh:
        bench.write_trajectory(stats, meta, fh)
    return EXIT_OK


def instance_filename(n: int, p1: float, p2: float, idx: int) -> str:
    return f"smti_n{n}_p1{p1:g}_p2{p2:g}_i{idx}.txt"


def cmd_gen(args) -> int:
    out = args.out or "."
    os.makedirs(out, exist_ok=True)
    count = 0
    for n in args.n:
        for k, p in enumerate(grid_params(n, args.p1, args.p2, args.per_cell, args.seed,
                                          args.max_rejects)):
            inst = generate(p)
            write_instance(inst, os.path.join(out, instance_filename(n, p.p1, p.p2,
                                                                     k % args.per_cell)))
            count += 1
    print(f"wrote {count} instance(s) to {out}")
    return EXIT_OK


def cmd_oracle(args) -> int:
    inst = read_instance(args.file, strict=not args.lenient)
    rep = enumerate_stable(inst)
    meta = {"kind": "oracle", "schema_version": bench.SCHEMA_VERSION, "instance": args.file,
            "n": inst.n, "max_size": rep.max_size, "stable_count": len(rep.all_stable)}
    rows = [{"size": s, "count": c} for s, c in rep.count_by_size.items()]
    with _output(args.out) as fh:
        bench.write_csv(rows, ["size", "count"], meta, fh)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="smti", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="run LTI/LTIU on one instance file")
    p.add_argument("file")
    p.add_argument("--lenient", action="store_true",
                   help="accept one-sided list entries (ignored when matching)")
    _add_search_flags(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("sweep", help="generate a parameter grid and aggregate per cell")
    _add_search_flags(p)
    _add_grid_flags(p)
    p.add_argument("--runs", type=int, default=1, help="search runs per instance")
    p.add_argument("--runs-log", help="also write one CSV row per run here")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("trajectory", help="best-so-far blocking pairs / singles per step")
    p.add_argument("files", nargs="*", help="instance files (default: generate a grid)")
    p.add_argument("--lenient", action="store_true")
    _add_search_flags(p)
    _add_grid_flags(p)
    p.add_argument("--runs", type=int, default=1)
    p.add_argument("--stride", type=int, default=1)
    p.add_argument("--until", type=int, default=1000, help="last step reported")
    p.set_defaults(func=cmd_trajectory)

    p = sub.add_parser("gen", help="write generated instances to a directory")
    _add_grid_flags(p, n_default=(100,))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="output directory (default .)")
    p.set_defaults(func=cmd_gen, per_cell=1)

    p = sub.add_parser("oracle", help="enumerate all stable matchings (n <= 8)")
    p.add_argument("file")
    p.add_argument("--lenient", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_oracle)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (OSError, InstanceError, MatchingError, GenerationError, OracleSizeError,
            ValueError) as exc:
        print(f"smti {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
