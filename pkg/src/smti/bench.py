"""Experiment harness: grid sweeps, per-cell statistics and trajectories.

Everything written here is CSV preceded by ``#`` metadata lines.  Given the
same spec and base seed the output is byte-identical apart from the
wall-time columns.
"""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields, replace
from typing import Iterable, Sequence

import numpy as np

from .generator import GenerationError, GenParams, derive_seed, generate, grid_params
from .instance import Instance
from .localsearch import SearchConfig, SearchResult, search, trajectory_at

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class SweepSpec:
    sizes: tuple[int, ...]
    p1_values: tuple[float, ...]
    p2_values: tuple[float, ...]
    instances_per_cell: int = 10
    runs_per_instance: int = 1
    config: SearchConfig = SearchConfig()
    base_seed: int = 0
    max_rejects: int = 10000
    jobs: int = 1

    def __post_init__(self):
        if not (self.sizes and self.p1_values and self.p2_values):
            raise ValueError("sizes, p1_values and p2_values must be non-empty")
        if self.instances_per_cell < 1 or self.runs_per_instance < 1:
            raise ValueError("instances_per_cell and runs_per_instance must be >= 1")


@dataclass(frozen=True)
class RunRecord:
    n: int
    p1: float
    p2: float
    instance: int
    run: int
    instance_seed: int
    search_seed: int
    variant: str
    stable: bool
    perfect: bool
    size: int
    singles: int
    nbp: int
    f: int
    steps: int
    restarts: int
    walks: int
    distinct_stable: int
    wall_time: float


@dataclass(frozen=True)
class CellStats:
    n: int
    p1: float
    p2: float
    variant: str
    seed: int
    runs: int
    stable_rate: float
    avg_size: float
    perfect_rate: float
    avg_steps: float
    avg_wall_time: float
    avg_restarts: float
    avg_distinct_stable: float
    error: str = ""

    @property
    def avg_singles(self) -> float:
        return self.n - self.avg_size


def run_seed(base_seed: int, instance_seed: int, run: int) -> int:
    return derive_seed(base_seed, instance_seed, run)


def _record(params: GenParams, k: int, run: int, seed: int, variant: str,
            res: SearchResult) -> RunRecord:
    return RunRecord(params.n, params.p1, params.p2, k, run, params.seed, seed,
                     variant, res.stable, res.perfect, res.size, res.singles, res.best_f.nbp,
                     res.best_f.f, res.steps_taken, res.restarts, res.walks,
                     res.distinct_stable, res.wall_time)


def _instance_task(args) -> list[RunRecord] | str:
    params, k, runs, cfg, base_seed = args
    try:
        inst = generate(params)
    except GenerationError as exc:
        return str(exc)
    out = []
    for run in range(runs):
        seed = run_seed(base_seed, params.seed, run)
        res = search(inst, replace(cfg, seed=seed))
        out.append(_record(params, k, run, seed, cfg.variant.value, res))
    return out


def _mean(xs: Sequence[float]) -> float:
    return math.fsum(xs) / len(xs) if xs else float("nan")


def aggregate(records: Sequence[RunRecord], n: int, p1: float, p2: float, variant: str,
              seed: int, error: str = "") -> CellStats:
    """Cell statistics; input order does not matter (records are sorted first)."""
    rs = sorted(records, key=lambda r: (r.instance, r.run))
    return CellStats(
        n=n, p1=p1, p2=p2, variant=variant, seed=seed, runs=len(rs),
        stable_rate=_mean([float(r.stable) for r in rs]),
        avg_size=_mean([r.size for r in rs]),
        perfect_rate=_mean([float(r.perfect) for r in rs]),
        avg_steps=_mean([r.steps for r in rs]),
        avg_wall_time=_mean([r.wall_time for r in rs]),
        avg_restarts=_mean([r.restarts for r in rs]),
        avg_distinct_stable=_mean([r.distinct_stable for r in rs]),
        error=error,
    )


def run_sweep(spec: SweepSpec) -> tuple[list[CellStats], list[RunRecord]]:
    cfg = spec.config
    tasks, keys = [], []
    for n in spec.sizes:
        params = list(grid_params(n, spec.p1_values, spec.p2_values, spec.instances_per_cell,
                                  spec.base_seed, spec.max_rejects))
        for idx, p in enumerate(params):
            k = idx % spec.instances_per_cell
            tasks.append((p, k, spec.runs_per_instance, cfg, spec.base_seed))
            keys.append((n, p.p1, p.p2))
    if spec.jobs > 1:
        with ProcessPoolExecutor(spec.jobs) as pool:
            outcomes = list(pool.map(_instance_task, tasks, chunksize=1))
    else:
        outcomes = [_instance_task(t) for t in tasks]

    by_cell: dict[tuple, list[RunRecord]] = {}
    errors: dict[tuple, str] = {}
    for key, out in zip(keys, outcomes):
        by_cell.setdefault(key, [])
        if isinstance(out, str):
            errors.setdefault(key, out)
        else:
            by_cell[key].extend(out)
    cells = [aggregate(recs, key[0], key[1], key[2], cfg.variant.value, spec.base_seed,
                       errors.get(key, ""))
             for key, recs in by_cell.items()]
    runs = sorted((r for recs in by_cell.values() for r in recs),
                  key=lambda r: (r.n, r.p1, r.p2, r.instance, r.run))
    return cells, runs


# -- CSV ---------------------------------------------------------------------

def _fmt(x) -> str:
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, float):
        return "" if math.isnan(x) else repr(x)
    return str(x)


def write_csv(rows: Iterable, columns: Sequence[str], meta: dict, fh) -> None:
    for key, value in meta.items():
        fh.write(f"# {key}={value}\n")
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        d = row if isinstance(row, dict) else asdict(row)
        w.writerow([_fmt(d[c]) for c in columns])


def read_csv(text: str) -> tuple[dict, list[dict]]:
    """Split a harness CSV into its metadata and rows (all values as strings)."""
    meta, body = {}, []
    for ln in text.splitlines():
        if ln.startswith("#"):
            key, _, value = ln[1:].strip().partition("=")
            meta[key] = value
        else:
            body.append(ln)
    return meta, list(csv.DictReader(io.StringIO("\n".join(body))))


CELL_COLUMNS = [f.name for f in fields(CellStats)] + ["schema_version"]
RUN_COLUMNS = [f.name for f in fields(RunRecord)]


def sweep_meta(spec: SweepSpec) -> dict:
    c = spec.config
    return {"kind": "sweep", "schema_version": SCHEMA_VERSION, "variant": c.variant.value,
            "max_steps": c.max_steps, "walk_prob": c.walk_probability,
            "base_seed": spec.base_seed, "instances_per_cell": spec.instances_per_cell,
            "runs_per_instance": spec.runs_per_instance}


def write_sweep(cells: Sequence[CellStats], spec: SweepSpec, fh) -> None:
    rows = [dict(asdict(c), schema_version=SCHEMA_VERSION) for c in cells]
    write_csv(rows, CELL_COLUMNS, sweep_meta(spec), fh)


def write_runs(runs: Sequence[RunRecord], spec: SweepSpec, fh) -> None:
    write_csv(runs, RUN_COLUMNS, dict(sweep_meta(spec), kind="runs"), fh)


# -- trajectories ------------------------------------------------------------

TRAJ_COLUMNS = ["step", "avg_bp_norm", "avg_singles_norm", "frac_stable", "runs"]


@dataclass(frozen=True)
class TrajectoryStats:
    """Per-step averages over runs of the best-so-far marriage, divided by n."""

    steps: np.ndarray
    avg_bp_norm: np.ndarray
    avg_singles_norm: np.ndarray
    frac_stable: np.ndarray
    runs: int
    per_run_bp: np.ndarray = field(repr=False)  # (runs, steps) raw blocking-pair counts

    def rows(self) -> list[dict]:
        return [{"step": int(s), "avg_bp_norm": float(b), "avg_singles_norm": float(q),
                 "frac_stable": float(fs), "runs": self.runs}
                for s, b, q, fs in zip(self.steps, self.avg_bp_norm, self.avg_singles_norm,
                                       self.frac_stable)]


def trajectory_stats(instances: Sequence[Instance], cfg: SearchConfig, steps: Sequence[int],
                     runs_per_instance: int = 1, base_seed: int = 0) -> TrajectoryStats:
    """Run every instance with trajectory sampling and average at ``steps``.

    Run r of instance k uses seed ``derive_seed(base_seed, k, r)``.
    """
    steps = np.asarray(sorted(steps), dtype=np.int64)
    if cfg.trajectory_stride is None:
        cfg = replace(cfg, trajectory_stride=1)
    if cfg.max_steps < steps[-1]:
        cfg = replace(cfg, max_steps=int(steps[-1]))
    bp, singles, ns = [], [], []
    for k, inst in enumerate(instances):
        for r in range(runs_per_instance):
            res = search(inst, replace(cfg, seed=derive_seed(base_seed, k, r)))
            vals = trajectory_at(res, steps)
            bp.append(vals[:, 0])
            singles.append(vals[:, 1])
            ns.append(inst.n)
    bp = np.array(bp, dtype=np.int64)
    singles = np.array(singles, dtype=np.int64)
    norm = np.array(ns, dtype=float)[:, None]
    return TrajectoryStats(steps, (bp / norm).mean(axis=0), (singles / norm).mean(axis=0),
                           (bp == 0).mean(axis=0), len(bp), bp)


def write_trajectory(stats: TrajectoryStats, meta: dict, fh) -> None:
    meta = dict({"kind": "trajectory", "schema_version": SCHEMA_VERSION,
                 "normalization": "n"}, **meta)
    write_csv(stats.rows(), TRAJ_COLUMNS, meta, fh)
