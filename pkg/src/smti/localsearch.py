"""LTI and LTIU: local search over marriages by blocking-pair removal.

Each step either takes a random walk (probability ``walk_probability``) to a
uniformly chosen neighbour, or moves to the neighbour minimising
``f = blocking pairs + unblocked singles``.  A stable current marriage has no
neighbours and triggers a random restart.  The search keeps the best marriage
seen: lowest ``f`` until something stable turns up, then the stable marriage
with fewest singles.

LTIU restricts the neighbourhood to dominance-filtered blocking pairs and
alternates which side filters first on successive steps.
"""

from __future__ import annotations

import enum
import time
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _kernels as K
from .instance import Instance, Side
from .matching import (BlockingPair, Evaluation, Matching, MatchingError, blocking_pairs,
                       check_matching, evaluate, is_blocking, undominated_blocking_pairs)


class Variant(str, enum.Enum):
    LTI = "lti"
    LTIU = "ltiu"


@dataclass(frozen=True)
class SearchConfig:
    variant: Variant = Variant.LTIU
    max_steps: int = 50000
    walk_probability: float = 0.2
    seed: int = 0
    trajectory_stride: int | None = None
    first_side: Side = Side.MAN

    def __post_init__(self):
        object.__setattr__(self, "variant", Variant(self.variant))
        if self.max_steps < 1:
            raise ValueError("max_steps must be at least 1")
        if not 0.0 <= self.walk_probability <= 1.0:
            raise ValueError("walk_probability must lie in [0, 1]")
        if self.trajectory_stride is not None and self.trajectory_stride < 1:
            raise ValueError("trajectory_stride must be a positive integer")


@dataclass(frozen=True)
class SearchTrace:
    """Per-step record of an instrumented run (one row per loop iteration)."""

    action: np.ndarray     # K.ACT_* codes
    first_side: np.ndarray  # 0 men first, 1 women first, -1 unfiltered (LTI)
    f: np.ndarray          # f of the marriage after the step
    stable: np.ndarray
    adopted: np.ndarray    # K.ADOPT_* codes
    best_f: np.ndarray


@dataclass(frozen=True)
class SearchResult:
    best: Matching
    best_f: Evaluation
    stable: bool
    perfect: bool
    steps_taken: int
    restarts: int
    walks: int
    wall_time: float
    distinct_stable: int = 0
    trajectory: np.ndarray | None = None
    trace: SearchTrace | None = None

    @property
    def size(self) -> int:
        return self.best.size

    @property
    def singles(self) -> int:
        """Unmatched men (equal to unmatched women)."""
        return self.best.n - self.best.size

    def same_outcome(self, other: "SearchResult") -> bool:
        """Equality ignoring wall time."""
        traj_eq = (self.trajectory is None and other.trajectory is None) or (
            self.trajectory is not None and other.trajectory is not None
            and np.array_equal(self.trajectory, other.trajectory))
        return traj_eq and (self.best, self.best_f, self.stable, self.perfect, self.steps_taken,
                            self.restarts, self.walks, self.distinct_stable) == \
            (other.best, other.best_f, other.stable, other.perfect, other.steps_taken,
             other.restarts, other.walks, other.distinct_stable)


def make_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)


class _Arrays:
    """Contiguous views of an instance that the kernels read."""

    def __init__(self, inst: Instance):
        self.men_rank = np.ascontiguousarray(inst.men_rank)
        self.wrT = np.ascontiguousarray(inst.women_rank.T)
        self.acc = inst.acceptability()


def random_matching(inst: Instance, rng: np.random.Generator) -> Matching:
    """Random marriage: men in random order, each taking with probability 1/2
    a uniformly random acceptable woman who is still free."""
    n = inst.n
    wife = np.empty(n, dtype=np.int64)
    husband = np.empty(n, dtype=np.int64)
    K.random_matching(inst.acceptability(), rng, wife, husband)
    return Matching.from_wife_array(wife)


def neighborhood_pairs(inst: Instance, M: Matching, variant: Variant | str, step: int,
                       first_side: Side = Side.MAN) -> tuple[BlockingPair, ...]:
    """Pairs whose removal defines the neighbourhood at a given step."""
    if Variant(variant) is Variant.LTI:
        return blocking_pairs(inst, M)
    side = first_side if step % 2 == 0 else first_side.other
    return undominated_blocking_pairs(inst, M, side)


def _check_pairs(inst: Instance, M: Matching, pairs: Sequence[tuple[int, int]]):
    for m, w in pairs:
        if not is_blocking(inst, M, m, w):
            raise MatchingError(f"(m{m},w{w}) is not a blocking pair of {M.to_row()}")


def neighbor_values(inst: Instance, M: Matching,
                    pairs: Sequence[tuple[int, int]]) -> np.ndarray:
    """f of the neighbour reached by removing each pair, in input order."""
    check_matching(inst, M)
    _check_pairs(inst, M, pairs)
    a = _Arrays(inst)
    n = inst.n
    wife, husband = M.wife_array(), M.husband_array()
    B = np.zeros((n, n), dtype=np.bool_)
    pm = np.empty(n, dtype=np.int32)
    pw = np.empty(n, dtype=np.int32)
    cm = np.empty(n, dtype=np.int64)
    cw = np.empty(n, dtype=np.int64)
    nbp, ns = K.scan(a.men_rank, a.wrT, wife, husband, B, pm, pw, cm, cw)
    cand_m = np.array([m - 1 for m, _ in pairs], dtype=np.int64)
    cand_w = np.array([w - 1 for _, w in pairs], dtype=np.int64)
    out = np.empty(len(pairs), dtype=np.int64)
    K.eval_moves(a.men_rank, a.wrT, wife, husband, B, pm, pw, cm, cw, nbp, ns,
                 cand_m, cand_w, len(pairs), out, np.empty(n, np.int64), np.empty(n, np.int64))
    return out


def _removed(M: Matching, m: int, w: int) -> Matching:
    wife, husband = M.wife_array(), M.husband_array()
    K.apply_move(wife, husband, m - 1, w - 1)
    return Matching.from_wife_array(wife)


def best_neighbor(inst: Instance, M: Matching, pairs: Sequence[tuple[int, int]],
                  rng: np.random.Generator) -> Matching:
    """Neighbour with minimal f; ties broken uniformly at random."""
    if not pairs:
        raise ValueError("best_neighbor needs at least one pair")
    values = neighbor_values(inst, M, pairs)
    c = K.pick_min(rng, values, len(values))
    return _removed(M, *pairs[c])


def random_walk(inst: Instance, M: Matching, pairs: Sequence[tuple[int, int]],
                rng: np.random.Generator) -> Matching:
    """Uniformly chosen neighbour; a fresh random marriage if there is none."""
    if not pairs:
        return random_matching(inst, rng)
    check_matching(inst, M)
    _check_pairs(inst, M, pairs)
    return _removed(M, *pairs[K.choose(rng, len(pairs))])


def search(inst: Instance, cfg: SearchConfig = SearchConfig(), trace: bool = False) -> SearchResult:
    """Run LTI or LTIU on ``inst`` and return the best marriage found."""
    a = _Arrays(inst)
    n = inst.n
    rng = make_rng(cfg.seed)
    stride = cfg.trajectory_stride or 0
    traj = np.zeros((cfg.max_steps // stride + 3 if stride else 0, 3), dtype=np.int64)
    tr = np.zeros((cfg.max_steps + 1 if trace else 0, 6), dtype=np.int64)
    best_wife = np.empty(n, dtype=np.int64)
    t0 = time.perf_counter()
    (steps, restarts, walks, nbp, ns, stable, perfect,
     distinct, n_traj) = K.search_loop(a.men_rank, a.wrT, a.acc, rng,
                                       cfg.variant is Variant.LTIU,
                                       cfg.first_side is Side.MAN,
                                       cfg.max_steps, cfg.walk_probability, stride,
                                       best_wife, traj, tr)
    elapsed = time.perf_counter() - t0
    trace_out = None
    if trace:
        tr = tr[:steps]
        trace_out = SearchTrace(tr[:, 0], tr[:, 1], tr[:, 2], tr[:, 3].astype(bool),
                                tr[:, 4], tr[:, 5])
    return SearchResult(
        best=Matching.from_wife_array(best_wife),
        best_f=Evaluation(int(nbp), int(ns), int(nbp + ns)),
        stable=bool(stable),
        perfect=bool(perfect),
        steps_taken=int(steps),
        restarts=int(restarts),
        walks=int(walks),
        wall_time=elapsed,
        distinct_stable=int(distinct),
        trajectory=traj[:n_traj].copy() if stride else None,
        trace=trace_out,
    )


def trajectory_at(result: SearchResult, steps: Sequence[int]) -> np.ndarray:
    """Best-so-far (nbp, singles) at each requested step.

    A run that stopped early keeps its final best marriage for later steps.
    """
    if result.trajectory is None:
        raise ValueError("run was made without trajectory sampling")
    t = result.trajectory
    idx = np.searchsorted(t[:, 0], np.asarray(steps), side="right") - 1
    if (idx < 0).any():
        raise ValueError("requested a step before the first sample")
    return t[idx, 1:]
