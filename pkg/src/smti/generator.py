"""Random SMTI instances parameterized by size, incompleteness and ties.

Procedure for ``(n, p1, p2)``:

1. every man and woman gets a uniformly random permutation of the other side;
2. walking each man's list, every woman is deleted with probability ``p1``
   (and the man is deleted from her list too);
3. if anyone's list is now empty the draw is discarded and redone;
4. walking every surviving list left to right, each entry from the second on
   joins the previous entry's tie-group with probability ``p2``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .instance import Instance

GRID_P1 = tuple(round(0.1 * k, 1) for k in range(1, 9))
GRID_P2 = tuple(round(0.1 * k, 1) for k in range(0, 11))


class GenerationError(RuntimeError):
    pass


@dataclass(frozen=True)
class GenParams:
    n: int
    p1: float
    p2: float
    seed: int = 0
    max_rejects: int = 10000

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if not (0.0 <= self.p1 <= 1.0 and 0.0 <= self.p2 <= 1.0):
            raise ValueError("p1 and p2 must lie in [0, 1]")
        if self.max_rejects < 1:
            raise ValueError("max_rejects must be at least 1")


def _tie_groups(order: np.ndarray, rng: np.random.Generator, p2: float) -> tuple:
    joins = rng.random(len(order) - 1) < p2
    groups, current = [], [int(order[0]) + 1]
    for q, join in zip(order[1:], joins):
        if not join:
            groups.append(tuple(current))
            current = []
        current.append(int(q) + 1)
    groups.append(tuple(current))
    return tuple(groups)


def generate(params: GenParams) -> Instance:
    n, rng = params.n, np.random.default_rng(params.seed)
    base = np.tile(np.arange(n), (n, 1))
    for _ in range(params.max_rejects):
        men_order = rng.permuted(base, axis=1)
        women_order = rng.permuted(base, axis=1)
        # deletion draws follow each man's list order
        deleted = rng.random((n, n)) < params.p1
        keep = np.ones((n, n), dtype=bool)
        rows = np.repeat(np.arange(n), n)
        keep[rows, men_order.ravel()] = ~deleted.ravel()
        if keep.any(axis=1).all() and keep.any(axis=0).all():
            break
    else:
        raise GenerationError(
            f"every one of {params.max_rejects} draws left someone with an empty list "
            f"(n={n}, p1={params.p1})")
    men = [_tie_groups(men_order[i][keep[i, men_order[i]]], rng, params.p2) for i in range(n)]
    women = [_tie_groups(women_order[j][keep[women_order[j], j]], rng, params.p2)
             for j in range(n)]
    return Instance(tuple(men), tuple(women))


def derive_seed(*parts) -> int:
    """Mix integers and probabilities into one 64-bit seed.

    Probabilities enter as ``round(p * 10**6)``; the tuple is fed to
    ``numpy.random.SeedSequence`` and the first 64-bit word of its state is
    the seed.  This rule is part of the reproducibility contract.
    """
    ints = [int(round(x * 10**6)) if isinstance(x, float) else int(x) for x in parts]
    return int(np.random.SeedSequence(ints).generate_state(1, dtype=np.uint64)[0])


def grid_params(n: int, p1_values: Sequence[float], p2_values: Sequence[float],
                instances_per_cell: int, base_seed: int = 0,
                max_rejects: int = 10000) -> Iterator[GenParams]:
    """Cells in p1-major order; instance k of cell (p1, p2) is seeded with
    ``derive_seed(base_seed, p1, p2, k)``."""
    if not p1_values or not p2_values or instances_per_cell < 1:
        raise ValueError("grid needs non-empty value lists and instances_per_cell >= 1")
    for p1 in p1_values:
        for p2 in p2_values:
            for k in range(instances_per_cell):
                yield GenParams(n, float(p1), float(p2),
                                derive_seed(base_seed, float(p1), float(p2), k), max_rejects)


def sweep_grid(n: int, p1_values: Sequence[float], p2_values: Sequence[float],
               instances_per_cell: int, base_seed: int = 0,
               max_rejects: int = 10000) -> Iterator[tuple[GenParams, Instance]]:
    for params in grid_params(n, p1_values, p2_values, instances_per_cell, base_seed,
                              max_rejects):
        yield params, generate(params)
