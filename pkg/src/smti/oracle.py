"""Exact answers for small instances, and a tie-broken Gale-Shapley baseline."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .instance import SINGLE_RANK, UNACCEPTABLE, Instance
from .matching import Matching

SIZE_CAP = 8


class OracleSizeError(ValueError):
    pass


@dataclass(frozen=True)
class OracleReport:
    all_stable: tuple[Matching, ...]
    max_size: int
    count_by_size: dict[int, int] = field(default_factory=dict)


def enumerate_stable(inst: Instance, size_cap: int = SIZE_CAP) -> OracleReport:
    """Every weakly stable matching of ``inst``, by exhaustive search.

    Men are assigned in index order, each to SINGLE or a free acceptable
    woman.  A branch is cut as soon as it contains a blocking pair whose
    status can no longer change: a decided man together with a woman already
    married to a decided man.  Leaves get a full blocking-pair check.
    """
    n = inst.n
    if n > size_cap:
        raise OracleSizeError(f"n={n} exceeds the enumeration cap of {size_cap}")
    mr = inst.men_rank.tolist()
    wr = inst.women_rank.tolist()
    options = [[j for j in range(n) if mr[i][j] != UNACCEPTABLE] for i in range(n)]
    wife = [-1] * n
    husband = [-1] * n
    found: list[Matching] = []

    def pm(i):
        return mr[i][wife[i]] if wife[i] >= 0 else SINGLE_RANK

    def pw(j):
        return wr[j][husband[j]] if husband[j] >= 0 else SINGLE_RANK

    def blocks(i, j):
        return mr[i][j] < pm(i) and wr[j][i] < pw(j)

    def settled_ok(k):
        # man k was just decided; check pairs that are now final
        if any(husband[j] >= 0 and blocks(k, j) for j in range(n)):
            return False
        j = wife[k]
        if j >= 0 and any(blocks(i, j) for i in range(k)):
            return False
        return True

    def leaf_ok():
        return not any(blocks(i, j) for i in range(n) for j in range(n))

    def visit(k):
        if k == n:
            if leaf_ok():
                found.append(Matching.from_wife_array(wife))
            return
        if settled_ok(k):
            visit(k + 1)
        for j in options[k]:
            if husband[j] < 0:
                wife[k], husband[j] = j, k
                if settled_ok(k):
                    visit(k + 1)
                wife[k], husband[j] = -1, -1

    visit(0)
    counts = Counter(M.size for M in found)
    return OracleReport(tuple(found), max(counts) if counts else 0, dict(sorted(counts.items())))


def max_stable_size(inst: Instance, size_cap: int = SIZE_CAP) -> int:
    return enumerate_stable(inst, size_cap).max_size


def strict_refinement(inst: Instance, rng: np.random.Generator):
    """Per-person strict orders: each tie-group shuffled, mutual entries only."""
    acc = inst.acceptability()
    men, women = [], []
    for i, lst in enumerate(inst.men_prefs):
        order = []
        for group in lst:
            g = [w - 1 for w in group if acc[i, w - 1]]
            rng.shuffle(g)
            order += g
        men.append(order)
    for j, lst in enumerate(inst.women_prefs):
        order = []
        for group in lst:
            g = [m - 1 for m in group if acc[m - 1, j]]
            rng.shuffle(g)
            order += g
        women.append(order)
    return men, women


def gale_shapley_tiebroken(inst: Instance, tie_break_seed: int = 0) -> Matching:
    """Man-proposing deferred acceptance on a random strict refinement."""
    n = inst.n
    men, women = strict_refinement(inst, np.random.default_rng(tie_break_seed))
    w_rank = [{m: r for r, m in enumerate(order)} for order in women]
    nxt = [0] * n
    wife = [-1] * n
    husband = [-1] * n
    free = list(range(n - 1, -1, -1))
    while free:
        m = free.pop()
        if nxt[m] >= len(men[m]):
            continue
        w = men[m][nxt[m]]
        nxt[m] += 1
        cur = husband[w]
        if cur < 0:
            husband[w], wife[m] = m, w
        elif w_rank[w][m] < w_rank[w][cur]:
            husband[w], wife[m], wife[cur] = m, w, -1
            free.append(cur)
        else:
            free.append(m)
    return Matching.from_wife_array(wife)
