"""Compiled inner loops for the local search.

All arrays are 0-based.  ``wife[i]`` / ``husband[j]`` hold -1 for singles.
``men_rank[i, j]`` is man i's rank of woman j and ``wrT[i, j]`` is woman j's
rank of man i (the transposed women table, so both are read row-major).
Random draws go through the caller's ``np.random.Generator`` so the Python
wrappers and the compiled loop consume one identical stream.
"""

import numpy as np
from numba import njit

from .instance import SINGLE_RANK

ACT_WALK = 0
ACT_RESTART = 1
ACT_MOVE = 2
ACT_WALK_RESTART = 3

ADOPT_NONE = 0
ADOPT_FIRST_STABLE = 1
ADOPT_UNSTABLE_BETTER = 2
ADOPT_STABLE_BETTER = 3


@njit(cache=True)
def random_matching(acc, rng, wife, husband):
    n = wife.shape[0]
    wife[:] = -1
    husband[:] = -1
    order = rng.permutation(n)
    for t in range(n):
        i = order[t]
        if rng.random() < 0.5:
            count = 0
            for j in range(n):
                if acc[i, j] and husband[j] < 0:
                    count += 1
            if count > 0:
                r = rng.integers(0, count)
                for j in range(n):
                    if acc[i, j] and husband[j] < 0:
                        if r == 0:
                            wife[i] = j
                            husband[j] = i
                            break
                        r -= 1


@njit(cache=True)
def choose(rng, k):
    return rng.integers(0, k)


@njit(cache=True)
def scan(men_rank, wrT, wife, husband, B, pm, pw, cnt_m, cnt_w):
    """Fresh blocking-pair scan; returns (nbp, ns) and fills B, pm, pw, counts."""
    n = wife.shape[0]
    for i in range(n):
        pm[i] = men_rank[i, wife[i]] if wife[i] >= 0 else SINGLE_RANK
        pw[i] = wrT[husband[i], i] if husband[i] >= 0 else SINGLE_RANK
        cnt_m[i] = 0
        cnt_w[i] = 0
    nbp = 0
    for i in range(n):
        pmi = pm[i]
        for j in range(n):
            b = men_rank[i, j] < pmi and wrT[i, j] < pw[j]
            B[i, j] = b
            if b:
                nbp += 1
                cnt_m[i] += 1
                cnt_w[j] += 1
    ns = 0
    for i in range(n):
        if wife[i] < 0 and cnt_m[i] == 0:
            ns += 1
        if husband[i] < 0 and cnt_w[i] == 0:
            ns += 1
    return nbp, ns


@njit(cache=True)
def collect_all(B, out_m, out_w):
    n = B.shape[0]
    k = 0
    for i in range(n):
        for j in range(n):
            if B[i, j]:
                out_m[k] = i
                out_w[k] = j
                k += 1
    return k


@njit(cache=True)
def collect_undominated(B, men_rank, wrT, men_first, keep, out_m, out_w):
    """Dominance-filtered pairs, first side's filter then the other side's."""
    n = B.shape[0]
    big = np.iinfo(np.int32).max
    if men_first:
        for i in range(n):
            best = big
            for j in range(n):
                if B[i, j] and men_rank[i, j] < best:
                    best = men_rank[i, j]
            for j in range(n):
                keep[i, j] = B[i, j] and men_rank[i, j] == best
        colbest = np.full(n, big, dtype=np.int32)
        for i in range(n):
            for j in range(n):
                if keep[i, j] and wrT[i, j] < colbest[j]:
                    colbest[j] = wrT[i, j]
        k = 0
        for i in range(n):
            for j in range(n):
                if keep[i, j] and wrT[i, j] == colbest[j]:
                    out_m[k] = i
                    out_w[k] = j
                    k += 1
        return k
    colbest = np.full(n, big, dtype=np.int32)
    for i in range(n):
        for j in range(n):
            if B[i, j] and wrT[i, j] < colbest[j]:
                colbest[j] = wrT[i, j]
    for i in range(n):
        for j in range(n):
            keep[i, j] = B[i, j] and wrT[i, j] == colbest[j]
    k = 0
    for i in range(n):
        best = big
        for j in range(n):
            if keep[i, j] and men_rank[i, j] < best:
                best = men_rank[i, j]
        for j in range(n):
            if keep[i, j] and men_rank[i, j] == best:
                out_m[k] = i
                out_w[k] = j
                k += 1
    return k


@njit(cache=True)
def eval_moves(men_rank, wrT, wife, husband, B, pm, pw, cnt_m, cnt_w, nbp, ns,
               cand_m, cand_w, k, out_f, dm, dw):
    """f of every neighbour obtained by removing one candidate pair.

    Only rows of the two affected men and columns of the two affected women
    can change blocking status, so each candidate costs O(n).
    """
    n = wife.shape[0]
    for c in range(k):
        m = cand_m[c]
        w = cand_w[c]
        mp = husband[w]
        wp = wife[m]
        pm_m = men_rank[m, w]
        pw_w = wrT[m, w]
        for a in range(n):
            dm[a] = 0
            dw[a] = 0
        dnbp = 0
        for r in range(2):
            a = m if r == 0 else mp
            if a < 0:
                continue
            pma = pm_m if a == m else SINGLE_RANK
            for b in range(n):
                if b == w:
                    pwb = pw_w
                elif b == wp:
                    pwb = SINGLE_RANK
                else:
                    pwb = pw[b]
                new = men_rank[a, b] < pma and wrT[a, b] < pwb
                if new != B[a, b]:
                    d = 1 if new else -1
                    dnbp += d
                    dm[a] += d
                    dw[b] += d
        for r in range(2):
            b = w if r == 0 else wp
            if b < 0:
                continue
            pwb = pw_w if b == w else SINGLE_RANK
            for a in range(n):
                if a == m or a == mp:
                    continue
                new = men_rank[a, b] < pm[a] and wrT[a, b] < pwb
                if new != B[a, b]:
                    d = 1 if new else -1
                    dnbp += d
                    dm[a] += d
                    dw[b] += d
        ns_new = ns
        for a in range(n):
            s_old = wife[a] < 0
            s_new = s_old
            if a == m:
                s_new = False
            elif a == mp:
                s_new = True
            old_c = s_old and cnt_m[a] == 0
            new_c = s_new and cnt_m[a] + dm[a] == 0
            ns_new += int(new_c) - int(old_c)
            s_old = husband[a] < 0
            s_new = s_old
            if a == w:
                s_new = False
            elif a == wp:
                s_new = True
            old_c = s_old and cnt_w[a] == 0
            new_c = s_new and cnt_w[a] + dw[a] == 0
            ns_new += int(new_c) - int(old_c)
        out_f[c] = nbp + dnbp + ns_new


@njit(cache=True)
def pick_min(rng, out_f, k):
    """Index of a minimum of out_f[:k], uniformly among ties."""
    best = out_f[0]
    ties = 0
    for c in range(k):
        if out_f[c] < best:
            best = out_f[c]
            ties = 1
        elif out_f[c] == best:
            ties += 1
    r = rng.integers(0, ties)
    for c in range(k):
        if out_f[c] == best:
            if r == 0:
                return c
            r -= 1
    return -1


@njit(cache=True)
def apply_move(wife, husband, m, w):
    mp = husband[w]
    wp = wife[m]
    if mp >= 0:
        wife[mp] = -1
    if wp >= 0:
        husband[wp] = -1
    wife[m] = w
    husband[w] = m


@njit(cache=True)
def _fingerprint(wife):
    h = np.int64(1469598103934665603)
    for x in wife:
        h = (h ^ np.int64(x + 2)) * np.int64(1099511628211)
    return h


@njit(cache=True)
def _size(wife):
    s = 0
    for x in wife:
        if x >= 0:
            s += 1
    return s


@njit(cache=True)
def search_loop(men_rank, wrT, acc, rng, ltiu, men_first_even, max_steps, walk_p,
                stride, best_wife, traj, trace):
    """Iterated blocking-pair removal with walks, restarts and best tracking.

    ``traj`` has rows (step, best_nbp, best_singles); ``trace`` (possibly
    zero-length) has rows (action, side, f, stable, adopted, best_f) per step.
    Returns (steps, restarts, walks, best_nbp, best_ns, best_stable, perfect,
    distinct_stable, n_traj).
    """
    n = men_rank.shape[0]
    wife = np.empty(n, dtype=np.int64)
    husband = np.empty(n, dtype=np.int64)
    B = np.zeros((n, n), dtype=np.bool_)
    keep = np.zeros((n, n), dtype=np.bool_)
    pm = np.empty(n, dtype=np.int32)
    pw = np.empty(n, dtype=np.int32)
    cnt_m = np.empty(n, dtype=np.int64)
    cnt_w = np.empty(n, dtype=np.int64)
    dm = np.empty(n, dtype=np.int64)
    dw = np.empty(n, dtype=np.int64)
    cand_m = np.empty(n * n, dtype=np.int64)
    cand_w = np.empty(n * n, dtype=np.int64)
    out_f = np.empty(n * n, dtype=np.int64)
    tracing = trace.shape[0] > 0
    seen = {np.int64(0)}
    seen.clear()

    random_matching(acc, rng, wife, husband)
    nbp, ns = scan(men_rank, wrT, wife, husband, B, pm, pw, cnt_m, cnt_w)
    f = nbp + ns
    stable = nbp == 0
    best_wife[:] = wife
    best_f = f
    best_nbp = nbp
    best_ns = ns
    best_stable = stable
    found_stable = stable
    if stable:
        seen.add(_fingerprint(wife))
    steps = 0
    restarts = 0
    walks = 0
    perfect = False
    n_traj = 0
    if stride > 0:
        traj[0, 0] = 0
        traj[0, 1] = best_nbp
        traj[0, 2] = n - _size(best_wife)
        n_traj = 1

    while True:
        if f == 0:
            best_wife[:] = wife
            best_f = 0
            best_nbp = 0
            best_ns = 0
            best_stable = True
            perfect = True
            if stride > 0 and traj[n_traj - 1, 0] != steps:
                traj[n_traj, 0] = steps
                traj[n_traj, 1] = 0
                traj[n_traj, 2] = 0
                n_traj += 1
            break
        men_first = men_first_even if steps % 2 == 0 else not men_first_even
        side = -1
        if ltiu:
            side = 0 if men_first else 1
        walking = rng.random() < walk_p
        if ltiu:
            k = collect_undominated(B, men_rank, wrT, men_first, keep, cand_m, cand_w)
        else:
            k = collect_all(B, cand_m, cand_w)
        if k == 0:
            random_matching(acc, rng, wife, husband)
            restarts += 1
            action = ACT_WALK_RESTART if walking else ACT_RESTART
        elif walking:
            c = rng.integers(0, k)
            apply_move(wife, husband, cand_m[c], cand_w[c])
            walks += 1
            action = ACT_WALK
        else:
            eval_moves(men_rank, wrT, wife, husband, B, pm, pw, cnt_m, cnt_w, nbp, ns,
                       cand_m, cand_w, k, out_f, dm, dw)
            c = pick_min(rng, out_f, k)
            apply_move(wife, husband, cand_m[c], cand_w[c])
            action = ACT_MOVE

        nbp, ns = scan(men_rank, wrT, wife, husband, B, pm, pw, cnt_m, cnt_w)
        f = nbp + ns
        stable = nbp == 0
        if stable:
            seen.add(_fingerprint(wife))
        adopted = ADOPT_NONE
        if stable and not found_stable:
            found_stable = True
            adopted = ADOPT_FIRST_STABLE
        elif not best_stable and best_f > f:
            adopted = ADOPT_UNSTABLE_BETTER
        elif best_stable and stable and best_f > f:
            adopted = ADOPT_STABLE_BETTER
        if adopted != ADOPT_NONE:
            best_wife[:] = wife
            best_f = f
            best_nbp = nbp
            best_ns = ns
            best_stable = stable
        if tracing:
            trace[steps, 0] = action
            trace[steps, 1] = side
            trace[steps, 2] = f
            trace[steps, 3] = stable
            trace[steps, 4] = adopted
            trace[steps, 5] = best_f
        steps += 1
        if stride > 0 and steps % stride == 0:
            traj[n_traj, 0] = steps
            traj[n_traj, 1] = best_nbp
            traj[n_traj, 2] = n - _size(best_wife)
            n_traj += 1
        if steps > max_steps:
            break

    return (steps, restarts, walks, best_nbp, best_ns, best_stable, perfect,
            len(seen), n_traj)
