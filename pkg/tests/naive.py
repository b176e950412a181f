"""Brute-force reference implementations used as test oracles.

These read only the raw preference lists and apply the definitions
literally; they share no code with the package's rank tables or kernels.
"""

from itertools import combinations, permutations


def list_rank(lst, q):
    for r, group in enumerate(lst, start=1):
        if q in group:
            return r
    return None


def mutual(inst, m, w):
    return (list_rank(inst.men_prefs[m - 1], w) is not None
            and list_rank(inst.women_prefs[w - 1], m) is not None)


def strictly_prefers(lst, a, current):
    """a strictly better than current partner; any acceptable a beats being single."""
    ra = list_rank(lst, a)
    if ra is None:
        return False
    if current is None:
        return True
    return ra < list_rank(lst, current)


def blocking_pairs(inst, wives):
    """``wives``: dict man -> woman (1-based)."""
    n = inst.n
    husbands = {w: m for m, w in wives.items()}
    out = []
    for m in range(1, n + 1):
        for w in range(1, n + 1):
            if not mutual(inst, m, w) or wives.get(m) == w:
                continue
            if (strictly_prefers(inst.men_prefs[m - 1], w, wives.get(m))
                    and strictly_prefers(inst.women_prefs[w - 1], m, husbands.get(w))):
                out.append((m, w))
    return out


def evaluate(inst, wives):
    bps = blocking_pairs(inst, wives)
    in_bp_m = {m for m, _ in bps}
    in_bp_w = {w for _, w in bps}
    husbands = set(wives.values())
    ns = sum(1 for m in range(1, inst.n + 1) if m not in wives and m not in in_bp_m)
    ns += sum(1 for w in range(1, inst.n + 1) if w not in husbands and w not in in_bp_w)
    return len(bps), ns, len(bps) + ns


def dominance_filter(inst, pairs, side):
    """Keep pairs not dominated from ``side``'s view (Defs: same person, strictly better)."""
    keep = []
    for m, w in pairs:
        dominated = False
        for m2, w2 in pairs:
            if side == "m" and m2 == m and w2 != w:
                lst = inst.men_prefs[m - 1]
                if list_rank(lst, w2) < list_rank(lst, w):
                    dominated = True
            if side == "w" and w2 == w and m2 != m:
                lst = inst.women_prefs[w - 1]
                if list_rank(lst, m2) < list_rank(lst, m):
                    dominated = True
        if not dominated:
            keep.append((m, w))
    return keep


def all_matchings(inst):
    """Every matching over mutually acceptable pairs, as dicts man -> woman."""
    n = inst.n
    men = range(1, n + 1)
    out = []
    for k in range(n + 1):
        for ms in combinations(men, k):
            for ws in permutations(range(1, n + 1), k):
                if all(mutual(inst, m, w) for m, w in zip(ms, ws)):
                    out.append(dict(zip(ms, ws)))
    return out


def stable_matchings(inst):
    return [M for M in all_matchings(inst) if not blocking_pairs(inst, M)]


def to_wives(M):
    return dict(M.pairs())
