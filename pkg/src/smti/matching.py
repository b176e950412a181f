"""Marriages, blocking pairs, weak stability and the local-search evaluation.

A :class:`Matching` is an immutable value.  All operations here take the
instance explicitly and are vectorized over the ``(n, n)`` rank tables, so a
blocking-pair scan is one pass of numpy comparisons.
"""

from __future__ import annotations

from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .instance import SINGLE, SINGLE_RANK, Instance, Person, Side


class MatchingError(ValueError):
    pass


class BlockingPair(NamedTuple):
    man: int
    woman: int

    def __str__(self) -> str:
        return f"(m{self.man},w{self.woman})"


class Evaluation(NamedTuple):
    nbp: int
    ns: int
    f: int


class Matching:
    """Partial one-to-one association between men and women (1-based)."""

    __slots__ = ("_wives", "_husbands")

    def __init__(self, n: int, pairs: Iterable[tuple[int, int]] = ()):
        if n < 1:
            raise MatchingError("n must be at least 1")
        wives = [0] * n
        husbands = [0] * n
        for m, w in pairs:
            m, w = int(m), int(w)
            if not (1 <= m <= n and 1 <= w <= n):
                raise MatchingError(f"pair (m{m},w{w}) out of range 1..{n}")
            if wives[m - 1] or husbands[w - 1]:
                raise MatchingError(f"pair (m{m},w{w}) breaks one-to-one")
            wives[m - 1] = w
            husbands[w - 1] = m
        self._wives = tuple(wives)
        self._husbands = tuple(husbands)

    @classmethod
    def empty(cls, n: int) -> "Matching":
        return cls(n)

    @classmethod
    def from_wife_array(cls, wife: Sequence[int]) -> "Matching":
        """Build from a 0-based array where ``wife[i]`` is -1 for a single man."""
        return cls(len(wife), ((i + 1, int(w) + 1) for i, w in enumerate(wife) if w >= 0))

    @classmethod
    def from_row(cls, row: str | Sequence) -> "Matching":
        """Parse the compact row form, e.g. ``"2 3 1 4"`` or ``"2 - 1 4"``."""
        items = row.split() if isinstance(row, str) else list(row)
        pairs = []
        for i, tok in enumerate(items, start=1):
            if tok in ("-", None, 0, "0"):
                continue
            pairs.append((i, int(tok)))
        return cls(len(items), pairs)

    @property
    def n(self) -> int:
        return len(self._wives)

    @property
    def size(self) -> int:
        return sum(1 for w in self._wives if w)

    def wife(self, m: int) -> int | None:
        return self._wives[m - 1] or None

    def husband(self, w: int) -> int | None:
        return self._husbands[w - 1] or None

    def partner_of(self, p: Person):
        q = self.wife(p.index) if p.side is Side.MAN else self.husband(p.index)
        return SINGLE if q is None else q

    def pairs(self) -> tuple[tuple[int, int], ...]:
        return tuple((m, w) for m, w in enumerate(self._wives, start=1) if w)

    def wife_array(self) -> np.ndarray:
        return np.array(self._wives, dtype=np.int64) - 1

    def husband_array(self) -> np.ndarray:
        return np.array(self._husbands, dtype=np.int64) - 1

    def to_row(self) -> str:
        return " ".join(str(w) if w else "-" for w in self._wives)

    def to_text(self) -> str:
        out = ["match"]
        out += [f"m {m} w {w}" for m, w in self.pairs()]
        out += [f"single m {m}" for m, w in enumerate(self._wives, start=1) if not w]
        out += [f"single w {w}" for w, m in enumerate(self._husbands, start=1) if not m]
        return "\n".join(out) + "\n"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Matching):
            return NotImplemented
        return self._wives == other._wives

    def __hash__(self) -> int:
        return hash(self._wives)

    def __repr__(self) -> str:
        return f"Matching({self.to_row()!r})"


def parse_matching(text: str) -> Matching:
    """Inverse of :meth:`Matching.to_text`; ``n`` is taken from the lines seen."""
    lines = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    if not lines or lines[0] != ["match"]:
        raise MatchingError("expected a 'match' header line")
    pairs, n = [], 0
    for toks in lines[1:]:
        if len(toks) == 4 and toks[0] == "m" and toks[2] == "w":
            m, w = int(toks[1]), int(toks[3])
            pairs.append((m, w))
            n = max(n, m, w)
        elif len(toks) == 3 and toks[0] == "single" and toks[1] in ("m", "w"):
            n = max(n, int(toks[2]))
        else:
            raise MatchingError(f"bad matching line: {' '.join(toks)!r}")
    return Matching(n, pairs)


def check_matching(inst: Instance, M: Matching) -> None:
    """Raise :class:`MatchingError` unless every pair is mutually acceptable."""
    if M.n != inst.n:
        raise MatchingError(f"matching has n={M.n}, instance has n={inst.n}")
    for m, w in M.pairs():
        if not inst.acceptable(m, w):
            raise MatchingError(f"(m{m},w{w}) are not mutually acceptable")


def size(M: Matching) -> int:
    return M.size


def partner_ranks(inst: Instance, M: Matching) -> tuple[np.ndarray, np.ndarray]:
    """Rank of each person's current partner, ``SINGLE_RANK`` for singles."""
    n = inst.n
    wife, husband = M.wife_array(), M.husband_array()
    idx = np.arange(n)
    pm = np.where(wife >= 0, inst.men_rank[idx, wife], SINGLE_RANK)
    pw = np.where(husband >= 0, inst.women_rank[idx, husband], SINGLE_RANK)
    return pm, pw


def blocking_matrix(inst: Instance, M: Matching) -> np.ndarray:
    """Boolean (n, n) mask, ``[m-1, w-1]`` true iff (m, w) blocks ``M``."""
    check_matching(inst, M)
    pm, pw = partner_ranks(inst, M)
    # unacceptable ranks exceed SINGLE_RANK, so acceptability is implied
    return (inst.men_rank < pm[:, None]) & (inst.women_rank.T < pw[None, :])


def _pairs_of(mask: np.ndarray) -> tuple[BlockingPair, ...]:
    # np.nonzero walks row-major: sorted by man, then woman
    return tuple(BlockingPair(int(i) + 1, int(j) + 1) for i, j in zip(*np.nonzero(mask)))


def blocking_pairs(inst: Instance, M: Matching) -> tuple[BlockingPair, ...]:
    """All blocking pairs of ``M``, sorted by man index then woman index."""
    return _pairs_of(blocking_matrix(inst, M))


def is_blocking(inst: Instance, M: Matching, m: int, w: int) -> bool:
    rm = inst.men_rank[m - 1, w - 1]
    rw = inst.women_rank[w - 1, m - 1]
    wm, hw = M.wife(m), M.husband(w)
    pm = SINGLE_RANK if wm is None else inst.men_rank[m - 1, wm - 1]
    pw = SINGLE_RANK if hw is None else inst.women_rank[w - 1, hw - 1]
    return bool(rm < pm and rw < pw)


def is_stable(inst: Instance, M: Matching) -> bool:
    return not blocking_matrix(inst, M).any()


def is_perfect(inst: Instance, M: Matching) -> bool:
    return M.size == inst.n and is_stable(inst, M)


def evaluate(inst: Instance, M: Matching) -> Evaluation:
    """Blocking pairs plus singles that sit in no blocking pair."""
    B = blocking_matrix(inst, M)
    nbp = int(B.sum())
    single_m = M.wife_array() < 0
    single_w = M.husband_array() < 0
    ns = int((single_m & ~B.any(axis=1)).sum() + (single_w & ~B.any(axis=0)).sum())
    return Evaluation(nbp, ns, nbp + ns)


def remove_blocking_pair(inst: Instance, M: Matching, bp: tuple[int, int]) -> Matching:
    """Marry ``bp``'s man and woman; their former partners become single."""
    m, w = bp
    if not (1 <= m <= M.n and 1 <= w <= M.n) or not is_blocking(inst, M, m, w):
        raise MatchingError(f"(m{m},w{w}) is not a blocking pair of {M.to_row()}")
    wives = list(M._wives)
    old_husband = M.husband(w)
    if old_husband is not None:
        wives[old_husband - 1] = 0
    wives[m - 1] = w
    return Matching(M.n, ((i, x) for i, x in enumerate(wives, start=1) if x))


def _keep_row_minima(mask: np.ndarray, ranks: np.ndarray) -> np.ndarray:
    r = np.where(mask, ranks, np.iinfo(ranks.dtype).max)
    return mask & (r == r.min(axis=1, keepdims=True))


def undominated_mask(inst: Instance, B: np.ndarray, first: Side = Side.MAN) -> np.ndarray:
    """Two-pass dominance filter over a blocking mask.

    The first side keeps, per person, only the blocking partners it ranks
    best; the other side then does the same among the survivors.
    """
    men_view = lambda mask: _keep_row_minima(mask, inst.men_rank)
    women_view = lambda mask: _keep_row_minima(mask.T, inst.women_rank).T
    if first is Side.MAN:
        return women_view(men_view(B))
    return men_view(women_view(B))


def undominated_blocking_pairs(inst: Instance, M: Matching,
                               first: Side = Side.MAN) -> tuple[BlockingPair, ...]:
    return _pairs_of(undominated_mask(inst, blocking_matrix(inst, M), first))
