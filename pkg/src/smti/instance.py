"""SMTI problem instances: preference lists with ties over acceptable partners.

Indices are 1-based everywhere in the public API, matching the usual
notation ``m1..mn`` / ``w1..wn``.  Internally each instance also carries two
(n, n) rank tables (0-based) that the search kernels read directly.
"""

from __future__ import annotations

import enum
import re
from dataclasses import InitVar, dataclass, field
from typing import Iterable, Sequence

import numpy as np

# rank-table sentinels; acceptable ranks are 1..n, always below both
SINGLE_RANK = 1 << 29
UNACCEPTABLE = 1 << 30


class InstanceError(ValueError):
    """Raised for instances that violate the SMTI model."""


class InstanceSyntaxError(InstanceError):
    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class Side(enum.Enum):
    MAN = "m"
    WOMAN = "w"

    @property
    def other(self) -> "Side":
        return Side.WOMAN if self is Side.MAN else Side.MAN


class _Single:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "SINGLE"

    def __reduce__(self):
        return (_Single, ())


SINGLE = _Single()
"""Comparison marker standing for "no partner"."""


@dataclass(frozen=True)
class Person:
    side: Side
    index: int

    def __str__(self) -> str:
        return f"{self.side.value}{self.index}"


def man(i: int) -> Person:
    return Person(Side.MAN, i)


def woman(j: int) -> Person:
    return Person(Side.WOMAN, j)


class Comparison(enum.Enum):
    STRICTLY_PREFERS = "strictly_prefers"
    INDIFFERENT = "indifferent"
    STRICTLY_DISPREFERRED = "strictly_dispreferred"
    INCOMPARABLE = "incomparable"


PreferenceList = tuple[tuple[int, ...], ...]


def _freeze(prefs: Iterable[Iterable[Iterable[int]]]) -> tuple[PreferenceList, ...]:
    return tuple(tuple(tuple(int(x) for x in group) for group in lst) for lst in prefs)


def _rank_table(prefs: Sequence[PreferenceList], n: int, who: str) -> np.ndarray:
    table = np.full((n, n), UNACCEPTABLE, dtype=np.int32)
    for i, lst in enumerate(prefs, start=1):
        if not lst:
            raise InstanceError(f"{who} {i} has an empty preference list")
        seen: set[int] = set()
        for r, group in enumerate(lst, start=1):
            if not group:
                raise InstanceError(f"{who} {i} has an empty tie-group")
            for q in group:
                if not 1 <= q <= n:
                    raise InstanceError(f"{who} {i}: candidate {q} out of range 1..{n}")
                if q in seen:
                    raise InstanceError(f"{who} {i}: duplicate candidate {q}")
                seen.add(q)
                table[i - 1, q - 1] = r
    return table


@dataclass(frozen=True, eq=False)
class Instance:
    """An SMTI problem with ``n`` men and ``n`` women.

    ``men_prefs[i-1]`` is man i's list: a tuple of tie-groups in decreasing
    preference, each group a tuple of woman indices.  Likewise for women.

    Two people can only marry if each lists the other.  With ``strict`` (the
    default) a list entry that is not reciprocated is an error; otherwise it
    is kept as written but plays no part in matchings.  ``men_rank`` and
    ``women_rank`` are the (n, n) rank tables restricted to mutual pairs,
    with ``UNACCEPTABLE`` elsewhere.
    """

    men_prefs: tuple[PreferenceList, ...]
    women_prefs: tuple[PreferenceList, ...]
    strict: InitVar[bool] = True
    men_rank: np.ndarray = field(init=False, repr=False)
    women_rank: np.ndarray = field(init=False, repr=False)
    symmetric: bool = field(init=False, repr=False)

    def __post_init__(self, strict: bool):
        men = _freeze(self.men_prefs)
        women = _freeze(self.women_prefs)
        n = len(men)
        if n < 1:
            raise InstanceError("an instance needs at least one man and one woman")
        if len(women) != n:
            raise InstanceError(f"{n} men but {len(women)} women")
        mr = _rank_table(men, n, "man")
        wr = _rank_table(women, n, "woman")
        m_lists = mr != UNACCEPTABLE
        w_lists = wr.T != UNACCEPTABLE
        asym = m_lists != w_lists
        if strict and asym.any():
            i, j = (int(v) + 1 for v in np.argwhere(asym)[0])
            who = f"man {i} lists woman {j}" if m_lists[i - 1, j - 1] \
                else f"woman {j} lists man {i}"
            raise InstanceError(f"asymmetric acceptability: {who} but not conversely")
        mutual = m_lists & w_lists
        object.__setattr__(self, "men_prefs", men)
        object.__setattr__(self, "women_prefs", women)
        object.__setattr__(self, "_list_rank", (mr, wr))
        object.__setattr__(self, "symmetric", not asym.any())
        mr = np.where(mutual, mr, UNACCEPTABLE).astype(np.int32)
        wr = np.where(mutual.T, wr, UNACCEPTABLE).astype(np.int32)
        mr.flags.writeable = False
        wr.flags.writeable = False
        object.__setattr__(self, "men_rank", mr)
        object.__setattr__(self, "women_rank", wr)

    @property
    def n(self) -> int:
        return len(self.men_prefs)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Instance):
            return NotImplemented
        return self.men_prefs == other.men_prefs and self.women_prefs == other.women_prefs

    def __hash__(self) -> int:
        return hash((self.men_prefs, self.women_prefs))

    def prefs(self, p: Person) -> PreferenceList:
        self._check_person(p)
        lists = self.men_prefs if p.side is Side.MAN else self.women_prefs
        return lists[p.index - 1]

    def rank(self, p: Person, q: int) -> int | None:
        """Tie-group position (1-based) of candidate ``q`` in ``p``'s list."""
        self._check_person(p)
        if not 1 <= q <= self.n:
            raise InstanceError(f"candidate {q} out of range 1..{self.n}")
        table = self._list_rank[0] if p.side is Side.MAN else self._list_rank[1]
        r = int(table[p.index - 1, q - 1])
        return None if r == UNACCEPTABLE else r

    def acceptable(self, m: int, w: int) -> bool:
        """True iff m and w list each other."""
        return self.men_rank[m - 1, w - 1] != UNACCEPTABLE

    def acceptability(self) -> np.ndarray:
        """Boolean (n, n) matrix, rows men, columns women."""
        return self.men_rank != UNACCEPTABLE

    def _check_person(self, p: Person) -> None:
        if not 1 <= p.index <= self.n:
            raise InstanceError(f"{p} out of range 1..{self.n}")

    def __str__(self) -> str:
        return serialize_instance(self)


def prefers(inst: Instance, p: Person, a: int, b) -> Comparison:
    """Compare candidates ``a`` and ``b`` (or ``SINGLE``) from ``p``'s viewpoint."""
    ra = inst.rank(p, a)
    if ra is None:
        raise InstanceError(f"{a} is not acceptable to {p}")
    if b is SINGLE:
        return Comparison.STRICTLY_PREFERS
    rb = inst.rank(p, b)
    if rb is None:
        raise InstanceError(f"{b} is not acceptable to {p}")
    if ra < rb:
        return Comparison.STRICTLY_PREFERS
    if ra > rb:
        return Comparison.STRICTLY_DISPREFERRED
    return Comparison.INDIFFERENT


# -- text format -------------------------------------------------------------

_TOKEN = re.compile(r"\(|\)|[^\s()]+")


def _parse_list(body: str, lineno: int, offset: int) -> PreferenceList:
    groups: list[tuple[int, ...]] = []
    current: list[int] | None = None
    for mt in _TOKEN.finditer(body):
        tok = mt.group()
        col = offset + mt.start() + 1
        if tok == "(":
            if current is not None:
                raise InstanceSyntaxError("nested '('", lineno, col)
            current = []
        elif tok == ")":
            if current is None:
                raise InstanceSyntaxError("unmatched ')'", lineno, col)
            if len(current) < 2:
                raise InstanceSyntaxError("parenthesized tie-group needs at least 2 members",
                                          lineno, col)
            groups.append(tuple(current))
            current = None
        else:
            if not tok.isdigit():
                raise InstanceSyntaxError(f"expected an index, got {tok!r}", lineno, col)
            if current is None:
                groups.append((int(tok),))
            else:
                current.append(int(tok))
    if current is not None:
        raise InstanceSyntaxError("unclosed '('", lineno, offset + len(body) + 1)
    if not groups:
        raise InstanceSyntaxError("empty preference list", lineno, offset + len(body) + 1)
    return tuple(groups)


_HEADER = re.compile(r"^\s*smti\s+(\d+)\s*$")
_LINE = re.compile(r"^\s*([mw])\s+(\d+)\s*:")


def parse_instance(text: str, strict: bool = True) -> Instance:
    """Parse the ``smti <n>`` text format into an :class:`Instance`."""
    lines = [(k, ln) for k, ln in enumerate(text.splitlines(), start=1)
             if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise InstanceSyntaxError("missing 'smti <n>' header", 1)
    lineno, head = lines[0]
    mt = _HEADER.match(head)
    if not mt:
        raise InstanceSyntaxError("expected 'smti <n>' header", lineno)
    n = int(mt.group(1))
    if n < 1:
        raise InstanceSyntaxError("n must be at least 1", lineno)
    body = lines[1:]
    expected = [("m", i) for i in range(1, n + 1)] + [("w", i) for i in range(1, n + 1)]
    if len(body) != 2 * n:
        where = body[-1][0] + 1 if body else lineno + 1
        raise InstanceSyntaxError(f"expected {2 * n} preference lines, found {len(body)}", where)
    men: list[PreferenceList] = []
    women: list[PreferenceList] = []
    for (lineno, ln), (side, idx) in zip(body, expected):
        mt = _LINE.match(ln)
        if not mt:
            raise InstanceSyntaxError("expected '<m|w> <i>: <list>'", lineno)
        if mt.group(1) != side or int(mt.group(2)) != idx:
            raise InstanceSyntaxError(f"expected line for {side} {idx}, got "
                                      f"{mt.group(1)} {mt.group(2)}", lineno)
        lst = _parse_list(ln[mt.end():], lineno, mt.end())
        for group in lst:
            for q in group:
                if not 1 <= q <= n:
                    raise InstanceError(f"line {lineno}: index {q} out of range 1..{n}")
        (men if side == "m" else women).append(lst)
    return Instance(tuple(men), tuple(women), strict)


def format_list(lst: PreferenceList) -> str:
    return " ".join(str(g[0]) if len(g) == 1 else "(" + " ".join(map(str, g)) + ")"
                    for g in lst)


def serialize_instance(inst: Instance) -> str:
    out = [f"smti {inst.n}"]
    out += [f"m {i}: {format_list(lst)}" for i, lst in enumerate(inst.men_prefs, start=1)]
    out += [f"w {j}: {format_list(lst)}" for j, lst in enumerate(inst.women_prefs, start=1)]
    return "\n".join(out) + "\n"


def read_instance(path, strict: bool = True) -> Instance:
    with open(path, encoding="ascii") as fh:
        return parse_instance(fh.read(), strict)


def write_instance(inst: Instance, path) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(serialize_instance(inst))


TABLE1 = """\
smti 4
m 1: 2 1
m 2: 2 (3 4)
m 3: (1 2 3 4)
m 4: (3 2) 1 4
w 1: 3 1 (2 4)
w 2: 1 4 2
w 3: (1 2) (4 3)
w 4: (3 2 4)
"""
"""Four-couple example.  Three entries are one-sided (w1 lists m2, w3 lists
m1, m3 lists w2), so it only loads with ``strict=False``; see :func:`table1`."""


def table1() -> Instance:
    return parse_instance(TABLE1, strict=False)
