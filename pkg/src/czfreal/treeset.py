"""Sets coded as finite, nonempty, prefix-closed collections of tuples.

The members of a code S are named by the labels a with ``(a,) in S``; the
member named a is the subtree ``a^S = {b | (a,) + b in S}``.  Distinct labels
may name extensionally equal members, so codes are intensional objects and
equality between them is only ever the realized relation.

Hereditarily finite sets (``HfSet``) are plain nested frozensets and serve as
the extensional oracle for codes.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import AbstractSet, Iterable, Iterator, Sequence

Tuple = tuple[int, ...]
HfSet = frozenset

EMPTY: HfSet = frozenset()


@dataclass(frozen=True)
class Violation:
    tuple: Tuple | None
    reason: str

    def __str__(self) -> str:
        return f"{self.reason}: {format_tuple(self.tuple) if self.tuple is not None else '-'}"


def validate(tuples: Iterable[Sequence[int]]) -> Violation | None:
    """None if the collection is a valid code, else the first offending tuple."""
    ts = sorted({tuple(t) for t in tuples})
    if not ts:
        return Violation(None, "empty collection")
    present = set(ts)
    for t in ts:
        if any((not isinstance(a, int)) or a < 0 for a in t):
            return Violation(t, "entries must be naturals")
        if t and t[:-1] not in present:
            return Violation(t, f"missing prefix {format_tuple(t[:-1])}")
    if () not in present:
        return Violation(ts[0], "missing root ()")
    return None


class TreeSet:
    """An immutable, validated set code."""

    __slots__ = ("tuples", "_children", "_hash")

    def __init__(self, tuples: Iterable[Sequence[int]]):
        ts = frozenset(tuple(t) for t in tuples)
        bad = validate(ts)
        if bad is not None:
            raise ValueError(f"invalid set code ({bad})")
        self.tuples: frozenset[Tuple] = ts
        self._children: dict[int, TreeSet] | None = None
        self._hash = hash(ts)

    @classmethod
    def closure(cls, tuples: Iterable[Sequence[int]]) -> "TreeSet":
        """The smallest code containing the given tuples (root and prefixes added)."""
        out: set[Tuple] = {()}
        for t in tuples:
            t = tuple(t)
            for k in range(len(t) + 1):
                out.add(t[:k])
        return cls(out)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, TreeSet) and self.tuples == other.tuples

    def __hash__(self) -> int:
        return self._hash

    def __len__(self) -> int:
        return len(self.tuples)

    def __contains__(self, t: object) -> bool:
        return t in self.tuples

    def __repr__(self) -> str:
        return "TreeSet{" + ", ".join(format_tuple(t) for t in sorted(self.tuples)) + "}"

    def children(self) -> dict[int, "TreeSet"]:
        if self._children is None:
            grouped: dict[int, list[Tuple]] = {}
            for t in self.tuples:
                if t:
                    grouped.setdefault(t[0], []).append(t[1:])
            self._children = {a: TreeSet(rest) for a, rest in sorted(grouped.items())}
        return self._children

    def members(self) -> list[int]:
        return list(self.children())

    def has_member(self, a: int) -> bool:
        return (a,) in self.tuples

    def child(self, a: int) -> "TreeSet":
        return self.children()[a]

    def depth(self) -> int:
        return max(len(t) for t in self.tuples)

    def nodes(self) -> list[Tuple]:
        return sorted(self.tuples)


EMPTY_CODE = TreeSet([()])


def members(s: TreeSet) -> list[int]:
    return s.members()


def subtree(s: TreeSet, prefix: Sequence[int]) -> TreeSet:
    """``prefix^S``; the root is adjoined when no tuple of S extends the prefix."""
    prefix = tuple(prefix)
    if not prefix:
        return s
    if len(prefix) == 1 and s.has_member(prefix[0]):
        return s.child(prefix[0])
    k = len(prefix)
    rest = [t[k:] for t in s.tuples if t[:k] == prefix]
    return TreeSet(rest) if rest else EMPTY_CODE


def all_subtrees(s: TreeSet) -> list[TreeSet]:
    """Every ``a^S`` for a node a of S, deduplicated, in node order."""
    seen: dict[TreeSet, None] = {}
    for node in s.nodes():
        seen.setdefault(subtree(s, node), None)
    return list(seen)


# -- hereditarily finite sets ------------------------------------------------


@lru_cache(maxsize=None)
def rank(h: HfSet) -> int:
    return max((rank(m) + 1 for m in h), default=0)


@lru_cache(maxsize=None)
def hf_key(h: HfSet) -> tuple:
    """Canonical sort key: rank first, then members' keys lexicographically."""
    return (rank(h), tuple(sorted(hf_key(m) for m in h)))


def hf_sorted(hs: Iterable[HfSet]) -> list[HfSet]:
    return sorted(hs, key=hf_key)


@lru_cache(maxsize=None)
def hf_encode(h: HfSet) -> TreeSet:
    tuples: list[Tuple] = [()]
    for label, m in enumerate(hf_sorted(h)):
        tuples.extend((label,) + t for t in hf_encode(m).tuples)
    return TreeSet(tuples)


def hf_decode(s: TreeSet) -> HfSet:
    return frozenset(hf_decode(c) for c in s.children().values())


def von_neumann(n: int) -> HfSet:
    out: HfSet = EMPTY
    for _ in range(n):
        out = out | {out}
    return out


def format_hf(h: HfSet) -> str:
    return "{" + ",".join(format_hf(m) for m in hf_sorted(h)) + "}"


def hf_universe(max_rank: int, max_width: int) -> list[HfSet]:
    """All HF sets of rank <= max_rank whose every node has <= max_width members."""
    level: list[HfSet] = [EMPTY]
    for _ in range(max_rank):
        pool = level
        nxt: set[HfSet] = set()
        for k in range(min(max_width, len(pool)) + 1):
            for combo in combinations(pool, k):
                nxt.add(frozenset(combo))
        level = hf_sorted(nxt)
    return level


def enumerate_hf(max_rank: int, max_width: int) -> Iterator[TreeSet]:
    for h in hf_universe(max_rank, max_width):
        yield hf_encode(h)


# -- inductive subsets -------------------------------------------------------


@dataclass(frozen=True)
class InductivityReport:
    inductive: bool
    equal: bool
    counterexample: Tuple | None = field(default=None)


def check_inductive_minimality(s: TreeSet, x: AbstractSet[Tuple]) -> InductivityReport:
    """Is X inductive relative to S, and if so is it all of S?

    X is inductive when every node of S whose one-step extensions in S all
    lie in X itself lies in X.  The counterexample is the first node
    witnessing non-inductivity, or (if inductive but smaller than S) the
    first node of S missing from X.
    """
    x = frozenset(tuple(t) for t in x)
    if not x <= s.tuples:
        raise ValueError("X must be a subset of S")
    kids: dict[Tuple, list[Tuple]] = {t: [] for t in s.tuples}
    for t in s.tuples:
        if t:
            kids[t[:-1]].append(t)
    for node in s.nodes():
        if node not in x and all(c in x for c in kids[node]):
            return InductivityReport(False, False, node)
    missing = sorted(s.tuples - x)
    if missing:
        return InductivityReport(True, False, missing[0])
    return InductivityReport(True, True, None)


# -- random codes ------------------------------------------------------------


def random_tree(rng: random.Random, max_depth: int = 4, max_children: int = 3,
                max_label: int = 9) -> TreeSet:
    tuples: list[Tuple] = [()]
    frontier: list[Tuple] = [()]
    while frontier:
        node = frontier.pop()
        if len(node) >= max_depth:
            continue
        labels = rng.sample(range(max_label + 1), rng.randint(0, max_children))
        for a in labels:
            child = node + (a,)
            tuples.append(child)
            frontier.append(child)
    return TreeSet(tuples)


# -- file format -------------------------------------------------------------


def format_tuple(t: Sequence[int]) -> str:
    return "(" + ",".join(str(a) for a in t) + ")"


def dumps(s: TreeSet) -> str:
    return "".join(format_tuple(t) + "\n" for t in s.nodes())


def parse_tuples(text: str) -> list[Tuple]:
    out = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line:
            continue
        if not (line.startswith("(") and line.endswith(")")):
            raise ValueError(f"line {lineno}: expected a parenthesised tuple, got {line!r}")
        body = line[1:-1].strip()
        try:
            out.append(tuple(int(p) for p in body.split(",")) if body else ())
        except ValueError:
            raise ValueError(f"line {lineno}: bad tuple {line!r}") from None
    return out


def loads(text: str) -> TreeSet:
    return TreeSet(parse_tuples(text))
