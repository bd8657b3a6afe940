"""Finite trees, equal-length level sets and the relations between them."""

from __future__ import annotations

from typing import Iterable, Iterator, NamedTuple

from .errors import PreconditionError
from .measure import ClopenSet, Dyadic, check_bits, prefixes

__all__ = [
    "LevelSet",
    "FinTree",
    "LevelRelation",
    "level_relation",
    "tail",
    "even_odd_split",
    "interleave",
    "van_lambalgen",
    "van_lambalgen_residue",
    "tail_search",
]


class LevelSet:
    """A finite set of distinct strings of one length ``height``.

    The empty level set is allowed when its height is given explicitly; some
    searches (e.g. complexity classes) legitimately come back empty.
    """

    __slots__ = ("members", "height")

    def __init__(self, members: Iterable[str], height: int | None = None):
        ms = frozenset(check_bits(m) for m in members)
        lengths = {len(m) for m in ms}
        if len(lengths) > 1:
            raise PreconditionError(f"level set with mixed lengths {sorted(lengths)}")
        if ms:
            (h,) = lengths
            if height is not None and height != h:
                raise PreconditionError(f"members have length {h}, not {height}")
            height = h
        elif height is None:
            raise PreconditionError("an empty level set needs an explicit height")
        self.members: frozenset[str] = ms
        self.height: int = height

    @classmethod
    def full(cls, n: int) -> "LevelSet":
        from .measure import all_strings

        return cls(all_strings(n), n)

    @classmethod
    def root(cls) -> "LevelSet":
        return cls([""])

    def __iter__(self) -> Iterator[str]:
        return iter(sorted(self.members))

    def __len__(self):
        return len(self.members)

    def __contains__(self, s):
        return s in self.members

    def __bool__(self):
        return bool(self.members)

    def __eq__(self, other):
        if not isinstance(other, LevelSet):
            return NotImplemented
        return self.height == other.height and self.members == other.members

    def __hash__(self):
        return hash((self.height, self.members))

    def __repr__(self):
        return f"LevelSet({sorted(self.members)!r}, height={self.height})"

    def sorted(self) -> list[str]:
        return sorted(self.members)

    def clopen(self) -> ClopenSet:
        return ClopenSet(self.members)

    def closure(self) -> "FinTree":
        return FinTree.from_leaves(self.members)

    def above(self, sigma: str) -> list[str]:
        """Members extending ``sigma``."""
        return sorted(m for m in self.members if m.startswith(sigma))

    def relative_measure(self, sigma: str) -> Dyadic:
        return self.clopen().relative_measure(sigma)


class FinTree:
    """A finite set of strings closed under prefixes.

    ``depth`` is the length of the longest node.  The deepest level stands in
    for the set of paths, so ``[T]`` means the clopen set it generates and a
    pruned tree (every node reaches the deepest level) is the finite form of
    a strongly positive tree.
    """

    __slots__ = ("nodes", "depth")

    def __init__(self, nodes: Iterable[str] = ()):
        ns = frozenset(check_bits(n) for n in nodes)
        for n in ns:
            if n and n[:-1] not in ns:
                raise PreconditionError(f"node {n!r} without parent {n[:-1]!r}")
        self.nodes: frozenset[str] = ns
        self.depth: int = max((len(n) for n in ns), default=0)

    @classmethod
    def from_leaves(cls, leaves: Iterable[str]) -> "FinTree":
        nodes: set[str] = set()
        for leaf in leaves:
            nodes.update(prefixes(check_bits(leaf)))
        return cls(nodes)

    @classmethod
    def full(cls, n: int) -> "FinTree":
        from .measure import strings_upto

        return cls(strings_upto(n))

    def __contains__(self, s):
        return s in self.nodes

    def __len__(self):
        return len(self.nodes)

    def __bool__(self):
        return bool(self.nodes)

    def __eq__(self, other):
        if not isinstance(other, FinTree):
            return NotImplemented
        return self.nodes == other.nodes

    def __hash__(self):
        return hash(self.nodes)

    def __repr__(self):
        return f"FinTree(leaves={self.leaves().sorted()!r}, depth={self.depth})"

    def level(self, n: int) -> LevelSet:
        return LevelSet((s for s in self.nodes if len(s) == n), n)

    def leaves(self) -> LevelSet:
        """The deepest level."""
        return self.level(self.depth)

    def maximal_nodes(self) -> list[str]:
        return sorted(s for s in self.nodes if s + "0" not in self.nodes and s + "1" not in self.nodes)

    def width(self) -> list[int]:
        counts = [0] * (self.depth + 1) if self.nodes else []
        for s in self.nodes:
            counts[len(s)] += 1
        return counts

    def is_pruned(self) -> bool:
        return all(len(s) == self.depth for s in self.maximal_nodes())

    def paths(self) -> ClopenSet:
        return self.leaves().clopen() if self.nodes else ClopenSet()

    def relative_measure(self, sigma: str) -> Dyadic:
        """``mu_sigma([T])`` read off the deepest level."""
        return self.paths().relative_measure(sigma)

    def measure(self) -> Dyadic:
        return self.paths().measure()

    def has_level(self, F: LevelSet) -> bool:
        """``F = T & 2**height(F)``."""
        return bool(self.nodes) and F.height <= self.depth and self.level(F.height) == F

    def restrict(self, F: Iterable[str]) -> "FinTree":
        """Nodes of the tree comparable with some member of ``F``."""
        F = list(F)
        keep = {s for s in self.nodes if any(s.startswith(f) or f.startswith(s) for f in F)}
        return FinTree(keep)

    def issubtree(self, other: "FinTree") -> bool:
        return self.nodes <= other.nodes


class LevelRelation(NamedTuple):
    is_prefix: bool
    is_splitting: bool
    min_density: Dyadic | None


def level_relation(F: LevelSet, G: LevelSet) -> LevelRelation:
    """Prefix and splitting relations between level sets.

    ``min_density`` is the least relative mass of ``G`` above a member of
    ``F``, i.e. the largest ``q`` for which ``F`` is ``q``-extendible in the
    set generated by ``G``; it is ``None`` unless ``F`` is a prefix of ``G``.
    """
    if F.height > G.height:
        raise PreconditionError("level_relation needs height(F) <= height(G)")
    h = F.height
    restricted = {g[:h] for g in G.members}
    is_prefix = restricted == set(F.members)
    if not is_prefix:
        return LevelRelation(False, False, None)
    splitting = F != G and all(len(G.above(f)) >= 2 for f in F.members)
    gens = G.clopen()
    density = min((gens.relative_measure(f) for f in F.members), default=None)
    return LevelRelation(True, splitting, density)


def tail(T: FinTree, sigma: str) -> FinTree:
    """``{tau : sigma * tau in T}``."""
    n = len(check_bits(sigma))
    return FinTree(s[n:] for s in T.nodes if s.startswith(sigma))


def even_odd_split(x: str) -> tuple[str, str]:
    """``x = x0 (+) x1``; the even stream takes the extra bit of an odd-length word."""
    return x[0::2], x[1::2]


def interleave(x0: str, x1: str) -> str:
    if len(x0) - len(x1) not in (0, 1):
        raise PreconditionError("streams differ in length by more than one")
    out = []
    for i, b in enumerate(x0):
        out.append(b)
        if i < len(x1):
            out.append(x1[i])
    return "".join(out)


def van_lambalgen(x: str, levels: int) -> list[str]:
    """The first ``levels`` rows ``x_0, x_10, x_110, ...`` of the array of ``x``."""
    if levels < 1:
        raise PreconditionError("levels must be at least 1")
    check_bits(x)
    rows = []
    rest = x
    for _ in range(levels):
        even, rest = even_odd_split(rest)
        rows.append(even)
    return rows


def van_lambalgen_residue(x: str, levels: int) -> str:
    """The unsplit remainder ``x_{1^levels}`` left after :func:`van_lambalgen`."""
    rest = check_bits(x)
    for _ in range(levels):
        rest = rest[1::2]
    return rest


def tail_search(T: LevelSet, W: FinTree) -> str | None:
    """Least ``sigma`` (shortest, then lexicographic) below some member of ``T``
    such that every member of ``T`` through ``sigma`` has its tail in ``W``.

    Empty tails count as inside ``W``.  Returns ``None`` when no prefix up to
    the height of ``T`` works.
    """
    if not T:
        raise PreconditionError("tail_search needs a non-empty level set")
    if not W.is_pruned():
        raise PreconditionError("tail_search needs a pruned tree W")
    for length in range(T.height + 1):
        for sigma in sorted({t[:length] for t in T.members}):
            if all(t[length:] in W.nodes for t in T.members if t.startswith(sigma)):
                return sigma
    return None
