"""Exact measure arithmetic on the Cantor space.

Bit strings are plain ``str`` objects over ``"0"``/``"1"``; the empty
string is the root.  A :class:`ClopenSet` is a finite union of cylinders
and every measure it reports is a :class:`Dyadic`.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from typing import Iterable, Iterator

from .errors import PreconditionError

__all__ = [
    "Dyadic",
    "ClopenSet",
    "check_bits",
    "is_prefix",
    "comparable",
    "prefixes",
    "all_strings",
    "strings_upto",
    "extensions",
    "is_prefix_free",
    "cylinder_measure",
    "measure",
    "relative_measure",
    "concat_power",
]


class Dyadic(Fraction):
    """A rational whose denominator is a power of two.

    ``Dyadic(3, 4)`` is 3/4; use :meth:`of` to build ``numerator * 2**-exponent``.
    Sums, differences and products of dyadics stay dyadic; mixing with a
    general :class:`~fractions.Fraction` yields a plain ``Fraction``.
    """

    __slots__ = ()

    def __new__(cls, numerator=0, denominator=None):
        self = super().__new__(cls, numerator, denominator)
        d = self.denominator
        if d & (d - 1):
            raise ValueError(f"{Fraction(self)} is not dyadic")
        return self

    @classmethod
    def of(cls, numerator: int, exponent: int) -> "Dyadic":
        if exponent < 0:
            raise ValueError("exponent must be non-negative")
        return cls(numerator, 1 << exponent)

    @classmethod
    def coerce(cls, value) -> "Dyadic":
        return value if isinstance(value, Dyadic) else cls(value)

    @property
    def exponent(self) -> int:
        return self.denominator.bit_length() - 1

    def _lift(self, other, op):
        result = op(Fraction(self), other)
        if isinstance(other, (Dyadic, int)) and not isinstance(other, bool):
            return Dyadic(result)
        return result

    def __add__(self, other):
        return self._lift(other, Fraction.__add__)

    def __radd__(self, other):
        return self._lift(other, Fraction.__radd__)

    def __sub__(self, other):
        return self._lift(other, Fraction.__sub__)

    def __rsub__(self, other):
        return self._lift(other, Fraction.__rsub__)

    def __mul__(self, other):
        return self._lift(other, Fraction.__mul__)

    def __rmul__(self, other):
        return self._lift(other, Fraction.__rmul__)

    def __pow__(self, n):
        if isinstance(n, int) and n >= 0:
            return Dyadic(Fraction(self) ** n)
        return Fraction(self) ** n

    def __neg__(self):
        return Dyadic(-Fraction(self))

    def __abs__(self):
        return Dyadic(abs(Fraction(self)))

    def __reduce__(self):
        return (Dyadic, (self.numerator, self.denominator))

    def __copy__(self):
        return self

    def __deepcopy__(self, memo):
        return self

    def __repr__(self):
        return f"Dyadic({self.numerator}, 2**{self.exponent})"

    def __str__(self):
        return f"{self.numerator}/2^{self.exponent}"


ZERO = Dyadic(0)
ONE = Dyadic(1)


def check_bits(s: str) -> str:
    if not isinstance(s, str) or s.strip("01"):
        raise PreconditionError(f"not a bit string: {s!r}")
    return s


def is_prefix(a: str, b: str) -> bool:
    """``a`` is a (not necessarily proper) prefix of ``b``."""
    return b.startswith(a)


def comparable(a: str, b: str) -> bool:
    return a.startswith(b) or b.startswith(a)


def prefixes(s: str, proper: bool = False) -> list[str]:
    """All prefixes of ``s``, shortest first."""
    stop = len(s) if proper else len(s) + 1
    return [s[:i] for i in range(stop)]


def all_strings(n: int) -> list[str]:
    """The level ``2**n`` in lexicographic order."""
    return ["".join(p) for p in product("01", repeat=n)]


def strings_upto(n: int) -> list[str]:
    """Every string of length at most ``n`` in length-lexicographic order."""
    out: list[str] = []
    for length in range(n + 1):
        out.extend(all_strings(length))
    return out


def extensions(sigma: str, length: int) -> list[str]:
    if length < len(sigma):
        return []
    return [sigma + tail for tail in all_strings(length - len(sigma))]


def is_prefix_free(strings: Iterable[str]) -> bool:
    ordered = sorted(set(strings))
    # in lexicographic order any prefix sits immediately before some extension of it
    return not any(b.startswith(a) for a, b in zip(ordered, ordered[1:]))


def cylinder_measure(sigma: str) -> Dyadic:
    return Dyadic(1, 1 << len(sigma))


def _has_prefix_in(s: str, gens: frozenset[str] | set[str]) -> bool:
    return any(s[:i] in gens for i in range(len(s) + 1))


def _minimize(strings: Iterable[str]) -> tuple[str, ...]:
    kept: set[str] = set()
    for s in sorted(set(strings), key=lambda x: (len(x), x)):
        if not _has_prefix_in(s, kept):
            kept.add(s)
    return tuple(sorted(kept))


class ClopenSet:
    """Finite union of cylinders, kept as its prefix-minimal generator antichain.

    Equality and hashing compare generators.  Two generator sets can describe
    the same points (``{0}`` and ``{00, 01}``); use :meth:`same_points` for
    that comparison.  Freeness (:meth:`frees`) is a property of generators,
    which is why they are not merged further.
    """

    __slots__ = ("generators", "_genset")

    def __init__(self, generators: Iterable[str] = ()):
        gens = [check_bits(g) for g in generators]
        self.generators: tuple[str, ...] = _minimize(gens)
        self._genset = frozenset(self.generators)

    @classmethod
    def full(cls) -> "ClopenSet":
        return cls([""])

    @classmethod
    def from_level(cls, strings: Iterable[str]) -> "ClopenSet":
        return cls(strings)

    def __iter__(self) -> Iterator[str]:
        return iter(self.generators)

    def __len__(self) -> int:
        return len(self.generators)

    def __bool__(self) -> bool:
        return bool(self.generators)

    def __eq__(self, other):
        if not isinstance(other, ClopenSet):
            return NotImplemented
        return self.generators == other.generators

    def __hash__(self):
        return hash(self.generators)

    def __repr__(self):
        return f"ClopenSet({list(self.generators)!r})"

    @property
    def max_length(self) -> int:
        return max((len(g) for g in self.generators), default=0)

    def measure(self) -> Dyadic:
        if not self.generators:
            return ZERO
        depth = self.max_length
        return Dyadic(sum(1 << (depth - len(g)) for g in self.generators), 1 << depth)

    def relative_measure(self, tau: str) -> Dyadic:
        """``2**|tau| * mu(V & [tau])``."""
        if _has_prefix_in(tau, self._genset):
            return ONE
        inside = [g for g in self.generators if g.startswith(tau)]
        if not inside:
            return ZERO
        depth = max(len(g) for g in inside)
        return Dyadic(sum(1 << (depth - len(g)) for g in inside), 1 << (depth - len(tau)))

    def covers(self, sigma: str) -> bool:
        """``[sigma]`` lies inside the set."""
        return self.relative_measure(sigma) == 1

    def meets(self, sigma: str) -> bool:
        """``[sigma]`` intersects the set."""
        return _has_prefix_in(sigma, self._genset) or any(
            g.startswith(sigma) for g in self.generators
        )

    def frees(self, rho: str) -> bool:
        """``rho`` has no prefix among the generators."""
        return not _has_prefix_in(rho, self._genset)

    def contains_point_prefix(self, x: str) -> bool:
        """Any real extending ``x`` lies in the set because of a generator below ``x``."""
        return _has_prefix_in(x, self._genset)

    def refine(self, depth: int) -> frozenset[str]:
        """The depth-``depth`` strings whose cylinders lie inside the set."""
        if depth < self.max_length:
            raise PreconditionError("refinement depth below the longest generator")
        out: set[str] = set()
        for g in self.generators:
            out.update(extensions(g, depth))
        return frozenset(out)

    def union(self, other: "ClopenSet | Iterable[str]") -> "ClopenSet":
        other = other if isinstance(other, ClopenSet) else ClopenSet(other)
        return ClopenSet(self.generators + other.generators)

    __or__ = union

    def intersection(self, other: "ClopenSet") -> "ClopenSet":
        out = []
        for a in self.generators:
            for b in other.generators:
                if b.startswith(a):
                    out.append(b)
                elif a.startswith(b):
                    out.append(a)
        return ClopenSet(out)

    __and__ = intersection

    def difference(self, other: "ClopenSet") -> "ClopenSet":
        out: list[str] = []
        stack = list(self.generators)
        while stack:
            g = stack.pop()
            if _has_prefix_in(g, other._genset):
                continue
            if any(b.startswith(g) for b in other.generators):
                stack.extend((g + "0", g + "1"))
            else:
                out.append(g)
        return ClopenSet(out)

    __sub__ = difference

    def complement(self) -> "ClopenSet":
        return ClopenSet.full().difference(self)

    def reduced(self) -> "ClopenSet":
        """Merge complete sibling pairs until none remain (canonical point set)."""
        gens = set(self.generators)
        changed = True
        while changed:
            changed = False
            for g in sorted(gens, key=len, reverse=True):
                if g and g in gens:
                    sib = g[:-1] + ("1" if g[-1] == "0" else "0")
                    if sib in gens:
                        gens -= {g, sib}
                        gens.add(g[:-1])
                        changed = True
        return ClopenSet(gens)

    def same_points(self, other: "ClopenSet") -> bool:
        return self.reduced() == other.reduced()

    def issubset(self, other: "ClopenSet") -> bool:
        return not self.difference(other)


def measure(V: ClopenSet | Iterable[str]) -> Dyadic:
    V = V if isinstance(V, ClopenSet) else ClopenSet(V)
    return V.measure()


def relative_measure(tau: str, V: ClopenSet | Iterable[str]) -> Dyadic:
    V = V if isinstance(V, ClopenSet) else ClopenSet(V)
    return V.relative_measure(check_bits(tau))


def concat_power(Q: ClopenSet | Iterable[str], n: int) -> ClopenSet:
    """The ``n``-fold concatenation ``Q * ... * Q``; ``Q**0`` is the root.

    ``Q`` must be prefix-free: only then is the measure multiplicative.
    """
    if n < 0:
        raise PreconditionError("n must be non-negative")
    gens = list(Q.generators) if isinstance(Q, ClopenSet) else [check_bits(q) for q in Q]
    gens = sorted(set(gens))
    if not is_prefix_free(gens):
        raise PreconditionError("concat_power needs a prefix-free set")
    power = [""]
    for _ in range(n):
        power = [a + b for a in power for b in gens]
    return ClopenSet(power)
