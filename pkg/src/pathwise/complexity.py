"""Toy prefix-free machines and the complexity notions defined from them.

Everything is relative to an explicit finite machine table.  An undefined
complexity is ``math.inf``, which orders above every length.
"""

from __future__ import annotations

import math
from typing import Iterable, Mapping, NamedTuple

from .errors import PreconditionError
from .measure import ClopenSet, Dyadic, check_bits, is_prefix_free, prefixes
from .trees import LevelSet

__all__ = [
    "PrefixMachine",
    "DeficiencyEntry",
    "kolmogorov",
    "deficiency",
    "deficiency_profile",
    "deficiency_class",
    "compressible_set",
    "test_deficiency_bound",
]


class PrefixMachine:
    """A finite table ``program -> output`` with a prefix-free domain."""

    __slots__ = ("table", "_shortest")

    def __init__(self, table: Mapping[str, str]):
        table = {check_bits(p): check_bits(o) for p, o in dict(table).items()}
        if not is_prefix_free(table):
            raise PreconditionError("machine domain is not prefix-free")
        self.table: dict[str, str] = table
        shortest: dict[str, int] = {}
        for program, output in table.items():
            if len(program) < shortest.get(output, math.inf):
                shortest[output] = len(program)
        self._shortest = shortest
        if self.kraft_sum() > 1:  # cannot happen for a prefix-free domain
            raise AssertionError("Kraft inequality violated")

    def __len__(self):
        return len(self.table)

    def __repr__(self):
        return f"PrefixMachine({self.table!r})"

    def kraft_sum(self) -> Dyadic:
        return sum((Dyadic(1, 1 << len(p)) for p in self.table), Dyadic(0))

    def outputs(self) -> set[str]:
        return set(self._shortest)

    def extended(self, more: Mapping[str, str]) -> "PrefixMachine":
        return PrefixMachine({**self.table, **more})


class DeficiencyEntry(NamedTuple):
    string: str
    complexity: float | int
    deficiency: float | int  # -inf when the string has no program


def kolmogorov(M: PrefixMachine, sigma: str) -> int | float:
    return M._shortest.get(sigma, math.inf)


def deficiency(M: PrefixMachine, sigma: str) -> int | float:
    return len(sigma) - kolmogorov(M, sigma)


def deficiency_profile(M: PrefixMachine, strings: Iterable[str]) -> list[DeficiencyEntry]:
    return [DeficiencyEntry(s, kolmogorov(M, s), deficiency(M, s)) for s in strings]


def _incompressible(M: PrefixMachine, sigma: str, c: int) -> bool:
    return kolmogorov(M, sigma) >= len(sigma) - c


def deficiency_class(M: PrefixMachine, c: int, n: int) -> LevelSet:
    """Strings of length ``n`` all of whose prefixes satisfy ``K(tau) >= |tau| - c``."""
    if n < 0:
        raise PreconditionError("n must be non-negative")
    level = [""] if _incompressible(M, "", c) else []
    for _ in range(n):
        level = [s + b for s in level for b in "01" if _incompressible(M, s + b, c)]
    return LevelSet(level, n)


def compressible_set(M: PrefixMachine, c: int, n: int) -> ClopenSet:
    """``{sigma : |sigma| <= n, K(sigma) <= |sigma| - c}`` as a clopen set.

    Only outputs of the machine can have finite complexity, so the scan runs
    over the machine's range instead of all of ``2**<=n``.
    """
    return ClopenSet(s for s in M.outputs() if len(s) <= n and kolmogorov(M, s) <= len(s) - c)


def test_deficiency_bound(M: PrefixMachine, V: ClopenSet | Iterable[str], i: int, c: int) -> bool:
    """Every generator of ``V`` has ``K(sigma) < |sigma| + c - i``."""
    gens = V.generators if isinstance(V, ClopenSet) else list(V)
    return all(kolmogorov(M, s) < len(s) + c - i for s in gens)


test_deficiency_bound.__test__ = False  # not a pytest test despite the name


def prefix_deficiencies(M: PrefixMachine, x: str) -> list[int | float]:
    """Deficiency of every prefix of ``x``, shortest first."""
    return [deficiency(M, p) for p in prefixes(x)]
