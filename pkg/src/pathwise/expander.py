"""Staged string-expanders and the covering enumeration built on them.

A :class:`StagedExpander` is a finite table standing in for a Turing
functional ``Phi_s(sigma; k)``: an entry says that every oracle extending
``sigma`` converges at stage ``stage`` with the given output, and it stays
converged afterwards.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, NamedTuple

from .errors import PreconditionError
from .hypergraph import StringHypergraph, light_vertex
from .measure import ClopenSet, Dyadic, check_bits, comparable
from .trees import LevelSet

__all__ = [
    "ExpanderEntry",
    "StagedExpander",
    "TraceEvent",
    "StageSnapshot",
    "CoveringRun",
    "CoveringResult",
    "DifferenceLevel",
    "expander_hypergraph",
    "covering_enumerate",
    "difference_test",
]

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ExpanderEntry:
    oracle: str
    arity: int
    stage: int
    output: LevelSet

    def __post_init__(self):
        check_bits(self.oracle)
        if self.arity < 1:
            raise PreconditionError("arity must be at least 1")
        if self.stage < 0:
            raise PreconditionError("stages are non-negative")
        if len(self.output) < self.arity:
            raise PreconditionError(
                f"output of {self.oracle!r} has {len(self.output)} strings, arity {self.arity}"
            )

    @property
    def mass(self) -> Dyadic:
        return Dyadic(1, 1 << len(self.oracle))


class StagedExpander:
    """Finite staged expander.

    Per arity the oracle prefixes form an antichain, so the converged oracle
    mass is the plain sum of ``2**-|sigma|``.  An entry repeated at a later
    stage with the same output is absorbed into its first appearance.
    """

    def __init__(self, entries: Iterable[ExpanderEntry] = ()):
        first: dict[tuple[str, int], ExpanderEntry] = {}
        for e in entries:
            key = (e.oracle, e.arity)
            prev = first.get(key)
            if prev is None:
                first[key] = e
                continue
            if prev.output != e.output:
                raise PreconditionError(f"oracle {e.oracle!r} has two outputs at arity {e.arity}")
            if e.stage < prev.stage:
                first[key] = e
        by_arity: dict[int, list[ExpanderEntry]] = {}
        for e in first.values():
            by_arity.setdefault(e.arity, []).append(e)
        for k, es in by_arity.items():
            es.sort(key=lambda e: (e.stage, e.oracle))
            oracles = sorted(e.oracle for e in es)
            for a, b in zip(oracles, oracles[1:]):
                if comparable(a, b):
                    raise PreconditionError(
                        f"comparable oracle prefixes {a!r} and {b!r} at arity {k}"
                    )
        self._by_arity = by_arity

    @property
    def entries(self) -> list[ExpanderEntry]:
        return [e for k in sorted(self._by_arity) for e in self._by_arity[k]]

    @property
    def arities(self) -> list[int]:
        return sorted(self._by_arity)

    @property
    def max_stage(self) -> int:
        return max((e.stage for e in self.entries), default=0)

    def __bool__(self):
        return bool(self._by_arity)

    def __len__(self):
        return sum(len(v) for v in self._by_arity.values())

    def stages(self, k: int) -> list[int]:
        return sorted({e.stage for e in self._by_arity.get(k, ())})

    def converged(self, k: int, s: int) -> list[ExpanderEntry]:
        return [e for e in self._by_arity.get(k, ()) if e.stage <= s]


def _free(output: LevelSet, V: ClopenSet) -> bool:
    return all(V.frees(t) for t in output.members)


def _split_mass(Phi: StagedExpander, k: int, s: int, V: ClopenSet):
    """Converged oracles ``H_s`` and the non-free part ``F_s``."""
    conv = Phi.converged(k, s)
    H = ClopenSet(e.oracle for e in conv)
    F = ClopenSet(e.oracle for e in conv if not _free(e.output, V))
    return H, F


def expander_hypergraph(Phi: StagedExpander, k: int, s: int, V: ClopenSet | None = None) -> StringHypergraph:
    """Edges are the distinct ``V``-free outputs at stage ``s``, weighted by the
    mass of the oracles producing them."""
    V = V if V is not None else ClopenSet()
    weights: dict[frozenset, Fraction] = {}
    for e in Phi.converged(k, s):
        if _free(e.output, V):
            weights[e.output.members] = weights.get(e.output.members, Fraction(0)) + e.mass
    return StringHypergraph(sorted(weights.items(), key=lambda kv: sorted(kv[0])))


class TraceEvent(NamedTuple):
    step: int
    stage: int
    tau: str
    p: Fraction  # p_s before the enumeration
    g: Fraction  # weight of edges meeting [tau]
    delta_F: Dyadic
    delta_V: Dyadic
    mu_V: Dyadic  # after the enumeration


class StageSnapshot(NamedTuple):
    stage: int
    mu_H: Dyadic
    mu_F: Dyadic
    mu_V: Dyadic

    @property
    def p(self) -> Dyadic:
        return self.mu_H - self.mu_F


@dataclass
class CoveringRun:
    k: int
    eps: Fraction
    delta: Fraction
    V: ClopenSet = field(default_factory=ClopenSet)
    H: ClopenSet = field(default_factory=ClopenSet)
    F: ClopenSet = field(default_factory=ClopenSet)
    trace: list[TraceEvent] = field(default_factory=list)
    snapshots: list[StageSnapshot] = field(default_factory=list)

    @property
    def p(self) -> Dyadic:
        return self.H.measure() - self.F.measure()

    def accounting_holds(self) -> bool:
        """Every enumeration gained non-free oracle mass ``>= delta*k*`` its gain in ``V``."""
        return all(ev.delta_F >= ev.g >= self.delta * self.k * ev.delta_V for ev in self.trace)


class CoveringResult(NamedTuple):
    V: ClopenSet
    D_measure: Dyadic
    run: CoveringRun


def covering_enumerate(Phi: StagedExpander, k: int, eps) -> CoveringResult:
    """Enumerate ``V`` with ``mu(V) <= eps`` leaving free-output mass ``<= 1/(k*eps)``.

    Stages are scanned in order.  While the free converged mass ``p`` exceeds
    ``delta = 1/(k*eps)`` the shortest vertex prefix ``tau`` with
    ``2**-|tau| <= g(tau)/(delta*k)`` is added to ``V``; repeated enumerations
    at one stage stand for the idle stages that follow it.
    """
    eps = Fraction(eps)
    if eps <= 0:
        raise PreconditionError("eps must be positive")
    if k < 1:
        raise PreconditionError("k must be at least 1")
    delta = 1 / (k * eps)
    run = CoveringRun(k=k, eps=eps, delta=delta)
    V = ClopenSet()
    step = 0
    for s in Phi.stages(k):
        while True:
            H, F = _split_mass(Phi, k, s, V)
            p = H.measure() - F.measure()
            if p <= delta:
                break
            G = expander_hypergraph(Phi, k, s, V)
            tau = light_vertex(G, k, threshold=delta)
            g = G.weight_above(tau)
            V_next = V | [tau]
            _, F_next = _split_mass(Phi, k, s, V_next)
            event = TraceEvent(
                step, s, tau, p, g,
                F_next.measure() - F.measure(),
                V_next.measure() - V.measure(),
                V_next.measure(),
            )
            run.trace.append(event)
            log.debug(
                "covering step",
                extra={"stage": s, "event": "enumerate", "tau": tau, "p": str(p), "mu_V": str(event.mu_V)},
            )
            V = V_next
            step += 1
        run.snapshots.append(StageSnapshot(s, H.measure(), F.measure(), V.measure()))
        log.debug("stage done", extra={"stage": s, "event": "stage", "p": str(p), "mu_V": str(V.measure())})
        run.H, run.F = H, F
    run.V = V
    return CoveringResult(V, run.p, run)


class DifferenceLevel(NamedTuple):
    k: int
    arity: int
    eps: Fraction
    V: ClopenSet
    D_measure: Dyadic
    run: CoveringRun

    @property
    def D_bound(self) -> Fraction:
        return 1 / (self.arity * self.eps)

    def holds(self) -> bool:
        return self.V.measure() <= self.eps and self.D_measure <= self.D_bound


def difference_test(
    Phi: StagedExpander,
    k_max: int,
    eps_schedule: Callable[[int], Fraction] | None = None,
    k_min: int = 0,
    check: bool = True,
) -> list[DifferenceLevel]:
    """Covering runs at arity ``n_k = 2**(2k)`` with ``eps_k = 2**-k`` by default.

    With ``check`` a level missing either bound raises ``AssertionError``.
    """
    if eps_schedule is None:
        eps_schedule = lambda k: Fraction(1, 1 << k)  # noqa: E731
    levels = []
    for k in range(k_min, k_max + 1):
        arity = 1 << (2 * k)
        if Phi and arity not in Phi.arities:
            raise PreconditionError(f"expander has no entries at arity {arity} (k={k})")
        eps = Fraction(eps_schedule(k))
        V, D, run = covering_enumerate(Phi, arity, eps)
        level = DifferenceLevel(k, arity, eps, V, D, run)
        if check and not level.holds():
            raise AssertionError(f"covering bounds failed at k={k}")
        levels.append(level)
    return levels
