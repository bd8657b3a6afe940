"""Lower density functions and the finite forcing steps that use them.

A lower density function (LDF) assigns a rational floor in ``[0, 1)`` to
each member of a level set.  A tree meets the floors when its relative
path mass above each member is at least the floor; it is *dense* when it
beats every floor by one common positive slack.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, NamedTuple

from .errors import InsufficientDepth, PreconditionError
from .trees import FinTree, LevelSet, level_relation

__all__ = [
    "LDF",
    "Condition",
    "DenseStatus",
    "dense_status",
    "is_dense",
    "dense_ext",
    "condense",
    "condensation_gap",
    "branch",
    "choose_delta",
]


class LDF:
    """``domain -> floor`` with every floor a rational in ``[0, 1)``."""

    __slots__ = ("domain", "values")

    def __init__(self, domain: LevelSet, values: Mapping[str, object]):
        if not domain:
            raise PreconditionError("an LDF needs a non-empty domain")
        vals = {s: Fraction(v) for s, v in values.items()}
        if set(vals) != set(domain.members):
            raise PreconditionError("LDF values must cover exactly its domain")
        for s, v in vals.items():
            if not 0 <= v < 1:
                raise PreconditionError(f"floor {v} at {s!r} outside [0, 1)")
        self.domain = domain
        self.values: dict[str, Fraction] = vals

    @classmethod
    def constant(cls, domain: LevelSet, value) -> "LDF":
        return cls(domain, {s: value for s in domain.members})

    def __call__(self, sigma: str) -> Fraction:
        return self.values[sigma]

    def __eq__(self, other):
        if not isinstance(other, LDF):
            return NotImplemented
        return self.domain == other.domain and self.values == other.values

    def __hash__(self):
        return hash((self.domain, frozenset(self.values.items())))

    def __repr__(self):
        return f"LDF({ {s: str(v) for s, v in sorted(self.values.items())} })"

    def shifted(self, eps) -> "LDF":
        """``d + eps``."""
        eps = Fraction(eps)
        return LDF(self.domain, {s: v + eps for s, v in self.values.items()})

    def extends(self, d: "LDF") -> bool:
        """``self <= d``: the domain refines ``d``'s and the mass above each
        member of ``d``'s domain pays for ``d``'s floor there."""
        if self.domain.height < d.domain.height:
            return False
        if not level_relation(d.domain, self.domain).is_prefix:
            return False
        for sigma, floor in d.values.items():
            supply = sum(
                (v / (1 << len(t)) for t, v in self.values.items() if t.startswith(sigma)),
                Fraction(0),
            )
            if floor / (1 << len(sigma)) > supply:
                return False
        return True


class DenseStatus(NamedTuple):
    weak: bool
    max_slack: Fraction | None  # None when the domain of d is not a prefix of E

    @property
    def dense(self) -> bool:
        return self.max_slack is not None and self.max_slack > 0


def _as_level(E: LevelSet | FinTree) -> LevelSet:
    return E.leaves() if isinstance(E, FinTree) else E


def dense_status(E: LevelSet | FinTree, d: LDF) -> DenseStatus:
    """Whether ``E`` meets every floor of ``d`` and by how much.

    ``max_slack`` is ``min_sigma (mu_sigma(E) - d(sigma))``; it is negative
    when some floor is missed.  A tree is judged by its deepest level.
    """
    level = _as_level(E)
    if level.height < d.domain.height or not level_relation(d.domain, level).is_prefix:
        return DenseStatus(False, None)
    gens = level.clopen()
    slack = min(gens.relative_measure(s) - v for s, v in d.values.items())
    return DenseStatus(slack >= 0, slack)


def is_dense(E: LevelSet | FinTree, d: LDF) -> bool:
    return dense_status(E, d).dense


def dense_ext(d: LDF, E: LevelSet, T: FinTree) -> LDF:
    """An LDF ``e`` on ``E`` with ``e <= d`` and ``T`` still ``e``-dense.

    ``eps`` is the least margin of ``T`` over ``d``; each ``e(tau)`` sits
    ``eps/2`` below the true density of ``T`` at ``tau`` (never below 0).
    """
    if not T.is_pruned():
        raise PreconditionError("T must be strongly positive (pruned)")
    if not T.has_level(E):
        raise PreconditionError("E must be a level of T")
    if E.height < d.domain.height or not level_relation(d.domain, E).is_prefix:
        raise PreconditionError("domain of d must be a prefix of E")
    eps = min(T.relative_measure(s) - v for s, v in d.values.items())
    if eps <= 0:
        raise PreconditionError("T is not d-dense")
    half = eps / 2
    ext = LDF(E, {t: max(Fraction(0), T.relative_measure(t) - half) for t in E.members})
    for t in E.members:
        mu = T.relative_measure(t)
        assert ext(t) < mu < ext(t) + eps
    assert ext.extends(d), "dense extension does not extend d"
    assert is_dense(T, ext), "T is not dense for the extension"
    return ext


@dataclass(frozen=True)
class Condition:
    """``(F, T, d)``: a level ``F`` of the pruned tree ``T`` with floors ``d`` on ``F``."""

    F: LevelSet
    T: FinTree
    d: LDF

    def __post_init__(self):
        if not self.F:
            raise PreconditionError("F must be non-empty")
        if self.d.domain != self.F:
            raise PreconditionError("d must be defined on F")
        if not self.T.is_pruned():
            raise PreconditionError("T must be strongly positive (pruned)")
        if not self.T.has_level(self.F):
            raise PreconditionError("F must be a level of T")
        if not is_dense(self.T, self.d):
            raise PreconditionError("T must be d-dense")

    def extends(self, p: "Condition") -> bool:
        """``self <= p``."""
        return self.d.extends(p.d) and self.T.issubtree(p.T)


def _feasible_delta(p: Condition, delta: Fraction) -> bool:
    return all(p.T.relative_measure(s) * (1 - delta) > v for s, v in p.d.values.items())


def choose_delta(p: Condition) -> Fraction:
    """Largest feasible ``delta`` on the coarsest dyadic grid ``i/2**j`` that has one.

    Feasible means ``mu_sigma([T]) * (1 - delta) > d(sigma)`` on all of ``F``,
    i.e. ``delta`` below ``min(1 - d(sigma)/mu_sigma([T]))``.
    """
    limit = min(1 - v / p.T.relative_measure(s) for s, v in p.d.values.items())
    if limit <= 0:
        raise PreconditionError("no feasible delta; T is not d-dense")
    j = 1
    while limit * (1 << j) <= 1:
        j += 1
    scale = 1 << j
    i = math.ceil(limit * scale) - 1
    delta = Fraction(i, scale)
    assert _feasible_delta(p, delta) and not _feasible_delta(p, Fraction(i + 1, scale))
    return delta


def condense(p: Condition, n: int) -> Condition:
    """Move to a deeper level where ``T`` is nearly full above every member.

    With ``eps = delta/(n+2)`` the new level ``F_q`` keeps the nodes of relative
    density ``> 1 - eps``; the least level beyond ``F_p`` at which these still
    carry ``d_p`` (at floor ``1 - delta``) is used.
    """
    if n < 0:
        raise PreconditionError("n must be non-negative")
    delta = choose_delta(p)
    eps = delta / (n + 2)
    lp = p.F.height
    for lq in range(lp + 1, p.T.depth + 1):
        Fq = [t for t in p.T.level(lq).sorted() if p.T.relative_measure(t) > 1 - eps]
        ok = True
        for sigma, floor in p.d.values.items():
            count = sum(1 for t in Fq if t.startswith(sigma))
            if count == 0 or (1 - delta) * Fraction(count, 1 << lq) <= floor / (1 << lp):
                ok = False
                break
        if not ok:
            continue
        Fq_level = LevelSet(Fq, lq)
        Tq = p.T.restrict(Fq)
        q = Condition(Fq_level, Tq, LDF.constant(Fq_level, 1 - delta))
        assert q.extends(p), "condensed condition does not extend p"
        lhs, rhs = condensation_gap(q, n)
        assert lhs < rhs, "condensation inequality failed"
        return q
    raise InsufficientDepth(f"no level of T beyond {lp} satisfies the condensation counts")


def condensation_gap(q: Condition, n: int) -> tuple[Fraction, Fraction]:
    """``max(1 - mu_tau([T_q]))`` and ``min(1 - d_q(tau)) / (n+1)`` over ``F_q``."""
    lhs = max(1 - q.T.relative_measure(t) for t in q.F.members)
    rhs = min(1 - v for v in q.d.values.values()) / (n + 1)
    return Fraction(lhs), Fraction(rhs)


def branch(p: Condition) -> Condition:
    """Pass to the least level where every member of ``F`` has two extensions."""
    for l in range(p.F.height + 1, p.T.depth + 1):
        level = p.T.level(l)
        if all(len(level.above(s)) >= 2 for s in p.F.members):
            q = Condition(level, p.T, dense_ext(p.d, level, p.T))
            assert q.extends(p)
            return q
    raise PreconditionError("T does not branch above every member of F within its depth")

