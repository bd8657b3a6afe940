"""Hitting sets, hitting costs, robustness and the divergence-partition count.

Edges and bases are :class:`~pathwise.trees.LevelSet` values.  The family
``F(Q)`` of an instance is the set of edges ``D`` with ``Q`` a prefix of
``D``, and candidate hitting strings are members of those edges.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping

from .errors import InsufficientDepth, PreconditionError
from .measure import ClopenSet, Dyadic, all_strings, extensions, strings_upto
from .trees import FinTree, LevelSet, level_relation

__all__ = [
    "HittingInstance",
    "WitnessFamily",
    "is_hitting_set",
    "hitting_cost",
    "optimal_hitting_set",
    "hitting_cost_bruteforce",
    "robustness",
    "amplify",
    "cost_tree",
    "TreeFunctionalEntry",
    "sigma_families",
    "DivergenceReport",
    "divergence_partition",
    "counting_inequality",
]


@dataclass(frozen=True)
class HittingInstance:
    family: tuple[LevelSet, ...]
    base: LevelSet

    def __init__(self, family: Iterable[LevelSet], base: LevelSet):
        object.__setattr__(self, "family", tuple(family))
        object.__setattr__(self, "base", base)

    def effective(self) -> list[LevelSet]:
        """Edges extending the base."""
        out = []
        for D in self.family:
            if D.height >= self.base.height and level_relation(self.base, D).is_prefix:
                out.append(D)
        return out

    def with_edge(self, D: LevelSet) -> "HittingInstance":
        return HittingInstance(self.family + (D,), self.base)

    def vertices(self) -> list[str]:
        return sorted({s for D in self.effective() for s in D.members})


def is_hitting_set(V: ClopenSet | Iterable[str], inst: HittingInstance) -> bool:
    """Every edge of ``F(Q)`` has a member whose cylinder lies in ``[V]``."""
    V = V if isinstance(V, ClopenSet) else ClopenSet(V)
    return all(any(V.covers(s) for s in D.members) for D in inst.effective())


def _cost(V: ClopenSet, base: LevelSet) -> Fraction:
    return max((V.relative_measure(t) for t in base.members), default=Fraction(0))


def optimal_hitting_set(inst: HittingInstance) -> tuple[Fraction, ClopenSet]:
    """Least ``max_{tau in Q} mu_tau(V)`` over hitting sets, with a minimiser.

    Branch and bound over one member per unhit edge.  Choosing a member
    ``sigma`` of an edge is never worse than any other way of covering
    ``[sigma]``, so these choices reach the optimum.
    """
    edges = [D.sorted() for D in inst.effective()]
    if not edges:
        return Fraction(0), ClopenSet()
    base = inst.base
    best: list = [Fraction(2), None]
    seen: set[tuple[str, ...]] = set()

    def search(chosen: ClopenSet, pending: list[list[str]]):
        if chosen.generators in seen:
            return
        seen.add(chosen.generators)
        c = _cost(chosen, base)
        if c >= best[0]:
            return
        unhit = [D for D in pending if not any(chosen.covers(s) for s in D)]
        if not unhit:
            best[0], best[1] = c, chosen
            return
        target = min(unhit, key=len)
        rest = [D for D in unhit if D is not target]
        options = sorted(
            ((_cost(chosen | [s], base), s) for s in target),
        )
        for cost_after, s in options:
            if cost_after >= best[0]:
                break
            search(chosen | [s], rest)

    search(ClopenSet(), edges)
    return Dyadic.coerce(best[0]), best[1]


def hitting_cost(inst: HittingInstance) -> Fraction:
    return optimal_hitting_set(inst)[0]


def hitting_cost_bruteforce(inst: HittingInstance) -> Fraction:
    """Reference answer: every subset of the edge vertices, evaluated pointwise."""
    edges = inst.effective()
    if not edges:
        return Fraction(0)
    verts = inst.vertices()
    depth = max(D.height for D in edges)
    points = {x: i for i, x in enumerate(all_strings(depth))}

    def mask(sigma: str) -> int:
        m = 0
        for x in extensions(sigma, depth):
            m |= 1 << points[x]
        return m

    vmask = [mask(v) for v in verts]
    edge_masks = [[mask(s) for s in D.members] for D in edges]
    base = [(mask(t), depth - len(t)) for t in inst.base.members]
    best = None
    covers = [0] * (1 << len(verts))
    for subset in range(1, 1 << len(verts)):
        low = subset & -subset
        covers[subset] = covers[subset ^ low] | vmask[low.bit_length() - 1]
    for cover in covers:
        if not all(any(m & ~cover == 0 for m in ms) for ms in edge_masks):
            continue
        cost = max(Fraction(bin(cover & tm).count("1"), 1 << free) for tm, free in base)
        if best is None or cost < best:
            best = cost
    return best


@dataclass(frozen=True)
class WitnessFamily:
    """Finite stand-in for a closed class of trees seen through its witnesses."""

    base: LevelSet
    witnesses: tuple[FinTree, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "witnesses", tuple(self.witnesses))
        for W in self.witnesses:
            if not W.has_level(self.base):
                raise PreconditionError("base is not a level of every witness")

    def robustness(self) -> Dyadic:
        return max((robustness(self.base, W) for W in self.witnesses), default=Dyadic(0))

    def best_witness(self) -> FinTree | None:
        if not self.witnesses:
            return None
        return max(self.witnesses, key=lambda W: robustness(self.base, W))


def robustness(Q: LevelSet, W: FinTree) -> Dyadic:
    """``min_{tau in Q} mu_tau([W])``: the best ``q`` with ``Q`` q-extendible in ``W``."""
    if not W.is_pruned():
        raise PreconditionError("witness tree must be pruned")
    if not W.has_level(Q):
        raise PreconditionError("Q is not a level of W")
    return min(W.relative_measure(t) for t in Q.members)


def amplify(Q: LevelSet, W: FinTree, eps) -> tuple[LevelSet, FinTree]:
    """Two dense extensions per member of ``Q`` at the least possible level.

    Returns ``(Q', W')`` with ``Q`` split-extended by ``Q'`` and ``W'`` the
    restriction of ``W`` to ``Q'``, so ``W'`` witnesses robustness ``> 1 - eps``.
    """
    eps = Fraction(eps)
    if not 0 < eps < 1:
        raise PreconditionError("eps must lie in (0, 1)")
    robustness(Q, W)
    for n in range(Q.height + 1, W.depth + 1):
        level = W.level(n)
        chosen = []
        for t in Q.sorted():
            dense = [s for s in level.above(t) if W.relative_measure(s) > 1 - eps]
            if len(dense) < 2:
                break
            dense.sort(key=lambda s: (-W.relative_measure(s), s))
            chosen.extend(dense[:2])
        else:
            Qp = LevelSet(chosen, n)
            Wp = W.restrict(Qp.members)
            assert level_relation(Q, Qp).is_splitting
            assert robustness(Qp, Wp) > 1 - eps
            return Qp, Wp
    raise InsufficientDepth("no level of W splits every member of Q into dense extensions")


def cost_tree(costs: Mapping[str, Fraction] | Callable[[str], Fraction], q, depth: int) -> FinTree:
    """Strings of length ``<= depth`` with cost ``> 1 - q``, closed under prefixes."""
    q = Fraction(q)
    if not 0 < q < 1:
        raise PreconditionError("q must lie in (0, 1)")
    lookup = costs if callable(costs) else (lambda s: costs.get(s, Fraction(0)))
    return FinTree.from_leaves(s for s in strings_upto(depth) if lookup(s) > 1 - q)


@dataclass(frozen=True)
class TreeFunctionalEntry:
    """``Phi(D; k)`` converged at ``stage`` with output ``output`` (strings of length ``k``)."""

    tree: LevelSet
    stage: int
    output: frozenset

    def __init__(self, tree: LevelSet, stage: int, output: Iterable[str]):
        object.__setattr__(self, "tree", tree)
        object.__setattr__(self, "stage", stage)
        object.__setattr__(self, "output", frozenset(output))


def sigma_families(
    entries: Iterable[TreeFunctionalEntry], Q: LevelSet, k: int, s: int
) -> dict[str, HittingInstance]:
    """``sigma -> {D : Q < D, sigma in Phi(D; k)[s]}`` for every ``sigma`` in ``2**k``."""
    fams: dict[str, list[LevelSet]] = {sigma: [] for sigma in all_strings(k)}
    for e in entries:
        if e.stage > s or e.tree.height < Q.height or e.tree == Q:
            continue
        if not level_relation(Q, e.tree).is_prefix:
            continue
        for sigma in e.output:
            if len(sigma) == k:
                fams[sigma].append(e.tree)
    return {sigma: HittingInstance(D, Q) for sigma, D in fams.items()}


def counting_inequality(k: int, e: int, n: int) -> tuple[int, int, bool]:
    """``2**(k-e-n-1) + 2**n * 2**(k-e-n-2)`` against ``2**(k-e)``."""
    if k <= e + n + 2:
        raise PreconditionError("need k > e + n + 2")
    lhs = (1 << (k - e - n - 1)) + (1 << n) * (1 << (k - e - n - 2))
    rhs = 1 << (k - e)
    return lhs, rhs, lhs < rhs


@dataclass
class DivergenceReport:
    k: int
    e: int
    n: int
    threshold: Fraction
    block_size: int
    G: list[str]
    D: dict[str, list[str]]
    heavy_mass: dict[str, Dyadic]
    light_mass: dict[str, Dyadic]
    hypothesis: dict[str, tuple[Fraction, Fraction, bool]]
    complement_size: int
    union_size: int
    bound: int
    limit: int
    count_ok: bool

    def to_json(self) -> dict:
        from .io import format_rational

        return {
            "k": self.k,
            "e": self.e,
            "n": self.n,
            "threshold": format_rational(self.threshold),
            "block_size": self.block_size,
            "G": self.G,
            "D": self.D,
            "heavy_mass": {t: format_rational(v) for t, v in self.heavy_mass.items()},
            "light_mass": {t: format_rational(v) for t, v in self.light_mass.items()},
            "mass_hypothesis": {
                t: {"lhs": format_rational(a), "rhs": format_rational(b), "pass": ok}
                for t, (a, b, ok) in self.hypothesis.items()
            },
            "count": {
                "lhs": self.union_size,
                "complement": self.complement_size,
                "bound": self.bound,
                "limit": self.limit,
                "pass": self.count_ok,
            },
        }


def _best_block(groups: dict[frozenset, int], m: int, universe: list[str]):
    """Lexicographically least ``D`` of size ``m`` maximising the weight of the groups inside it."""
    items = sorted(((S, w) for S, w in groups.items() if S and len(S) <= m), key=lambda it: (-it[1], sorted(it[0])))
    suffix = [0] * (len(items) + 1)
    for i in range(len(items) - 1, -1, -1):
        suffix[i] = suffix[i + 1] + items[i][1]
    best = [-1]
    unions: set[frozenset] = set()

    def rec(i: int, union: frozenset, w: int):
        if w + suffix[i] < best[0]:
            return
        if i == len(items):
            if w > best[0]:
                best[0] = w
                unions.clear()
            if w == best[0]:
                unions.add(union)
            return
        S, ws = items[i]
        joined = union | S
        if len(joined) <= m:
            rec(i + 1, joined, w + ws)
        rec(i + 1, union, w)

    rec(0, frozenset(), 0)

    def weight(D: set[str]) -> int:
        return sum(w for S, w in groups.items() if S <= D)

    candidates = []
    for U in unions:
        D = set(U)
        for sigma in universe:
            if len(D) >= m:
                break
            D.add(sigma)
        candidates.append((-weight(D), sorted(D)))
    return min(candidates)[1]


def divergence_partition(
    k: int,
    e: int,
    n: int,
    Q: LevelSet,
    H: Mapping[tuple[str, str], ClopenSet],
    threshold=None,
    witness: FinTree | None = None,
) -> DivergenceReport:
    """Light oracles ``G``, heavy points ``M_tau`` and blocks ``D_tau`` for one stage.

    ``H[(sigma, tau)]`` is a hitting set inside ``[tau]``; missing pairs are
    empty.  ``G`` collects the ``sigma`` whose hitting sets all have relative
    measure below ``threshold`` (default ``2**(-e-n-4)``).  A point is heavy
    for ``tau`` when more than ``2**(k-e-n-2)`` hitting sets contain it.
    """
    if k <= e + n + 2:
        raise PreconditionError("need k > e + n + 2")
    if len(Q) != 1 << n:
        raise PreconditionError(f"|Q| must be 2**{n}")
    sigmas = all_strings(k)
    for (sigma, tau), S in H.items():
        if len(sigma) != k or tau not in Q:
            raise PreconditionError(f"H entry ({sigma!r}, {tau!r}) outside 2**k x Q")
        if not S.issubset(ClopenSet([tau])):
            raise PreconditionError(f"H({sigma!r}, {tau!r}) is not inside [{tau}]")
    threshold = Fraction(1, 1 << (e + n + 4)) if threshold is None else Fraction(threshold)
    m = 1 << (k - e - n - 2)
    empty = ClopenSet()

    def h(sigma, tau):
        return H.get((sigma, tau), empty)

    G = [s for s in sigmas if max(h(s, t).relative_measure(t) for t in Q.members) < threshold]
    heavy, light, hyp, blocks = {}, {}, {}, {}
    mass_bound = Fraction(1 << (k - e - n), 1 << 4)
    for tau in Q.sorted():
        active = [(s, h(s, tau)) for s in sigmas if h(s, tau)]
        total = sum((S.relative_measure(tau) for _, S in active), Fraction(0))
        hyp[tau] = (total, mass_bound, total < mass_bound)
        depth = max([len(tau)] + [S.max_length for _, S in active])
        if witness is not None:
            depth = max(depth, witness.depth)
            paths = witness.paths()
        free = depth - len(tau)
        groups: dict[frozenset, int] = {}
        n_heavy = n_light = 0
        for x in extensions(tau, depth):
            S = frozenset(s for s, V in active if V.contains_point_prefix(x))
            if len(S) > m:
                n_heavy += 1
                continue
            n_light += 1
            if witness is None or paths.contains_point_prefix(x):
                groups[S] = groups.get(S, 0) + 1
        heavy[tau] = Dyadic(n_heavy, 1 << free)
        light[tau] = Dyadic(n_light, 1 << free)
        blocks[tau] = _best_block(groups, m, sigmas)
    outside = set(sigmas) - set(G)
    union = outside.union(*map(set, blocks.values()))
    bound, limit, _ = counting_inequality(k, e, n)
    return DivergenceReport(
        k, e, n, threshold, m, G, blocks, heavy, light, hyp,
        len(outside), len(union), bound, limit,
        len(union) <= bound < limit,
    )
