"""Seeded random instances for the property suites and the CLI sweeps.

Every generator takes a ``random.Random`` so a corpus is fixed by its seed.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .complexity import PrefixMachine
from .density import LDF, Condition
from .expander import ExpanderEntry, StagedExpander
from .hitting import HittingInstance
from .hypergraph import StringHypergraph
from .measure import ClopenSet, all_strings, extensions
from .trees import FinTree, LevelSet

ARITIES = (1, 2, 4, 8, 16)


def random_bits(rng: random.Random, length: int) -> str:
    return "".join(rng.choice("01") for _ in range(length))


def random_weight(rng: random.Random, max_den: int = 16, positive: bool = True) -> Fraction:
    q = rng.randint(1, max_den)
    return Fraction(rng.randint(1 if positive else 0, q), q)


def random_antichain(rng: random.Random, max_depth: int, split: float = 0.6) -> list[str]:
    """Leaves of a random binary splitting of the root, depth at most ``max_depth``."""
    leaves, frontier = [], [""]
    while frontier:
        s = frontier.pop()
        if len(s) < max_depth and (s == "" or rng.random() < split):
            frontier += [s + "0", s + "1"]
        else:
            leaves.append(s)
    return sorted(leaves)


def random_hypergraph(
    rng: random.Random, max_depth: int = 8, max_edges: int = 12, max_k: int = 8, prefix_free: bool | None = None
) -> tuple[StringHypergraph, int]:
    """A ``k``-fat hypergraph together with its ``k``.

    Half of the instances (unless ``prefix_free`` is forced) draw every
    vertex from one antichain; the rest mix lengths freely so that some
    vertices extend others.
    """
    if prefix_free is None:
        prefix_free = rng.random() < 0.5
    k = rng.randint(1, max_k)
    if prefix_free:
        pool = random_antichain(rng, max_depth, split=0.75)
        while len(pool) < k:
            pool = random_antichain(rng, max_depth, split=0.85)
    else:
        size = rng.randint(k, max(k, 24))
        pool = set()
        while len(pool) < size:
            pool.add(random_bits(rng, rng.randint(1, max_depth)))
        pool = sorted(pool)
    edges = []
    for _ in range(rng.randint(1, max_edges)):
        members = rng.sample(pool, rng.randint(k, min(len(pool), k + 3)))
        edges.append((members, random_weight(rng)))
    return StringHypergraph(edges), k


def random_level(rng: random.Random, height: int, size: int | None = None) -> LevelSet:
    universe = all_strings(height)
    size = rng.randint(1, len(universe)) if size is None else min(size, len(universe))
    return LevelSet(rng.sample(universe, size), height)


def random_expander(
    rng: random.Random,
    max_oracle_depth: int = 4,
    max_output_depth: int = 5,
    arities=ARITIES,
    max_stage: int = 3,
) -> StagedExpander:
    """Entries at every arity in ``arities``; outputs are drawn partly from a
    shared pool so that distinct oracles often agree."""
    entries = []
    for k in arities:
        low = max(1, (k - 1).bit_length())
        pool = []
        for _ in range(rng.randint(1, 3)):
            L = rng.randint(low, max_output_depth)
            pool.append(random_level(rng, L, rng.randint(k, min(1 << L, k + 4))))
        oracles = random_antichain(rng, max_oracle_depth, split=0.55)
        for i, sigma in enumerate(oracles):
            if i and rng.random() < 0.2:
                continue
            out = rng.choice(pool)
            entries.append(ExpanderEntry(sigma, k, rng.randint(0, max_stage), out))
    return StagedExpander(entries)


def random_machine(rng: random.Random, max_entries: int = 32, max_len: int = 8) -> PrefixMachine:
    domain = random_antichain(rng, max_len, split=rng.choice([0.5, 0.7, 0.85]))
    rng.shuffle(domain)
    domain = domain[: rng.randint(1, max_entries)]
    table = {}
    for p in domain:
        table[p] = random_bits(rng, rng.randint(0, max_len))
    return PrefixMachine(table)


def random_hitting_instance(rng: random.Random, max_vertices: int = 12) -> HittingInstance:
    """Edges mostly extend the base ``Q``; a few decoys do not."""
    qh = rng.randint(0, 2)
    Q = random_level(rng, qh, rng.randint(1, min(2, 1 << qh)))
    budget = rng.randint(1, max_vertices)
    used: set[str] = set()
    family = []
    for _ in range(rng.randint(0, 6)):
        h = qh + rng.randint(1, 3)
        if rng.random() < 0.15:
            family.append(random_level(rng, h, rng.randint(1, 3)))
            continue
        members = [t + random_bits(rng, h - qh) for t in Q.members]
        extra = [rng.choice(Q.sorted()) + random_bits(rng, h - qh) for _ in range(rng.randint(0, 2))]
        members = set(members + extra)
        if len(used | members) > budget:
            continue
        used |= members
        family.append(LevelSet(members, h))
    return HittingInstance(family, Q)


def random_pruned_tree(rng: random.Random, depth: int, keep: float = 0.6) -> FinTree:
    level = [s for s in all_strings(depth) if rng.random() < keep]
    if not level:
        level = [random_bits(rng, depth)]
    return FinTree.from_leaves(level)


def random_ldf_below(rng: random.Random, T: FinTree, F: LevelSet) -> LDF:
    """Floors strictly under the densities of ``T`` above ``F``."""
    vals = {}
    for s in F.members:
        q = rng.randint(1, 12)
        vals[s] = T.relative_measure(s) * Fraction(rng.randint(0, q - 1), q)
    return LDF(F, vals)


def random_dense_triple(rng: random.Random, max_depth: int = 6) -> tuple[LDF, LevelSet, FinTree]:
    depth = rng.randint(1, max_depth)
    T = random_pruned_tree(rng, depth, keep=rng.choice([0.3, 0.6, 0.9]))
    h0 = rng.randint(0, depth)
    h1 = rng.randint(h0, depth)
    d = random_ldf_below(rng, T, T.level(h0))
    return d, T.level(h1), T


def random_condition(rng: random.Random, max_height: int = 2, tail: int = 3) -> Condition:
    """A condition whose tree is full below some level, so condensing and
    branching always find a level within depth."""
    lp = rng.randint(0, max_height)
    l0 = lp + rng.randint(0, 2)
    top = [s for s in all_strings(l0) if rng.random() < 0.7] or [random_bits(rng, l0)]
    depth = l0 + rng.randint(1, tail)
    T = FinTree.from_leaves(x for s in top for x in extensions(s, depth))
    F = T.level(lp)
    return Condition(F, T, random_ldf_below(rng, T, F))


def random_h_family(rng: random.Random):
    """``(k, e, n, Q, H)`` with ``sum_sigma mu_tau(H(sigma, tau)) < 2**(k-e-n-4)`` at every ``tau``."""
    k, e, n = rng.choice([(4, 0, 1), (5, 0, 1), (5, 1, 1), (5, 0, 2), (6, 1, 1), (6, 0, 2)])
    height = n + rng.randint(0, 1)
    Q = random_level(rng, height, 1 << n)
    bound = Fraction(1 << (k - e - n), 16)
    sigmas = all_strings(k)
    H = {}
    for tau in Q.sorted():
        total = Fraction(0)
        # half the families pile their sets onto one small cylinder
        hot = tau + random_bits(rng, 3) if rng.random() < 0.5 else None
        for sigma in rng.sample(sigmas, rng.randint(0, 8)):
            if hot is not None:
                gens = [hot + random_bits(rng, rng.randint(0, 2))]
            else:
                extra = rng.randint(1, 4)
                gens = [tau + random_bits(rng, extra) for _ in range(rng.randint(1, 3))]
            S = ClopenSet(gens)
            mass = S.relative_measure(tau)
            if total + mass < bound:
                H[(sigma, tau)] = S
                total += mass
    return k, e, n, Q, H
