"""Naive reference computations used to cross-check the library.

Everything here works pointwise on explicit string enumerations and
shares no code with the package beyond plain ``str`` handling.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product


def strings(n):
    return ["".join(p) for p in product("01", repeat=n)]


def strings_upto(n):
    return [s for m in range(n + 1) for s in strings(m)]


def point_set(gens, depth):
    """Depth-``depth`` strings lying in the union of the cylinders."""
    gens = list(gens)
    return {x for x in strings(depth) if any(x.startswith(g) for g in gens)}


def measure(gens, depth=None):
    gens = list(gens)
    if not gens:
        return Fraction(0)
    depth = max(len(g) for g in gens) if depth is None else depth
    return Fraction(len(point_set(gens, depth)), 2**depth)


def rel_measure(tau, gens):
    gens = list(gens)
    depth = max([len(tau)] + [len(g) for g in gens])
    pts = [x for x in point_set(gens, depth) if x.startswith(tau)]
    return Fraction(len(pts), 2 ** (depth - len(tau)))


def minimal(strs):
    # in lexicographic order every string follows its shortest prefix in the
    # set with only that prefix's extensions in between
    out, last = set(), None
    for s in sorted(set(strs)):
        if last is None or not s.startswith(last):
            out.add(s)
            last = s
    return out


def kernel(edges, vertices=None):
    """(vertex set, {frozenset: weight}) straight from the definition."""
    vs = set(vertices) if vertices is not None else {v for m, _ in edges for v in m}
    star = minimal(vs)
    root = {v: next(p for p in star if v.startswith(p)) for v in vs}
    out = {}
    for m, w in edges:
        e = frozenset(root[v] for v in m)
        out[e] = out.get(e, Fraction(0)) + Fraction(w)
    return star, out


def g(edges, tau):
    return sum((Fraction(w) for m, w in edges if any(v.startswith(tau) for v in m)), Fraction(0))


def light_vertex(edges, k):
    delta = sum(Fraction(w) for _, w in edges)
    depth = max(len(v) for m, _ in edges for v in m)
    for tau in strings_upto(depth):
        if g(edges, tau) >= delta * k / 2 ** len(tau):
            return tau
    return None


def kolmogorov(table, sigma):
    lens = [len(p) for p, o in table.items() if o == sigma]
    return min(lens) if lens else float("inf")


def hitting_cost(family, base):
    """Minimum over all subsets of all strings below the edges' depth."""
    eff = [D for D in family if _extends(base, D)]
    if not eff:
        return Fraction(0)
    depth = max(len(next(iter(D))) for D in eff)
    qh = len(next(iter(base)))
    cands = sorted({s for t in base for s in strings_upto(depth) if s.startswith(t) and len(s) > qh} | set(base))
    best = None
    for mask in range(1 << len(cands)):
        V = [c for i, c in enumerate(cands) if mask >> i & 1]
        pts = point_set(V, depth)
        if all(any(point_set([s], depth) <= pts for s in D) for D in eff):
            cost = max(Fraction(sum(1 for x in pts if x.startswith(t)), 2 ** (depth - qh)) for t in base)
            best = cost if best is None else min(best, cost)
    return best


def _extends(base, D):
    h = len(next(iter(base)))
    return {d[:h] for d in D} == set(base) and len(next(iter(D))) >= h


def tree_density(leaves, sigma):
    leaves = list(leaves)
    depth = len(leaves[0])
    return Fraction(sum(1 for x in leaves if x.startswith(sigma)), 2 ** (depth - len(sigma)))


def covering(entries, k, eps):
    """Re-run of the covering loop on raw ``(oracle, arity, stage, outputs)`` tuples.

    Returns the enumerated vertices in order and the final free mass.
    """
    entries = [e for e in entries if e[1] == k]
    delta = 1 / (k * Fraction(eps))
    V = []

    def free(out):
        return all(not any(t.startswith(v) for v in V) for t in out)

    def conv(s):
        return [(frozenset(out), Fraction(1, 2 ** len(o))) for o, _, st, out in entries if st <= s]

    stages = sorted({e[2] for e in entries})
    for s in stages:
        while True:
            live = [(out, w) for out, w in conv(s) if free(out)]
            if sum((w for _, w in live), Fraction(0)) <= delta:
                break
            depth = max(len(t) for out, _ in live for t in out)
            for tau in strings_upto(depth):
                if g(live, tau) * 2 ** len(tau) >= delta * k:
                    V.append(tau)
                    break
    last = stages[-1] if stages else 0
    D = sum((w for out, w in conv(last) if free(out)), Fraction(0))
    return V, D


def antichains(depth):
    """Every prefix-free set of strings of length at most ``depth``."""

    def below(node, left):
        if left == 0:
            return [(), (node,)]
        out = [(node,)]
        for a in below(node + "0", left - 1):
            for b in below(node + "1", left - 1):
                out.append(a + b)
        return out

    return below("", depth)
