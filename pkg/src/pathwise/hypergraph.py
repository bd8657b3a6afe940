"""Weighted string-hypergraphs, their kernels and light vertices."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, NamedTuple

from .errors import PreconditionError
from .measure import ClopenSet, check_bits, prefixes

__all__ = [
    "StringHypergraph",
    "KernelGraph",
    "FatnessReport",
    "kernel",
    "fatness_sum",
    "light_vertex",
]

Edge = tuple[frozenset, Fraction]


def _edge_key(edge: Edge):
    return (sorted(edge[0]), edge[1])


class StringHypergraph:
    """Vertices are bit strings weighted ``2**-|sigma|``; edges carry rational weights.

    Edges form a list, so repeated vertex sets are allowed.
    """

    def __init__(self, edges: Iterable[tuple[Iterable[str], object]], vertices: Iterable[str] | None = None):
        es: list[Edge] = []
        for members, weight in edges:
            members = frozenset(check_bits(m) for m in members)
            weight = Fraction(weight)
            if not members:
                raise PreconditionError("empty edge")
            if weight < 0:
                raise PreconditionError("negative edge weight")
            es.append((members, weight))
        used = frozenset().union(*(m for m, _ in es)) if es else frozenset()
        vs = used if vertices is None else frozenset(check_bits(v) for v in vertices)
        if not used <= vs:
            raise PreconditionError("edge vertices missing from the vertex set")
        self.vertices: frozenset[str] = vs
        self.edges: tuple[Edge, ...] = tuple(es)

    def __repr__(self):
        return f"{type(self).__name__}(edges={[(sorted(m), str(w)) for m, w in self.edges]!r})"

    @property
    def total_weight(self) -> Fraction:
        return sum((w for _, w in self.edges), Fraction(0))

    def is_fat(self, k: int) -> bool:
        return all(len(m) >= k for m, _ in self.edges)

    def ewt(self, v: str) -> Fraction:
        """Total weight of the edges containing ``v``."""
        return sum((w for m, w in self.edges if v in m), Fraction(0))

    def ewt_sum(self) -> Fraction:
        return sum((len(m) * w for m, w in self.edges), Fraction(0))

    def vertex_clopen(self) -> ClopenSet:
        return ClopenSet(self.vertices)

    def edge_map(self) -> dict[frozenset, Fraction]:
        """Edges with equal vertex sets merged."""
        out: dict[frozenset, Fraction] = {}
        for m, w in self.edges:
            out[m] = out.get(m, Fraction(0)) + w
        return out

    def prefix_weights(self) -> dict[str, Fraction]:
        """``tau -> weight of the edges with a vertex extending tau``, over all vertex prefixes."""
        out: dict[str, Fraction] = {}
        for members, w in self.edges:
            for p in {p for m in members for p in prefixes(m)}:
                out[p] = out.get(p, Fraction(0)) + w
        return out

    def weight_above(self, tau: str) -> Fraction:
        return sum((w for m, w in self.edges if any(s.startswith(tau) for s in m)), Fraction(0))


class KernelGraph(StringHypergraph):
    """The kernel of a string-hypergraph, remembering where each edge came from.

    ``provenance[i]`` is the index of the kernel edge that source edge ``i``
    collapsed onto.  Edge-weights are transferred from the source: the
    edge-weight of a kernel vertex is the sum of the source edge-weights of
    the vertices extending it.  When two members of one source edge collapse
    onto the same kernel vertex this counts that edge once per member, which
    is what keeps the fatness inequality valid for kernels.
    """

    def __init__(self, edges, vertices, provenance, transfer, source):
        super().__init__(edges, vertices)
        self.provenance: tuple[int, ...] = tuple(provenance)
        self._transfer: dict[str, Fraction] = dict(transfer)
        self.source: StringHypergraph = source

    def ewt(self, v: str) -> Fraction:
        return self._transfer.get(v, Fraction(0))

    def ewt_sum(self) -> Fraction:
        return sum(self._transfer.values(), Fraction(0))

    def set_ewt(self, v: str) -> Fraction:
        """Edge-weight counting each kernel edge once."""
        return StringHypergraph.ewt(self, v)

    def same_graph(self, other: "KernelGraph") -> bool:
        return (
            self.vertices == other.vertices
            and sorted(self.edges, key=_edge_key) == sorted(other.edges, key=_edge_key)
            and self._transfer == other._transfer
        )


def kernel(H: StringHypergraph) -> KernelGraph:
    """Collapse vertices onto the prefix-minimal ones and merge edges that coincide."""
    if isinstance(H, KernelGraph):
        return H
    minimal = frozenset(ClopenSet(H.vertices).generators)
    root = {}
    for v in H.vertices:
        root[v] = next(p for p in prefixes(v) if p in minimal)
    collapsed = [frozenset(root[s] for s in m) for m, _ in H.edges]
    merged: dict[frozenset, Fraction] = {}
    for star, (_, w) in zip(collapsed, H.edges):
        merged[star] = merged.get(star, Fraction(0)) + w
    order = sorted(merged, key=sorted)
    index = {e: i for i, e in enumerate(order)}
    transfer: dict[str, Fraction] = {v: Fraction(0) for v in minimal}
    for m, w in H.edges:
        for s in m:
            transfer[root[s]] += w
    return KernelGraph(
        [(e, merged[e]) for e in order],
        minimal,
        [index[star] for star in collapsed],
        transfer,
        H,
    )


class FatnessReport(NamedTuple):
    sum: Fraction
    bound: Fraction
    holds: bool


def fatness_sum(H: StringHypergraph, k: int) -> FatnessReport:
    """``sum of ewt over vertices`` against ``k * delta``.

    ``H`` must be ``k``-fat or the kernel of a ``k``-fat hypergraph.
    """
    if k <= 0:
        raise PreconditionError("k must be positive")
    fat = H.source.is_fat(k) if isinstance(H, KernelGraph) else H.is_fat(k)
    if not fat:
        raise PreconditionError(f"hypergraph is neither {k}-fat nor the kernel of one")
    total = H.ewt_sum()
    bound = k * H.total_weight
    return FatnessReport(total, bound, total >= bound)


def light_vertex(H: StringHypergraph, k: int, threshold=None) -> str:
    """Shortest, then lexicographically least, vertex prefix ``tau`` with
    ``weight_above(tau) >= threshold * k * 2**-|tau|``.

    ``threshold`` defaults to the total edge weight; a smaller positive
    threshold (as the covering loop uses) only makes the search easier.
    """
    if k <= 0:
        raise PreconditionError("k must be positive")
    if not H.is_fat(k):
        raise PreconditionError(f"hypergraph is not {k}-fat")
    delta = H.total_weight
    if delta <= 0:
        raise PreconditionError("total edge weight must be positive")
    threshold = delta if threshold is None else Fraction(threshold)
    if threshold <= 0:
        raise PreconditionError("threshold must be positive")
    weights = H.prefix_weights()
    for tau in sorted(weights, key=lambda s: (len(s), s)):
        if weights[tau] * (1 << len(tau)) >= threshold * k:
            return tau
    raise RuntimeError("no light vertex found although H is k-fat with positive weight")
