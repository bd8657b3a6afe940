"""Exact, desk-scale versions of the finite constructions behind
pathwise-random trees: clopen measure arithmetic, string-hypergraph
kernels, the covering enumeration, hitting costs and density forcing."""

from .complexity import PrefixMachine, deficiency, deficiency_class, kolmogorov, test_deficiency_bound
from .density import LDF, Condition, branch, condense, dense_ext, dense_status, is_dense
from .errors import InsufficientDepth, ParseError, PreconditionError
from .expander import ExpanderEntry, StagedExpander, covering_enumerate, difference_test, expander_hypergraph
from .hitting import (
    HittingInstance,
    WitnessFamily,
    cost_tree,
    divergence_partition,
    hitting_cost,
    is_hitting_set,
    robustness,
)
from .hypergraph import KernelGraph, StringHypergraph, fatness_sum, kernel, light_vertex
from .measure import ClopenSet, Dyadic, concat_power, measure, relative_measure
from .trees import FinTree, LevelSet, level_relation, tail, tail_search, van_lambalgen

__version__ = "0.1.0"

__all__ = [
    "ClopenSet", "Condition", "Dyadic", "ExpanderEntry", "FinTree", "HittingInstance",
    "InsufficientDepth", "KernelGraph", "LDF", "LevelSet", "ParseError", "PreconditionError",
    "PrefixMachine", "StagedExpander", "StringHypergraph", "WitnessFamily",
    "branch", "concat_power", "condense", "cost_tree", "covering_enumerate", "deficiency",
    "deficiency_class", "dense_ext", "dense_status", "difference_test", "divergence_partition",
    "expander_hypergraph", "fatness_sum", "hitting_cost", "is_dense", "is_hitting_set", "kernel",
    "kolmogorov", "level_relation", "light_vertex", "measure", "relative_measure", "robustness",
    "tail", "tail_search", "test_deficiency_bound", "van_lambalgen",
]
