import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from pathwise.density import (
    LDF,
    Condition,
    branch,
    choose_delta,
    condensation_gap,
    condense,
    dense_ext,
    dense_status,
    is_dense,
)
from pathwise.errors import InsufficientDepth, PreconditionError
from pathwise.generators import random_condition, random_dense_triple, random_pruned_tree
from pathwise.trees import FinTree, LevelSet

F = Fraction
ROOT = LevelSet.root()


def L(*xs):
    return LevelSet(xs)


def naive_status(E, d):
    weak = all(v / 2 ** len(s) <= F(len([t for t in E if t.startswith(s)]), 2 ** len(next(iter(E)))) for s, v in d.values.items())
    slack = min(oracles.rel_measure(s, E) - v for s, v in d.values.items())
    return weak, slack


def naive_extends(e, d):
    for s, v in d.values.items():
        supply = sum((w / 2 ** len(t) for t, w in e.values.items() if t.startswith(s)), F(0))
        if v / 2 ** len(s) > supply:
            return False
    return True


# LDFs


def test_ldf_validation():
    with pytest.raises(PreconditionError):
        LDF(L("0"), {"0": 1})
    with pytest.raises(PreconditionError):
        LDF(L("0", "1"), {"0": F(1, 2)})
    with pytest.raises(PreconditionError):
        LDF(LevelSet([], 1), {})


def test_shift_extends():
    d = LDF(L("0", "1"), {"0": F(1, 4), "1": F(1, 2)})
    assert d.shifted(F(1, 8)).extends(d)
    assert d.extends(d)
    assert not d.extends(d.shifted(F(1, 8)))


@st.composite
def ldf_chains(draw):
    h0 = draw(st.integers(0, 2))
    h1 = h0 + draw(st.integers(0, 2))
    h2 = h1 + draw(st.integers(0, 1))
    vals = st.fractions(0, F(15, 16), max_denominator=16)

    def ldf(h):
        return LDF(LevelSet.full(h), {s: draw(vals) for s in oracles.strings(h)})

    return ldf(h0), ldf(h1), ldf(h2)


@given(ldf_chains())
def test_extension_order(chain):
    a, b, c = chain
    assert a.extends(a)
    assert b.extends(a) == naive_extends(b, a)
    if b.extends(a) and c.extends(b):
        assert c.extends(a)


@given(ldf_chains(), st.integers(0, 3), st.data())
def test_density_monotone_along_extensions(chain, extra, data):
    d, e, _ = chain
    if not e.extends(d):
        return
    h = e.domain.height + extra
    E = data.draw(st.sets(st.sampled_from(oracles.strings(h)), min_size=1))
    E = LevelSet(E, h)
    if dense_status(E, e).weak:
        assert dense_status(E, d).weak
    if is_dense(E, e):
        assert is_dense(E, d)


# density


def test_dense_status_examples():
    d = LDF(ROOT, {"": F(1, 2)})
    assert dense_status(L("00", "01", "10"), d) == (True, F(1, 4))
    assert not dense_status(L("00"), d).weak
    z = LDF(L("0", "1"), {"0": 0, "1": 0})
    assert dense_status(L("00", "10", "11"), z) == (True, F(1, 2))


def test_dense_status_tree_and_mismatch():
    d = LDF(L("0", "1"), {"0": F(1, 4), "1": 0})
    assert dense_status(FinTree.from_leaves(["00", "10"]), d) == (True, F(1, 4))
    assert dense_status(L("00"), d) == (False, None)


@given(st.integers(0, 3), st.data())
def test_dense_status_matches_naive(h, data):
    d = LDF(LevelSet.full(h), {s: data.draw(st.fractions(0, F(7, 8), max_denominator=8)) for s in oracles.strings(h)})
    E = LevelSet.full(h + data.draw(st.integers(0, 2)))
    E = LevelSet(data.draw(st.sets(st.sampled_from(E.sorted()), min_size=1)), E.height)
    st_ = dense_status(E, d)
    if st_.max_slack is None:
        return
    assert (st_.weak, st_.max_slack) == naive_status(E.members, d)


# dense extensions


def test_dense_ext_examples():
    e = dense_ext(LDF(ROOT, {"": F(1, 2)}), L("0", "1"), FinTree.full(2))
    assert e.values == {"0": F(3, 4), "1": F(3, 4)}
    assert F(1, 2) <= (e("0") + e("1")) / 2
    T = FinTree.from_leaves(["00", "10", "11"])
    e = dense_ext(LDF(ROOT, {"": F(1, 4)}), L("0", "1"), T)
    assert e.values == {"0": F(1, 4), "1": F(3, 4)}
    assert F(1, 4) <= (e("0") + e("1")) / 2


def test_dense_ext_zero_floors():
    T = FinTree.full(3)
    d = LDF(L("0", "1"), {"0": 0, "1": 0})
    e = dense_ext(d, LevelSet.full(2), T)
    assert all(v == F(1, 2) for v in e.values.values())
    assert e.extends(d)


def test_dense_ext_preconditions():
    T = FinTree.from_leaves(["00", "10"])
    with pytest.raises(PreconditionError):
        dense_ext(LDF(ROOT, {"": F(1, 2)}), L("0", "1"), T)  # slack 0
    with pytest.raises(PreconditionError):
        dense_ext(LDF(ROOT, {"": 0}), L("0"), T)  # not a level
    with pytest.raises(PreconditionError):
        dense_ext(LDF(ROOT, {"": 0}), L("0"), FinTree.from_leaves(["00", "1"]))


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**6))
def test_dense_ext_postconditions(seed):
    d, E, T = random_dense_triple(random.Random(seed))
    e = dense_ext(d, E, T)
    assert naive_extends(e, d)
    eps = min(T.relative_measure(s) - v for s, v in d.values.items())
    for t in E:
        mu = oracles.tree_density(T.leaves().members, t)
        assert e(t) < mu < e(t) + eps
    assert naive_status(T.leaves().members, e)[1] > 0


# conditions and forcing steps


def test_condition_validation():
    with pytest.raises(PreconditionError):
        Condition(ROOT, FinTree.from_leaves(["00"]), LDF(ROOT, {"": F(1, 2)}))
    with pytest.raises(PreconditionError):
        Condition(L("0"), FinTree.full(2), LDF(L("0"), {"0": 0}))


def test_choose_delta_grid():
    p = Condition(ROOT, FinTree.full(3), LDF(ROOT, {"": F(1, 2)}))
    assert choose_delta(p) == F(1, 4)
    # feasible deltas lie below 1 - d/mu = 3/7; the coarsest grid with one is quarters
    q = seven_eighths()
    assert choose_delta(q) == F(1, 4)
    grid = [F(i, 64) for i in range(64) if all(q.T.relative_measure(s) * (1 - F(i, 64)) > v for s, v in q.d.values.items())]
    assert F(1, 4) in grid and max(grid) == F(27, 64)


def seven_eighths():
    leaves = [s for s in oracles.strings(4) if s not in ("0111", "1111")]
    T = FinTree.from_leaves(leaves)
    F2 = L("0", "1")
    return Condition(F2, T, LDF(F2, {"0": F(1, 2), "1": F(1, 2)}))


def test_condense_full_tree_example():
    p = Condition(ROOT, FinTree.full(3), LDF(ROOT, {"": F(1, 2)}))
    q = condense(p, 3)
    assert q.F == L("0", "1") and q.d.values == {"0": F(3, 4), "1": F(3, 4)}
    assert condensation_gap(q, 3) == (0, F(1, 16))
    assert q.extends(p)


def test_condense_zero_floors():
    T = FinTree.full(3)
    p = Condition(ROOT, T, LDF(ROOT, {"": 0}))
    q = condense(p, 2)
    lhs, rhs = condensation_gap(q, 2)
    assert lhs == 0 < rhs


def test_condense_seven_eighths_example():
    p = seven_eighths()
    assert all(p.T.relative_measure(s) == F(7, 8) for s in ("0", "1"))
    q = condense(p, 1)
    assert q.F.height == 3
    lhs, rhs = condensation_gap(q, 1)
    assert lhs < rhs
    # recompute the gap straight from the leaves
    leaves = q.T.leaves().members
    assert max(1 - oracles.tree_density(leaves, t) for t in q.F) == lhs


def test_condense_insufficient_depth():
    # the leaf level always satisfies the counts, so only a tree with no
    # level below F_p runs out of depth
    F2 = L("0", "1")
    p = Condition(F2, FinTree.full(1), LDF(F2, {"0": F(1, 2), "1": F(1, 2)}))
    with pytest.raises(InsufficientDepth):
        condense(p, 2)
    deeper = Condition(F2, FinTree.full(2), p.d)
    assert condense(deeper, 2).F.height == 2


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([1, 2, 3]))
def test_condense_conclusion(seed, n):
    p = random_condition(random.Random(seed))
    q = condense(p, n)
    leaves = q.T.leaves().members
    lhs = max(1 - oracles.tree_density(leaves, t) for t in q.F)
    rhs = min(1 - v for v in q.d.values.values()) / (n + 1)
    assert lhs < rhs
    assert q.extends(p) and naive_extends(q.d, p.d)


def test_branch_examples():
    p = Condition(ROOT, FinTree.full(2), LDF(ROOT, {"": F(1, 2)}))
    q = branch(p)
    assert q.F == L("0", "1") and q.d == dense_ext(p.d, q.F, p.T)
    p2 = Condition(L("0", "1"), FinTree.full(3), LDF(L("0", "1"), {"0": 0, "1": 0}))
    assert branch(p2).F == LevelSet.full(2)


def test_branch_on_a_path_fails():
    p = Condition(ROOT, FinTree.from_leaves(["010"]), LDF(ROOT, {"": 0}))
    with pytest.raises(PreconditionError):
        branch(p)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_branch_output(seed):
    p = random_condition(random.Random(seed))
    q = branch(p)
    assert q.extends(p) and q.T == p.T
    for s in p.F:
        ext = q.F.above(s)
        assert len(ext) >= 2 and not ext[0].startswith(ext[1]) and not ext[1].startswith(ext[0])


def test_random_pruned_tree_is_pruned():
    rng = random.Random(3)
    for _ in range(20):
        assert random_pruned_tree(rng, rng.randint(0, 5)).is_pruned()
