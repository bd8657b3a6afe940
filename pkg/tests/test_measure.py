import copy
import itertools
import pickle
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from pathwise.errors import PreconditionError
from pathwise.measure import (
    ClopenSet,
    Dyadic,
    all_strings,
    concat_power,
    is_prefix_free,
    measure,
    relative_measure,
    strings_upto,
)

bits = st.text(alphabet="01", max_size=6)
gen_sets = st.lists(bits, max_size=6)


def prefix_free_sets(max_len=4):
    return gen_sets.map(lambda xs: sorted(oracles.minimal(x[:max_len] for x in xs)))


# measure


@pytest.mark.parametrize(
    "gens, expected",
    [(["0", "1"], 1), (["0", "01"], Fraction(1, 2)), (["00", "01", "10"], Fraction(3, 4)), ([], 0)],
)
def test_measure_examples(gens, expected):
    assert measure(gens) == expected
    assert measure(gens) == oracles.measure(gens)


def test_measure_is_dyadic_and_formatted():
    m = measure(["00", "01", "10"])
    assert isinstance(m, Dyadic)
    assert str(m) == "3/2^2"
    assert str(Dyadic(0)) == "0/2^0"


@pytest.mark.parametrize(
    "tau, gens, expected",
    [("0", ["00"], Fraction(1, 2)), ("1", ["0"], 0), ("", ["0", "1"], 1), ("01", ["0"], 1)],
)
def test_relative_measure_examples(tau, gens, expected):
    assert relative_measure(tau, gens) == expected == oracles.rel_measure(tau, gens)


@given(gen_sets)
def test_measure_matches_pointwise_count(gens):
    assert measure(gens) == oracles.measure(gens)
    assert 0 <= measure(gens) <= 1


@given(bits, gen_sets)
def test_relative_measure_matches_pointwise_count(tau, gens):
    assert relative_measure(tau, gens) == oracles.rel_measure(tau, gens)


@given(gen_sets, gen_sets)
def test_inclusion_exclusion(a, b):
    V, W = ClopenSet(a), ClopenSet(b)
    assert (V | W).measure() + (V & W).measure() == V.measure() + W.measure()


@given(gen_sets, gen_sets)
def test_set_operations_pointwise(a, b):
    V, W = ClopenSet(a), ClopenSet(b)
    depth = max([V.max_length, W.max_length, 0])
    pv, pw = oracles.point_set(V, depth), oracles.point_set(W, depth)
    assert oracles.point_set((V & W), depth) == pv & pw
    assert oracles.point_set((V | W), depth) == pv | pw
    assert oracles.point_set((V - W), depth) == pv - pw
    assert oracles.point_set(V.complement(), depth) == set(oracles.strings(depth)) - pv


@given(gen_sets)
def test_minimisation_is_a_fixpoint(gens):
    V = ClopenSet(gens)
    assert ClopenSet(V.generators) == V
    assert set(V.generators) == oracles.minimal(gens)
    assert is_prefix_free(V.generators)


@given(gen_sets, gen_sets)
def test_same_points_and_subset(a, b):
    V, W = ClopenSet(a), ClopenSet(b)
    depth = max([V.max_length, W.max_length, 0])
    pv, pw = oracles.point_set(V, depth), oracles.point_set(W, depth)
    assert V.same_points(W) == (pv == pw)
    assert V.issubset(W) == (pv <= pw)


def test_generators_not_merged_into_parent():
    V = ClopenSet(["00", "01"])
    assert V.generators == ("00", "01")
    assert V.frees("0") and not V.frees("00")
    assert V.same_points(ClopenSet(["0"]))
    assert V.covers("0")


def test_refine_rejects_shallow_depth():
    with pytest.raises(PreconditionError):
        ClopenSet(["001"]).refine(2)
    assert ClopenSet(["0"]).refine(2) == {"00", "01"}


def test_bits_are_checked():
    with pytest.raises(ValueError):
        ClopenSet(["012"])


# dyadics


def test_dyadic_rejects_other_denominators():
    with pytest.raises(ValueError):
        Dyadic(1, 3)
    assert Dyadic.of(3, 2) == Fraction(3, 4)
    assert Dyadic.of(3, 2).exponent == 2


def test_dyadic_closure():
    a, b = Dyadic(1, 4), Dyadic(3, 8)
    assert isinstance(a + b, Dyadic) and a + b == Fraction(5, 8)
    assert isinstance(a * b, Dyadic) and isinstance(a - 1, Dyadic)
    assert isinstance(a**3, Dyadic)
    assert not isinstance(a + Fraction(1, 3), Dyadic)


def test_dyadic_survives_copy_and_pickle():
    a = Dyadic(5, 16)
    for b in (copy.copy(a), copy.deepcopy(a), pickle.loads(pickle.dumps(a))):
        assert b == a and isinstance(b, Dyadic)


# concatenation powers


@pytest.mark.parametrize(
    "Q, n, gens, mu",
    [
        (["1"], 2, ["11"], Fraction(1, 4)),
        (["01", "10"], 2, ["0101", "0110", "1001", "1010"], Fraction(1, 4)),
        ([], 3, [], 0),
    ],
)
def test_concat_power_examples(Q, n, gens, mu):
    P = concat_power(Q, n)
    assert list(P.generators) == gens
    assert P.measure() == mu
    brute = sorted({"".join(t) for t in itertools.product(Q, repeat=n)})
    assert brute == gens


def test_concat_power_zero_is_root():
    assert concat_power(["0", "10"], 0) == ClopenSet.full()


def test_concat_power_rejects_prefixes():
    with pytest.raises(PreconditionError):
        concat_power(["0", "01"], 2)


@settings(max_examples=200)
@given(prefix_free_sets(), st.integers(0, 6))
def test_concat_law(Q, n):
    assert concat_power(Q, n).measure() == measure(Q) ** n


def test_string_enumerations():
    assert all_strings(2) == ["00", "01", "10", "11"]
    assert strings_upto(1) == ["", "0", "1"]
