from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from closurium.algebra import (
    FuzzyPredicateAlgebra,
    HeytingChain,
    PowersetAlgebra,
    format_rational,
    parse_rational,
)
from closurium.errors import AlgebraMismatch, TooLarge, ValidationError

CHAIN10 = HeytingChain(10)
P3 = PowersetAlgebra(range(3))


def test_powerset_meet_and_implication():
    assert P3.meet(P3.subset([0, 1]), P3.subset([1, 2])) == P3.subset([1])
    assert P3.implies(P3.subset([0, 1]), P3.subset([1])) == P3.subset([1, 2])
    assert P3.neg(P3.bottom) == P3.top
    assert P3.leq(P3.subset([1]), P3.subset([1, 2]))


def test_chain_operations():
    v = CHAIN10.value
    assert CHAIN10.meet(v("0.3"), v("0.7")) == v("3/10")
    assert CHAIN10.implies(v("0.3"), v("0.7")) == CHAIN10.top
    assert CHAIN10.implies(v("0.7"), v("0.3")) == v("0.3")
    assert CHAIN10.neg(v("0.4")) == CHAIN10.bottom
    assert CHAIN10.neg(CHAIN10.bottom) == CHAIN10.top


def test_fuzzy_pointwise_meet():
    alg = FuzzyPredicateAlgebra(["x", "y"], 10)
    f = alg.predicate(["0.2", "0.9"])
    g = alg.predicate(["0.5", "0.4"])
    assert (f & g) == alg.predicate(["0.2", "0.4"])
    assert (f | g) == alg.predicate(["0.5", "0.9"])


def test_fuzzy_membership_bounds_predicates():
    alg = FuzzyPredicateAlgebra(["x", "y"], 4, membership=["1/2", "1"])
    assert alg.top == alg.predicate(["1/2", "1"])
    with pytest.raises(ValidationError):
        alg.predicate(["3/4", "0"])
    # relative negation stays below the membership
    assert alg.neg(alg.bottom) == alg.top


def test_sizes_and_caps():
    assert PowersetAlgebra("ab").size == 4
    assert len(list(PowersetAlgebra("ab").elements())) == 4
    assert len(list(FuzzyPredicateAlgebra(range(2), 1).elements())) == 4
    with pytest.raises(TooLarge):
        list(PowersetAlgebra(range(25)).elements())


def test_mismatched_algebras_rejected():
    other = PowersetAlgebra(range(3))
    assert other == P3
    with pytest.raises(AlgebraMismatch):
        P3.meet(P3.top, PowersetAlgebra(range(4)).top)
    with pytest.raises(AlgebraMismatch):
        CHAIN10.meet(CHAIN10.top, HeytingChain(5).top)


def test_boolean_versus_heyting():
    rng = random.Random(3)
    for _ in range(50):
        a = P3.random_element(rng)
        assert ~~a == a
    half = HeytingChain(2).value("1/2")
    assert ~~half != half
    assert ~~half == HeytingChain(2).top


def test_rationals():
    assert parse_rational("3/6") == Fraction(1, 2)
    assert parse_rational(0.25) == Fraction(1, 4)
    assert format_rational(Fraction(2, 4)) == "1/2"
    with pytest.raises(ValidationError):
        CHAIN10.value("1/3")


def test_split_decomposes_into_join_irreducibles():
    a = P3.subset([0, 2])
    j, rest = P3.split(a)
    assert P3.join(j, rest) == a and P3.rank(j) == 1
    # every non-zero chain element is join-irreducible
    assert CHAIN10.split(CHAIN10.value("0.6")) is None


def test_json_round_trip():
    alg = FuzzyPredicateAlgebra(["p", "q"], 4)
    f = alg.predicate({"p": "1/4"})
    assert alg.from_json(alg.to_json(f)) == f
    assert P3.from_json(P3.to_json(P3.subset([2, 0]))) == P3.subset([0, 2])


ALGEBRAS = [P3, CHAIN10, FuzzyPredicateAlgebra(range(3), 3, membership=["1", "2/3", "1/3"])]


@st.composite
def triples(draw):
    alg = draw(st.sampled_from(ALGEBRAS))
    rng = random.Random(draw(st.integers(0, 2**32)))
    return alg, alg.random_element(rng), alg.random_element(rng), alg.random_element(rng)


@settings(max_examples=300, deadline=None)
@given(triples())
def test_heyting_laws(t):
    alg, a, b, c = t
    # residuation
    assert alg.leq(c, alg.implies(a, b)) == alg.leq(alg.meet(c, a), b)
    # distributivity
    assert alg.meet(a, alg.join(b, c)) == alg.join(alg.meet(a, b), alg.meet(a, c))
    assert alg.leq(alg.bottom, a) and alg.leq(a, alg.top)
    assert alg.meet(a, alg.neg(a)) == alg.bottom
    assert alg.leq(a, alg.neg(alg.neg(a)))
