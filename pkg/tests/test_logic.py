from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from closurium.errors import FormulaSyntaxError, TooLarge, UnknownAtom, UnknownSort, Unsupported
from closurium.logic import (
    And,
    Atom,
    Closure,
    Not,
    PathShape,
    Surrounded,
    Until,
    boundary,
    check_until_leq_surrounded,
    eval_boundary,
    eval_reach,
    eval_surrounded,
    eval_until,
    evaluate,
    is_connected,
    parse_formula,
    pretty,
    reach,
    reach_oracle,
    surrounded,
    surrounded_oracle,
    until,
    until_oracle,
)
from closurium.logic.syntax import Boundary, Exists, Forall, Implies, Or, Reach
from closurium.spaces import FuzzySpace, GraphSpace, KripkeFrame, SpaceModel, random_graph, random_kripke

from conftest import chain, sub

a, b, c = Atom("a"), Atom("b"), Atom("c")


# -- parsing --------------------------------------------------------------


def test_parse_examples():
    assert parse_formula("C(a) & !b") == And(Closure(a), Not(b))
    assert parse_formula("a U (b S c)") == Until(a, Surrounded(b, c))
    assert parse_formula("a U b U c") == Until(Until(a, b), c)
    assert parse_formula("a S b U c") == Until(Surrounded(a, b), c)
    assert parse_formula("a | b U c") == Until(Or(a, b), c)
    assert parse_formula("a -> b -> c") == Implies(a, Implies(b, c))
    assert parse_formula("a U b -> c") == Implies(Until(a, b), c)
    assert parse_formula("R[3] a") == Reach(a, 3)
    assert parse_formula("𝒞(a) ∧ ¬b") == And(Closure(a), Not(b))


def test_parse_quantifiers_and_equality():
    phi = parse_formula("E y:X. a(y) & x = y")
    assert isinstance(phi, Exists) and phi.var == "y" and phi.sort == "X"
    assert isinstance(parse_formula("A x:X. true"), Forall)


@pytest.mark.parametrize("text, offset", [("a U", 3), ("(a", 2), ("a & & b", 4), ("a $ b", 2), ("R[0] a", 2)])
def test_syntax_errors_carry_offsets(text, offset):
    with pytest.raises(FormulaSyntaxError) as info:
        parse_formula(text)
    assert info.value.offset == offset


def formulas():
    leaves = st.sampled_from([a, b, c, parse_formula("true"), parse_formula("false")])

    def extend(children):
        un = (st.builds(Not, children) | st.builds(Closure, children) | st.builds(Boundary, children)
              | st.builds(Reach, children, st.sampled_from([None, 1, 4])))
        bins = [And, Or, Implies, Until, Surrounded]
        return un | st.builds(lambda k, l, r: bins[k](l, r), st.integers(0, 4), children, children)

    return st.recursive(leaves, extend, max_leaves=10)


@settings(max_examples=300, deadline=None)
@given(formulas())
def test_pretty_round_trip(phi):
    assert parse_formula(pretty(phi)) == phi


# -- operators on the 3-chain ---------------------------------------------


def test_boundary(chain3):
    assert boundary(chain3, sub(chain3, 0)) == sub(chain3, 1)
    assert boundary(chain3, chain3.algebra.top) == chain3.algebra.bottom


def test_until_examples(chain3):
    phi, psi = sub(chain3, 0, 1), sub(chain3, 1)
    assert until(chain3, phi, psi) == sub(chain3, 0)
    res = until_oracle(chain3, phi, psi)
    assert res.value == sub(chain3, 0) and res.attained
    res = until_oracle(chain3, chain3.algebra.bottom, psi)
    assert res.value == chain3.algebra.bottom and res.attained


def test_reach_examples(chain3):
    assert reach(chain3, sub(chain3, 0)) == chain3.algebra.top
    assert reach(chain3, sub(chain3, 0), bound=2) == sub(chain3, 0, 1)
    assert reach(chain3, chain3.algebra.bottom) == chain3.algebra.bottom
    assert reach_oracle(chain3, sub(chain3, 0), bound=2) == sub(chain3, 0, 1)
    assert reach_oracle(chain3, sub(chain3, 0)) == chain3.algebra.top


def test_surrounded_examples(chain3):
    assert surrounded(chain3, sub(chain3, 0), sub(chain3, 1)) == sub(chain3, 0)
    assert surrounded(chain3, sub(chain3, 0), chain3.algebra.bottom) == chain3.algebra.bottom
    assert surrounded_oracle(chain3, sub(chain3, 0), sub(chain3, 1)) == sub(chain3, 0)
    assert surrounded_oracle(chain3, sub(chain3, 0), chain3.algebra.bottom) == chain3.algebra.bottom
    lone = GraphSpace(["x"], [])
    assert surrounded(lone, lone.algebra.top, lone.algebra.bottom) == lone.algebra.top
    assert surrounded_oracle(lone, lone.algebra.top, lone.algebra.bottom) == lone.algebra.top


def test_spatial_operators_reject_fuzzy():
    sp = FuzzySpace(range(2), 2, "1/2")
    with pytest.raises(Unsupported):
        reach(sp, sp.algebra.top)
    with pytest.raises(Unsupported):
        surrounded(sp, sp.algebra.top, sp.algebra.bottom)


def test_fuzzy_boundary_pattern():
    sp = FuzzySpace(["p", "q", "r"], 10, "1/5")
    f = sp.algebra.predicate(["0", "1/2", "1"])
    assert boundary(sp, f) == sp.algebra.predicate(["1/5", "0", "0"])


def test_fuzzy_until_oracle():
    sp = FuzzySpace(range(2), 2, "1/2")
    top, bot = sp.algebra.top, sp.algebra.bottom
    assert until(sp, top, bot) == top
    assert until(sp, sp.algebra.predicate(["1/2", "1"]), top) == sp.algebra.predicate(["1/2", "1"])
    big = FuzzySpace(range(20), 4, "1/4")
    with pytest.raises(TooLarge):
        until_oracle(big, big.algebra.top, big.algebra.bottom, cap=100)


def test_oracle_cap_on_non_additive():
    big = random_kripke(random.Random(0), 20)
    with pytest.raises(TooLarge):
        until(big, big.algebra.top, big.algebra.bottom, cap=1000)


# -- connectedness --------------------------------------------------------


def test_connectedness_examples():
    pts = GraphSpace(range(2), [])
    for variant in ("one-sided", "symmetric"):
        assert is_connected(pts, pts.algebra.bottom, variant)
        assert not is_connected(pts, pts.algebra.top, variant)
        cyc = GraphSpace(range(2), [(0, 1), (1, 0)])
        assert is_connected(cyc, cyc.algebra.top, variant)
    ch = chain(3)
    assert is_connected(ch, ch.algebra.top, "symmetric")
    assert not is_connected(ch, ch.algebra.top, "one-sided")


@pytest.mark.parametrize("seed", range(15))
def test_connectedness_fast_matches_brute(seed):
    rng = random.Random(seed)
    sp = random_graph(rng, rng.randint(1, 6), 0.35)
    for _ in range(10):
        x = sp.algebra.random_element(rng)
        for variant in ("one-sided", "symmetric"):
            assert is_connected(sp, x, variant, "fast") == is_connected(sp, x, variant, "brute")


def test_path_shape_hypotheses():
    for n in range(1, 6):
        shape = PathShape(n)
        assert shape.is_reflexive() and shape.is_transitive()
        assert shape.closure_is_inflationary() and shape.satisfies_boundary_hypothesis()
        assert shape.is_connected("symmetric")


# -- evaluation -----------------------------------------------------------


def test_evaluate_basics(four_model):
    assert evaluate(four_model, "true") == four_model.algebra.top
    assert evaluate(four_model, "C(a)") == four_model.algebra.top
    assert evaluate(four_model, "a -> C(a)") == four_model.algebra.top
    with pytest.raises(UnknownAtom):
        evaluate(four_model, "zz")


def test_evaluate_equality_and_quantifiers():
    model = SpaceModel(GraphSpace(range(2), [(0, 1)]), {"a": GraphSpace(range(2), []).algebra.subset([1])})
    ctx = [("x", "X"), ("y", "X")]
    eq = evaluate(model, "x = y", context=ctx)
    assert eq.points() == [(0, 0), (1, 1)]
    assert evaluate(model, "E y:X. a(y)", context=[("x", "X")]).points() == [0, 1]
    assert evaluate(model, "A y:X. a(y)", context=[("x", "X")]).points() == []
    assert evaluate(model, "E y:X. x = y & a(y)", context=[("x", "X")]).points() == [1]
    with pytest.raises(UnknownSort):
        evaluate(model, "E y:Y. true", context=[("x", "X")])


def test_wrappers_accept_text(chain3):
    model = SpaceModel(chain3, {"a": sub(chain3, 0, 1), "b": sub(chain3, 1)})
    assert eval_until(model, "a", "b") == sub(chain3, 0)
    assert eval_boundary(model, "b") == sub(chain3, 2)
    assert eval_reach(model, "b") == sub(chain3, 1, 2)
    assert eval_surrounded(model, "a", "false") == chain3.algebra.bottom


def test_until_leq_surrounded_report(chain3):
    report = check_until_leq_surrounded(chain3, samples=20, seed=4)
    assert report["checked"] == 20 and report["violations"] == []
    bot = chain3.algebra.bottom
    assert check_until_leq_surrounded(chain3, pairs=[(bot, sub(chain3, 2))])["violations"] == []


@pytest.mark.parametrize("seed", range(10))
def test_trivial_laws_and_monotonicity(seed):
    rng = random.Random(seed)
    for space in (random_graph(rng, 5), random_kripke(rng, 4)):
        alg = space.algebra
        phi, psi = alg.random_element(rng), alg.random_element(rng)
        assert until(space, alg.top, psi) == alg.top
        assert until(space, phi, alg.top) == phi
        big = alg.join(phi, alg.random_element(rng))
        assert alg.leq(until(space, phi, psi), until(space, big, psi))
        assert alg.leq(reach(space, phi), reach(space, big))
        assert reach(space, phi) == reach_oracle(space, phi)


def test_kripke_until_uses_oracle():
    frame = KripkeFrame(range(3), {0: [1], 1: [2], 2: [2]}, "pre")
    phi, psi = sub(frame, 0, 1), sub(frame, 2)
    assert until(frame, phi, psi) == until_oracle(frame, phi, psi).value
