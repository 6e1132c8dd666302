from __future__ import annotations

import json
import random

import pytest

from closurium.errors import RuleViolation
from closurium.logic import Closure, Until, parse_formula
from closurium.sequent import (
    RULES,
    Derivation,
    Sequent,
    canonical_rule,
    check_derivation,
    random_derivation,
    satisfies,
    soundness_check,
)
from closurium.spaces import SpaceModel, random_graph, random_model

from conftest import chain, sub


def seq(ante, cons):
    return Sequent.of(ante, cons)


def axiom(ante, cons):
    return Derivation("Axiom", seq(ante, cons))


def test_axiom_and_cl1():
    assert check_derivation(axiom(["a"], "a"))
    d = Derivation("Cl-1", seq(["a"], "C(a)"), (axiom(["a"], "a"),))
    assert check_derivation(d)


def test_cl1_mismatch_reports_node():
    d = Derivation("Cl-1", seq(["a"], "C(b)"), (axiom(["a"], "a"),))
    with pytest.raises(RuleViolation) as info:
        check_derivation(d)
    assert info.value.path == () and info.value.rule == "Cl-1"


def test_nested_violation_path():
    bad = Derivation("Axiom", seq(["a"], "b"))
    d = Derivation("∧R", seq(["a"], "a & b"), (axiom(["a"], "a"), bad))
    with pytest.raises(RuleViolation) as info:
        check_derivation(d)
    assert info.value.path == (1,)
    assert "root.1" in str(info.value)


def test_unknown_rule_and_arity():
    with pytest.raises(RuleViolation, match="unknown rule"):
        check_derivation(Derivation("Magic", seq(["a"], "a")))
    with pytest.raises(RuleViolation, match="premises"):
        check_derivation(Derivation("Cut", seq(["a"], "a"), (axiom(["a"], "a"),)))


def test_aliases():
    assert canonical_rule("OrR1") == "∨R₁"
    assert canonical_rule("U-I") == "𝒰-I"
    assert set(RULES) >= {"Cl-1", "Cl-2", "𝒰-I", "Cut", "Weakening"}


def test_propositional_rules():
    imp = Derivation("→R", seq([], "a -> a | b"),
                     (Derivation("∨R₁", seq(["a"], "a | b"), (axiom(["a"], "a"),)),))
    assert check_derivation(imp)
    mp = Derivation("→L", seq(["a", "a -> b"], "b"),
                    (axiom(["a"], "a"), axiom(["a", "b"], "b")))
    assert check_derivation(mp)
    neg = Derivation("→L", seq(["a", "!a"], "false"),
                     (axiom(["a"], "a"), Derivation("⊥L", seq(["a", "false"], "false"))))
    assert check_derivation(neg)


def test_cl2_and_until_intro_sound_forms():
    cl2 = Derivation("Cl-2", seq(["C(a & b)"], "C(a)"),
                     (Derivation("∧L", seq(["a & b"], "a"), (axiom(["a", "b"], "a"),)),))
    assert check_derivation(cl2)
    ui = Derivation("𝒰-I", seq(["a"], "a U (C(a) & !a)"),
                    (axiom(["a"], "a"),
                     Derivation("∧R", seq(["C(a)", "!a"], "C(a) & !a"),
                                (axiom(["C(a)", "!a"], "C(a)"), axiom(["C(a)", "!a"], "!a")))))
    assert check_derivation(ui)
    model = SpaceModel(chain(3), {"a": sub(chain(3), 0)})
    assert all(v.satisfied for v in soundness_check(ui, [model]))


def cl2_counterexample() -> Derivation:
    # !a, a |- false  gives  !a, C(a) |- C(false) with side context !a
    prem = Derivation("→L", seq(["!a", "a"], "false"),
                      (axiom(["a"], "a"), Derivation("⊥L", seq(["a", "false"], "false"))))
    return Derivation("Cl-2", seq(["!a", "C(a)"], "C(false)"), (prem,))


def until_counterexample() -> Derivation:
    # side context {a} with s = a: the second premise a, C(a), !(a | b) |- false is derivable
    left = Derivation("∨R₁", seq(["a"], "a | b"), (axiom(["a"], "a"),))
    ante = ["a", "C(a)", "!(a | b)"]
    right = Derivation("→L", seq(ante, "false"),
                       (Derivation("∨R₁", seq(["a", "C(a)"], "a | b"), (axiom(["a", "C(a)"], "a"),)),
                        Derivation("⊥L", seq(["a", "C(a)", "false"], "false"))))
    return Derivation("𝒰-I", seq(["a"], "(a | b) U false"), (left, right))


def verbatim_models():
    ch = chain(3)
    return [SpaceModel(ch, {"a": sub(ch, 0), "b": sub(ch, 1)})]


def test_verbatim_cl2_is_unsound():
    d = cl2_counterexample()
    assert check_derivation(d, "verbatim")
    with pytest.raises(RuleViolation):
        check_derivation(d, "sound")
    (verdict,) = soundness_check(d, verbatim_models(), "verbatim")
    assert not verdict.satisfied
    assert verdict.antecedents.indices() == [1]


def test_verbatim_until_intro_is_unsound():
    d = until_counterexample()
    assert check_derivation(d, "verbatim")
    with pytest.raises(RuleViolation) as info:
        check_derivation(d, "sound")
    assert info.value.path == ()
    # on the 3-chain a={0}: the set {0,1} leaks to 2, so (a | b) U false is empty
    (verdict,) = soundness_check(d, verbatim_models(), "verbatim")
    assert not verdict.satisfied
    assert verdict.consequent.indices() == []


def test_satisfies_on_kripke(four_model):
    d = Derivation("Cl-1", seq(["a"], "C(a)"), (axiom(["a"], "a"),))
    (verdict,) = soundness_check(d, [four_model])
    assert verdict.satisfied and verdict.consequent == four_model.algebra.top


def test_random_derivation_properties():
    assert random_derivation(1, depth=1).rule in ("Axiom", "⊤R", "⊥L")
    assert random_derivation(7, depth=5).dumps() == random_derivation(7, depth=5).dumps()
    found = False
    for seed in range(30):
        d = random_derivation(seed, depth=4)
        assert d.height() <= 4 and check_derivation(d)
        found |= any(isinstance(n.conclusion.cons, Closure) for n in d.nodes())
    assert found
    only = random_derivation(3, depth=4, rules=["Cl-2", "Axiom"])
    assert check_derivation(only)


def test_random_derivation_uses_every_rule():
    used = set()
    for seed in range(300):
        used |= {canonical_rule(n.rule) for n in random_derivation(seed, depth=6).nodes()}
    assert used == set(RULES)


def test_json_round_trip():
    d = random_derivation(11, depth=5)
    again = Derivation.from_json(json.loads(d.dumps()))
    assert again == d


def test_small_soundness_fuzz():
    rng = random.Random(2)
    models = [random_model(rng, random_graph(rng, 5)) for _ in range(5)]
    for seed in range(40):
        d = random_derivation(seed, depth=5)
        assert all(v.satisfied for v in soundness_check(d, models))
