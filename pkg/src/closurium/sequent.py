"""Derivation checking for the propositional closure logic.

A sequent ``G | Phi |- phi`` has a context, a finite set of antecedents and a
consequent. :func:`check_derivation` verifies every node of a derivation
tree against its rule schema; :func:`soundness_check` evaluates the
conclusion on concrete models; :func:`random_derivation` builds valid trees
for fuzzing.

Rule schemas (``A`` is the conclusion's antecedent set, ``X`` the principal
formula of a left rule; a left rule may keep or drop ``X`` in its premises)::

    Axiom      phi in A                                   (no premises)
    TopR       consequent is true                         (no premises)
    BotL       false in A                                 (no premises)
    AndL       A - X + {p, q} |- r          =>  A |- r    X = p & q
    AndR       A |- p ;  A |- q             =>  A |- p & q
    OrL        A - X + {p} |- r ; A - X + {q} |- r  => A |- r   X = p | q
    OrR1/OrR2  A |- p  (resp. q)            =>  A |- p | q
    ImpL       A - X |- p ;  A - X + {q} |- r       =>  A |- r   X = p -> q
    ImpR       A + {p} |- q                 =>  A |- p -> q
    Weakening  B |- r  with B a subset of A =>  A |- r
    Cut        A |- p ;  A + {p} |- r       =>  A |- r
    Cl-1       A |- p                       =>  A |- C(p)
    Cl-2       {q} |- p                     =>  {C(q)} |- C(p)
    U-I        {s} |- p ;  {C(s), !s} |- q  =>  {s} |- p U q

``!p`` is read as ``p -> false`` by ImpL and ImpR. With ``rules="verbatim"``
Cl-2 and U-I instead carry an arbitrary side context ``Phi`` and U-I's second
premise is ``Phi, C(s), !p |- q``; that variant is not sound (see the tests).
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from typing import Any, Iterable, Mapping, Sequence

from .algebra import Element
from .errors import RuleViolation, ValidationError
from .logic.semantics import evaluate
from .logic.syntax import (
    FALSE,
    TRUE,
    And,
    Atom,
    Bottom,
    Closure,
    Formula,
    Implies,
    Not,
    Or,
    Top,
    Until,
    free_vars,
    parse_formula,
    pretty,
)
from .spaces import SpaceModel

RULES = ("Axiom", "⊤R", "⊥L", "∧L", "∧R", "∨L", "∨R₁", "∨R₂", "→L", "→R",
         "Weakening", "Cut", "Cl-1", "Cl-2", "𝒰-I")

_ALIASES = {
    "TopR": "⊤R", "BotL": "⊥L", "AndL": "∧L", "AndR": "∧R", "OrL": "∨L",
    "OrR1": "∨R₁", "OrR2": "∨R₂", "ImpL": "→L", "ImpR": "→R", "U-I": "𝒰-I",
    "Cl1": "Cl-1", "Cl2": "Cl-2", "UI": "𝒰-I",
}

_ARITY = {"Axiom": 0, "⊤R": 0, "⊥L": 0, "∧L": 1, "∧R": 2, "∨L": 2, "∨R₁": 1, "∨R₂": 1,
          "→L": 2, "→R": 1, "Weakening": 1, "Cut": 2, "Cl-1": 1, "Cl-2": 1, "𝒰-I": 2}


def canonical_rule(name: str) -> str:
    name = _ALIASES.get(name, name)
    if name not in _ARITY:
        raise KeyError(name)
    return name


Ctx = tuple[tuple[str, str], ...]


@dataclass(frozen=True)
class Sequent:
    ctx: Ctx
    ante: frozenset[Formula]
    cons: Formula

    @classmethod
    def of(cls, ante: Iterable[Formula | str], cons: Formula | str, ctx: Sequence[tuple[str, str]] = ()) -> Sequent:
        conv = lambda f: parse_formula(f) if isinstance(f, str) else f
        return cls(tuple((str(v), str(s)) for v, s in ctx), frozenset(conv(f) for f in ante), conv(cons))

    def sorted_ante(self) -> list[Formula]:
        return sorted(self.ante, key=pretty)

    def __str__(self) -> str:
        ctx = ", ".join(f"{v}:{s}" for v, s in self.ctx)
        ante = ", ".join(pretty(f) for f in self.sorted_ante())
        return f"{ctx} | {ante} ⊢ {pretty(self.cons)}"

    def to_json(self) -> dict[str, Any]:
        return {"ctx": [[v, s] for v, s in self.ctx],
                "ante": [pretty(f) for f in self.sorted_ante()],
                "cons": pretty(self.cons)}

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> Sequent:
        return cls.of(data.get("ante", []), data["cons"], [tuple(x) for x in data.get("ctx", [])])


@dataclass(frozen=True)
class Derivation:
    rule: str
    conclusion: Sequent
    premises: tuple[Derivation, ...] = ()

    def to_json(self) -> dict[str, Any]:
        return {"rule": self.rule, "conclusion": self.conclusion.to_json(),
                "premises": [p.to_json() for p in self.premises]}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, ensure_ascii=False)

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> Derivation:
        return cls(str(data["rule"]), Sequent.from_json(data["conclusion"]),
                   tuple(cls.from_json(p) for p in data.get("premises", [])))

    def nodes(self) -> Iterable[Derivation]:
        yield self
        for p in self.premises:
            yield from p.nodes()

    def height(self) -> int:
        return 1 + max((p.height() for p in self.premises), default=0)


def _as_implication(f: Formula) -> tuple[Formula, Formula] | None:
    if isinstance(f, Implies):
        return f.left, f.right
    if isinstance(f, Not):
        return f.body, FALSE
    return None


def _left_forms(a: frozenset[Formula], x: Formula, extra: Iterable[Formula]) -> tuple[frozenset, frozenset]:
    extra = frozenset(extra)
    return (a - {x}) | extra, a | extra


class _Checker:
    def __init__(self, variant: str):
        if variant not in ("sound", "verbatim"):
            raise ValueError(f"unknown rule variant {variant!r}")
        self.variant = variant

    def check(self, d: Derivation, path: tuple[int, ...]) -> None:
        try:
            rule = canonical_rule(d.rule)
        except KeyError:
            raise RuleViolation(path, d.rule, "unknown rule name") from None
        fail = lambda reason: RuleViolation(path, rule, reason)
        if len(d.premises) != _ARITY[rule]:
            raise fail(f"expects {_ARITY[rule]} premises, got {len(d.premises)}")
        c = d.conclusion
        names = {v for v, _ in c.ctx}
        if len(names) != len(c.ctx):
            raise fail("context variables are not distinct")
        for f in (*c.ante, c.cons):
            loose = free_vars(f) - names
            if loose:
                raise fail(f"free variable {sorted(loose)[0]!r} not in context")
        for p in d.premises:
            if p.conclusion.ctx != c.ctx:
                raise fail("premise context differs from conclusion context")
        reason = getattr(self, "_r_" + _METHOD[rule])(c, [p.conclusion for p in d.premises])
        if reason:
            raise fail(reason)
        for i, p in enumerate(d.premises):
            self.check(p, path + (i,))

    # each rule returns None when the node matches, else the reason

    def _r_axiom(self, c, ps):
        return None if c.cons in c.ante else "consequent is not an antecedent"

    def _r_top(self, c, ps):
        return None if isinstance(c.cons, Top) else "consequent is not true"

    def _r_bot(self, c, ps):
        return None if FALSE in c.ante else "false is not an antecedent"

    def _r_and_l(self, c, ps):
        (p,) = ps
        if p.cons != c.cons:
            return "consequent changed"
        for x in c.ante:
            if isinstance(x, And) and p.ante in _left_forms(c.ante, x, (x.left, x.right)):
                return None
        return "no conjunction in the antecedents decomposes into the premise"

    def _r_and_r(self, c, ps):
        p, q = ps
        if not isinstance(c.cons, And):
            return "consequent is not a conjunction"
        if p.ante != c.ante or q.ante != c.ante:
            return "antecedents changed"
        if (p.cons, q.cons) != (c.cons.left, c.cons.right):
            return "premise consequents do not match the conjuncts"
        return None

    def _r_or_l(self, c, ps):
        p, q = ps
        if p.cons != c.cons or q.cons != c.cons:
            return "consequent changed"
        for x in c.ante:
            if isinstance(x, Or) and p.ante in _left_forms(c.ante, x, (x.left,)) \
                    and q.ante in _left_forms(c.ante, x, (x.right,)):
                return None
        return "no disjunction in the antecedents splits into the premises"

    def _or_r(self, c, ps, side):
        (p,) = ps
        if not isinstance(c.cons, Or):
            return "consequent is not a disjunction"
        if p.ante != c.ante:
            return "antecedents changed"
        return None if p.cons == getattr(c.cons, side) else "premise does not prove the chosen disjunct"

    def _r_or_r1(self, c, ps):
        return self._or_r(c, ps, "left")

    def _r_or_r2(self, c, ps):
        return self._or_r(c, ps, "right")

    def _r_imp_l(self, c, ps):
        p, q = ps
        if q.cons != c.cons:
            return "consequent changed"
        for x in c.ante:
            parts = _as_implication(x)
            if parts is None:
                continue
            lhs, rhs = parts
            if p.cons == lhs and p.ante in (c.ante - {x}, c.ante) and q.ante in _left_forms(c.ante, x, (rhs,)):
                return None
        return "no implication in the antecedents matches the premises"

    def _r_imp_r(self, c, ps):
        (p,) = ps
        parts = _as_implication(c.cons)
        if parts is None:
            return "consequent is not an implication"
        lhs, rhs = parts
        if p.ante != c.ante | {lhs}:
            return "premise antecedents must add the hypothesis"
        return None if p.cons == rhs else "premise consequent is not the conclusion"

    def _r_weakening(self, c, ps):
        (p,) = ps
        if p.cons != c.cons:
            return "consequent changed"
        return None if p.ante <= c.ante else "premise antecedents are not a subset"

    def _r_cut(self, c, ps):
        p, q = ps
        if p.ante != c.ante:
            return "first premise antecedents changed"
        if q.ante != c.ante | {p.cons}:
            return "second premise must add the cut formula"
        return None if q.cons == c.cons else "consequent changed"

    def _r_cl1(self, c, ps):
        (p,) = ps
        if not isinstance(c.cons, Closure):
            return "consequent is not a closure"
        if p.ante != c.ante:
            return "antecedents changed"
        return None if p.cons == c.cons.body else "premise does not prove the closed formula"

    def _r_cl2(self, c, ps):
        (p,) = ps
        if not isinstance(c.cons, Closure):
            return "consequent is not a closure"
        if p.cons != c.cons.body:
            return "premise consequent does not match"
        if self.variant == "sound":
            if len(c.ante) != 1:
                return "the conclusion must have exactly the antecedent C(q)"
            (x,) = c.ante
            if not isinstance(x, Closure):
                return "the antecedent is not a closure"
            return None if p.ante == {x.body} else "premise antecedents must be exactly {q}"
        for x in c.ante:
            if isinstance(x, Closure) and p.ante in _left_forms(c.ante, x, (x.body,)):
                return None
        return "no closure antecedent matches the premise"

    def _r_until(self, c, ps):
        p, q = ps
        if not isinstance(c.cons, Until):
            return "consequent is not an until"
        phi, psi = c.cons.left, c.cons.right
        if p.cons != phi:
            return "first premise must prove the left argument"
        if q.cons != psi:
            return "second premise must prove the right argument"
        if p.ante != c.ante:
            return "first premise antecedents changed"
        if self.variant == "sound":
            if len(c.ante) != 1:
                return "the conclusion must have exactly one antecedent"
            (rho,) = c.ante
            return None if q.ante == {Closure(rho), Not(rho)} else "second premise must be C(s), !s"
        for rho in c.ante:
            if q.ante in _left_forms(c.ante, rho, (Closure(rho), Not(phi))):
                return None
        return "second premise must be Phi, C(s), !p"


_METHOD = {"Axiom": "axiom", "⊤R": "top", "⊥L": "bot", "∧L": "and_l", "∧R": "and_r", "∨L": "or_l",
           "∨R₁": "or_r1", "∨R₂": "or_r2", "→L": "imp_l", "→R": "imp_r", "Weakening": "weakening",
           "Cut": "cut", "Cl-1": "cl1", "Cl-2": "cl2", "𝒰-I": "until"}


def check_derivation(d: Derivation, rules: str = "sound") -> bool:
    """Return ``True`` for a valid tree, else raise :class:`RuleViolation` at the
    first failing node (pre-order)."""
    _Checker(rules).check(d, ())
    return True


# -- soundness ------------------------------------------------------------


@dataclass(frozen=True)
class ModelVerdict:
    model: str
    satisfied: bool
    antecedents: Element
    consequent: Element


def satisfies(model: SpaceModel, s: Sequent) -> ModelVerdict:
    """``meet(Phi) <= phi`` in the model, over the sequent's context."""
    ctx = s.ctx or None
    sorts = {sort: model for _, sort in s.ctx}
    cons = evaluate(model, s.cons, ctx, sorts)
    alg = cons.algebra
    ante = alg.meet_all(evaluate(model, f, ctx, sorts) for f in s.sorted_ante())
    return ModelVerdict(model.name, alg.leq(ante, cons), ante, cons)


def soundness_check(d: Derivation, models: Sequence[SpaceModel], rules: str = "sound",
                    check: bool = True) -> list[ModelVerdict]:
    """Evaluate the conclusion of ``d`` on every model; any unsatisfied verdict
    for a checked derivation points at a bug in the checker or the evaluator."""
    if check:
        check_derivation(d, rules)
    return [satisfies(m, d.conclusion) for m in models]


# -- random derivations ---------------------------------------------------


def random_formula(rng: random.Random, atoms: Sequence[str], depth: int = 2) -> Formula:
    if depth <= 0 or rng.random() < 0.35:
        r = rng.random()
        if r < 0.06:
            return TRUE
        if r < 0.1:
            return FALSE
        return Atom(rng.choice(list(atoms)))
    kind = rng.choice(("not", "and", "or", "imp", "closure", "closure"))
    sub = lambda: random_formula(rng, atoms, depth - 1)
    if kind == "not":
        return Not(sub())
    if kind == "closure":
        return Closure(sub())
    return {"and": And, "or": Or, "imp": Implies}[kind](sub(), sub())


class _Generator:
    def __init__(self, rng: random.Random, atoms: Sequence[str], rules: Sequence[str], ctx: Ctx):
        self.rng = rng
        self.atoms = list(atoms)
        self.rules = [canonical_rule(r) for r in rules]
        self.ctx = ctx

    def seq(self, ante: Iterable[Formula], cons: Formula) -> Sequent:
        return Sequent(self.ctx, frozenset(ante), cons)

    def pick(self, items: Iterable[Formula]) -> Formula:
        return self.rng.choice(sorted(items, key=pretty))

    def leaf(self, ante: frozenset[Formula]) -> Derivation:
        if FALSE in ante and "⊥L" in self.rules and self.rng.random() < 0.5:
            return Derivation("⊥L", self.seq(ante, random_formula(self.rng, self.atoms, 1)))
        if ante and "Axiom" in self.rules:
            return Derivation("Axiom", self.seq(ante, self.pick(ante)))
        return Derivation("⊤R", self.seq(ante, TRUE))

    def gen(self, depth: int, ante: frozenset[Formula]) -> Derivation:
        if depth <= 1:
            return self.leaf(ante)
        order = list(self.rules)
        self.rng.shuffle(order)
        for rule in order:
            d = self.build(rule, depth, ante)
            if d is not None:
                return d
        return self.leaf(ante)

    def weaken(self, ante: frozenset[Formula], d: Derivation) -> Derivation | None:
        if d.conclusion.ante == ante:
            return d
        if "Weakening" not in self.rules:
            return None
        return Derivation("Weakening", self.seq(ante, d.conclusion.cons), (d,))

    def build(self, rule: str, depth: int, ante: frozenset[Formula]) -> Derivation | None:
        rng, sub = self.rng, depth - 1
        if rule in ("Axiom", "⊤R", "⊥L"):
            return None
        if rule == "∧R":
            p, q = self.gen(sub, ante), self.gen(sub, ante)
            return Derivation(rule, self.seq(ante, And(p.conclusion.cons, q.conclusion.cons)), (p, q))
        if rule in ("∨R₁", "∨R₂"):
            p = self.gen(sub, ante)
            other = random_formula(rng, self.atoms, 1)
            cons = Or(p.conclusion.cons, other) if rule == "∨R₁" else Or(other, p.conclusion.cons)
            return Derivation(rule, self.seq(ante, cons), (p,))
        if rule == "→R":
            hyp = random_formula(rng, self.atoms, 1)
            p = self.gen(sub, ante | {hyp})
            cons = Not(hyp) if isinstance(p.conclusion.cons, Bottom) and rng.random() < 0.5 \
                else Implies(hyp, p.conclusion.cons)
            return Derivation(rule, self.seq(ante, cons), (p,))
        if rule == "Weakening":
            if not ante:
                return None
            drop = self.pick(ante)
            p = self.gen(sub, ante - {drop})
            return Derivation(rule, self.seq(ante, p.conclusion.cons), (p,))
        if rule == "Cut":
            p = self.gen(sub, ante)
            q = self.gen(sub, ante | {p.conclusion.cons})
            return Derivation(rule, self.seq(ante, q.conclusion.cons), (p, q))
        if rule == "Cl-1":
            p = self.gen(sub, ante)
            return Derivation(rule, self.seq(ante, Closure(p.conclusion.cons)), (p,))
        if rule == "∧L":
            cands = [x for x in ante if isinstance(x, And)]
            if not cands:
                return None
            x = self.pick(cands)
            p = self.gen(sub, (ante - {x}) | {x.left, x.right})
            return Derivation(rule, self.seq(ante, p.conclusion.cons), (p,))
        if rule == "∨L":
            cands = [x for x in ante if isinstance(x, Or)]
            if not cands or depth < 3:
                return None
            x = self.pick(cands)
            p = self.gen(depth - 2, (ante - {x}) | {x.left})
            q = self.gen(depth - 2, (ante - {x}) | {x.right})
            joined = Or(p.conclusion.cons, q.conclusion.cons)
            p2 = Derivation("∨R₁", Sequent(self.ctx, p.conclusion.ante, joined), (p,))
            q2 = Derivation("∨R₂", Sequent(self.ctx, q.conclusion.ante, joined), (q,))
            return Derivation(rule, self.seq(ante, joined), (p2, q2))
        if rule == "→L":
            for x in sorted(ante, key=pretty):
                parts = _as_implication(x)
                if parts is None:
                    continue
                lhs, rhs = parts
                rest = ante - {x}
                if lhs in rest:
                    p = Derivation("Axiom", self.seq(rest, lhs))
                elif isinstance(lhs, Top):
                    p = Derivation("⊤R", self.seq(rest, lhs))
                else:
                    continue
                q = self.gen(sub, rest | {rhs})
                return Derivation(rule, self.seq(ante, q.conclusion.cons), (p, q))
            return None
        if rule == "Cl-2":
            cands = [x for x in ante if isinstance(x, Closure)]
            if not cands:
                return None
            x = self.pick(cands)
            inner_depth = sub if ante == {x} else depth - 2
            if inner_depth < 1:
                return None
            p = self.gen(inner_depth, frozenset({x.body}))
            d = Derivation(rule, self.seq({x}, Closure(p.conclusion.cons)), (p,))
            return self.weaken(ante, d)
        if rule == "𝒰-I":
            if not ante:
                return None
            rho = self.pick(ante)
            inner_depth = sub if ante == {rho} else depth - 2
            if inner_depth < 1:
                return None
            p = self.gen(inner_depth, frozenset({rho}))
            q = self.gen(inner_depth, frozenset({Closure(rho), Not(rho)}))
            d = Derivation(rule, self.seq({rho}, Until(p.conclusion.cons, q.conclusion.cons)), (p, q))
            return self.weaken(ante, d)
        raise ValueError(f"unknown rule {rule!r}")


def random_derivation(seed: int, depth: int = 4, atoms: Sequence[str] = ("a", "b", "c"),
                      rules: Sequence[str] | None = None, ctx: Sequence[tuple[str, str]] = ()) -> Derivation:
    """A derivation of height at most ``depth`` that passes :func:`check_derivation`.

    The root antecedents are drawn first and the tree is grown top-down by
    instantiating randomly chosen rule schemas. ``rules`` restricts the
    schemas used (leaves fall back to ``Axiom`` or ``TopR``).
    """
    if depth < 1:
        raise ValidationError("depth", "depth must be at least 1")
    rng = random.Random(seed)
    rules = list(RULES if rules is None else rules)
    ante = frozenset(random_formula(rng, atoms, 2) for _ in range(rng.randint(1, 3)))
    gen = _Generator(rng, atoms, rules, tuple((str(v), str(s)) for v, s in ctx))
    return gen.gen(depth, ante)
