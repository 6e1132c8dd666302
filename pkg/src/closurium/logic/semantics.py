"""Evaluation of closure-logic formulas on finite models.

The spatial operators come in two flavours. The default functions use
graph algorithms on the step graph of the space (edges ``x -> y`` for
``y`` in ``c({x})``); the ``*_oracle`` functions follow the definitions
literally, by enumerating candidate predicates or continuous paths, and
are used to validate the fast versions.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Any, Mapping, Sequence

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph

from ..algebra import Element, FuzzySet, Subset, iter_bits, popcount
from ..bitsets import bits_to_mask, mask_to_bits
from ..doctrine import FiniteMap, diagonal, direct_image, preimage, product_algebra, projection, universal_image
from ..errors import TooLarge, UnknownSort, Unsupported, ValidationError
from ..spaces import Space, SpaceModel, UnitSpace, product_space
from .paths import PathShape, count_paths
from .syntax import (
    And,
    Atom,
    Bottom,
    Boundary,
    Closure,
    Eq,
    Exists,
    Forall,
    Formula,
    Implies,
    Not,
    Or,
    Reach,
    Surrounded,
    Top,
    Until,
    free_vars,
    parse_formula,
)

UNTIL_CAP = 2**16
PATH_CAP = 10**6
MAX_CONTEXT = 3


# -- graph helpers --------------------------------------------------------


def _mask(a: Subset) -> np.ndarray:
    return bits_to_mask(a.bits, a.algebra.n)


def reach_within(matrix: sparse.csr_matrix, sources: np.ndarray, allowed: np.ndarray) -> np.ndarray:
    """Nodes reachable from ``sources`` along edges of ``matrix`` that only enter ``allowed`` nodes.

    Sources are always included. A virtual root linked to every source turns
    the multi-source search into a single breadth-first traversal.
    """
    n = matrix.shape[0]
    src = np.flatnonzero(sources)
    if src.size == 0:
        return np.zeros(n, dtype=bool)
    keep = sparse.diags(allowed.astype(np.int8))
    sub = (matrix @ keep).tocsr()
    root = sparse.csr_matrix((np.ones(src.size, dtype=np.int8), (np.zeros(src.size, dtype=np.intp), src)),
                             shape=(1, n))
    big = sparse.bmat([[sub, None], [root, sparse.csr_matrix((1, 1), dtype=np.int8)]], format="csr")
    order = csgraph.breadth_first_order(big, n, directed=True, return_predecessors=False)
    out = np.zeros(n, dtype=bool)
    out[order[order < n]] = True
    return out


# -- boundary and until ---------------------------------------------------


def boundary(space: Space, a: Element) -> Element:
    """External boundary ``c(a) & ~a``."""
    alg = space.algebra
    return alg.meet(space.closure(a), alg.neg(a))


@dataclass(frozen=True)
class UntilResult:
    value: Element
    attained: bool
    candidates: int


def _in_u(space: Space, rho: Element, psi: Element) -> bool:
    return space.algebra.leq(boundary(space, rho), psi)


def until_oracle(space: Space, phi: Element, psi: Element, cap: int = UNTIL_CAP) -> UntilResult:
    """Join of every ``rho <= phi`` whose boundary lies below ``psi``, by enumeration.

    ``attained`` reports whether the join itself qualifies, that is whether
    the supremum is a maximum.
    """
    alg = space.algebra
    alg._own(phi, psi)
    if isinstance(phi, Subset):
        size = 1 << popcount(phi.bits)
        if size > cap:
            raise TooLarge("until oracle candidates", size, cap)
        acc = 0
        sub = phi.bits
        while True:
            rho = Subset(alg, sub)
            if _in_u(space, rho, psi):
                acc |= sub
            if sub == 0:
                break
            sub = (sub - 1) & phi.bits
        value: Element = Subset(alg, acc)
    else:
        size = 1
        for v in phi.values:
            size *= v + 1
        if size > cap:
            raise TooLarge("until oracle candidates", size, cap)
        acc_vals = [0] * alg.n
        for vals in itertools.product(*(range(v + 1) for v in phi.values)):
            rho = FuzzySet(alg, vals)
            if _in_u(space, rho, psi):
                acc_vals = [max(x, y) for x, y in zip(acc_vals, vals)]
        value = FuzzySet(alg, tuple(acc_vals))
    return UntilResult(value, _in_u(space, value, psi), size)


def until_fast(space: Space, phi: Subset, psi: Subset) -> Subset:
    """Greatest ``W <= phi`` with ``c({w}) <= W | psi`` for each ``w`` in ``W``.

    Valid for additive point-based closures. A point of ``phi`` drops out
    exactly when one of its steps leads to a point outside ``phi | psi``,
    possibly through other dropped points of ``phi - psi``; that set is a
    single backward search from ``~phi & ~psi``.
    """
    if not (space.point_based and space.additive):
        raise Unsupported(f"the until fixpoint needs an additive point-based closure, not {space.describe()}")
    space.algebra._own(phi, psi)
    pm, qm = _mask(phi), _mask(psi)
    outside = ~pm & ~qm
    leaking = reach_within(space.reverse_step_matrix, outside, pm & ~qm)
    removed = pm & (space.step_matrix @ leaking.astype(np.int8) > 0)
    return Subset(space.algebra, phi.bits & ~mask_to_bits(removed))


def until(space: Space, phi: Element, psi: Element, cap: int = UNTIL_CAP) -> Element:
    """Supremum of ``{rho <= phi : boundary(rho) <= psi}``.

    Additive point-based spaces use :func:`until_fast`; everything else falls
    back to :func:`until_oracle`, which raises :class:`TooLarge` past ``cap``.
    """
    if space.point_based and space.additive:
        return until_fast(space, phi, psi)
    return until_oracle(space, phi, psi, cap).value


# -- reachability ---------------------------------------------------------


def reach(space: Space, a: Element, bound: int | None = None) -> Subset:
    """Points reachable from ``a`` by continuous paths (of at most ``bound`` points)."""
    space.require_point_based("reachability")
    space.algebra._own(a)
    if bound is not None and bound < 1:
        raise ValidationError("reach bound", "bound must be positive")
    m = _mask(a)
    if bound is None:
        out = reach_within(space.step_matrix, m, np.ones(space.n, dtype=bool))
    else:
        out = m.copy()
        rev = space.reverse_step_matrix
        for _ in range(bound - 1):
            nxt = out | (rev @ out.astype(np.int8) > 0)
            if (nxt == out).all():
                break
            out = nxt
    return Subset(space.algebra, mask_to_bits(out))


def _path_budget(shapes: Sequence[int], successors: tuple[int, ...], cap: int) -> int:
    total = sum(count_paths(L, successors) for L in shapes)
    if total > cap:
        raise TooLarge("continuous paths", total, cap)
    return total


def reach_oracle(space: Space, a: Element, bound: int | None = None, cap: int = PATH_CAP) -> Subset:
    """``a | union over paths p of p(up(p^-1(a)))`` by path enumeration.

    Paths have shape ``bound`` (or the number of points when unbounded);
    shorter paths are covered because a path may stutter.
    """
    space.require_point_based("reachability")
    length = bound if bound is not None else max(space.n, 1)
    shape = PathShape(length)
    succ = space.singleton_closures
    _path_budget([length], succ, cap)
    out = a.bits
    for p in shape.paths(succ):
        pre = sum(1 << i for i, x in enumerate(p) if (a.bits >> x) & 1)
        for i in iter_bits(shape.up(pre)):
            out |= 1 << p[i]
    return Subset(space.algebra, out)


# -- surroundedness -------------------------------------------------------


def surrounded(space: Space, phi: Subset, psi: Subset) -> Subset:
    """``phi`` minus every point lying on an escape route from ``phi`` avoiding ``psi``.

    A point escapes when a ``psi``-free walk leads from it to a point outside
    both ``phi`` and ``psi``; the set of such points is one backward search.
    """
    space.require_point_based("surroundedness")
    space.algebra._own(phi, psi)
    pm, qm = _mask(phi), _mask(psi)
    exits = ~pm & ~qm
    escaping = reach_within(space.reverse_step_matrix, exits, ~qm)
    return Subset(space.algebra, phi.bits & ~mask_to_bits(escaping))


def is_escape_route(shape: PathShape, path: Sequence[int], phi: int, psi: int) -> bool:
    """The three escape-route conditions, read on the index chain of ``path``."""
    p_phi = sum(1 << i for i, x in enumerate(path) if (phi >> x) & 1)
    p_psi = sum(1 << i for i, x in enumerate(path) if (psi >> x) & 1)
    p_not_phi = shape.full & ~p_phi
    if p_phi == 0:
        return False
    if p_phi & ~shape.down(p_not_phi):
        return False
    return shape.up(p_phi) & shape.down(p_not_phi) & p_psi == 0


def surrounded_oracle(space: Space, phi: Subset, psi: Subset, maxlen: int | None = None,
                      cap: int = PATH_CAP) -> Subset:
    """Literal enumeration of escape routes of every length up to ``maxlen``."""
    space.require_point_based("surroundedness")
    space.algebra._own(phi, psi)
    maxlen = space.n if maxlen is None else maxlen
    succ = space.singleton_closures
    lengths = list(range(1, maxlen + 1))
    _path_budget(lengths, succ, cap)
    escaped = 0
    for L in lengths:
        shape = PathShape(L)
        for p in shape.paths(succ):
            if is_escape_route(shape, p, phi.bits, psi.bits):
                for x in p:
                    escaped |= 1 << x
    return Subset(space.algebra, phi.bits & ~escaped)


# -- connectedness --------------------------------------------------------


CONNECTED_CAP = 3**12


def _connected_brute(space: Space, a: Subset, variant: str, cap: int) -> bool:
    idx = a.indices()
    if 3 ** len(idx) > cap:
        raise TooLarge("decompositions", 3 ** len(idx), cap)
    for roles in itertools.product((0, 1, 2), repeat=len(idx)):
        left = sum(1 << i for i, r in zip(idx, roles) if r != 1)
        right = sum(1 << i for i, r in zip(idx, roles) if r != 0)
        if left == 0 or right == 0:
            continue
        meets = space.closure_bits(left) & right != 0
        if variant == "one-sided" and not meets:
            return False
        if variant == "symmetric" and not meets and space.closure_bits(right) & left == 0:
            return False
    return True


def is_connected(space: Space, a: Subset, variant: str = "one-sided", method: str = "auto",
                 cap: int = CONNECTED_CAP) -> bool:
    """Connectedness of ``a``: no split of ``a`` into two non-empty parts
    ``phi | psi`` with ``c(phi)`` missing ``psi`` (``variant="one-sided"``),
    or with each closure missing the other part (``variant="symmetric"``).

    ``method="brute"`` enumerates all decompositions; ``"fast"`` (additive
    closures only) checks strong, respectively weak, connectivity of the step
    graph restricted to ``a``.
    """
    space.require_point_based("connectedness")
    if variant not in ("one-sided", "symmetric"):
        raise ValueError(f"unknown variant {variant!r}")
    if method == "auto":
        method = "fast" if space.additive else "brute"
    if method == "brute":
        return _connected_brute(space, a, variant, cap)
    if not space.additive:
        raise Unsupported("the graph test needs an additive closure")
    idx = np.asarray(a.indices(), dtype=np.intp)
    if idx.size <= 1:
        return True
    sub = space.step_matrix[idx][:, idx]
    connection = "strong" if variant == "one-sided" else "weak"
    count, _ = csgraph.connected_components(sub, directed=True, connection=connection)
    return count == 1


def check_until_leq_surrounded(model: SpaceModel | Space, samples: int = 10, seed: int = 0,
                               pairs: Sequence[tuple[Subset, Subset]] | None = None) -> dict[str, Any]:
    """Compare ``phi U psi`` with ``phi S psi`` on random or given pairs; never raises on a violation."""
    space = model.space if isinstance(model, SpaceModel) else model
    alg = space.algebra
    if pairs is None:
        rng = random.Random(seed)
        pairs = [(alg.random_element(rng), alg.random_element(rng)) for _ in range(samples)]
    violations = []
    for phi, psi in pairs:
        u = until(space, phi, psi)
        s = surrounded(space, phi, psi)
        if not alg.leq(u, s):
            violations.append({"phi": alg.to_json(phi), "psi": alg.to_json(psi),
                               "until": alg.to_json(u), "surrounded": alg.to_json(s)})
    return {"checked": len(pairs), "seed": seed, "violations": violations}


# -- formula evaluation ---------------------------------------------------


Context = tuple[tuple[str, str], ...]


@dataclass
class Evaluator:
    """Evaluates formulas over a family of sorts (named models).

    Results are memoised per ``(formula, context)`` for the lifetime of the
    evaluator, which should not be shared between threads.
    """

    sorts: Mapping[str, SpaceModel]
    until_cap: int = UNTIL_CAP
    max_context: int = MAX_CONTEXT
    cache: dict[tuple[Formula, Context], Element] = field(default_factory=dict)
    _spaces: dict[tuple[str, ...], Space] = field(default_factory=dict)

    def sort(self, name: str) -> SpaceModel:
        try:
            return self.sorts[name]
        except KeyError:
            raise UnknownSort(name) from None

    def space(self, ctx: Context) -> Space:
        key = tuple(s for _, s in ctx)
        sp = self._spaces.get(key)
        if sp is None:
            if len(key) > self.max_context:
                raise TooLarge("context variables", len(key), self.max_context)
            if len(key) == 1:
                sp = self.sort(key[0]).space
            elif not key:
                sp = UnitSpace()
            else:
                sp = product_space(*(self.sort(s).space for s in key))
            self._spaces[key] = sp
        return sp

    def _coordinate(self, ctx: Context, var: str) -> int:
        for i, (v, _) in enumerate(ctx):
            if v == var:
                return i
        raise ValidationError("context", f"variable {var!r} is not in the context")

    def _factors(self, ctx: Context):
        return [self.sort(s).space.algebra for _, s in ctx]

    def evaluate(self, phi: Formula, ctx: Context) -> Element:
        key = (phi, ctx)
        hit = self.cache.get(key)
        if hit is None:
            hit = self.cache[key] = self._eval(phi, ctx)
        return hit

    def _eval(self, phi: Formula, ctx: Context) -> Element:
        space = self.space(ctx)
        alg = space.algebra
        ev = self.evaluate
        if isinstance(phi, Top):
            return alg.top
        if isinstance(phi, Bottom):
            return alg.bottom
        if isinstance(phi, Atom):
            return self._atom(phi, ctx)
        if isinstance(phi, Not):
            return alg.neg(ev(phi.body, ctx))
        if isinstance(phi, And):
            return alg.meet(ev(phi.left, ctx), ev(phi.right, ctx))
        if isinstance(phi, Or):
            return alg.join(ev(phi.left, ctx), ev(phi.right, ctx))
        if isinstance(phi, Implies):
            return alg.implies(ev(phi.left, ctx), ev(phi.right, ctx))
        if isinstance(phi, Closure):
            return space.closure(ev(phi.body, ctx))
        if isinstance(phi, Boundary):
            return boundary(space, ev(phi.body, ctx))
        if isinstance(phi, Until):
            return until(space, ev(phi.left, ctx), ev(phi.right, ctx), self.until_cap)
        if isinstance(phi, Surrounded):
            return surrounded(space, ev(phi.left, ctx), ev(phi.right, ctx))
        if isinstance(phi, Reach):
            return reach(space, ev(phi.body, ctx), phi.bound)
        if isinstance(phi, (Exists, Forall)):
            return self._quantifier(phi, ctx)
        if isinstance(phi, Eq):
            return self._eq(phi, ctx)
        raise TypeError(f"not a formula: {phi!r}")

    def _atom(self, phi: Atom, ctx: Context) -> Element:
        if not phi.args:
            if len(ctx) != 1:
                raise ValidationError("atom arity", f"atom {phi.name!r} needs an argument in a context of {len(ctx)} variables")
            args = (ctx[0][0],)
        else:
            args = phi.args
        if len(args) != 1:
            raise ValidationError("atom arity", f"atom {phi.name!r} is unary")
        i = self._coordinate(ctx, args[0])
        value = self.sort(ctx[i][1]).atom(phi.name)
        if len(ctx) == 1:
            return value
        space = self.space(ctx)
        proj = projection(self._factors(ctx), [i], product=space.algebra)
        return preimage(proj, value)

    def _quantifier(self, phi: Exists | Forall, ctx: Context) -> Element:
        if any(v == phi.var for v, _ in ctx):
            raise ValidationError("context", f"variable {phi.var!r} is already bound")
        self.sort(phi.sort)
        inner = ctx + ((phi.var, phi.sort),)
        body = self.evaluate(phi.body, inner)
        proj = projection(self._factors(inner), list(range(len(ctx))),
                          product=self.space(inner).algebra, target=self.space(ctx).algebra)
        image = direct_image if isinstance(phi, Exists) else universal_image
        return image(proj, body)

    def _eq(self, phi: Eq, ctx: Context) -> Element:
        i, j = self._coordinate(ctx, phi.left), self._coordinate(ctx, phi.right)
        if ctx[i][1] != ctx[j][1]:
            raise ValidationError("equality", f"{phi.left!r} and {phi.right!r} have different sorts")
        sort_alg = self.sort(ctx[i][1]).space.algebra
        square = product_algebra(sort_alg, sort_alg)
        space = self.space(ctx)
        m = sort_alg.n
        if len(ctx) == 1:
            table = [x * m + x for x in range(m)]
        else:
            sizes = [a.n for a in self._factors(ctx)]
            coords = np.indices(sizes).reshape(len(sizes), -1)
            table = (coords[i] * m + coords[j]).tolist()
        pairing = FiniteMap(space.algebra, square, table)
        return preimage(pairing, diagonal(sort_alg, square))


def default_context(model: SpaceModel) -> Context:
    return (("_", model.name),)


def _as_formula(phi: Formula | str) -> Formula:
    return parse_formula(phi) if isinstance(phi, str) else phi


def evaluate(model: SpaceModel, phi: Formula | str, context: Sequence[tuple[str, str]] | None = None,
             sorts: Mapping[str, SpaceModel] | None = None, until_cap: int = UNTIL_CAP,
             max_context: int = MAX_CONTEXT) -> Element:
    """Denotation of ``phi`` over the product of the context sorts.

    The default context is a single variable ranging over ``model``, so
    propositional formulas come back as predicates on the model carrier.
    """
    phi = _as_formula(phi)
    ctx: Context = tuple((str(v), str(s)) for v, s in context) if context is not None else default_context(model)
    names = [v for v, _ in ctx]
    if len(set(names)) != len(names):
        raise ValidationError("context", "variable names must be distinct")
    loose = free_vars(phi) - set(names)
    if loose:
        raise ValidationError("context", f"free variable {sorted(loose)[0]!r} is not in the context")
    all_sorts = dict(sorts or {})
    all_sorts.setdefault(model.name, model)
    return Evaluator(all_sorts, until_cap, max_context).evaluate(phi, ctx)


def _operand(model: SpaceModel, x: Element | Formula | str) -> Element:
    if isinstance(x, Element):
        return x
    return evaluate(model, x)


def eval_boundary(model: SpaceModel, phi) -> Element:
    return boundary(model.space, _operand(model, phi))


def eval_until(model: SpaceModel, phi, psi, cap: int = UNTIL_CAP) -> Element:
    return until(model.space, _operand(model, phi), _operand(model, psi), cap)


def eval_until_oracle(model: SpaceModel, phi, psi, cap: int = UNTIL_CAP) -> UntilResult:
    return until_oracle(model.space, _operand(model, phi), _operand(model, psi), cap)


def eval_reach(model: SpaceModel, phi, bound: int | None = None) -> Subset:
    return reach(model.space, _operand(model, phi), bound)


def eval_surrounded(model: SpaceModel, phi, psi) -> Subset:
    return surrounded(model.space, _operand(model, phi), _operand(model, psi))


def eval_surrounded_oracle(model: SpaceModel, phi, psi, maxlen: int | None = None,
                           cap: int = PATH_CAP) -> Subset:
    return surrounded_oracle(model.space, _operand(model, phi), _operand(model, psi), maxlen, cap)
