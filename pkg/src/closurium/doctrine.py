"""Predicate transformations along maps of finite carriers, plus law checkers.

Predicates over a carrier are elements of a :class:`PowersetAlgebra` or a
:class:`FuzzyPredicateAlgebra`. A :class:`FiniteMap` between two such algebras
acts on predicates by preimage, direct image and universal image; products of
carriers are laid out row-major so that projections and diagonals are fixed.

The ``check_*`` functions return :class:`LawResult` values. A failing result
always carries a witness that can be re-verified against the operator.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field
from typing import Any, Callable, Hashable, Iterable, Iterator, Sequence

import numpy as np

from . import __version__
from .algebra import (
    DEFAULT_CAP,
    Algebra,
    Element,
    FuzzyPredicateAlgebra,
    FuzzySet,
    PowersetAlgebra,
    Subset,
)
from .bitsets import bits_to_mask, mask_to_bits
from .errors import AlgebraMismatch, TooLarge, ValidationError

PredicateAlgebra = PowersetAlgebra | FuzzyPredicateAlgebra

HOLDS = "holds"
FAILS = "fails"
NOT_CHECKED = "not_checked"


# -- maps -----------------------------------------------------------------


class FiniteMap:
    """A total function between the carriers of two predicate algebras.

    ``table[i]`` is the codomain index of domain point ``i``.
    """

    def __init__(self, domain: PredicateAlgebra, codomain: PredicateAlgebra, table: Sequence[int]):
        if type(domain) is not type(codomain):
            raise AlgebraMismatch("map between different algebra families")
        if isinstance(domain, FuzzyPredicateAlgebra) and domain.k != codomain.k:
            raise AlgebraMismatch("fuzzy map between chains of different resolution")
        table = tuple(int(t) for t in table)
        if len(table) != domain.n:
            raise ValidationError("map totality", f"{len(table)} images for {domain.n} domain points")
        for i, t in enumerate(table):
            if not 0 <= t < codomain.n:
                raise ValidationError("map totality", f"point {domain.points[i]!r} has no image")
        self.domain = domain
        self.codomain = codomain
        self.table = table
        self._arr = np.asarray(table, dtype=np.intp)

    @classmethod
    def from_function(cls, domain: PredicateAlgebra, codomain: PredicateAlgebra,
                      fn: Callable[[Hashable], Hashable]) -> FiniteMap:
        table = []
        for p in domain.points:
            q = fn(p)
            if q not in codomain.index:
                raise ValidationError("map totality", f"{p!r} maps to {q!r}, not in codomain")
            table.append(codomain.index[q])
        return cls(domain, codomain, table)

    @classmethod
    def identity(cls, algebra: PredicateAlgebra) -> FiniteMap:
        return cls(algebra, algebra, range(algebra.n))

    def __call__(self, point: Hashable) -> Hashable:
        return self.codomain.points[self.table[self.domain.index[point]]]

    def compose(self, g: FiniteMap) -> FiniteMap:
        """``g`` after ``self``."""
        if g.domain != self.codomain:
            raise AlgebraMismatch("maps are not composable")
        return FiniteMap(self.domain, g.codomain, [g.table[t] for t in self.table])

    def fibers(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.codomain.n)]
        for i, t in enumerate(self.table):
            out[t].append(i)
        return out

    def __repr__(self) -> str:
        return f"FiniteMap({self.domain!r} -> {self.codomain!r})"


def product_algebra(*factors: PredicateAlgebra) -> PredicateAlgebra:
    """Carrier product, row-major: the last factor varies fastest.

    Points of the product are tuples of factor points. A fuzzy product takes
    the pointwise meet of the factor memberships.
    """
    if not factors:
        raise ValidationError("product", "at least one factor required")
    kinds = {type(f) for f in factors}
    if len(kinds) != 1:
        raise AlgebraMismatch("product of different algebra families")
    points = list(itertools.product(*(f.points for f in factors)))
    if isinstance(factors[0], PowersetAlgebra):
        return PowersetAlgebra(points)
    ks = {f.k for f in factors}
    if len(ks) != 1:
        raise AlgebraMismatch("fuzzy product over chains of different resolution")
    memberships = [min(ms) for ms in itertools.product(*(f.membership for f in factors))]
    return FuzzyPredicateAlgebra(points, factors[0].chain, [_frac(m, factors[0].k) for m in memberships])


def _frac(num: int, k: int) -> str:
    return f"{num}/{k}"


def _strides(sizes: Sequence[int]) -> list[int]:
    strides = [1] * len(sizes)
    for i in range(len(sizes) - 2, -1, -1):
        strides[i] = strides[i + 1] * sizes[i + 1]
    return strides


def projection(factors: Sequence[PredicateAlgebra], keep: Sequence[int],
               product: PredicateAlgebra | None = None,
               target: PredicateAlgebra | None = None) -> FiniteMap:
    """The projection from ``prod(factors)`` onto the product of ``factors[i]`` for ``i in keep``.

    When ``keep`` is a single index the target is that factor itself; an empty
    ``keep`` projects onto the one-point carrier.
    """
    sizes = [f.n for f in factors]
    product = product if product is not None else product_algebra(*factors)
    if target is None:
        if len(keep) == 1:
            target = factors[keep[0]]
        elif not keep:
            target = unit_algebra(factors[0])
        else:
            target = product_algebra(*(factors[i] for i in keep))
    coords = np.indices(sizes).reshape(len(sizes), -1) if sizes else np.zeros((0, 1), dtype=int)
    kept_sizes = [sizes[i] for i in keep]
    kept_strides = _strides(kept_sizes)
    table = np.zeros(product.n, dtype=np.intp)
    for s, i in zip(kept_strides, keep):
        table += s * coords[i]
    return FiniteMap(product, target, table.tolist())


def unit_algebra(like: PredicateAlgebra) -> PredicateAlgebra:
    """The predicate algebra of a one-point carrier in the same family as ``like``."""
    if isinstance(like, FuzzyPredicateAlgebra):
        return FuzzyPredicateAlgebra([()], like.chain)
    return PowersetAlgebra([()])


def diagonal(algebra: PredicateAlgebra, product: PredicateAlgebra | None = None) -> Element:
    """Fibered equality on ``algebra x algebra``; fuzzy carriers put ``alpha(x)`` at ``(x, x)``."""
    product = product if product is not None else product_algebra(algebra, algebra)
    n = algebra.n
    if isinstance(algebra, PowersetAlgebra):
        bits = 0
        for i in range(n):
            bits |= 1 << (i * n + i)
        return product.from_bits(bits)
    vals = [0] * (n * n)
    for i in range(n):
        vals[i * n + i] = algebra.membership[i]
    return product.from_numerators(vals)


# -- predicate transformers -----------------------------------------------


def preimage(f: FiniteMap, b: Element) -> Element:
    f.codomain._own(b)
    if isinstance(b, Subset):
        mask = bits_to_mask(b.bits, f.codomain.n)
        return f.domain.from_bits(mask_to_bits(mask[f._arr]))
    vals = np.asarray(b.values, dtype=np.int64)[f._arr]
    alpha = np.asarray(f.domain.membership, dtype=np.int64)
    return FuzzySet(f.domain, tuple(np.minimum(alpha, vals).tolist()))


def direct_image(f: FiniteMap, a: Element) -> Element:
    f.domain._own(a)
    if isinstance(a, Subset):
        mask = bits_to_mask(a.bits, f.domain.n)
        out = np.zeros(f.codomain.n, dtype=bool)
        out[f._arr[mask]] = True
        return f.codomain.from_bits(mask_to_bits(out))
    out = np.zeros(f.codomain.n, dtype=np.int64)
    np.maximum.at(out, f._arr, np.asarray(a.values, dtype=np.int64))
    beta = np.asarray(f.codomain.membership, dtype=np.int64)
    # the fiberwise join is already below beta when f respects memberships
    return FuzzySet(f.codomain, tuple(np.minimum(out, beta).tolist()))


def universal_image(f: FiniteMap, a: Element) -> Element:
    f.domain._own(a)
    if isinstance(a, Subset):
        mask = bits_to_mask(a.bits, f.domain.n)
        bad = np.zeros(f.codomain.n, dtype=bool)
        bad[f._arr[~mask]] = True
        return f.codomain.from_bits(mask_to_bits(~bad))
    k = f.domain.k
    xi = np.asarray(a.values, dtype=np.int64)
    alpha = np.asarray(f.domain.membership, dtype=np.int64)
    impl = np.where(alpha <= xi, k, xi)
    out = np.asarray(f.codomain.membership, dtype=np.int64).copy()
    np.minimum.at(out, f._arr, impl)
    return FuzzySet(f.codomain, tuple(out.tolist()))


# -- closure operators and reports ----------------------------------------


class ClosureOperator:
    """A named endo-map on a predicate algebra, meant to be monotone and inflationary."""

    def __init__(self, algebra: Algebra, apply: Callable[[Element], Element], name: str = "closure"):
        self.algebra = algebra
        self._apply = apply
        self.name = name

    def __call__(self, a: Element) -> Element:
        self.algebra._own(a)
        return self._apply(a)

    def __repr__(self) -> str:
        return f"ClosureOperator({self.name!r} on {self.algebra!r})"


def identity_operator(algebra: Algebra) -> ClosureOperator:
    return ClosureOperator(algebra, lambda a: a, "identity")


@dataclass(frozen=True)
class LawResult:
    """Outcome of one law check; ``witness`` holds the violating element(s)."""

    law: str
    status: str
    witness: tuple[Element, ...] | None = None
    detail: str = ""

    @property
    def holds(self) -> bool:
        return self.status == HOLDS

    @property
    def fails(self) -> bool:
        return self.status == FAILS

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {"status": self.status}
        if self.witness is not None:
            out["witness"] = [w.algebra.to_json(w) for w in self.witness]
        if self.detail:
            out["detail"] = self.detail
        return out


CLOSURE_LAWS = ("inflationary", "monotone", "grounded", "additive",
                "finitely_additive", "fully_additive", "idempotent")


@dataclass
class LawReport:
    operator: str
    mode: str
    seed: int | None
    samples: int | None
    results: dict[str, LawResult] = field(default_factory=dict)

    def __getitem__(self, law: str) -> LawResult:
        return self.results[law]

    def status(self, law: str) -> str:
        return self.results[law].status if law in self.results else NOT_CHECKED

    def to_json(self) -> dict[str, Any]:
        return {
            "version": __version__,
            "operator": self.operator,
            "mode": self.mode,
            "seed": self.seed,
            "samples": self.samples,
            "laws": {name: r.to_json() for name, r in self.results.items()},
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)

    def reverify(self, op: ClosureOperator) -> bool:
        """Recompute every recorded failure from its witness alone."""
        return all(violates(op, r.law, r.witness) for r in self.results.values() if r.fails)


def violates(op: ClosureOperator, law: str, witness: tuple[Element, ...]) -> bool:
    """True iff ``witness`` exhibits a violation of ``law`` by ``op``."""
    alg = op.algebra
    c = op
    if law == "inflationary":
        (a,) = witness
        return not alg.leq(a, c(a))
    if law == "monotone":
        a, b = witness
        return alg.leq(a, b) and not alg.leq(c(a), c(b))
    if law == "grounded":
        return c(alg.bottom) != alg.bottom
    if law == "idempotent":
        (a,) = witness
        return c(c(a)) != c(a)
    if law in ("additive", "finitely_additive"):
        if law == "finitely_additive" and len(witness) == 1:
            return c(alg.bottom) != alg.bottom
        a, b = witness
        return c(alg.join(a, b)) != alg.join(c(a), c(b))
    if law == "fully_additive":
        if not witness:
            return False
        return c(alg.join_all(witness)) != alg.join_all(c(w) for w in witness)
    raise ValueError(f"unknown law {law!r}")


def _ordered_elements(alg: Algebra, cap: int) -> list[Element]:
    """All elements, smallest rank first; the order that makes witnesses minimal."""
    elems = list(alg.elements(cap))
    elems.sort(key=alg.rank)
    return elems


def _atoms_of(alg: Algebra, a: Element) -> list[Element]:
    out = []
    while True:
        parts = alg.split(a)
        if parts is None:
            if a != alg.bottom:
                out.append(a)
            return out
        j, a = parts
        out.append(j)


def check_closure_laws(op: ClosureOperator, mode: str = "exhaustive", samples: int = 256,
                       seed: int = 0, cap: int = DEFAULT_CAP,
                       laws: Iterable[str] | None = None) -> LawReport:
    """Check the closure-operator laws of ``op``.

    ``mode="exhaustive"`` walks every element (raising :class:`TooLarge` above
    ``cap``); ``mode="sampled"`` draws ``samples`` elements and as many pairs
    from a generator seeded with ``seed``.

    Additivity is decided through join-irreducible decompositions: ``c(a)``
    must equal ``c(j) | c(rest)`` for the split ``a = j | rest``, together with
    monotonicity, which is equivalent to preserving all binary joins on a
    finite algebra. ``finitely_additive`` adds the empty join (groundedness) and
    ``fully_additive`` compares ``c(a)`` with the join of ``c`` over every
    join-irreducible below ``a``.
    """
    selected = tuple(CLOSURE_LAWS if laws is None else laws)
    for law in selected:
        if law not in CLOSURE_LAWS:
            raise ValueError(f"unknown law {law!r}")
    alg = op.algebra
    memo: dict[Element, Element] = {}

    def c(a: Element) -> Element:
        r = memo.get(a)
        if r is None:
            r = memo[a] = op(a)
        return r

    if mode == "exhaustive":
        elems = _ordered_elements(alg, cap)
        pairs: Iterator[tuple[Element, Element]] | None = None
        report = LawReport(op.name, mode, None, None)
    elif mode == "sampled":
        rng = random.Random(seed)
        elems = [alg.bottom, alg.top] + [alg.random_element(rng) for _ in range(samples)]
        elems.sort(key=alg.rank)
        pair_list = [(alg.random_element(rng), alg.random_element(rng)) for _ in range(samples)]
        pair_list.sort(key=lambda p: alg.rank(p[0]) + alg.rank(p[1]))
        pairs = iter(pair_list)
        report = LawReport(op.name, mode, seed, samples)
    else:
        raise ValueError(f"unknown mode {mode!r}")

    bottom = alg.bottom
    res: dict[str, LawResult] = {}

    def first(law: str, gen: Iterable[tuple[Element, ...] | None]) -> LawResult:
        for w in gen:
            if w is not None:
                return LawResult(law, FAILS, w)
        return LawResult(law, HOLDS)

    res["inflationary"] = first("inflationary", ((a,) if not alg.leq(a, c(a)) else None for a in elems))

    def monotone_witnesses():
        for b in elems:
            cb = c(b)
            for a in alg.lower_covers(b):
                if not alg.leq(c(a), cb):
                    yield (a, b)
        if pairs is not None:
            for a, b in pair_list:
                lo = alg.meet(a, b)
                if not alg.leq(c(lo), c(a)):
                    yield (lo, a)

    res["monotone"] = first("monotone", monotone_witnesses())
    grounded_ok = c(bottom) == bottom
    res["grounded"] = LawResult("grounded", HOLDS) if grounded_ok else LawResult("grounded", FAILS, (bottom,))

    def additive_witnesses():
        if res["monotone"].fails:
            yield res["monotone"].witness
        for a in elems:
            parts = alg.split(a)
            if parts is not None:
                j, rest = parts
                if c(a) != alg.join(c(j), c(rest)):
                    yield (j, rest)
        if pairs is not None:
            for a, b in pair_list:
                if c(alg.join(a, b)) != alg.join(c(a), c(b)):
                    yield (a, b)

    additive = first("additive", additive_witnesses())
    res["additive"] = additive
    if not grounded_ok:
        res["finitely_additive"] = LawResult("finitely_additive", FAILS, (bottom,), "empty join not preserved")
    else:
        res["finitely_additive"] = LawResult("finitely_additive", additive.status, additive.witness)

    def fully_witnesses():
        if res["monotone"].fails:
            yield res["monotone"].witness
        for a in elems:
            atoms = _atoms_of(alg, a)
            if len(atoms) >= 2 and c(a) != alg.join_all(c(j) for j in atoms):
                yield tuple(atoms)

    res["fully_additive"] = first("fully_additive", fully_witnesses())
    res["idempotent"] = first("idempotent", ((a,) if c(c(a)) != c(a) else None for a in elems))
    report.results = {law: res[law] for law in selected}
    return report


def _domain_elements(alg: Algebra, mode: str, samples: int, seed: int, cap: int) -> Iterable[Element]:
    if mode == "exhaustive":
        return _ordered_elements(alg, cap)
    if mode == "sampled":
        rng = random.Random(seed)
        return [alg.bottom, alg.top] + [alg.random_element(rng) for _ in range(samples)]
    raise ValueError(f"unknown mode {mode!r}")


def check_map_continuity(f: FiniteMap, cD: ClosureOperator, cC: ClosureOperator,
                         mode: str = "exhaustive", samples: int = 256, seed: int = 0,
                         cap: int = DEFAULT_CAP) -> LawResult:
    """``cD(f*(b)) <= f*(cC(b))`` for codomain predicates ``b``; witness ``(b,)``."""
    _require(cD.algebra == f.domain and cC.algebra == f.codomain)
    for b in _domain_elements(f.codomain, mode, samples, seed, cap):
        if not f.domain.leq(cD(preimage(f, b)), preimage(f, cC(b))):
            return LawResult("continuity", FAILS, (b,))
    return LawResult("continuity", HOLDS)


def check_image_inequality(f: FiniteMap, cD: ClosureOperator, cC: ClosureOperator,
                           mode: str = "exhaustive", samples: int = 256, seed: int = 0,
                           cap: int = DEFAULT_CAP) -> LawResult:
    """``f_!(cD(a)) <= cC(f_!(a))`` for domain predicates ``a``; witness ``(a,)``."""
    _require(cD.algebra == f.domain and cC.algebra == f.codomain)
    for a in _domain_elements(f.domain, mode, samples, seed, cap):
        if not f.codomain.leq(direct_image(f, cD(a)), cC(direct_image(f, a))):
            return LawResult("image", FAILS, (a,))
    return LawResult("image", HOLDS)


def _require(ok: bool) -> None:
    if not ok:
        raise AlgebraMismatch("closure operators do not live on the map's algebras")


def _pairs(first: Algebra, second: Algebra, mode: str, samples: int, seed: int, cap: int):
    if mode == "exhaustive":
        size = first.size * second.size
        if size > cap:
            raise TooLarge("pair enumeration", size, cap)
        return itertools.product(list(first.elements(cap)), list(second.elements(cap)))
    rng = random.Random(seed)
    return [(first.random_element(rng), second.random_element(rng)) for _ in range(samples)]


def check_frobenius(proj: FiniteMap, mode: str = "exhaustive", samples: int = 256,
                    seed: int = 0, cap: int = DEFAULT_CAP) -> LawResult:
    """``E(P(alpha) & beta) == alpha & E(beta)`` along ``proj``; witness ``(alpha, beta)``."""
    C, DC = proj.codomain, proj.domain
    for alpha, beta in _pairs(C, DC, mode, samples, seed, cap):
        lhs = direct_image(proj, DC.meet(preimage(proj, alpha), beta))
        rhs = C.meet(alpha, direct_image(proj, beta))
        if lhs != rhs:
            return LawResult("frobenius", FAILS, (alpha, beta))
    return LawResult("frobenius", HOLDS)


def beck_chevalley_square(f: FiniteMap, D: PredicateAlgebra):
    """The pullback of ``pi_C: D x C -> C`` along ``f: C' -> C``.

    Returns ``(D x C, D x C', 1 x f, pi_C, pi_C')``.
    """
    C1, C = f.domain, f.codomain
    DC = product_algebra(D, C)
    DC1 = product_algebra(D, C1)
    nC, nC1 = C.n, C1.n
    one_f = FiniteMap(DC1, DC, [(i // nC1) * nC + f.table[i % nC1] for i in range(DC1.n)])
    pi_C = projection([D, C], [1], product=DC)
    pi_C1 = projection([D, C1], [1], product=DC1)
    return DC, DC1, one_f, pi_C, pi_C1


def check_beck_chevalley(f: FiniteMap, D: PredicateAlgebra, quantifier: str = "exists",
                         mode: str = "exhaustive", samples: int = 256, seed: int = 0,
                         cap: int = DEFAULT_CAP) -> LawResult:
    """``Q_{pi_C'} . P_{1 x f} == P_f . Q_{pi_C}`` on predicates over ``D x C``.

    ``quantifier`` is ``"exists"`` (direct image) or ``"forall"`` (universal image).
    """
    image = {"exists": direct_image, "forall": universal_image}[quantifier]
    DC, _, one_f, pi_C, pi_C1 = beck_chevalley_square(f, D)
    for a in _domain_elements(DC, mode, samples, seed, cap):
        if image(pi_C1, preimage(one_f, a)) != preimage(f, image(pi_C, a)):
            return LawResult(f"beck_chevalley_{quantifier}", FAILS, (a,))
    return LawResult(f"beck_chevalley_{quantifier}", HOLDS)
