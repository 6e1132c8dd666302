"""Finite closure-space backends and the model container used by the evaluator.

Every backend exposes a predicate algebra and a closure operator on it.
Point-based backends (everything except :class:`FuzzySpace`) work on
:class:`~closurium.algebra.PowersetAlgebra` and additionally expose the
*step graph*: an edge ``x -> y`` whenever ``y`` lies in ``c({x})``. Path
semantics (reachability, escape routes) is defined on that graph, since a
path ``p`` is continuous exactly when ``p(i+1)`` lies in ``c({p(i)})``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import lcm
from typing import Any, Hashable, Iterable, Mapping, Sequence

import numpy as np
from scipy import sparse

from .algebra import (
    Element,
    FuzzyPredicateAlgebra,
    FuzzySet,
    HeytingChain,
    PowersetAlgebra,
    Subset,
    iter_bits,
    parse_rational,
)
from .bitsets import bits_to_mask, mask_to_bits
from .doctrine import ClosureOperator
from .errors import UnknownAtom, Unsupported, ValidationError

# above this many points closures go through sparse matrix products
_VECTOR_THRESHOLD = 512


class Space:
    """Base class: a finite carrier with a closure operator on its predicates."""

    kind = "abstract"
    #: closure preserves binary joins (hence all non-empty finite joins)
    additive = False
    point_based = True

    algebra: PowersetAlgebra | FuzzyPredicateAlgebra

    @property
    def points(self) -> tuple[Hashable, ...]:
        return self.algebra.points

    @property
    def n(self) -> int:
        return self.algebra.n

    def closure(self, a: Element) -> Element:
        self.algebra._own(a)
        return Subset(self.algebra, self.closure_bits(a.bits))

    def closure_bits(self, bits: int) -> int:
        raise NotImplementedError

    def closure_mask(self, mask: np.ndarray) -> np.ndarray:
        return bits_to_mask(self.closure_bits(mask_to_bits(mask)), self.n)

    def operator(self) -> ClosureOperator:
        return ClosureOperator(self.algebra, self.closure, self.describe())

    def describe(self) -> str:
        return self.kind

    @cached_property
    def singleton_closures(self) -> tuple[int, ...]:
        return tuple(self.closure_bits(1 << i) for i in range(self.n))

    @cached_property
    def step_matrix(self) -> sparse.csr_matrix:
        """Sparse adjacency ``x -> y`` for ``y`` in ``c({x})`` minus ``x``."""
        rows, cols = [], []
        for x, bits in enumerate(self.singleton_closures):
            for y in iter_bits(bits & ~(1 << x)):
                rows.append(x)
                cols.append(y)
        return _csr(rows, cols, self.n)

    @cached_property
    def reverse_step_matrix(self) -> sparse.csr_matrix:
        return self.step_matrix.T.tocsr()

    def require_point_based(self, what: str) -> None:
        if not self.point_based:
            raise Unsupported(f"{what} is not defined for the {self.kind} backend")


def _csr(rows: Sequence[int], cols: Sequence[int], n: int) -> sparse.csr_matrix:
    data = np.ones(len(rows), dtype=np.int8)
    m = sparse.csr_matrix((data, (np.asarray(rows, dtype=np.intp), np.asarray(cols, dtype=np.intp))),
                          shape=(n, n))
    m.sum_duplicates()
    m.data[:] = 1
    return m


class SuccessorSpace(Space):
    """Closure ``c(A) = A | succ(A)`` for a successor relation; grounded and fully additive."""

    additive = True
    kind = "successor"

    def __init__(self, points: Iterable[Hashable], edges: Iterable[tuple[int, int]]):
        self.algebra = PowersetAlgebra(points)
        n = self.algebra.n
        rows, cols = [], []
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValidationError("edge endpoints", f"({u}, {v}) outside carrier of size {n}")
            rows.append(u)
            cols.append(v)
        self.adj = _csr(rows, cols, n)
        self._adj_t = self.adj.T.tocsr()
        self._succ: tuple[int, ...] | None = None

    @property
    def succ_bits(self) -> tuple[int, ...]:
        if self._succ is None:
            indptr, indices = self.adj.indptr, self.adj.indices
            self._succ = tuple(
                sum(1 << int(j) for j in indices[indptr[i]:indptr[i + 1]]) for i in range(self.n))
        return self._succ

    @property
    def edge_count(self) -> int:
        return int(self.step_matrix.nnz)

    def closure_bits(self, bits: int) -> int:
        if self.n > _VECTOR_THRESHOLD:
            return mask_to_bits(self.closure_mask(bits_to_mask(bits, self.n)))
        succ = self.succ_bits
        out = bits
        for i in iter_bits(bits):
            out |= succ[i]
        return out

    def closure_mask(self, mask: np.ndarray) -> np.ndarray:
        return mask | (self._adj_t @ mask.astype(np.int8) > 0)

    @cached_property
    def step_matrix(self) -> sparse.csr_matrix:
        coo = self.adj.tocoo()
        off = coo.row != coo.col
        return _csr(coo.row[off], coo.col[off], self.n)


class GraphSpace(SuccessorSpace):
    """Quasi-discrete closure space of a directed graph.

    ``direction="forward"`` adds successors, ``"backward"`` predecessors and
    ``"symmetric"`` both.
    """

    kind = "graph"

    def __init__(self, points: Iterable[Hashable], edges: Iterable[tuple[Hashable, Hashable]],
                 direction: str = "forward"):
        points = tuple(points)
        index = {p: i for i, p in enumerate(points)}
        pairs = []
        for u, v in edges:
            if u not in index or v not in index:
                raise ValidationError("edge endpoints", f"edge ({u!r}, {v!r}) mentions an unknown point")
            pairs.append((index[u], index[v]))
        if direction == "forward":
            steps = pairs
        elif direction == "backward":
            steps = [(v, u) for u, v in pairs]
        elif direction == "symmetric":
            steps = pairs + [(v, u) for u, v in pairs]
        else:
            raise ValidationError("direction", f"unknown direction {direction!r}")
        self.direction = direction
        self.edges = tuple(pairs)
        super().__init__(points, steps)

    def describe(self) -> str:
        return f"graph[{self.direction}]"


ADJACENCIES = {
    "von-neumann-4": ((1, 0), (-1, 0), (0, 1), (0, -1)),
    "moore-8": ((1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (1, -1), (-1, 1), (-1, -1)),
}


class GridSpace(SuccessorSpace):
    """A ``width x height`` pixel grid; point ``(x, y)`` has index ``y * width + x``."""

    kind = "grid"

    def __init__(self, width: int, height: int, adjacency: str = "von-neumann-4"):
        if width < 1 or height < 1:
            raise ValidationError("grid size", f"{width}x{height}")
        if adjacency not in ADJACENCIES:
            raise ValidationError("adjacency", f"unknown adjacency {adjacency!r}")
        self.width, self.height, self.adjacency = width, height, adjacency
        ys, xs = np.divmod(np.arange(width * height), width)
        rows, cols = [], []
        for dx, dy in ADJACENCIES[adjacency]:
            nx, ny = xs + dx, ys + dy
            ok = (nx >= 0) & (nx < width) & (ny >= 0) & (ny < height)
            rows.append(np.flatnonzero(ok))
            cols.append((ny * width + nx)[ok])
        points = [(int(x), int(y)) for y in range(height) for x in range(width)]
        super().__init__(points, [])
        self.adj = _csr(np.concatenate(rows), np.concatenate(cols), width * height)
        self._adj_t = self.adj.T.tocsr()

    def describe(self) -> str:
        return f"grid[{self.width}x{self.height},{self.adjacency}]"


class KripkeFrame(Space):
    """A Kripke frame ``gamma: X -> P(X)`` with either closure.

    ``pre``: ``A | {x : gamma(x) <= A}``; ``suc``: ``A | union of gamma(a)``.
    """

    kind = "kripke"

    def __init__(self, points: Iterable[Hashable], gamma: Mapping[Hashable, Iterable[Hashable]] | Sequence[Iterable[Hashable]],
                 closure: str = "pre"):
        self.algebra = PowersetAlgebra(points)
        alg = self.algebra
        if isinstance(gamma, Mapping):
            missing = [p for p in alg.points if p not in gamma]
            if missing:
                raise ValidationError("successor map totality", f"no successors given for {missing[0]!r}")
            succ_lists = [gamma[p] for p in alg.points]
        else:
            if len(gamma) != alg.n:
                raise ValidationError("successor map totality", f"{len(gamma)} entries for {alg.n} points")
            succ_lists = list(gamma)
        self.gamma = tuple(alg.subset(s).bits for s in succ_lists)
        if closure not in ("pre", "suc"):
            raise ValidationError("kripke closure", f"unknown closure {closure!r}")
        self.mode = closure
        self.additive = closure == "suc"
        if closure == "suc":
            self._delegate = SuccessorSpace(alg.points, [(i, j) for i, g in enumerate(self.gamma) for j in iter_bits(g)])
            self._delegate.algebra = alg
        else:
            rows = [i for i, g in enumerate(self.gamma) for _ in iter_bits(g)]
            cols = [j for g in self.gamma for j in iter_bits(g)]
            self._g = _csr(rows, cols, alg.n)
            self._outdeg = np.asarray(self._g.sum(axis=1)).ravel()

    @property
    def serial(self) -> bool:
        return all(self.gamma)

    def describe(self) -> str:
        return f"kripke[{self.mode}]"

    def closure_bits(self, bits: int) -> int:
        if self.mode == "suc":
            return self._delegate.closure_bits(bits)
        if self.n > _VECTOR_THRESHOLD:
            return mask_to_bits(self.closure_mask(bits_to_mask(bits, self.n)))
        out = bits
        for x, g in enumerate(self.gamma):
            if g & ~bits == 0:
                out |= 1 << x
        return out

    def closure_mask(self, mask: np.ndarray) -> np.ndarray:
        if self.mode == "suc":
            return self._delegate.closure_mask(mask)
        inside = self._g @ mask.astype(np.int64)
        return mask | (inside == self._outdeg)


class MarkovFrame(Space):
    """A finite Markov chain with exact rational rows and threshold ``p``.

    ``c(A) = A | {x : P(x, A) >= p}``.
    """

    kind = "markov"

    def __init__(self, points: Iterable[Hashable], rows: Sequence[Sequence[Any]] | Mapping[Hashable, Any],
                 threshold: Any):
        self.algebra = PowersetAlgebra(points)
        alg = self.algebra
        n = alg.n
        matrix: list[list[Fraction]] = []
        if isinstance(rows, Mapping):
            for p in alg.points:
                row = rows.get(p, rows.get(str(p)))
                if row is None:
                    raise ValidationError("row-sum", f"missing row for {p!r}")
                matrix.append(self._row(row))
        else:
            if len(rows) != n:
                raise ValidationError("row-sum", f"{len(rows)} rows for {n} points")
            matrix = [self._row(r) for r in rows]
        for p, row in zip(alg.points, matrix):
            if any(v < 0 for v in row):
                raise ValidationError("row-sum", f"negative probability in row {p!r}")
            total = sum(row, Fraction(0))
            if total != 1:
                raise ValidationError("row-sum", f"row {p!r} sums to {total}, not 1")
        self.rows = tuple(tuple(r) for r in matrix)
        self.threshold = parse_rational(threshold)
        if not 0 <= self.threshold <= 1:
            raise ValidationError("threshold", f"p={self.threshold} outside [0,1]")
        # integer numerators over a common denominator keep comparisons exact
        den = lcm(*(v.denominator for r in self.rows for v in r), self.threshold.denominator) if n else 1
        self._den = den
        self._num = tuple(tuple(int(v * den) for v in r) for r in self.rows)
        self._p = int(self.threshold * den)

    def _row(self, row: Any) -> list[Fraction]:
        if isinstance(row, Mapping):
            out = [Fraction(0)] * self.algebra.n
            for q, v in row.items():
                from .algebra import _point_key
                out[self.algebra.index[_point_key(self.algebra, q)]] = parse_rational(v)
            return out
        if len(row) != self.algebra.n:
            raise ValidationError("row-sum", f"row of length {len(row)} for {self.algebra.n} points")
        return [parse_rational(v) for v in row]

    def describe(self) -> str:
        return f"markov[p={self.threshold}]"

    def closure_bits(self, bits: int) -> int:
        out = bits
        idx = list(iter_bits(bits))
        for x, row in enumerate(self._num):
            if sum(row[a] for a in idx) >= self._p:
                out |= 1 << x
        return out


class FuzzySpace(Space):
    """Fuzzy subsets of ``(X, alpha)`` with closure ``c(xi) = min(xi + eps, 1) & alpha``."""

    kind = "fuzzy"
    additive = True
    point_based = False

    def __init__(self, points: Iterable[Hashable], k: int | HeytingChain,
                 epsilon: Any | Mapping[Hashable, Any] | Sequence[Any] = 0,
                 membership: Mapping[Hashable, Any] | Sequence[Any] | None = None):
        self.algebra = FuzzyPredicateAlgebra(points, k, membership)
        alg = self.algebra
        if isinstance(epsilon, (Mapping, list, tuple)):
            self.epsilon = alg._numerators(epsilon)
        else:
            self.epsilon = (alg.chain.numerator_of(epsilon),) * alg.n

    def describe(self) -> str:
        return "fuzzy"

    def closure(self, a: Element) -> FuzzySet:
        self.algebra._own(a)
        k = self.algebra.k
        return FuzzySet(self.algebra, tuple(
            min(v + e, k, m) for v, e, m in zip(a.values, self.epsilon, self.algebra.membership)))

    def closure_bits(self, bits: int) -> int:
        raise Unsupported("fuzzy spaces have no point-set closure")


EXPLICIT_MAX_POINTS = 20


class ExplicitSpace(Space):
    """A closure given by a table, on at most 20 points.

    ``mode="additive"`` takes singleton closures and extends them by unions
    (``c(empty) = empty``); ``mode="full"`` takes ``c(A)`` for every subset.
    Tables are validated for inflation and monotonicity.
    """

    kind = "explicit"

    def __init__(self, points: Iterable[Hashable], table: Mapping[int, int] | Sequence[int], mode: str = "additive"):
        self.algebra = PowersetAlgebra(points)
        n = self.algebra.n
        if n > EXPLICIT_MAX_POINTS:
            raise ValidationError("explicit size", f"{n} points exceeds {EXPLICIT_MAX_POINTS}")
        self.mode = mode
        if mode == "additive":
            sing = [table[i] for i in range(n)] if isinstance(table, Mapping) else list(table)
            if len(sing) != n:
                raise ValidationError("explicit table", f"{len(sing)} singleton closures for {n} points")
            for i, b in enumerate(sing):
                if not (b >> i) & 1:
                    raise ValidationError("not-inflationary", f"c({{{self.points[i]!r}}}) does not contain the point")
            self._succ = tuple(sing)
            self.additive = True
        elif mode == "full":
            full = [table.get(b) if isinstance(table, Mapping) else table[b] for b in range(1 << n)] \
                if (isinstance(table, Mapping) or len(table) == 1 << n) else None
            if full is None or any(v is None for v in full):
                raise ValidationError("explicit table", f"full table must list all {1 << n} subsets")
            self._table = tuple(full)
            self._validate_full()
            self.additive = self._table_is_additive()
        else:
            raise ValidationError("explicit mode", f"unknown mode {mode!r}")

    def _name(self, bits: int) -> str:
        return "{" + ", ".join(repr(p) for p in Subset(self.algebra, bits).points()) + "}"

    def _validate_full(self) -> None:
        t = self._table
        for b, cb in enumerate(t):
            if b & ~cb:
                raise ValidationError("not-inflationary", f"c({self._name(b)}) = {self._name(cb)}")
            for i in iter_bits(b):
                lo = b ^ (1 << i)
                if t[lo] & ~cb:
                    raise ValidationError("not-monotone", f"c({self._name(lo)}) is not below c({self._name(b)})")

    def _table_is_additive(self) -> bool:
        t = self._table
        for b in range(1, 1 << self.n):
            low = b & -b
            if b != low and t[b] != t[low] | t[b ^ low]:
                return False
        return True

    def describe(self) -> str:
        return f"explicit[{self.mode}]"

    def closure_bits(self, bits: int) -> int:
        if self.mode == "full":
            return self._table[bits]
        out = bits
        for i in iter_bits(bits):
            out |= self._succ[i]
        return out


class UnitSpace(SuccessorSpace):
    """The one-point space, the carrier of the empty context."""

    kind = "unit"

    def __init__(self) -> None:
        super().__init__([()], [])


class ProductSpace(SuccessorSpace):
    """Product of point-based spaces; closure is the additive extension of
    ``c({(x, y)}) = c1({x}) x {y} | {x} x c2({y})`` (generalised to n factors)."""

    kind = "product"

    def __init__(self, factors: Sequence[Space]):
        for s in factors:
            if isinstance(s, (MarkovFrame, FuzzySpace)) or not s.point_based:
                raise Unsupported(f"products of {s.kind} spaces are not supported")
        self.factors = tuple(factors)
        sizes = [s.n for s in factors]
        strides = [1] * len(sizes)
        for i in range(len(sizes) - 2, -1, -1):
            strides[i] = strides[i + 1] * sizes[i + 1]
        points = list(itertools.product(*(s.points for s in factors)))
        total = len(points)
        coords = np.indices(sizes).reshape(len(sizes), -1) if sizes else np.zeros((0, 1), dtype=np.intp)
        flat = np.arange(total)
        rows, cols = [], []
        for f, (s, stride) in enumerate(zip(factors, strides)):
            step = s.step_matrix.tocoo()
            for u, v in zip(step.row, step.col):
                sel = flat[coords[f] == u]
                rows.append(sel)
                cols.append(sel + (int(v) - int(u)) * stride)
        r = np.concatenate(rows) if rows else np.zeros(0, dtype=np.intp)
        c = np.concatenate(cols) if cols else np.zeros(0, dtype=np.intp)
        super().__init__(points, [])
        self.adj = _csr(r, c, total)
        self._adj_t = self.adj.T.tocsr()

    def describe(self) -> str:
        return "product(" + ", ".join(s.describe() for s in self.factors) + ")"


def product_space(*spaces: Space) -> Space:
    if not spaces:
        return UnitSpace()
    return ProductSpace(spaces)


# -- models ---------------------------------------------------------------


@dataclass
class SpaceModel:
    """A space together with a valuation of atomic propositions."""

    space: Space
    atoms: dict[str, Element] = field(default_factory=dict)
    name: str = "X"

    def __post_init__(self) -> None:
        for key, val in self.atoms.items():
            if val.algebra != self.space.algebra:
                raise ValidationError("atom valuation", f"atom {key!r} is not a predicate over the model carrier")

    @property
    def algebra(self):
        return self.space.algebra

    def atom(self, name: str) -> Element:
        try:
            return self.atoms[name]
        except KeyError:
            raise UnknownAtom(name) from None

    def closure(self, a: Element) -> Element:
        return self.space.closure(a)

    def with_atoms(self, **atoms: Element) -> SpaceModel:
        merged = dict(self.atoms)
        merged.update(atoms)
        return SpaceModel(self.space, merged, self.name)


def closure_of(space: Space | SpaceModel, a: Element) -> Element:
    if isinstance(space, SpaceModel):
        space = space.space
    return space.closure(a)


# -- descriptors ----------------------------------------------------------


def _freeze(p: Any) -> Hashable:
    return tuple(_freeze(q) for q in p) if isinstance(p, list) else p


def _points_of(desc: Mapping[str, Any]) -> list[Hashable]:
    if "points" in desc:
        return [_freeze(p) for p in desc["points"]]
    if "n" in desc:
        return list(range(int(desc["n"])))
    raise ValidationError("points", "descriptor needs 'points' or 'n'")


def _lookup(alg: PowersetAlgebra | FuzzyPredicateAlgebra, p: Any) -> Hashable:
    from .algebra import _point_key
    return _point_key(alg, p)


def build_space(desc: Mapping[str, Any]) -> Space:
    """Construct a backend from a (parsed JSON) descriptor."""
    kind = desc.get("type")
    if kind == "graph":
        pts = _points_of(desc)
        alg = PowersetAlgebra(pts)
        edges = [(_lookup(alg, u), _lookup(alg, v)) for u, v in desc.get("edges", [])]
        return GraphSpace(pts, edges, desc.get("direction", "forward"))
    if kind == "grid":
        return GridSpace(int(desc["width"]), int(desc["height"]), desc.get("adjacency", "von-neumann-4"))
    if kind == "kripke":
        pts = _points_of(desc)
        alg = PowersetAlgebra(pts)
        raw = desc.get("successors", desc.get("gamma"))
        if raw is None:
            raise ValidationError("successor map totality", "missing 'successors'")
        if isinstance(raw, Mapping):
            gamma = {_lookup(alg, k): [_lookup(alg, q) for q in v] for k, v in raw.items()}
        else:
            gamma = [[_lookup(alg, q) for q in v] for v in raw]
        return KripkeFrame(pts, gamma, desc.get("closure", "pre"))
    if kind == "markov":
        pts = _points_of(desc)
        rows = desc["rows"]
        if isinstance(rows, Mapping):
            alg = PowersetAlgebra(pts)
            rows = {_lookup(alg, k): v for k, v in rows.items()}
        return MarkovFrame(pts, rows, desc.get("threshold", "1/2"))
    if kind == "fuzzy":
        pts = _points_of(desc)
        return FuzzySpace(pts, int(desc["k"]), desc.get("epsilon", 0), desc.get("membership"))
    if kind == "explicit":
        pts = _points_of(desc)
        alg = PowersetAlgebra(pts)
        mode = desc.get("mode", "additive")
        raw = desc["closure"]
        if mode == "additive":
            if isinstance(raw, Mapping):
                table = {alg.index[_lookup(alg, k)]: alg.subset(_lookup(alg, q) for q in v).bits for k, v in raw.items()}
                missing = [p for i, p in enumerate(alg.points) if i not in table]
                if missing:
                    raise ValidationError("explicit table", f"no closure given for {missing[0]!r}")
            else:
                table = [alg.subset(_lookup(alg, q) for q in v).bits for v in raw]
        else:
            table = {}
            for entry in raw:
                src, dst = entry
                b = alg.subset(_lookup(alg, q) for q in src).bits
                table[b] = alg.subset(_lookup(alg, q) for q in dst).bits
        return ExplicitSpace(pts, table, mode)
    raise ValidationError("model type", f"unknown type {kind!r}")


def atom_from_json(space: Space, value: Any) -> Element:
    """Point lists give crisp predicates; point -> value maps give fuzzy ones."""
    alg = space.algebra
    if isinstance(alg, PowersetAlgebra):
        if isinstance(value, Mapping):
            raise ValidationError("atom valuation", "point-based models take point lists")
        return alg.subset(_lookup(alg, p) for p in value)
    if isinstance(value, Mapping):
        return alg.predicate({_lookup(alg, p): v for p, v in value.items()})
    return alg.predicate(value)


def build_model(desc: Mapping[str, Any], atom_loader=None) -> SpaceModel:
    """Build a :class:`SpaceModel`; ``atom_loader(space, name, source)`` handles
    non-inline atom sources such as images."""
    schema = desc.get("schema", 1)
    if schema != 1:
        raise ValidationError("schema", f"unsupported schema version {schema!r}")
    space = build_space(desc)
    atoms: dict[str, Element] = {}
    for name, value in (desc.get("atoms") or {}).items():
        if isinstance(value, Mapping) and ("pgm" in value or "file" in value):
            if atom_loader is None:
                raise ValidationError("atom valuation", f"atom {name!r} needs a file loader")
            atoms[name] = atom_loader(space, name, value)
        else:
            atoms[name] = atom_from_json(space, value)
    return SpaceModel(space, atoms, str(desc.get("name", "X")))


# -- random models --------------------------------------------------------


def random_graph(rng: random.Random, n: int, density: float = 0.3, direction: str = "forward") -> GraphSpace:
    edges = [(u, v) for u in range(n) for v in range(n) if u != v and rng.random() < density]
    return GraphSpace(range(n), edges, direction)


def random_kripke(rng: random.Random, n: int, density: float = 0.3, closure: str = "pre") -> KripkeFrame:
    gamma = [[v for v in range(n) if rng.random() < density] for _ in range(n)]
    return KripkeFrame(range(n), gamma, closure)


def random_markov(rng: random.Random, n: int, threshold: Any = "1/2", den: int = 4) -> MarkovFrame:
    rows = []
    for _ in range(n):
        cuts = sorted(rng.randint(0, den) for _ in range(n - 1))
        parts = [b - a for a, b in zip([0] + cuts, cuts + [den])]
        rows.append([Fraction(p, den) for p in parts])
    return MarkovFrame(range(n), rows, threshold)


def random_fuzzy(rng: random.Random, n: int, k: int = 2, epsilon: int | None = None) -> FuzzySpace:
    eps = [rng.randint(0, k) if epsilon is None else epsilon for _ in range(n)]
    alpha = [rng.randint(1, k) for _ in range(n)]
    return FuzzySpace(range(n), k, [Fraction(e, k) for e in eps], [Fraction(a, k) for a in alpha])


def random_model(rng: random.Random, space: Space, atoms: Sequence[str] = ("a", "b", "c")) -> SpaceModel:
    alg = space.algebra
    return SpaceModel(space, {name: alg.random_element(rng) for name in atoms})
