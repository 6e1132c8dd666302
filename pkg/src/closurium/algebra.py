"""Finite Heyting algebras used as truth-value and predicate lattices.

Three families are provided:

* :class:`HeytingChain` -- the chain ``{0, 1/k, ..., 1}`` with Goedel implication.
* :class:`PowersetAlgebra` -- subsets of a finite carrier, stored as int bitsets.
* :class:`FuzzyPredicateAlgebra` -- maps from a carrier into a chain, bounded above
  by a membership function (fuzzy subsets of a fuzzy set).

Chain values are stored as integer numerators over the fixed resolution ``k``;
no floating point value ever takes part in a comparison.
"""

from __future__ import annotations

import itertools
import math
import random
from fractions import Fraction
from typing import Any, Hashable, Iterable, Iterator, Mapping, Sequence

from .errors import AlgebraMismatch, TooLarge, ValidationError

DEFAULT_CAP = 2**20


def parse_rational(value: Any) -> Fraction:
    """Read ``"num/den"`` strings, ints, Fractions and (exact decimal) floats."""
    if isinstance(value, bool):
        raise ValidationError("rational", f"boolean {value!r} is not a number")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(repr(value))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValidationError("rational", f"cannot parse {value!r}") from exc
    raise ValidationError("rational", f"unsupported value {value!r}")


def format_rational(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


class Element:
    """An immutable element of some finite Heyting algebra."""

    __slots__ = ("algebra",)

    algebra: Algebra

    def _payload(self) -> Hashable:
        raise NotImplementedError

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Element):
            return NotImplemented
        return self.algebra == other.algebra and self._payload() == other._payload()

    def __hash__(self) -> int:
        return hash((self.algebra.token, self._payload()))

    def __and__(self, other: Element) -> Element:
        return self.algebra.meet(self, other)

    def __or__(self, other: Element) -> Element:
        return self.algebra.join(self, other)

    def __invert__(self) -> Element:
        return self.algebra.neg(self)

    def __le__(self, other: Element) -> bool:
        return self.algebra.leq(self, other)

    def __ge__(self, other: Element) -> bool:
        return other.algebra.leq(other, self)

    def implies(self, other: Element) -> Element:
        return self.algebra.implies(self, other)


class Algebra:
    """Common surface of the finite Heyting algebras.

    ``key`` is a hashable descriptor; two algebras are interchangeable exactly
    when their keys are equal, which is what element operations check.
    """

    key: tuple

    def __init__(self) -> None:
        self._token = hash(self.key)

    @property
    def token(self) -> int:
        return self._token

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, Algebra):
            return NotImplemented
        return self._token == other._token and self.key == other.key

    def __hash__(self) -> int:
        return self._token

    def _own(self, *elements: Element) -> None:
        for e in elements:
            if e.algebra is not self and e.algebra != self:
                raise AlgebraMismatch(f"element of {e.algebra!r} used with {self!r}")

    # lattice structure, implemented by subclasses
    @property
    def top(self) -> Element:
        raise NotImplementedError

    @property
    def bottom(self) -> Element:
        raise NotImplementedError

    def meet(self, a: Element, b: Element) -> Element:
        raise NotImplementedError

    def join(self, a: Element, b: Element) -> Element:
        raise NotImplementedError

    def implies(self, a: Element, b: Element) -> Element:
        raise NotImplementedError

    def leq(self, a: Element, b: Element) -> bool:
        raise NotImplementedError

    def neg(self, a: Element) -> Element:
        return self.implies(a, self.bottom)

    def meet_all(self, elements: Iterable[Element]) -> Element:
        out = self.top
        for e in elements:
            out = self.meet(out, e)
        return out

    def join_all(self, elements: Iterable[Element]) -> Element:
        out = self.bottom
        for e in elements:
            out = self.join(out, e)
        return out

    @property
    def size(self) -> int:
        raise NotImplementedError

    def _iter_elements(self) -> Iterator[Element]:
        raise NotImplementedError

    def elements(self, cap: int = DEFAULT_CAP) -> Iterator[Element]:
        """Yield every element exactly once; raise :class:`TooLarge` above ``cap``."""
        if self.size > cap:
            raise TooLarge(f"enumerating {self!r}", self.size, cap)
        return self._iter_elements()

    def random_element(self, rng: random.Random) -> Element:
        raise NotImplementedError

    def rank(self, a: Element) -> int:
        """Height of ``a`` above bottom; used to order exhaustive searches."""
        raise NotImplementedError

    def split(self, a: Element) -> tuple[Element, Element] | None:
        """Decompose ``a`` as ``j | rest`` with ``j`` join-irreducible and both
        strictly below ``a``; ``None`` when ``a`` is bottom or join-irreducible."""
        raise NotImplementedError

    def lower_covers(self, a: Element) -> Iterator[Element]:
        raise NotImplementedError

    def to_json(self, a: Element) -> Any:
        raise NotImplementedError


def enumerate_elements(algebra: Algebra, cap: int = DEFAULT_CAP) -> Iterator[Element]:
    return algebra.elements(cap)


# -- chains ---------------------------------------------------------------


class ChainValue(Element):
    __slots__ = ("num",)

    def __init__(self, chain: HeytingChain, num: int):
        self.algebra = chain
        self.num = num

    def _payload(self) -> int:
        return self.num

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.num, self.algebra.k)

    def __repr__(self) -> str:
        return f"ChainValue({self.num}/{self.algebra.k})"


class HeytingChain(Algebra):
    """The finite chain ``{0, 1/k, ..., 1}`` with Goedel implication."""

    def __init__(self, k: int):
        if not isinstance(k, int) or k < 1:
            raise ValidationError("chain resolution", f"k must be a positive int, got {k!r}")
        self.k = k
        self.key = ("chain", k)
        super().__init__()

    def __repr__(self) -> str:
        return f"HeytingChain(k={self.k})"

    def numerator_of(self, value: Any) -> int:
        q = parse_rational(value) * self.k
        if q.denominator != 1 or not 0 <= q <= self.k:
            raise ValidationError("chain value", f"{value!r} is not on the grid 1/{self.k} within [0,1]")
        return int(q)

    def value(self, value: Any) -> ChainValue:
        return ChainValue(self, self.numerator_of(value))

    def from_numerator(self, num: int) -> ChainValue:
        if not 0 <= num <= self.k:
            raise ValidationError("chain value", f"numerator {num} outside 0..{self.k}")
        return ChainValue(self, num)

    @property
    def top(self) -> ChainValue:
        return ChainValue(self, self.k)

    @property
    def bottom(self) -> ChainValue:
        return ChainValue(self, 0)

    def meet(self, a, b):
        self._own(a, b)
        return a if a.num <= b.num else b

    def join(self, a, b):
        self._own(a, b)
        return a if a.num >= b.num else b

    def implies(self, a, b):
        self._own(a, b)
        return self.top if a.num <= b.num else b

    def leq(self, a, b):
        self._own(a, b)
        return a.num <= b.num

    @property
    def size(self) -> int:
        return self.k + 1

    def _iter_elements(self):
        return (ChainValue(self, i) for i in range(self.k + 1))

    def random_element(self, rng):
        return ChainValue(self, rng.randint(0, self.k))

    def rank(self, a):
        return a.num

    def split(self, a):
        return None

    def lower_covers(self, a):
        if a.num > 0:
            yield ChainValue(self, a.num - 1)

    def to_json(self, a):
        return format_rational(a.fraction)


def godel_implies(t: int, s: int, top: int) -> int:
    """Goedel implication on numerators: ``top`` if ``t <= s`` else ``s``."""
    return top if t <= s else s


# -- powersets ------------------------------------------------------------


def iter_bits(bits: int) -> Iterator[int]:
    """Indices of the set bits of ``bits`` in increasing order."""
    while bits:
        low = bits & -bits
        yield low.bit_length() - 1
        bits ^= low


class Subset(Element):
    __slots__ = ("bits",)

    def __init__(self, algebra: PowersetAlgebra, bits: int):
        self.algebra = algebra
        self.bits = bits

    def _payload(self) -> int:
        return self.bits

    def indices(self) -> list[int]:
        return list(iter_bits(self.bits))

    def points(self) -> list[Hashable]:
        pts = self.algebra.points
        return [pts[i] for i in iter_bits(self.bits)]

    def __iter__(self) -> Iterator[Hashable]:
        return iter(self.points())

    def __len__(self) -> int:
        return self.bits.bit_count() if hasattr(int, "bit_count") else bin(self.bits).count("1")

    def __contains__(self, point: Hashable) -> bool:
        i = self.algebra.index.get(point)
        return i is not None and (self.bits >> i) & 1 == 1

    def __repr__(self) -> str:
        return f"Subset({self.points()!r})"


def popcount(bits: int) -> int:
    return bin(bits).count("1")


class PowersetAlgebra(Algebra):
    """Subsets of a finite ordered carrier; element ``i`` of the carrier is bit ``i``."""

    def __init__(self, points: Iterable[Hashable]):
        self.points = tuple(points)
        self.index = {p: i for i, p in enumerate(self.points)}
        if len(self.index) != len(self.points):
            raise ValidationError("carrier", "duplicate point identifiers")
        self.n = len(self.points)
        self.full = (1 << self.n) - 1
        self.key = ("powerset", self.points)
        super().__init__()

    def __repr__(self) -> str:
        if self.n <= 8:
            return f"PowersetAlgebra({list(self.points)!r})"
        return f"PowersetAlgebra(<{self.n} points>)"

    def subset(self, points: Iterable[Hashable] = ()) -> Subset:
        bits = 0
        for p in points:
            try:
                bits |= 1 << self.index[p]
            except KeyError:
                raise ValidationError("carrier", f"unknown point {p!r}") from None
        return Subset(self, bits)

    def from_bits(self, bits: int) -> Subset:
        if bits < 0 or bits > self.full:
            raise ValidationError("carrier", f"bitset {bits:#x} outside carrier of size {self.n}")
        return Subset(self, bits)

    def singleton(self, i: int) -> Subset:
        return Subset(self, 1 << i)

    @property
    def top(self) -> Subset:
        return Subset(self, self.full)

    @property
    def bottom(self) -> Subset:
        return Subset(self, 0)

    def meet(self, a, b):
        self._own(a, b)
        return Subset(self, a.bits & b.bits)

    def join(self, a, b):
        self._own(a, b)
        return Subset(self, a.bits | b.bits)

    def implies(self, a, b):
        self._own(a, b)
        return Subset(self, (self.full & ~a.bits) | b.bits)

    def neg(self, a):
        self._own(a)
        return Subset(self, self.full & ~a.bits)

    def leq(self, a, b):
        self._own(a, b)
        return a.bits & ~b.bits == 0

    @property
    def size(self) -> int:
        return 1 << self.n

    def _iter_elements(self):
        return (Subset(self, b) for b in range(1 << self.n))

    def random_element(self, rng):
        return Subset(self, rng.getrandbits(self.n) if self.n else 0)

    def rank(self, a):
        return popcount(a.bits)

    def split(self, a):
        bits = a.bits
        low = bits & -bits
        if bits == low:
            return None
        return Subset(self, low), Subset(self, bits ^ low)

    def lower_covers(self, a):
        for i in iter_bits(a.bits):
            yield Subset(self, a.bits ^ (1 << i))

    def to_json(self, a):
        return [_json_point(p) for p in a.points()]

    def from_json(self, data: Iterable[Any]) -> Subset:
        return self.subset(_point_key(self, p) for p in data)


def _json_point(p: Hashable) -> Any:
    if isinstance(p, tuple):
        return [_json_point(q) for q in p]
    return p


def _point_key(algebra: PowersetAlgebra | FuzzyPredicateAlgebra, p: Any) -> Hashable:
    """Map a JSON point (lists for tuples, strings for map keys) onto a carrier point."""
    if isinstance(p, list):
        p = tuple(_freeze(q) for q in p)
    if p in algebra.index:
        return p
    lookup = algebra.__dict__.setdefault("_str_index", {str(_json_point(q)): q for q in algebra.points})
    key = str(p) if not isinstance(p, tuple) else str(_json_point(p))
    if key in lookup:
        return lookup[key]
    raise ValidationError("carrier", f"unknown point {p!r}")


def _freeze(q: Any) -> Any:
    return tuple(_freeze(x) for x in q) if isinstance(q, list) else q


# -- fuzzy predicates -----------------------------------------------------


class FuzzySet(Element):
    __slots__ = ("values",)

    def __init__(self, algebra: FuzzyPredicateAlgebra, values: tuple[int, ...]):
        self.algebra = algebra
        self.values = values

    def _payload(self) -> tuple[int, ...]:
        return self.values

    def __getitem__(self, point: Hashable) -> Fraction:
        return Fraction(self.values[self.algebra.index[point]], self.algebra.k)

    def fractions(self) -> list[Fraction]:
        k = self.algebra.k
        return [Fraction(v, k) for v in self.values]

    def __repr__(self) -> str:
        k = self.algebra.k
        return f"FuzzySet({[f'{v}/{k}' for v in self.values]})"


class FuzzyPredicateAlgebra(Algebra):
    """Fuzzy subsets ``xi <= alpha`` of a finite fuzzy set ``(carrier, alpha)``.

    Values live on ``chain``; ``membership`` defaults to the constant top, in
    which case this is just ``Set(carrier, chain)`` with pointwise structure.
    """

    def __init__(self, points: Iterable[Hashable], chain: HeytingChain | int,
                 membership: Sequence[Any] | Mapping[Hashable, Any] | None = None):
        self.points = tuple(points)
        self.index = {p: i for i, p in enumerate(self.points)}
        if len(self.index) != len(self.points):
            raise ValidationError("carrier", "duplicate point identifiers")
        self.chain = chain if isinstance(chain, HeytingChain) else HeytingChain(chain)
        self.k = self.chain.k
        self.n = len(self.points)
        if membership is None:
            self.membership = (self.k,) * self.n
        else:
            self.membership = self._numerators(membership)
        self.key = ("fuzzy", self.points, self.k, self.membership)
        super().__init__()

    def __repr__(self) -> str:
        return f"FuzzyPredicateAlgebra(<{self.n} points>, k={self.k})"

    def _numerators(self, values: Sequence[Any] | Mapping[Hashable, Any]) -> tuple[int, ...]:
        if isinstance(values, Mapping):
            nums = [0] * self.n
            for p, v in values.items():
                nums[self.index[_point_key(self, p)]] = self.chain.numerator_of(v)
            return tuple(nums)
        if len(values) != self.n:
            raise ValidationError("fuzzy predicate", f"expected {self.n} values, got {len(values)}")
        return tuple(self.chain.numerator_of(v) for v in values)

    def predicate(self, values: Sequence[Any] | Mapping[Hashable, Any]) -> FuzzySet:
        """Build a fuzzy subset from values (sequence in carrier order, or point map;
        missing points default to 0)."""
        return self.from_numerators(self._numerators(values))

    def from_numerators(self, nums: Iterable[int]) -> FuzzySet:
        nums = tuple(nums)
        if len(nums) != self.n:
            raise ValidationError("fuzzy predicate", f"expected {self.n} values, got {len(nums)}")
        for p, v, a in zip(self.points, nums, self.membership):
            if not 0 <= v <= a:
                raise ValidationError("fuzzy subset", f"value {v}/{self.k} at {p!r} exceeds membership {a}/{self.k}")
        return FuzzySet(self, nums)

    @property
    def top(self) -> FuzzySet:
        return FuzzySet(self, self.membership)

    @property
    def bottom(self) -> FuzzySet:
        return FuzzySet(self, (0,) * self.n)

    def meet(self, a, b):
        self._own(a, b)
        return FuzzySet(self, tuple(map(min, a.values, b.values)))

    def join(self, a, b):
        self._own(a, b)
        return FuzzySet(self, tuple(map(max, a.values, b.values)))

    def implies(self, a, b):
        self._own(a, b)
        k = self.k
        return FuzzySet(self, tuple(
            min(m, k if t <= s else s) for t, s, m in zip(a.values, b.values, self.membership)))

    def leq(self, a, b):
        self._own(a, b)
        return all(t <= s for t, s in zip(a.values, b.values))

    @property
    def size(self) -> int:
        return math.prod(m + 1 for m in self.membership)

    def _iter_elements(self):
        ranges = [range(m + 1) for m in self.membership]
        return (FuzzySet(self, vals) for vals in itertools.product(*ranges))

    def random_element(self, rng):
        return FuzzySet(self, tuple(rng.randint(0, m) for m in self.membership))

    def rank(self, a):
        return sum(a.values)

    def split(self, a):
        nonzero = [i for i, v in enumerate(a.values) if v]
        if len(nonzero) < 2:
            return None
        i = nonzero[0]
        single = [0] * self.n
        single[i] = a.values[i]
        rest = list(a.values)
        rest[i] = 0
        return FuzzySet(self, tuple(single)), FuzzySet(self, tuple(rest))

    def lower_covers(self, a):
        for i, v in enumerate(a.values):
            if v:
                vals = list(a.values)
                vals[i] = v - 1
                yield FuzzySet(self, tuple(vals))

    def to_json(self, a):
        k = self.k
        return {str(_json_point(p)): format_rational(Fraction(v, k)) for p, v in zip(self.points, a.values)}

    def from_json(self, data: Mapping[Any, Any]) -> FuzzySet:
        return self.predicate(data)
