"""Path shapes: finite chains ``{0, ..., n-1}`` with their order and index closure.

A path of shape ``I`` in a space is a map ``p: I -> X``; it is continuous when
``p(i+1)`` lies in ``c({p(i)})``. Subsets of ``I`` are int bitsets here.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterator


@dataclass(frozen=True)
class PathShape:
    """The chain of length ``n`` ordered by ``<=``, with successor closure."""

    n: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("path shapes have positive length")

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    @cached_property
    def rho(self) -> frozenset[tuple[int, int]]:
        """The order relation as a set of pairs ``(i, j)`` with ``i <= j``."""
        return frozenset((i, j) for i in range(self.n) for j in range(i, self.n))

    @cached_property
    def _above(self) -> tuple[int, ...]:
        # row i of rho: every j with (i, j) in rho
        rows = [0] * self.n
        for i, j in self.rho:
            rows[i] |= 1 << j
        return tuple(rows)

    @cached_property
    def _below(self) -> tuple[int, ...]:
        cols = [0] * self.n
        for i, j in self.rho:
            cols[j] |= 1 << i
        return tuple(cols)

    def up(self, s: int) -> int:
        """Indices reachable from ``s``: ``{j : some i in s with (i, j) in rho}``."""
        out = 0
        for i in range(self.n):
            if (s >> i) & 1:
                out |= self._above[i]
        return out

    def down(self, s: int) -> int:
        """Indices that reach ``s``: ``{i : some j in s with (i, j) in rho}``."""
        out = 0
        for j in range(self.n):
            if (s >> j) & 1:
                out |= self._below[j]
        return out

    def closure(self, s: int) -> int:
        """``S`` together with the successor of each of its indices."""
        return (s | (s << 1)) & self.full

    # -- laws ------------------------------------------------------------

    def is_reflexive(self) -> bool:
        return all((i, i) in self.rho for i in range(self.n))

    def is_transitive(self) -> bool:
        rho = self.rho
        return all((i, k) in rho for (i, j) in rho for (j2, k) in rho if j == j2)

    def closure_is_inflationary(self) -> bool:
        return all(s & ~self.closure(s) == 0 for s in range(1 << self.n))

    def satisfies_boundary_hypothesis(self) -> bool:
        """``c(g) & ~g <= up(g)`` for every ``g``: new points lie above old ones."""
        return all(self.closure(g) & ~g & ~self.up(g) == 0 for g in range(1 << self.n))

    def is_connected(self, variant: str = "symmetric") -> bool:
        """Connectedness of the whole chain under its successor closure."""
        for phi in range(1, self.full):
            psi = self.full & ~phi
            meets = self.closure(phi) & psi != 0
            back = self.closure(psi) & phi != 0
            if variant == "one-sided" and not meets:
                return False
            if variant == "symmetric" and not (meets or back):
                return False
        return True

    def paths(self, successors: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
        """All continuous paths of this shape, given singleton closures as bitsets."""
        return _continuous_paths(self.n, successors)


def _continuous_paths(n: int, successors: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
    steps = [[j for j in range(len(successors)) if (successors[i] >> j) & 1] for i in range(len(successors))]

    def extend(prefix: list[int]):
        if len(prefix) == n:
            yield tuple(prefix)
            return
        for j in steps[prefix[-1]]:
            prefix.append(j)
            yield from extend(prefix)
            prefix.pop()

    for start in range(len(successors)):
        yield from extend([start])


def count_paths(n: int, successors: tuple[int, ...]) -> int:
    """Number of continuous paths of length ``n`` (dynamic programming)."""
    m = len(successors)
    counts = [1] * m
    for _ in range(n - 1):
        counts = [sum(counts[j] for j in range(m) if (successors[i] >> j) & 1) for i in range(m)]
    return sum(counts)

