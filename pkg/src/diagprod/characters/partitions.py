"""Integer partitions, hooks and conjugacy-class sizes of Sym(n)."""

from __future__ import annotations

from collections import Counter
from functools import lru_cache
from math import factorial, prod
from typing import Iterator, Sequence

from ..permutations import CycleType


class Partition(tuple):
    """Non-increasing tuple of positive integers."""

    def __new__(cls, parts: Sequence[int] = ()):
        parts = tuple(int(p) for p in parts if p)
        if any(p < 0 for p in parts) or list(parts) != sorted(parts, reverse=True):
            raise ValueError(f"not a partition: {parts}")
        return super().__new__(cls, parts)

    @property
    def n(self) -> int:
        return sum(self)

    def conjugate(self) -> "Partition":
        if not self:
            return Partition()
        return Partition([sum(1 for p in self if p > i) for i in range(self[0])])

    def is_self_conjugate(self) -> bool:
        return self == self.conjugate()

    def durfee(self) -> int:
        return sum(1 for i, p in enumerate(self) if p > i)

    def hook(self, i: int, j: int) -> int:
        """Hook length of the cell in row i, column j (0-based)."""
        conj = self.conjugate()
        return (self[i] - j) + (conj[j] - i) - 1

    def hooks(self) -> list[int]:
        conj = self.conjugate()
        return [(self[i] - j) + (conj[j] - i) - 1 for i in range(len(self)) for j in range(self[i])]

    def diagonal_hooks(self) -> tuple[int, ...]:
        """h_i = 2(lambda_i - i) + 1 for the diagonal cells (1-based i)."""
        return tuple(2 * (self[i] - i - 1) + 1 for i in range(self.durfee()))

    def beta_set(self, length: int | None = None) -> tuple[int, ...]:
        """First-column hook lengths lambda_i + (l - i), l = number of beads."""
        l = len(self) if length is None else length
        parts = list(self) + [0] * (l - len(self))
        return tuple(parts[i] + (l - 1 - i) for i in range(l))

    def __repr__(self) -> str:
        return f"Partition({tuple(self)})"

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self)) + ")"


def partitions(n: int, max_part: int | None = None) -> Iterator[Partition]:
    """All partitions of n in reverse lexicographic order."""
    for p in _partitions(n, n if max_part is None else max_part):
        yield Partition(p)


@lru_cache(maxsize=None)
def _partitions(n: int, max_part: int) -> tuple[tuple[int, ...], ...]:
    if n == 0:
        return ((),)
    out = []
    for first in range(min(n, max_part), 0, -1):
        for rest in _partitions(n - first, first):
            out.append((first,) + rest)
    return tuple(out)


def parse_partition(text: str) -> Partition:
    text = text.strip().strip("()[]")
    return Partition(sorted((int(t) for t in text.replace(" ", "").split(",") if t), reverse=True))


@lru_cache(maxsize=None)
def _dimension(parts: tuple[int, ...]) -> int:
    lam = Partition(parts)
    return factorial(lam.n) // prod(lam.hooks())


def dimension(lam: Sequence[int]) -> int:
    """Degree of the irreducible Sym character: n! / product of hook lengths."""
    return _dimension(tuple(Partition(lam)))


def cycle_types(n: int) -> list[CycleType]:
    return [CycleType.from_partition(p) for p in partitions(n)]


def centralizer_order(mu: CycleType | Sequence[int]) -> int:
    parts = mu.partition() if isinstance(mu, CycleType) else tuple(mu)
    c = Counter(parts)
    return prod(k ** m * factorial(m) for k, m in c.items())


def class_size(mu: CycleType | Sequence[int]) -> int:
    parts = mu.partition() if isinstance(mu, CycleType) else tuple(mu)
    return factorial(sum(parts)) // centralizer_order(parts)


def as_cycle_type(mu) -> CycleType:
    if isinstance(mu, CycleType):
        return mu
    return CycleType.from_partition(mu)
