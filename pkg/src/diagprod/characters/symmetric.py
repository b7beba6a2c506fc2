"""Irreducible characters of Sym(n) by the Murnaghan-Nakayama rule.

Border strips are removed on the abacus: a k-strip corresponds to moving a
bead from position b to an empty position b - k, with sign (-1) to the
number of beads strictly in between. Nontrivial cycles are removed first;
when only fixed points remain the value is the dimension from the hook
formula.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Sequence

from ..permutations import CycleType, Perm
from .partitions import Partition, as_cycle_type, class_size, cycle_types, dimension, partitions


def _beta_to_partition(beta: tuple[int, ...]) -> tuple[int, ...]:
    l = len(beta)
    parts = sorted((b - (l - 1 - i) for i, b in enumerate(sorted(beta, reverse=True))), reverse=True)
    return tuple(p for p in parts if p > 0)


@lru_cache(maxsize=200_000)
def _mn(parts: tuple[int, ...], cycles: tuple[int, ...]) -> int:
    if not cycles:
        return dimension(parts) if parts else 1
    k, rest = cycles[0], cycles[1:]
    beta = Partition(parts).beta_set()
    beads = set(beta)
    total = 0
    for b in beta:
        t = b - k
        if t < 0 or t in beads:
            continue
        between = sum(1 for x in beta if t < x < b)
        new_beta = tuple(sorted((beads - {b}) | {t}, reverse=True))
        val = _mn(_beta_to_partition(new_beta), rest)
        total += -val if between % 2 else val
    return total


def mn_value(lam: Sequence[int], mu: CycleType | Sequence[int]) -> int:
    """chi^lambda at the class of cycle type mu."""
    lam = Partition(lam)
    mu = as_cycle_type(mu)
    if lam.n != mu.degree:
        raise ValueError(f"size mismatch: |lambda| = {lam.n}, degree(mu) = {mu.degree}")
    return _mn(tuple(lam), mu.cycles)


class SymChar:
    def __init__(self, lam: Sequence[int]):
        self.partition = Partition(lam)
        self.n = self.partition.n

    def __call__(self, x: Perm | CycleType | Sequence[int]) -> int:
        mu = x.cycle_type() if isinstance(x, Perm) else as_cycle_type(x)
        return mn_value(self.partition, mu)

    @property
    def degree(self) -> int:
        return dimension(self.partition)

    def __repr__(self) -> str:
        return f"SymChar{self.partition}"


def sym_table(n: int) -> tuple[list[Partition], list[CycleType], list[list[int]]]:
    """Rows indexed by partitions, columns by cycle types, both in reverse lexicographic order."""
    lams = list(partitions(n))
    mus = cycle_types(n)
    return lams, mus, [[mn_value(l, m) for m in mus] for l in lams]


def sym_orthogonality_defect(n: int) -> int:
    """Sum of |sum_mu |C_mu| chi chi' - n! delta| over all pairs; zero iff orthogonality holds."""
    from math import factorial

    lams, mus, table = sym_table(n)
    sizes = [class_size(m) for m in mus]
    N = factorial(n)
    bad = 0
    for i in range(len(lams)):
        for j in range(i, len(lams)):
            s = sum(c * a * b for c, a, b in zip(sizes, table[i], table[j]))
            bad += abs(s - (N if i == j else 0))
    return bad
