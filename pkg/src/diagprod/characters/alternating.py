"""Characters of Alt(n) from those of Sym(n).

A Sym class of even type splits into two Alt classes iff its parts are
distinct and odd. The "+" half contains the canonical representative
(cycles on consecutive points from 1); the "-" half contains its conjugate
by (1 2).

A non-self-conjugate lambda restricts irreducibly (lambda and its conjugate
give the same character). A self-conjugate lambda with diagonal hooks
h = (h_1, ..., h_k) splits into chi_+ and chi_-: both equal chi^lambda / 2
away from the classes of type h, and on those classes take the values
(eps +- sqrt(eps * prod h)) / 2 with eps = (-1)^((n - k)/2); chi_+ carries
the "+" root on the "+" class.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import prod
from typing import Optional, Sequence

from ..permutations import CycleType, Perm
from .partitions import Partition, as_cycle_type, class_size, cycle_types, dimension, partitions
from .surds import Surd
from .symmetric import mn_value


@dataclass(frozen=True)
class AltClass:
    """Alt(n) conjugacy class: a cycle type plus a half (0 unsplit, +1 or -1)."""

    cycle_type: CycleType
    half: int = 0

    @property
    def n(self) -> int:
        return self.cycle_type.degree

    def size(self) -> int:
        s = class_size(self.cycle_type)
        return s // 2 if self.half else s

    def representative(self) -> Perm:
        rep = self.cycle_type.representative()
        if self.half == -1:
            tau = Perm.from_cycles([(1, 2)], rep.degree)
            rep = tau * rep * tau
        return rep

    def __str__(self) -> str:
        tag = {0: "", 1: "+", -1: "-"}[self.half]
        return f"{self.cycle_type}{tag}"


def splits_in_alt(mu: CycleType | Sequence[int]) -> bool:
    parts = as_cycle_type(mu).partition()
    return len(set(parts)) == len(parts) and all(p % 2 for p in parts)


def alt_classes(n: int) -> list[AltClass]:
    out = []
    for mu in cycle_types(n):
        if not mu.is_even():
            continue
        if splits_in_alt(mu):
            out += [AltClass(mu, 1), AltClass(mu, -1)]
        else:
            out.append(AltClass(mu, 0))
    return out


def class_of(g: Perm) -> AltClass:
    """Alt(n) class of an even permutation."""
    mu = g.cycle_type()
    if not mu.is_even():
        raise ValueError(f"{g} is odd")
    if not splits_in_alt(mu):
        return AltClass(mu, 0)
    rep = mu.representative()
    # align each cycle of rep with the cycle of g of the same length; c rep c^-1 = g
    rep_cycles = sorted(rep.cycles(include_fixed=True), key=len)
    g_cycles = sorted(g.cycles(include_fixed=True), key=len)
    img = [0] * g.degree
    for rc, gc in zip(rep_cycles, g_cycles):
        for x, y in zip(rc, gc):
            img[x - 1] = y - 1
    c = Perm(img, zero_based=True)
    return AltClass(mu, c.sign())


@dataclass(frozen=True)
class AltChar:
    """Irreducible Alt(n) character: a partition plus a half (0 when unsplit)."""

    partition: Partition
    half: int = 0

    @property
    def n(self) -> int:
        return self.partition.n

    def is_trivial(self) -> bool:
        return is_trivial_char(self)

    def degree(self) -> Fraction:
        d = dimension(self.partition)
        return Fraction(d, 2) if self.half else Fraction(d)

    def value(self, cls: AltClass | Perm) -> Surd:
        if isinstance(cls, Perm):
            cls = class_of(cls)
        lam = self.partition
        chi = mn_value(lam, cls.cycle_type)
        if not self.half:
            return Surd.of(chi)
        h = lam.diagonal_hooks()
        if cls.cycle_type.partition() != tuple(sorted(h, reverse=True)):
            return Surd.of(Fraction(chi, 2))
        k = len(h)
        eps = -1 if ((lam.n - k) // 2) % 2 else 1
        root = Surd.sqrt(eps * prod(h))
        sgn = self.half * cls.half
        return (Surd.of(eps) + root * sgn) / 2

    __call__ = value

    def __str__(self) -> str:
        tag = {0: "", 1: "+", -1: "-"}[self.half]
        return f"{self.partition}{tag}"


def restrict_to_alt(lam: Sequence[int]) -> tuple[AltChar, ...]:
    """One character, or the split pair (chi_+, chi_-) for self-conjugate lambda."""
    lam = Partition(lam)
    if lam.n < 3:
        raise ValueError("Alt(n) characters are only handled for n >= 3")
    if lam.is_self_conjugate():
        return (AltChar(lam, 1), AltChar(lam, -1))
    return (AltChar(max(lam, lam.conjugate())),)


def alt_characters(n: int) -> list[AltChar]:
    """All irreducible characters of Alt(n); the unsplit ones indexed by the larger of lambda, lambda'."""
    out = []
    for lam in partitions(n):
        conj = lam.conjugate()
        if lam.is_self_conjugate():
            out += [AltChar(lam, 1), AltChar(lam, -1)]
        elif lam > conj:
            out.append(AltChar(lam))
    return out


def alt_table(n: int) -> tuple[list[AltChar], list[AltClass], list[list[Surd]]]:
    chars = alt_characters(n)
    classes = alt_classes(n)
    return chars, classes, [[c.value(k) for k in classes] for c in chars]


def alt_orthogonality_ok(n: int) -> bool:
    """First orthogonality over Alt classes, exactly in the field of the values."""
    from math import factorial

    chars, classes, table = alt_table(n)
    sizes = [k.size() for k in classes]
    order = factorial(n) // 2
    for i in range(len(chars)):
        for j in range(i, len(chars)):
            s = Surd()
            for c, a, b in zip(sizes, table[i], table[j]):
                s = s + a * b.conjugate() * c
            if s != (order if i == j else 0):
                return False
    return True


def is_trivial_char(chi: AltChar) -> bool:
    lam = chi.partition
    return chi.half == 0 and (len(lam) == 1 or all(p == 1 for p in lam))


def normalized_value(chi: AltChar, cls: AltClass | Perm | CycleType) -> Surd:
    """chi(class) / chi(e)."""
    if isinstance(cls, CycleType):
        cls = AltClass(cls, 1 if splits_in_alt(cls) else 0)
    return chi.value(cls) / chi.degree()


def standard_normalized_value(d: int, support_size: int) -> Fraction:
    """Normalized value of the (d-1)-dimensional character at an element moving s points: (d - s - 1)/(d - 1)."""
    return Fraction(d - support_size - 1, d - 1)


DEFAULT_TABLE_CAP = 16


def max_nontrivial_value(n: int, cls: AltClass | CycleType | Sequence[int], cap: int = DEFAULT_TABLE_CAP):
    """max |phi(class)| over nontrivial irreducible normalized Alt(n) characters.

    Returns (value, character) where value is the maximizing normalized value
    itself; comparison is exact on squared absolute values.
    """
    if n > cap:
        raise ResourceWarning(f"n = {n} exceeds the table cap {cap}")
    if not isinstance(cls, AltClass):
        mu = as_cycle_type(cls)
        cls = AltClass(mu, 1 if splits_in_alt(mu) else 0)
    best: Optional[tuple[Surd, Surd, AltChar]] = None
    for chi in alt_characters(n):
        if is_trivial_char(chi):
            continue
        v = normalized_value(chi, cls)
        a2 = v.abs2()
        if best is None or a2 > best[0]:
            best = (a2, v, chi)
    if best is None:
        raise ValueError(f"Alt({n}) has no nontrivial characters")
    return best[1], best[2]
