"""Finite permutation arithmetic.

Points of [d] are 1-based everywhere in the public API, matching cycle
notation such as ``(1 2 3)(4 5)``; images are stored 0-based internally.
Composition is right-to-left: ``(p * q)(i) = p(q(i))``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence


class PermutationError(ValueError):
    pass


class Perm:
    """Permutation of [d] stored as a dense image tuple."""

    __slots__ = ("_a", "_hash")

    def __init__(self, images: Sequence[int], *, zero_based: bool = False, check: bool = True):
        a = tuple(images) if zero_based else tuple(i - 1 for i in images)
        if check and sorted(a) != list(range(len(a))):
            raise PermutationError(f"not a bijection of [{len(a)}]: {images!r}")
        if not a:
            raise PermutationError("degree must be positive")
        self._a = a
        self._hash = hash(a)

    @classmethod
    def identity(cls, degree: int) -> "Perm":
        return cls(range(degree), zero_based=True, check=False)

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], degree: int) -> "Perm":
        a = list(range(degree))
        seen: set[int] = set()
        for cyc in cycles:
            cyc = list(cyc)
            for x in cyc:
                if not 1 <= x <= degree:
                    raise PermutationError(f"point {x} outside [1, {degree}]")
                if x in seen:
                    raise PermutationError(f"point {x} repeated in cycles")
                seen.add(x)
            for i, x in enumerate(cyc):
                a[x - 1] = cyc[(i + 1) % len(cyc)] - 1
        return cls(a, zero_based=True, check=False)

    @classmethod
    def parse(cls, text: str, degree: int) -> "Perm":
        """Parse cycle notation, e.g. ``"(1 2 3)(4 5)"``; ``"()"`` is the identity."""
        return cls.from_cycles(parse_cycles(text), degree)

    @classmethod
    def from_json(cls, data) -> "Perm":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(data)

    # -- basic protocol --

    @property
    def degree(self) -> int:
        return len(self._a)

    @property
    def images(self) -> tuple[int, ...]:
        """1-based images (i -> images[i-1])."""
        return tuple(x + 1 for x in self._a)

    @property
    def key(self) -> tuple[int, ...]:
        return self._a

    def __call__(self, i: int) -> int:
        return self._a[i - 1] + 1

    def __eq__(self, other) -> bool:
        return isinstance(other, Perm) and self._a == other._a

    def __hash__(self) -> int:
        return self._hash

    def __mul__(self, other: "Perm") -> "Perm":
        return compose(self, other)

    def __pow__(self, k: int) -> "Perm":
        if k < 0:
            return self.inverse() ** (-k)
        result = Perm.identity(self.degree)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __repr__(self) -> str:
        return f"Perm({self.to_cycles_string()}, degree={self.degree})"

    def __str__(self) -> str:
        return self.to_cycles_string()

    # -- structure --

    def inverse(self) -> "Perm":
        inv = [0] * len(self._a)
        for i, x in enumerate(self._a):
            inv[x] = i
        return Perm(inv, zero_based=True, check=False)

    def is_identity(self) -> bool:
        return all(i == x for i, x in enumerate(self._a))

    def cycles(self, include_fixed: bool = False) -> list[tuple[int, ...]]:
        """Cycles as 1-based tuples, each starting at its smallest point."""
        seen = [False] * len(self._a)
        out = []
        for start in range(len(self._a)):
            if seen[start]:
                continue
            cyc = []
            j = start
            while not seen[j]:
                seen[j] = True
                cyc.append(j + 1)
                j = self._a[j]
            if len(cyc) > 1 or include_fixed:
                out.append(tuple(cyc))
        return out

    def support(self) -> frozenset[int]:
        return support(self)

    def sign(self) -> int:
        return sign(self)

    def cycle_type(self) -> "CycleType":
        return cycle_type(self)

    def is_even(self) -> bool:
        return sign(self) == 1

    def conjugate(self, by: "Perm") -> "Perm":
        """``by * self * by^-1``."""
        return by * self * by.inverse()

    def embed(self, degree: int) -> "Perm":
        """Extend to [degree] by fixing the new points."""
        if degree < self.degree:
            raise PermutationError(f"cannot embed degree {self.degree} into {degree}")
        return Perm(self._a + tuple(range(self.degree, degree)), zero_based=True, check=False)

    def to_cycles_string(self) -> str:
        return format_cycles(self.cycles())

    def to_json(self) -> list[int]:
        return list(self.images)


def compose(p: Perm, q: Perm) -> Perm:
    """(p o q)(i) = p(q(i))."""
    if p.degree != q.degree:
        raise PermutationError(f"degree mismatch: {p.degree} != {q.degree}")
    a = p._a
    return Perm(tuple(a[j] for j in q._a), zero_based=True, check=False)


def support(p: Perm) -> frozenset[int]:
    return frozenset(i + 1 for i, x in enumerate(p._a) if i != x)


def sign(p: Perm) -> int:
    n_cycles = len(p.cycles(include_fixed=True))
    return -1 if (p.degree - n_cycles) % 2 else 1


@dataclass(frozen=True)
class CycleType:
    """Nontrivial cycle lengths (non-increasing) plus the number of fixed points."""

    cycles: tuple[int, ...]
    fixed: int

    def __post_init__(self):
        if any(c < 2 for c in self.cycles):
            raise PermutationError("cycle lengths must be >= 2")
        if self.fixed < 0:
            raise PermutationError("negative fixed-point count")
        object.__setattr__(self, "cycles", tuple(sorted(self.cycles, reverse=True)))

    @classmethod
    def from_partition(cls, parts: Iterable[int]) -> "CycleType":
        parts = list(parts)
        return cls(tuple(p for p in parts if p > 1), sum(1 for p in parts if p == 1))

    @property
    def degree(self) -> int:
        return sum(self.cycles) + self.fixed

    @property
    def support_size(self) -> int:
        return sum(self.cycles)

    def partition(self) -> tuple[int, ...]:
        return self.cycles + (1,) * self.fixed

    def sign(self) -> int:
        return -1 if sum(c - 1 for c in self.cycles) % 2 else 1

    def is_even(self) -> bool:
        return self.sign() == 1

    def representative(self) -> Perm:
        """Canonical permutation: cycles filled with consecutive points from 1."""
        cycs, start = [], 1
        for c in self.cycles:
            cycs.append(range(start, start + c))
            start += c
        return Perm.from_cycles(cycs, self.degree)

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.partition())) + ")"


def cycle_type(p: Perm) -> CycleType:
    lengths = [len(c) for c in p.cycles(include_fixed=True)]
    return CycleType(tuple(l for l in lengths if l > 1), sum(1 for l in lengths if l == 1))


_CYCLE = re.compile(r"\(([^()]*)\)")


def parse_cycles(text: str) -> list[tuple[int, ...]]:
    text = text.strip()
    if not text or text in ("()", "id", "e"):
        return []
    if _CYCLE.sub("", text).strip():
        raise PermutationError(f"bad cycle notation: {text!r}")
    out = []
    for body in _CYCLE.findall(text):
        items = [tok for tok in re.split(r"[\s,]+", body.strip()) if tok]
        if items:
            out.append(tuple(int(tok) for tok in items))
    return out


def format_cycles(cycles: Iterable[Sequence[int]]) -> str:
    s = "".join("(" + " ".join(map(str, c)) + ")" for c in cycles if len(c) > 1)
    return s or "()"


class WindowPerm:
    """Finitely supported permutation of the integers.

    Stored as the sorted tuple of (point, image) pairs over the support, so
    equality and hashing are structural.
    """

    __slots__ = ("_items", "_map", "_hash")

    def __init__(self, mapping: Mapping[int, int] | Iterable[tuple[int, int]] = ()):
        items = dict(mapping)
        moved = {i: j for i, j in items.items() if i != j}
        if sorted(moved) != sorted(moved.values()):
            raise PermutationError("mapping is not a permutation of its support")
        self._map = moved
        self._items = tuple(sorted(moved.items()))
        self._hash = hash(self._items)

    @classmethod
    def identity(cls) -> "WindowPerm":
        return cls()

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]]) -> "WindowPerm":
        m: dict[int, int] = {}
        for cyc in cycles:
            cyc = list(cyc)
            for i, x in enumerate(cyc):
                if x in m:
                    raise PermutationError(f"point {x} repeated in cycles")
                m[x] = cyc[(i + 1) % len(cyc)]
        return cls(m)

    @classmethod
    def parse(cls, text: str) -> "WindowPerm":
        return cls.from_cycles(parse_cycles(text))

    @property
    def key(self) -> tuple[tuple[int, int], ...]:
        return self._items

    def __call__(self, i: int) -> int:
        return self._map.get(i, i)

    def __eq__(self, other) -> bool:
        return isinstance(other, WindowPerm) and self._items == other._items

    def __hash__(self) -> int:
        return self._hash

    def __mul__(self, other: "WindowPerm") -> "WindowPerm":
        pts = set(self._map) | set(other._map)
        return WindowPerm({i: self(other(i)) for i in pts})

    def __repr__(self) -> str:
        return f"WindowPerm({self.to_cycles_string()})"

    def __str__(self) -> str:
        return self.to_cycles_string()

    def items(self) -> tuple[tuple[int, int], ...]:
        return self._items

    def inverse(self) -> "WindowPerm":
        return WindowPerm({j: i for i, j in self._map.items()})

    def support(self) -> frozenset[int]:
        return frozenset(self._map)

    def is_identity(self) -> bool:
        return not self._map

    def cycles(self) -> list[tuple[int, ...]]:
        seen: set[int] = set()
        out = []
        for start in sorted(self._map):
            if start in seen:
                continue
            cyc = []
            j = start
            while j not in seen:
                seen.add(j)
                cyc.append(j)
                j = self._map[j]
            out.append(tuple(cyc))
        return out

    def sign(self) -> int:
        return -1 if sum(len(c) - 1 for c in self.cycles()) % 2 else 1

    def is_even(self) -> bool:
        return self.sign() == 1

    def shift(self, k: int) -> "WindowPerm":
        """Conjugate by the translation x -> x + k, i.e. ``r^k x r^-k``."""
        return WindowPerm({i + k: j + k for i, j in self._map.items()})

    def to_cycles_string(self) -> str:
        return format_cycles(self.cycles())


def transposition(i: int) -> WindowPerm:
    """The adjacent transposition s_i = (i, i+1) of the integers."""
    return WindowPerm({i: i + 1, i + 1: i})


def bekka_witness(k: int) -> WindowPerm:
    """x_k = s_{2k^2} s_{2k^2+2} ... s_{2k^2+2k}: k+1 disjoint adjacent transpositions."""
    if k < 1 or k % 2 == 0:
        raise PermutationError(f"witness defined only for odd k >= 1, got {k}")
    x = WindowPerm()
    for i in range(k + 1):
        x = x * transposition(2 * (i + k * k))
    return x


def shift_commutator(x: WindowPerm) -> WindowPerm:
    """[r, x] = x^-1 (r x r^-1) for the unit shift r(i) = i + 1."""
    return x.inverse() * x.shift(1)


def neumann_generators(d, r, n: int) -> tuple[Perm, Perm]:
    """(alpha_n, beta_n) = ((1 2 ... d(n)), (1, 1+r(n), 1+2r(n))) in Alt(d(n))."""
    from .sequences import check_neumann_params, parse_sequence

    d, r = parse_sequence(d), parse_sequence(r)
    check_neumann_params(d, r, n)
    dn, rn = d(n), r(n)
    alpha = Perm.from_cycles([range(1, dn + 1)], dn)
    beta = Perm.from_cycles([(1, 1 + rn, 1 + 2 * rn)], dn)
    return alpha, beta
