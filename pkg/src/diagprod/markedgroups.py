"""Marked groups, word-metric balls and marked-ball comparison.

A marking is any object with

- ``labels``: tuple of one-character labels in canonical order; a lower-case
  label is a generator and the matching upper-case label its inverse,
- ``identity()``, ``generator(label)``, ``mul(a, b)``,
- ``key(a)``: a hashable canonical form (equal elements, equal keys).

Finite permutation markings, the base groups and diagonal products all
implement this, so balls of an infinite group can be compared with balls of
its finite quotients.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Any, Hashable, Optional, Protocol, Sequence

from .permutations import Perm, PermutationError

DEFAULT_BUDGET = 10_000_000


class BudgetExceeded(RuntimeError):
    """Ball enumeration would exceed the element budget."""


class Marking(Protocol):
    labels: tuple[str, ...]

    def identity(self) -> Any: ...

    def generator(self, label: str) -> Any: ...

    def mul(self, a: Any, b: Any) -> Any: ...

    def key(self, a: Any) -> Hashable: ...


# -- words --

_GREEK = {"α": "a", "β": "b"}


def inverse_label(label: str) -> str:
    return label.lower() if label.isupper() else label.upper()


def parse_word(text: str | Sequence[str]) -> str:
    """Normalise a word to a string of labels.

    Accepts ``"abAB"``, space separated tokens with ``^-1`` or ``⁻¹`` marking
    inverses (``"a b a^-1 b^-1"``) and the Greek letters α, β.
    """
    if not isinstance(text, str):
        return "".join(text)
    s = text.strip()
    for g, l in _GREEK.items():
        s = s.replace(g, l)
    s = s.replace("⁻¹", "^-1").replace(" ", "").replace("*", "")
    out: list[str] = []
    i = 0
    while i < len(s):
        c = s[i]
        if not c.isalpha():
            raise ValueError(f"bad word {text!r}")
        if s.startswith("^-1", i + 1):
            out.append(inverse_label(c))
            i += 4
        else:
            out.append(c)
            i += 1
    return "".join(out)


def inverse_word(word: str) -> str:
    return "".join(inverse_label(c) for c in reversed(word))


def free_reduce(word: str) -> str:
    out: list[str] = []
    for c in word:
        if out and out[-1] == inverse_label(c):
            out.pop()
        else:
            out.append(c)
    return "".join(out)


def evaluate_word(m: Marking, word: str | Sequence[str]):
    g = m.identity()
    for c in parse_word(word):
        if c not in m.labels:
            raise ValueError(f"label {c!r} not in marking labels {m.labels}")
        g = m.mul(g, m.generator(c))
    return g


# -- finite permutation markings --


class MarkedGroup:
    """Subgroup of Sym(d) marked by labelled permutations.

    ``generators`` maps lower-case labels to permutations. With
    ``symmetrized`` (the default) inverses are adjoined under the upper-case
    labels, in the order ``a, A, b, B, ...``.
    """

    def __init__(self, generators: dict[str, Perm] | Sequence[tuple[str, Perm]], symmetrized: bool = True):
        gens = list(generators.items()) if isinstance(generators, dict) else list(generators)
        if not gens:
            raise ValueError("at least one generator required")
        degrees = {p.degree for _, p in gens}
        if len(degrees) != 1:
            raise PermutationError(f"generators of different degrees: {sorted(degrees)}")
        self.degree = degrees.pop()
        self.symmetrized = symmetrized
        self._gens: dict[str, Perm] = {}
        labels = []
        for label, p in gens:
            if len(label) != 1 or not label.islower():
                raise ValueError(f"generator labels must be single lower-case letters, got {label!r}")
            self._gens[label] = p
            labels.append(label)
            if symmetrized:
                self._gens[label.upper()] = p.inverse()
                labels.append(label.upper())
        self.labels = tuple(labels)
        self._id = Perm.identity(self.degree)

    def identity(self) -> Perm:
        return self._id

    def generator(self, label: str) -> Perm:
        return self._gens[label]

    def mul(self, a: Perm, b: Perm) -> Perm:
        return a * b

    def key(self, a: Perm) -> Hashable:
        return a.key

    def __repr__(self) -> str:
        gens = ", ".join(f"{l}={p}" for l, p in self._gens.items() if l.islower())
        return f"MarkedGroup(degree={self.degree}, {gens})"


def neumann_marking(d, r, n: int) -> MarkedGroup:
    """Alt(d(n)) marked by the generator pair alpha_n, beta_n as labels a, b."""
    from .permutations import neumann_generators

    alpha, beta = neumann_generators(d, r, n)
    return MarkedGroup({"a": alpha, "b": beta})


def classical_marking(d, n: int) -> MarkedGroup:
    """Alt(d(n)) with s -> full cycle, t -> (1 2 3): the level-n classical marking."""
    from .permutations import neumann_generators

    alpha, beta = neumann_generators(d, 1, n)
    return MarkedGroup({"s": alpha, "t": beta})


# -- balls --


class _Explorer:
    """Incremental BFS; each call to ``expand`` adds one sphere."""

    def __init__(self, m: Marking, budget: int = DEFAULT_BUDGET):
        self.m = m
        self.budget = budget
        self.labels = tuple(m.labels)
        self._gens = [m.generator(l) for l in self.labels]
        e = m.identity()
        self.elements = [e]
        self.lengths = [0]
        self.words = [""]
        self.index = {m.key(e): 0}
        self.rows: list[tuple[int, ...]] = []
        self.level_starts = [0, 1]  # sphere L occupies [level_starts[L], level_starts[L+1])
        self.radius = 0

    @property
    def closed(self) -> bool:
        return self.level_starts[-1] == self.level_starts[-2] and self.radius > 0

    def expand(self) -> list[tuple[int, ...]]:
        """Compute rows for the outermost sphere, adding the next sphere."""
        lo, hi = self.level_starts[-2], self.level_starts[-1]
        new_rows = []
        m = self.m
        for i in range(lo, hi):
            x, w = self.elements[i], self.words[i]
            row = []
            for label, g in zip(self.labels, self._gens):
                y = m.mul(x, g)
                k = m.key(y)
                j = self.index.get(k)
                if j is None:
                    if len(self.elements) >= self.budget:
                        raise BudgetExceeded(f"ball exceeds element budget {self.budget}")
                    j = len(self.elements)
                    self.index[k] = j
                    self.elements.append(y)
                    self.lengths.append(self.radius + 1)
                    self.words.append(w + label)
                row.append(j)
            new_rows.append(tuple(row))
        self.rows.extend(new_rows)
        self.radius += 1
        self.level_starts.append(len(self.elements))
        return new_rows


@dataclass
class BallTable:
    """Radius-n ball in canonical BFS order.

    ``table[i][j]`` is the index of ``entries[i] * generator(labels[j])`` for
    every entry of length < radius; this multiplication table is the relation
    pattern of the ball.
    """

    radius: int
    labels: tuple[str, ...]
    elements: list
    lengths: list[int]
    words: list[str]
    table: list[tuple[int, ...]]
    sphere_sizes: list[int]
    keys: dict = field(default_factory=dict, repr=False)

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def entries(self) -> list[tuple[Any, int, str]]:
        return list(zip(self.elements, self.lengths, self.words))

    def relation_pattern(self, n: Optional[int] = None) -> tuple[tuple[int, ...], ...]:
        """Relation pattern of the radius-n sub-ball (n defaults to the radius)."""
        n = self.radius if n is None else n
        if n > self.radius:
            raise ValueError(f"radius {n} exceeds ball radius {self.radius}")
        count = sum(self.sphere_sizes[:n])
        return tuple(self.table[:count])

    def index_of(self, key) -> Optional[int]:
        return self.keys.get(key)

    def growth_rows(self) -> list[tuple[int, int, int]]:
        """(radius, size, new_elements) for radius 0..n."""
        out, total = [], 0
        for r, s in enumerate(self.sphere_sizes):
            total += s
            out.append((r, total, s))
        return out

    def growth_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["radius", "size", "new_elements"])
        w.writerows(self.growth_rows())
        return buf.getvalue()

    def relations_json(self) -> str:
        """Word pairs u = v with |u|, |v| <= radius, one pair per non-geodesic edge."""
        pairs = []
        count = len(self.table)
        for i in range(count):
            for j, label in enumerate(self.labels):
                tgt = self.table[i][j]
                w = self.words[i] + label
                if self.words[tgt] != w:
                    pairs.append([w, self.words[tgt]])
        return json.dumps({"radius": self.radius, "labels": list(self.labels), "relations": pairs}, indent=1)


def ball(m: Marking, n: int, budget: int = DEFAULT_BUDGET) -> BallTable:
    """Enumerate the ball of radius n in deterministic BFS order."""
    if n < 0:
        raise ValueError("radius must be non-negative")
    ex = _Explorer(m, budget)
    for _ in range(n):
        ex.expand()
    starts = ex.level_starts
    sphere_sizes = [starts[i + 1] - starts[i] for i in range(n + 1)]
    return BallTable(
        radius=n,
        labels=ex.labels,
        elements=ex.elements,
        lengths=ex.lengths,
        words=ex.words,
        table=ex.rows,
        sphere_sizes=sphere_sizes,
        keys=ex.index,
    )


def local_embedding_radius(m1: Marking, m2: Marking, horizon: int, budget: int = DEFAULT_BUDGET) -> int:
    """Largest n <= horizon such that the radius-n balls have the same relation pattern.

    Both balls grow in lockstep one sphere at a time and the search stops at
    the first differing row.
    """
    if len(m1.labels) != len(m2.labels):
        raise ValueError("markings have different numbers of labels")
    e1, e2 = _Explorer(m1, budget), _Explorer(m2, budget)
    for n in range(horizon):
        if e1.closed and e2.closed:
            return horizon
        if e1.expand() != e2.expand():
            return n
    return horizon


def ball_isomorphic(m1: Marking, m2: Marking, n: int, budget: int = DEFAULT_BUDGET) -> bool:
    """True iff words of length <= n satisfy the same equalities in both markings."""
    return local_embedding_radius(m1, m2, n, budget) >= n


def is_local_embedding(source: BallTable, target: Marking, source_marking: Marking) -> bool:
    """Check that first-word evaluation maps the ball injectively and multiplicatively.

    The map sends each ball element to its first BFS word evaluated in
    ``target``; it must be injective and satisfy phi(gh) = phi(g) phi(h)
    whenever g, h and gh all lie in the ball.
    """
    if len(source.labels) != len(target.labels):
        raise ValueError("markings have different numbers of labels")
    relabel = dict(zip(source.labels, target.labels))
    imgs = []
    seen = set()
    for w in source.words:
        img = evaluate_word(target, "".join(relabel[c] for c in w))
        k = target.key(img)
        if k in seen:
            return False
        seen.add(k)
        imgs.append(img)
    elems = source.elements
    for i, g in enumerate(elems):
        for j, h in enumerate(elems):
            idx = source.keys.get(source_marking.key(source_marking.mul(g, h)))
            if idx is None:
                continue
            if target.key(target.mul(imgs[i], imgs[j])) != target.key(imgs[idx]):
                return False
    return True
