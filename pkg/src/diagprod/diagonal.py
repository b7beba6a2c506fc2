"""Diagonal products of alternating groups.

An element is stored as (tail, coords, N): explicit coordinates at levels
1..N and a base-group tail whose encodings give every level beyond N. The
horizon N comes with a certificate. When two elements are multiplied the
product's horizon is the largest level at which the encoding fails to be
multiplicative on the pair of tails:

- enrichment of Z: encodings multiply once the joint support span is below
  d(m), which is monotone in m, so the certificate covers all levels;
- lamplighter: multiplicativity holds when the conjugates of beta at the
  lamp positions pairwise commute at (d(m), r(m)); this is checked
  level by level up to the last level of a finite sequence, or up to
  ``max_index`` for a rule, and a failure at ``max_index`` is reported.

Elements outside the image of the tail form (results of ``pi_k``) use a
pattern form instead: every level beyond N carries the natural inclusion of
one fixed permutation.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import ceil
from typing import Hashable, Optional, Sequence

from .basegroups import (
    AZ_S,
    AZ_T,
    LAMP_ALPHA,
    LAMP_BETA,
    AZElement,
    AZMarking,
    LampElement,
    LampMarking,
    SupportTooWide,
    az_inv,
    az_mul,
    az_support_span,
    lamp_inv,
    lamp_mul,
    lamp_pair_commutes,
    residue_label,
    theta_az_at,
    theta_lamp_at,
    window_radius,
)
from .markedgroups import DEFAULT_BUDGET, ball, free_reduce, inverse_word, parse_word
from .permutations import Perm, WindowPerm
from .sequences import IntSequence, check_neumann_params, parse_sequence


class CertificationError(RuntimeError):
    """The encoding is not certified multiplicative within ``max_index``."""


class DomainError(ValueError):
    pass


BASES = ("lamplighter", "classical")


@dataclass(frozen=True)
class DiagProductSpec:
    """Which diagonal product: base group plus the (d, r) sequences.

    ``classical`` is the enrichment of Z with r = 1; ``lamplighter`` is the
    generalized group B(d, r) with the lamplighter tail.
    """

    base: str
    d: IntSequence
    r: IntSequence
    max_index: int = 32

    def __post_init__(self):
        if self.base not in BASES:
            raise ValueError(f"base must be one of {BASES}, got {self.base!r}")
        object.__setattr__(self, "d", parse_sequence(self.d))
        object.__setattr__(self, "r", parse_sequence(self.r))
        check_neumann_params(self.d, self.r, self.levels_checked)
        if self.base == "classical" and any(self.r(n) != 1 for n in range(1, self.levels_checked + 1)):
            raise ValueError("the classical product has r = 1 at every level")

    @classmethod
    def classical(cls, d, max_index: int = 32) -> "DiagProductSpec":
        return cls("classical", parse_sequence(d), parse_sequence("const:1"), max_index)

    @classmethod
    def lamplighter(cls, d, r, max_index: int = 32) -> "DiagProductSpec":
        return cls("lamplighter", parse_sequence(d), parse_sequence(r), max_index)

    @property
    def finite_levels(self) -> Optional[int]:
        return self.d.length

    @property
    def levels_checked(self) -> int:
        return self.d.length if self.d.length is not None else self.max_index

    @property
    def labels(self) -> tuple[str, ...]:
        return ("s", "S", "t", "T") if self.base == "classical" else ("a", "A", "b", "B")

    def base_marking(self):
        return AZMarking() if self.base == "classical" else LampMarking()

    def has_level(self, m: int) -> bool:
        return m >= 1 and (self.d.length is None or m <= self.d.length)

    def theta(self, g, m: int) -> Perm:
        """Encoding of a base element at level m (wide supports only need to be injective mod d)."""
        if self.base == "classical":
            return theta_az_at(g, self.d(m), strict=False)
        return theta_lamp_at(g, self.d(m), self.r(m))

    def base_mul(self, a, b):
        return az_mul(a, b) if self.base == "classical" else lamp_mul(a, b)

    def base_inv(self, a):
        return az_inv(a) if self.base == "classical" else lamp_inv(a)

    def base_identity(self):
        return AZElement() if self.base == "classical" else LampElement()

    def pair_horizon(self, a, b) -> int:
        """Largest level where theta_m(a) theta_m(b) = theta_m(ab) is not certified (0 if none)."""
        if self.base == "classical":
            span = az_support_span(a.perm, b.perm.shift(a.shift))
            m = 0
            while self.has_level(m + 1) and self.d(m + 1) <= span:
                m += 1
            return m
        pos = set(a.lamps) | {j + a.shift for j in b.lamps}
        if len(pos) < 2:
            return 0
        top = self.levels_checked
        for m in range(top, 0, -1):
            if not lamp_pair_commutes(pos, self.d(m), self.r(m)):
                if m == top and self.d.length is None:
                    raise CertificationError(
                        f"encoding not yet multiplicative at level {m} = max_index for lamps at {sorted(pos)}"
                    )
                return m
        return 0

    def describe(self) -> dict:
        return {"base": self.base, "d": self.d.describe(), "r": self.r.describe(), "max_index": self.max_index}


def _reduced(p: Perm) -> Optional[Perm]:
    """Restrict a permutation to [max moved point]; None for the identity."""
    supp = p.support()
    if not supp:
        return None
    top = max(supp)
    return Perm(p.key[:top], zero_based=True, check=False)


class DiagElement:
    """Element of a diagonal product of alternating groups.

    Tail form (``beyond is None``): for m > N the coordinate is
    ``spec.theta(tail, m)``. Pattern form (``tail is None``): for m > N the
    coordinate is the natural inclusion of ``beyond``.
    """

    __slots__ = ("spec", "tail", "coords", "beyond", "_key")

    def __init__(self, spec: DiagProductSpec, tail=None, coords: Sequence[Perm] = (), beyond: Optional[Perm] = None):
        self.spec = spec
        coords = list(coords)
        if beyond is not None:
            beyond = _reduced(beyond)
            if beyond is None:
                tail = spec.base_identity()
        elif tail is None:
            raise ValueError("either a tail or a beyond pattern is required")
        if beyond is not None:
            tail = None
        self.tail = tail
        self.beyond = beyond
        if spec.finite_levels is not None and len(coords) > spec.finite_levels:
            raise ValueError("more coordinates than levels")
        # trim trailing coordinates that agree with the implicit ones
        while coords:
            m = len(coords)
            try:
                implicit = self._implicit(m)
            except (SupportTooWide, ValueError):
                break
            if implicit != coords[-1]:
                break
            coords.pop()
        self.coords = tuple(coords)
        if beyond is None:
            self._key = ("t", tail.key, tuple(p.key for p in self.coords))
        else:
            self._key = ("p", beyond.key, tuple(p.key for p in self.coords))

    def _implicit(self, m: int) -> Perm:
        if self.beyond is None:
            return self.spec.theta(self.tail, m)
        dm = self.spec.d(m)
        if dm < self.beyond.degree:
            raise ValueError("pattern does not fit at this level")
        return self.beyond.embed(dm)

    @property
    def horizon(self) -> int:
        return len(self.coords)

    @property
    def key(self) -> Hashable:
        return self._key

    def coord(self, m: int) -> Perm:
        if not self.spec.has_level(m):
            raise IndexError(f"level {m} does not exist")
        if m <= len(self.coords):
            return self.coords[m - 1]
        return self._implicit(m)

    def __eq__(self, other) -> bool:
        return isinstance(other, DiagElement) and self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __mul__(self, other: "DiagElement") -> "DiagElement":
        return mul(self, other)

    def inverse(self) -> "DiagElement":
        return inv(self)

    def is_identity(self) -> bool:
        return self.beyond is None and self.tail.is_identity() and not self.coords

    def nontrivial_levels(self, upto: Optional[int] = None) -> list[int]:
        top = upto if upto is not None else self.horizon
        return [m for m in range(1, top + 1) if not self.coord(m).is_identity()]

    def __repr__(self) -> str:
        return f"DiagElement({self.to_json()})"

    def to_json(self) -> dict:
        tail = None if self.tail is None else self.tail.to_json()
        return {
            "tail": tail,
            "coords": {str(m): self.coords[m - 1].to_cycles_string() for m in range(1, self.horizon + 1)},
            "horizon": self.horizon,
            "beyond": None if self.beyond is None else self.beyond.to_cycles_string(),
        }

    @classmethod
    def from_json(cls, spec: DiagProductSpec, data) -> "DiagElement":
        if isinstance(data, str):
            data = json.loads(data)
        n = data["horizon"]
        coords = [Perm.parse(data["coords"][str(m)], spec.d(m)) for m in range(1, n + 1)]
        if data.get("beyond"):
            from .permutations import parse_cycles

            cyc = parse_cycles(data["beyond"])
            deg = max(max(c) for c in cyc)
            return cls(spec, None, coords, Perm.from_cycles(cyc, deg))
        tcls = AZElement if spec.base == "classical" else LampElement
        return cls(spec, tcls.from_json(data["tail"]), coords)


def identity(spec: DiagProductSpec) -> DiagElement:
    return DiagElement(spec, spec.base_identity())


def generator(spec: DiagProductSpec, label: str) -> DiagElement:
    gens = {"s": AZ_S, "t": AZ_T} if spec.base == "classical" else {"a": LAMP_ALPHA, "b": LAMP_BETA}
    g = gens.get(label.lower())
    if g is None:
        raise ValueError(f"label {label!r} not in {spec.labels}")
    el = DiagElement(spec, g)
    return inv(el) if label.isupper() else el


def _as_pattern(a: DiagElement):
    if a.beyond is not None:
        return a.beyond
    if a.tail.is_identity():
        return None
    raise DomainError("cannot combine a pattern-form element with an element of nontrivial tail")


def mul(a: DiagElement, b: DiagElement) -> DiagElement:
    spec = a.spec
    if b.spec != spec:
        raise ValueError("elements of different diagonal products")
    if a.beyond is None and b.beyond is None:
        N = max(a.horizon, b.horizon, spec.pair_horizon(a.tail, b.tail))
        coords = [a.coord(m) * b.coord(m) for m in range(1, N + 1)]
        return DiagElement(spec, spec.base_mul(a.tail, b.tail), coords)
    pa, pb = _as_pattern(a), _as_pattern(b)
    N = max(a.horizon, b.horizon)
    coords = [a.coord(m) * b.coord(m) for m in range(1, N + 1)]
    deg = max(p.degree for p in (pa, pb) if p is not None)
    pa = pa.embed(deg) if pa is not None else Perm.identity(deg)
    pb = pb.embed(deg) if pb is not None else Perm.identity(deg)
    return DiagElement(spec, None, coords, pa * pb)


def inv(a: DiagElement) -> DiagElement:
    if a.beyond is not None:
        coords = [p.inverse() for p in a.coords]
        return DiagElement(a.spec, None, coords, a.beyond.inverse())
    t = a.spec.base_inv(a.tail)
    # theta(g^-1) = theta(g)^-1 is only certified past the pair horizon of (g, g^-1)
    N = max(a.horizon, a.spec.pair_horizon(a.tail, t))
    coords = [a.coord(m).inverse() for m in range(1, N + 1)]
    return DiagElement(a.spec, t, coords)


def eq(a: DiagElement, b: DiagElement) -> bool:
    return a == b


def from_word(spec: DiagProductSpec, word) -> DiagElement:
    """Evaluate a word over the symmetric labels (e.g. ``"abAB"`` or ``"α β α⁻¹ β⁻¹"``)."""
    g = identity(spec)
    gens = {l: generator(spec, l) for l in spec.labels}
    for c in parse_word(word):
        if c not in gens:
            raise ValueError(f"label {c!r} not in {spec.labels}")
        g = mul(g, gens[c])
    return g


def tail_map(a: DiagElement):
    if a.beyond is not None:
        raise DomainError("pattern-form elements have no tail")
    return a.tail


def in_kernel(a: DiagElement) -> bool:
    return a.beyond is None and a.tail.is_identity()


def project_Un(a: DiagElement, n: int) -> tuple[Perm, ...]:
    return tuple(a.coord(m) for m in range(1, n + 1))


def embed_Un(spec: DiagProductSpec, coords: Sequence[Perm]) -> DiagElement:
    return DiagElement(spec, spec.base_identity(), coords)


def project_Gamma_n(a: DiagElement, n: int) -> DiagElement:
    """Zero the coordinates at levels 1..n-1."""
    N = max(a.horizon, n - 1)
    coords = [Perm.identity(a.spec.d(m)) if m < n else a.coord(m) for m in range(1, N + 1)]
    if a.beyond is not None:
        return DiagElement(a.spec, None, coords, a.beyond)
    return DiagElement(a.spec, a.tail, coords)


def phi_section(spec: DiagProductSpec, g, n: int) -> DiagElement:
    """Trivial below level n, theta_m(g) at every level m >= n, tail g."""
    if spec.base == "classical" and spec.has_level(n):
        theta_az_at(g, spec.d(n), strict=True)
    coords = [Perm.identity(spec.d(m)) for m in range(1, n)]
    return DiagElement(spec, g, coords)


# -- approximating endomorphisms --


def _lift_natural(p: Perm) -> WindowPerm:
    # point q of [d(k)] <-> integer q - 2, so residue labels at every higher level are q again
    return WindowPerm({i - 2: p(i) - 2 for i in p.support()})


def _lift_symmetric(p: Perm, d: int) -> WindowPerm:
    m = window_radius(d)
    rep = {residue_label(x, d): x for x in range(-m, m + 1)}
    return WindowPerm({rep[i]: rep[p(i)] for i in p.support()})


def pi_k(a: DiagElement, k: int, domain: str = "kernel", inclusion: str = "natural") -> DiagElement:
    """Keep levels <= k and copy level k to every higher level.

    ``domain`` is ``"kernel"`` (elements with trivial tail) or ``"finitary"``
    (tail with zero shift: the lamp part, or the finitary alternating part).
    ``inclusion`` is ``"natural"`` ([d(k)] inside [d(m)] as an initial
    segment) or, for the classical base, ``"symmetric"`` (the inclusion that
    matches residues of the window [-(d-1)/2, (d-1)/2]).
    """
    spec = a.spec
    if not spec.has_level(k) or k < 1:
        raise IndexError(f"level {k} does not exist")
    if domain not in ("kernel", "finitary"):
        raise ValueError(f"unknown domain {domain!r}")
    if inclusion not in ("natural", "symmetric"):
        raise ValueError(f"unknown inclusion {inclusion!r}")
    if a.beyond is None:
        if domain == "kernel" and not a.tail.is_identity():
            raise DomainError("element is not in the kernel of the tail map")
        if domain == "finitary" and a.tail.shift != 0:
            raise DomainError("tail has a nonzero shift")
    coords = [a.coord(m) for m in range(1, k + 1)]
    top = coords[-1]
    if spec.base == "classical":
        if inclusion == "natural":
            lifted = _lift_natural(top)
        else:
            lifted = _lift_symmetric(top, spec.d(k))
        return DiagElement(spec, AZElement(0, lifted), coords)
    if inclusion == "symmetric":
        raise ValueError("the symmetric inclusion is only defined for the classical base")
    return DiagElement(spec, None, coords, top)


# -- marking and witness search --


class DiagMarking:
    def __init__(self, spec: DiagProductSpec):
        self.spec = spec
        self.labels = spec.labels
        self._gens = {l: generator(spec, l) for l in spec.labels}
        self._id = identity(spec)

    def identity(self) -> DiagElement:
        return self._id

    def generator(self, label: str) -> DiagElement:
        return self._gens[label]

    def mul(self, a: DiagElement, b: DiagElement) -> DiagElement:
        return mul(a, b)

    def key(self, a: DiagElement) -> Hashable:
        return a.key

    def __repr__(self) -> str:
        return f"DiagMarking({self.spec.describe()})"


def is_single_level(a: DiagElement, n: int) -> bool:
    """Trivial tail, nontrivial at level n and trivial at every other level."""
    if not in_kernel(a) or a.horizon < n:
        return False
    return a.nontrivial_levels() == [n]


def _key_without(a: DiagElement, n: int):
    top = max(a.horizon, n)
    rest = tuple(a.coord(m).key for m in range(1, top + 1) if m != n)
    head = ("t", a.tail.key) if a.beyond is None else ("p", a.beyond.key)
    return head, rest


@dataclass
class WitnessResult:
    level: int
    radius_budget: int
    word: Optional[str]
    balls_radius: int
    ball_size: int
    found: bool = field(init=False)

    def __post_init__(self):
        self.found = self.word is not None

    def to_json(self) -> dict:
        return {
            "level": self.level,
            "radius_budget": self.radius_budget,
            "word": self.word,
            "length": None if self.word is None else len(self.word),
            "found": self.found,
            "ball_radius": self.balls_radius,
            "ball_size": self.ball_size,
        }


def find_wn(spec: DiagProductSpec, n: int, radius_budget: int, budget: int = DEFAULT_BUDGET) -> WitnessResult:
    """Shortest word of length <= R that is nontrivial only at level n.

    Meet in the middle: w = u v^-1 with u, v in the ball of radius ceil(R/2)
    is such a witness iff u and v agree everywhere except at level n, where
    they differ. Minimal |u| + |v| gives the minimal length; ties are broken
    by the lexicographic order of the words in label order.
    """
    if radius_budget < 1:
        raise ValueError("radius budget must be >= 1")
    if not spec.has_level(n):
        raise IndexError(f"level {n} does not exist")
    h = ceil(radius_budget / 2)
    B = ball(DiagMarking(spec), h, budget)
    groups: dict = {}
    for i, x in enumerate(B.elements):
        groups.setdefault(_key_without(x, n), []).append(i)
    order = {c: i for i, c in enumerate(spec.labels)}
    best: Optional[tuple] = None
    for members in groups.values():
        if len(members) < 2:
            continue
        cls = [B.elements[i].coord(n).key for i in members]
        first = members[0]
        other = next((members[j] for j in range(len(members)) if cls[j] != cls[0]), None)
        if other is None:
            continue
        top = B.lengths[first] + B.lengths[other]
        if top > radius_budget or (best is not None and top > best[0]):
            continue
        for a in range(len(members)):
            for b in range(len(members)):
                i, j = members[a], members[b]
                if cls[a] == cls[b] or B.lengths[i] + B.lengths[j] != top:
                    continue
                w = free_reduce(B.words[i] + inverse_word(B.words[j]))
                cand = (len(w), tuple(order[c] for c in w), w)
                if best is None or cand[:2] < best[:2]:
                    best = cand
    word = None if best is None else best[2]
    return WitnessResult(n, radius_budget, word, h, len(B))


def verify_witness(spec: DiagProductSpec, n: int, word: str, radius_budget: Optional[int] = None) -> bool:
    """Independent re-check: evaluate the word from scratch."""
    word = parse_word(word)
    if radius_budget is not None and len(word) > radius_budget:
        return False
    return is_single_level(from_word(spec, word), n)
