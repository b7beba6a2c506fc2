"""The lamplighter (Z/3) wr Z, the enrichment Z x| Alt_fin(Z), and their
encodings into alternating groups.

Lamplighter elements are pairs (k, f) with f: Z -> Z/3 finitely supported and
law (k, f)(k', f') = (k + k', j -> f(j) + f'(j - k)). The generators are
alpha = (1, 0) and beta = (0, delta_0); every element factors as
prod_j (alpha^j beta alpha^-j)^f(j) * alpha^k.

Elements of the enrichment are pairs (k, sigma) standing for the permutation
sigma o tau_k of Z, where tau_k(x) = x + k. Generators are s = (1, id) and
t = (0, (-1 0 1)).
"""

from __future__ import annotations

import json
import re
from typing import Callable, Hashable, Iterable, Mapping, Optional, Sequence

from .permutations import Perm, PermutationError, WindowPerm, parse_cycles
from .sequences import parse_sequence


class SupportTooWide(ValueError):
    """The element does not fit in the window encoded at this level."""


class ParityError(ValueError):
    pass


# -- lamplighter --


class LampElement:
    __slots__ = ("shift", "lamps", "_key")

    def __init__(self, shift: int = 0, lamps: Mapping[int, int] | None = None):
        self.shift = int(shift)
        clean = {int(j): v % 3 for j, v in (lamps or {}).items() if v % 3}
        self.lamps = clean
        self._key = (self.shift, tuple(sorted(clean.items())))

    @property
    def key(self) -> Hashable:
        return self._key

    def __eq__(self, other) -> bool:
        return isinstance(other, LampElement) and self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __mul__(self, other: "LampElement") -> "LampElement":
        return lamp_mul(self, other)

    def inverse(self) -> "LampElement":
        return lamp_inv(self)

    def is_identity(self) -> bool:
        return self.shift == 0 and not self.lamps

    def __repr__(self) -> str:
        return f"LampElement({self.to_text()})"

    def to_text(self) -> str:
        body = ",".join(f"{j}:{v}" for j, v in sorted(self.lamps.items()))
        return f"shift={self.shift}; lamps={{{body}}}"

    def to_json(self) -> dict:
        return {"shift": self.shift, "lamps": {str(j): v for j, v in sorted(self.lamps.items())}}

    @classmethod
    def from_json(cls, data) -> "LampElement":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(data.get("shift", 0), {int(j): int(v) for j, v in data.get("lamps", {}).items()})

    @classmethod
    def parse(cls, text: str) -> "LampElement":
        m = re.fullmatch(r"\s*shift\s*=\s*(-?\d+)\s*;\s*lamps\s*=\s*\{([^}]*)\}\s*", text)
        if not m:
            raise ValueError(f"bad lamplighter element {text!r}")
        lamps = {}
        for item in filter(None, (s.strip() for s in m.group(2).split(","))):
            j, v = item.split(":")
            lamps[int(j)] = int(v)
        return cls(int(m.group(1)), lamps)


def lamp_mul(a: LampElement, b: LampElement) -> LampElement:
    lamps = dict(a.lamps)
    for j, v in b.lamps.items():
        lamps[j + a.shift] = lamps.get(j + a.shift, 0) + v
    return LampElement(a.shift + b.shift, lamps)


def lamp_inv(a: LampElement) -> LampElement:
    return LampElement(-a.shift, {j - a.shift: -v for j, v in a.lamps.items()})


LAMP_ALPHA = LampElement(1)
LAMP_BETA = LampElement(0, {0: 1})


def lamp_conjugate_cycle(j: int, d: int, r: int) -> tuple[int, int, int]:
    """alpha^j beta alpha^-j = (1+j, 1+j+r, 1+j+2r) with points mod d in [1, d]."""
    return tuple(((j + a * r) % d) + 1 for a in (0, 1, 2))  # type: ignore[return-value]


def _apply_3cycle(img: list[int], cyc: tuple[int, int, int], power: int) -> None:
    # img is the image list (0-based) of a permutation P; replace P by C^power o P
    x, y, z = (c - 1 for c in cyc)
    if power == 1:
        m = {x: y, y: z, z: x}
    else:
        m = {x: z, y: x, z: y}
    for i, v in enumerate(img):
        if v in m:
            img[i] = m[v]


def theta_lamp_at(g: LampElement, d: int, r: int) -> Perm:
    """prod_j (alpha^j beta alpha^-j)^f(j) * alpha^k in Alt(d), product over ascending j."""
    k = g.shift % d
    img = [(i + k) % d for i in range(d)]  # alpha^k
    # left-multiply by the lamp factors, highest j first so ascending j ends on the left
    for j in sorted(g.lamps, reverse=True):
        _apply_3cycle(img, lamp_conjugate_cycle(j, d, r), g.lamps[j])
    return Perm(img, zero_based=True, check=False)


def theta_lamp(g: LampElement, n: int, d, r) -> Perm:
    d, r = parse_sequence(d), parse_sequence(r)
    return theta_lamp_at(g, d(n), r(n))


def lamp_pair_commutes(positions: Iterable[int], d: int, r: int) -> bool:
    """True iff the cycles alpha^j beta alpha^-j, j in positions, pairwise commute at (d, r)."""
    res = sorted({p % d for p in positions})
    bad = {r % d, (2 * r) % d, (-r) % d, (-2 * r) % d}
    for i, p in enumerate(res):
        for q in res[i + 1:]:
            if (q - p) % d in bad:
                return False
    return True


# -- enrichment of Z --


class AZElement:
    """(k, sigma) representing sigma o tau_k; sigma is even and finitary."""

    __slots__ = ("shift", "perm", "_key")

    def __init__(self, shift: int = 0, perm: WindowPerm | None = None, check: bool = True):
        self.shift = int(shift)
        self.perm = perm if perm is not None else WindowPerm()
        if check and not self.perm.is_even():
            raise ParityError(f"finitary part must be even, got {self.perm}")
        self._key = (self.shift, self.perm.key)

    @property
    def key(self) -> Hashable:
        return self._key

    def __eq__(self, other) -> bool:
        return isinstance(other, AZElement) and self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __mul__(self, other: "AZElement") -> "AZElement":
        return az_mul(self, other)

    def __call__(self, x: int) -> int:
        return self.perm(x + self.shift)

    def inverse(self) -> "AZElement":
        return az_inv(self)

    def is_identity(self) -> bool:
        return self.shift == 0 and self.perm.is_identity()

    def __repr__(self) -> str:
        return f"AZElement({self.to_text()})"

    def to_text(self) -> str:
        return f"shift={self.shift}; perm={self.perm.to_cycles_string()}"

    def to_json(self) -> dict:
        return {"shift": self.shift, "perm": [list(c) for c in self.perm.cycles()]}

    @classmethod
    def from_json(cls, data) -> "AZElement":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(data.get("shift", 0), WindowPerm.from_cycles(data.get("perm", [])))

    @classmethod
    def parse(cls, text: str) -> "AZElement":
        m = re.fullmatch(r"\s*shift\s*=\s*(-?\d+)\s*;\s*perm\s*=\s*(.*?)\s*", text)
        if not m:
            raise ValueError(f"bad enrichment element {text!r}")
        return cls(int(m.group(1)), WindowPerm.from_cycles(parse_cycles(m.group(2))))


def az_mul(a: AZElement, b: AZElement) -> AZElement:
    # sigma tau_k sigma' tau_k' = (sigma . tau_k sigma' tau_-k) tau_{k+k'}
    return AZElement(a.shift + b.shift, a.perm * b.perm.shift(a.shift), check=False)


def az_inv(a: AZElement) -> AZElement:
    return AZElement(-a.shift, a.perm.inverse().shift(-a.shift), check=False)


AZ_S = AZElement(1)
AZ_T = AZElement(0, WindowPerm.from_cycles([(-1, 0, 1)]))


def residue_label(x: int, d: int) -> int:
    """Point of [d] encoding the integer x: x -> ((x + 1) mod d) + 1, so -1, 0, 1 -> 1, 2, 3."""
    return ((x + 1) % d) + 1


def _residue_perm(g: AZElement, d: int) -> Perm:
    k = g.shift % d
    img = [(i + k) % d for i in range(d)]  # full cycle to the k
    moved = {residue_label(x, d) - 1: residue_label(y, d) - 1 for x, y in g.perm.items()}
    if len(moved) != len(g.perm.items()):
        raise SupportTooWide(f"support of {g.perm} is not injective modulo {d}")
    img = [moved.get(v, v) for v in img]
    return Perm(img, zero_based=True, check=False)


def window_radius(d: int) -> int:
    return d // 2


def theta_az_at(g: AZElement, d: int, strict: bool = True) -> Perm:
    """Encode g in Alt(d), d odd.

    With ``strict`` the support must lie in the window [-(d-1)/2, (d-1)/2];
    otherwise it must only be injective modulo d.
    """
    if d % 2 == 0:
        raise PermutationError(f"encoding level must have odd degree, got {d}")
    supp = g.perm.support()
    if supp:
        lo, hi = min(supp), max(supp)
        m = window_radius(d)
        if strict and (lo < -m or hi > m):
            raise SupportTooWide(f"support [{lo}, {hi}] outside window [-{m}, {m}] at degree {d}")
        if hi - lo >= d:
            raise SupportTooWide(f"support span {hi - lo} too wide for degree {d}")
    return _residue_perm(g, d)


def theta_az(g: AZElement, n: int, d, strict: bool = True) -> Perm:
    d = parse_sequence(d)
    return theta_az_at(g, d(n), strict)


def az_support_span(*perms: WindowPerm) -> int:
    pts = set()
    for p in perms:
        pts |= p.support()
    return max(pts) - min(pts) if pts else -1


# -- markings of the base groups --


class LampMarking:
    labels = ("a", "A", "b", "B")

    _gens = {"a": LAMP_ALPHA, "A": lamp_inv(LAMP_ALPHA), "b": LAMP_BETA, "B": lamp_inv(LAMP_BETA)}

    def identity(self) -> LampElement:
        return LampElement()

    def generator(self, label: str) -> LampElement:
        return self._gens[label]

    def mul(self, a: LampElement, b: LampElement) -> LampElement:
        return lamp_mul(a, b)

    def key(self, a: LampElement) -> Hashable:
        return a.key

    def __repr__(self) -> str:
        return "LampMarking()"


class AZMarking:
    labels = ("s", "S", "t", "T")

    _gens = {"s": AZ_S, "S": az_inv(AZ_S), "t": AZ_T, "T": az_inv(AZ_T)}

    def identity(self) -> AZElement:
        return AZElement()

    def generator(self, label: str) -> AZElement:
        return self._gens[label]

    def mul(self, a: AZElement, b: AZElement) -> AZElement:
        return az_mul(a, b)

    def key(self, a: AZElement) -> Hashable:
        return a.key

    def __repr__(self) -> str:
        return "AZMarking()"


def lamp_theta(d, r) -> Callable[[LampElement, int], Perm]:
    d, r = parse_sequence(d), parse_sequence(r)
    return lambda g, n: theta_lamp_at(g, d(n), r(n))


def az_theta(d, strict: bool = True) -> Callable[[AZElement, int], Perm]:
    d = parse_sequence(d)
    return lambda g, n: theta_az_at(g, d(n), strict)


# -- encoding a finite group into an alternating group --


def encode_alternating(group_elements: Sequence, left_mult: Callable, s_images: Mapping[str, object]) -> dict[str, Perm]:
    """Encode generators through the left regular action on ``group_elements``.

    Points are positions in ``group_elements`` (1-based). Each label s maps to
    left multiplication by its image g, and ``"t_" + s`` maps to the 3-cycle
    (g^-1, e, g), which degenerates to the identity when g = e.
    """
    elems = list(group_elements)
    index = {e: i for i, e in enumerate(elems)}
    if len(index) != len(elems):
        raise ValueError("group elements must be distinct")
    d = len(elems)
    identity = next((e for e in elems if all(left_mult(e, x) == x for x in elems)), None)
    if identity is None:
        raise ValueError("no identity among the group elements")
    out: dict[str, Perm] = {}
    for label, g in s_images.items():
        img = [index[left_mult(g, x)] for x in elems]
        p = Perm(img, zero_based=True)
        if p.sign() != 1:
            raise ParityError(f"left multiplication by the image of {label!r} is odd")
        out[label] = p
        g_inv = next(x for x in elems if left_mult(g, x) == identity)
        if g == identity:
            out["t_" + label] = Perm.identity(d)
        elif g_inv == g:
            raise ParityError(f"image of {label!r} is an involution; (g^-1, e, g) is not a 3-cycle")
        else:
            out["t_" + label] = Perm.from_cycles([(index[g_inv] + 1, index[identity] + 1, index[g] + 1)], d)
    return out


# -- eventual multiplicativity --


def multiplicativity_radius(theta: Callable[[object, int], Perm], marking, radius: int, horizon: int) -> Optional[int]:
    """Smallest n0 <= horizon such that every level m in [n0, horizon] is
    multiplicative and injective on the radius ball; None when no such n0.
    """
    from .markedgroups import ball

    B = ball(marking, radius)
    elems = B.elements
    keys = {marking.key(g): i for i, g in enumerate(elems)}
    prods = [[marking.mul(g, h) for h in elems] for g in elems]

    def good(m: int) -> bool:
        try:
            imgs = [theta(g, m) for g in elems]
        except SupportTooWide:
            return False
        if len({p.key for p in imgs}) != len(imgs):
            return False
        cache: dict = {}
        for i, g in enumerate(elems):
            for j in range(len(elems)):
                gh = prods[i][j]
                idx = keys.get(marking.key(gh))
                try:
                    lhs = imgs[idx] if idx is not None else cache.setdefault(marking.key(gh), theta(gh, m))
                except SupportTooWide:
                    return False
                if lhs != imgs[i] * imgs[j]:
                    return False
        return True

    n0 = None
    for m in range(horizon, 0, -1):
        try:
            ok = good(m)
        except IndexError:
            ok = False
        if not ok:
            break
        n0 = m
    return n0
