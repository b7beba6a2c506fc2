"""Null elements, compatible traces and limit products at a finite horizon.

For a base element g and a family of characters phi_n of Alt(d(n)) the
partial products p_k = prod_{n<=k} |phi_n(theta_n(g))| are computed; g is
null when every lift has vanishing infinite product. Since a lift can
change finitely many coordinates, exact-zero factors are skipped when
classifying.
"""

from __future__ import annotations

import csv
import io
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Callable, Optional, Sequence

from .basegroups import SupportTooWide, residue_label, window_radius
from .characters import (
    AltChar,
    AltClass,
    Partition,
    alt_characters,
    class_of,
    is_trivial_char,
    normalized_value,
    parse_partition,
    splits_in_alt,
)
from .characters.surds import Surd
from .diagonal import DiagProductSpec
from .permutations import CycleType, Perm

DEFAULT_EPS_ZERO = 1e-9
DEFAULT_EPS_NEAR = 0.05


# -- sparse encodings --


@dataclass(frozen=True)
class SparseEncoding:
    """theta_n(g) = P o alpha^k on Z/d (0-based points); P given on its support."""

    d: int
    shift: int
    perm: dict

    def support_size(self) -> int:
        return self.d - self.fixed_points()

    def fixed_points(self) -> int:
        if self.shift == 0:
            return self.d - len(self.perm)
        k = self.shift
        return sum(1 for y, z in self.perm.items() if (z - y) % self.d == (-k) % self.d)

    def to_perm(self) -> Perm:
        img = [(p + self.shift) % self.d for p in range(self.d)]
        img = [self.perm.get(v, v) for v in img]
        return Perm(img, zero_based=True, check=False)

    def cycle_type(self) -> CycleType:
        if self.shift == 0:
            seen, cycles = set(), []
            for s in self.perm:
                if s in seen:
                    continue
                n, x = 0, s
                while x not in seen:
                    seen.add(x)
                    x = self.perm[x]
                    n += 1
                cycles.append(n)
            return CycleType(tuple(cycles), self.d - len(self.perm))
        return self.to_perm().cycle_type()


def sparse_encoding(g, spec: DiagProductSpec, n: int, strict: bool = True) -> SparseEncoding:
    d = spec.d(n)
    if spec.base == "classical":
        supp = g.perm.support()
        if supp:
            lo, hi = min(supp), max(supp)
            m = window_radius(d)
            if strict and (lo < -m or hi > m):
                raise SupportTooWide(f"support [{lo}, {hi}] outside window at level {n}")
            if hi - lo >= d:
                raise SupportTooWide(f"support span too wide at level {n}")
        P = {residue_label(x, d) - 1: residue_label(y, d) - 1 for x, y in g.perm.items()}
        return SparseEncoding(d, g.shift % d, P)
    r = spec.r(n)
    P: dict = {}
    # P = prod_{j ascending} c_j^f(j); apply rightmost factor first
    for j in sorted(g.lamps, reverse=True):
        pts = [(j + a * r) % d for a in (0, 1, 2)]
        cyc = {pts[0]: pts[1], pts[1]: pts[2], pts[2]: pts[0]}
        if g.lamps[j] == 2:
            cyc = {v: u for u, v in cyc.items()}
        P = {x: cyc.get(P.get(x, x), P.get(x, x)) for x in set(P) | set(cyc)}
        P = {x: y for x, y in P.items() if x != y}
    return SparseEncoding(d, g.shift % d, P)


def first_evaluable_level(g, spec: DiagProductSpec, upto: int) -> Optional[int]:
    for n in range(1, upto + 1):
        try:
            sparse_encoding(g, spec, n)
            return n
        except SupportTooWide:
            continue
    return None


def support_bound(g, spec: DiagProductSpec) -> Optional[int]:
    """Uniform bound on |supp theta_n(g)| over large n, when the shift is zero."""
    if g.shift != 0:
        return None
    if spec.base == "classical":
        return len(g.perm.support())
    return 3 * len(g.lamps)


# -- character families --


class CharFamily:
    """A rule giving one Alt(d(n)) character per level.

    kinds: ``standard`` (partition (d-1, 1), closed form), ``standard-literal``
    (the alternative normalization (d - 1 - s)/d), ``trivial``, ``hook:k``
    ((d-k, 1^k)), ``two-row:k`` ((d-k, k)), ``balanced`` (about sqrt(d) rows
    and columns) and ``list`` (explicit partitions per level).
    """

    def __init__(self, kind: str = "standard", partitions: Sequence = ()):
        self.kind = kind
        self._list = [p if isinstance(p, AltChar) else _alt_char(parse_partition(p) if isinstance(p, str) else Partition(p)) for p in partitions]
        base = kind.split(":")[0]
        if base not in ("standard", "standard-literal", "trivial", "hook", "two-row", "balanced", "list"):
            raise ValueError(f"unknown character family {kind!r}")
        if base == "list" and not self._list:
            raise ValueError("list family needs partitions")

    @classmethod
    def parse(cls, text: str) -> "CharFamily":
        if text.startswith("list:"):
            items = [s for s in text[5:].split(";") if s]
            return cls("list", items)
        return cls(text)

    @property
    def closed_form(self) -> bool:
        return self.kind in ("standard", "standard-literal", "trivial")

    @property
    def has_majorant(self) -> bool:
        return self.kind in ("standard", "standard-literal", "trivial")

    def character(self, n: int, d: int) -> AltChar:
        kind, _, arg = self.kind.partition(":")
        if kind in ("standard", "standard-literal"):
            lam = Partition((d - 1, 1))
        elif kind == "trivial":
            lam = Partition((d,))
        elif kind == "hook":
            k = int(arg)
            lam = Partition((d - k,) + (1,) * k)
        elif kind == "two-row":
            k = int(arg)
            lam = Partition((d - k, k))
        elif kind == "balanced":
            c = max(1, isqrt(d))
            lam = Partition([c] * (d // c) + ([d % c] if d % c else []))
        else:
            if n > len(self._list):
                raise IndexError(f"no character given for level {n}")
            chi = self._list[n - 1]
            if chi.n != d:
                raise ValueError(f"character {chi} has size {chi.n}, level {n} has degree {d}")
            return chi
        if lam.n != d:
            raise ValueError(f"family {self.kind} gives a partition of {lam.n} at degree {d}")
        return _alt_char(lam)

    def abs_value(self, enc: SparseEncoding, n: int):
        """|phi_n| at the encoded element: a Fraction when rational, else a float."""
        d = enc.d
        if self.kind == "standard":
            return abs(Fraction(enc.fixed_points() - 1, d - 1))
        if self.kind == "standard-literal":
            return abs(Fraction(d - 1 - enc.support_size(), d))
        if self.kind == "trivial":
            return Fraction(1)
        chi = self.character(n, d)
        mu = enc.cycle_type()
        cls = class_of(enc.to_perm()) if splits_in_alt(mu) else AltClass(mu, 0)
        v = normalized_value(chi, cls)
        if v.is_rational():
            return abs(v.rational())
        return math.sqrt(float(v.abs2()))

    def describe(self) -> str:
        if self.kind == "list":
            return "list:" + ";".join(str(c) for c in self._list)
        return self.kind


def _alt_char(lam: Partition) -> AltChar:
    if lam.is_self_conjugate():
        return AltChar(lam, 1)
    return AltChar(max(lam, lam.conjugate()))


# -- partial products --


@dataclass
class PartialProducts:
    levels: list[int]
    factors: list
    values: list[float]
    exact_final: Optional[Fraction] = None
    skipped: list[int] = field(default_factory=list)

    def to_csv(self, tail_bounds: Optional[list] = None) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["k", "p_k", "one_minus_abs_phi_k", "cumulative_tail_bound"])
        for i, (k, f, p) in enumerate(zip(self.levels, self.factors, self.values)):
            tb = "" if tail_bounds is None or tail_bounds[i] is None else f"{float(tail_bounds[i]):.12g}"
            w.writerow([k, f"{p:.12g}", f"{1 - float(f):.12g}", tb])
        return buf.getvalue()


def partial_products(g, fam: CharFamily, spec: DiagProductSpec, N: int, exact: bool = False,
                     start: int = 1, skip_zero: bool = False) -> PartialProducts:
    """p_k over levels start..N, in fixed index order (float values; exact final product on request)."""
    levels, factors, values = [], [], []
    p = 1.0
    num, den, all_rational = 1, 1, True
    skipped = []
    for n in range(start, N + 1):
        if not spec.has_level(n):
            break
        enc = sparse_encoding(g, spec, n)
        f = fam.abs_value(enc, n)
        if skip_zero and f == 0:
            skipped.append(n)
            continue
        levels.append(n)
        factors.append(f)
        p *= float(f)
        values.append(p)
        if exact:
            if isinstance(f, Fraction):
                num *= f.numerator
                den *= f.denominator
            else:
                all_rational = False
    final = Fraction(num, den) if exact and all_rational else None
    return PartialProducts(levels, factors, values, final, skipped)


# -- null verdicts --


@dataclass
class NullVerdict:
    kind: str  # NullCertifiedNumerically | PositiveLimitCertified | Undetermined
    horizon: int
    value: Optional[float] = None
    lower_bound: Optional[float] = None
    certificate: dict = field(default_factory=dict)

    @property
    def is_null(self) -> bool:
        return self.kind == "NullCertifiedNumerically"

    @property
    def is_positive(self) -> bool:
        return self.kind == "PositiveLimitCertified"

    def to_json(self) -> dict:
        return {
            "verdict": self.kind,
            "horizon": self.horizon,
            "value": self.value,
            "lower_bound": self.lower_bound,
            "certificate": self.certificate,
        }


def classify_null(g, fam: CharFamily, spec: DiagProductSpec, N: int, eps_zero: float = DEFAULT_EPS_ZERO) -> NullVerdict:
    """Numerical null evidence, or an analytic positive lower bound.

    The positive certificate uses 1 - |phi_n| <= (s + 1)/(d(n) - 1) for
    the standard families, where s bounds the support of theta_n(g), and
    prod (1 - x_n) >= 1 - sum x_n with the sum bounded by the sequence's
    tail bound on sum_{n>N} 1/(d(n) - 1).
    """
    if g.is_identity():
        return NullVerdict("PositiveLimitCertified", N, 1.0, 1.0, {"reason": "identity"})
    n0 = first_evaluable_level(g, spec, N)
    if n0 is None:
        return NullVerdict("Undetermined", N, certificate={"reason": "not evaluable up to the horizon"})
    pp = partial_products(g, fam, spec, N, start=n0, skip_zero=True)
    p = pp.values[-1] if pp.values else 1.0
    last = pp.levels[-1] if pp.levels else n0 - 1
    last = max([last] + pp.skipped)
    cert = {"first_level": n0, "skipped_zero_factors": pp.skipped}
    if p < eps_zero:
        return NullVerdict("NullCertifiedNumerically", N, p, None, dict(cert, threshold=eps_zero))
    s = support_bound(g, spec)
    if fam.kind == "trivial":
        return NullVerdict("PositiveLimitCertified", N, p, p, dict(cert, reason="trivial characters"))
    if fam.has_majorant and s is not None:
        tail = spec.d.tail_reciprocal_bound(last)
        if tail is not None:
            M = (s + 1) * tail
            if M < 1:
                lower = p * float(1 - M)
                return NullVerdict(
                    "PositiveLimitCertified",
                    N,
                    p,
                    lower,
                    dict(cert, support_bound=s, tail_sum_bound=float(tail), majorant=float(M)),
                )
    return NullVerdict("Undetermined", N, p, None, cert)


# -- limit products for a fixed cycle structure --


@dataclass
class LimitProductRun:
    sigma: CycleType
    n_seq: list[int]
    characters: list[str]
    values: list  # complex normalized values
    partial: list[complex]
    seed: Optional[int] = None

    def monotone_abs(self) -> bool:
        a = [abs(p) for p in self.partial]
        return all(x >= y - 1e-15 for x, y in zip(a, a[1:]))

    def cauchy_gap(self, K: Optional[int] = None) -> float:
        """max_{K < k <= len} |p_k - p_K| (1-based K, default the last term)."""
        K = len(self.partial) if K is None else K
        pK = self.partial[K - 1]
        return max((abs(p - pK) for p in self.partial[K:]), default=0.0)

    def abs_at(self, K: Optional[int] = None) -> float:
        K = len(self.partial) if K is None else K
        return abs(self.partial[K - 1])

    def to_json(self) -> dict:
        return {
            "sigma": list(self.sigma.cycles),
            "n": self.n_seq,
            "characters": self.characters,
            "values": [[v.real, v.imag] for v in self.values],
            "partial": [[p.real, p.imag] for p in self.partial],
            "monotone_abs": self.monotone_abs(),
            "cauchy_gap_last": self.cauchy_gap(),
            "abs_last": self.abs_at(),
            "seed": self.seed,
        }


def limit_product_signed(sigma: CycleType | Sequence[int], n_seq: Sequence[int], chars="standard",
                         seed: Optional[int] = None) -> LimitProductRun:
    """Partial products of normalized values phi_i(sigma) in Alt(n_i).

    ``chars``: ``"standard"``, ``"trivial"``, ``"random"`` (uniform over the
    nontrivial irreducibles, from ``seed``), or one partition/AltChar per index.
    """
    sigma = sigma if isinstance(sigma, CycleType) else CycleType(tuple(p for p in sigma if p > 1), 0)
    if not sigma.is_even():
        raise ValueError(f"cycle structure {sigma} is odd")
    q = sigma.support_size
    n_seq = list(n_seq)
    if sorted(set(n_seq)) != n_seq:
        raise ValueError("indices must be strictly increasing")
    if n_seq[0] < q + 2:
        raise ValueError(f"first index {n_seq[0]} < |supp| + 2 = {q + 2}")
    rng = random.Random(seed)
    names, vals, partial = [], [], []
    p = 1 + 0j
    for i, n in enumerate(n_seq):
        mu = CycleType(sigma.cycles, n - q)
        if chars == "standard":
            chi = AltChar(Partition((n - 1, 1)))
        elif chars == "trivial":
            chi = AltChar(Partition((n,)))
        elif chars == "random":
            pool = [c for c in alt_characters(n) if not is_trivial_char(c)]
            chi = pool[rng.randrange(len(pool))]
        else:
            c = chars[i]
            chi = c if isinstance(c, AltChar) else _alt_char(Partition(c))
        cls = AltClass(mu, 1 if splits_in_alt(mu) else 0)
        v = complex(normalized_value(chi, cls))
        p *= v
        names.append(str(chi))
        vals.append(v)
        partial.append(p)
    return LimitProductRun(sigma, n_seq, names, vals, partial, seed)


@dataclass
class ScanRecord:
    n: int
    character: str
    value: complex
    flagged: bool
    distance_to_one: float


def accumulation_scan(n_range: Sequence[int], sigma: CycleType | Sequence[int], eps_near: float = DEFAULT_EPS_NEAR,
                      cap: int = 16) -> list[ScanRecord]:
    """All nontrivial normalized values at sigma; flag those with |v| > 1 - eps_near."""
    sigma = sigma if isinstance(sigma, CycleType) else CycleType(tuple(p for p in sigma if p > 1), 0)
    out = []
    for n in n_range:
        if n > cap:
            raise ResourceWarning(f"n = {n} exceeds the table cap {cap}")
        q = sigma.support_size
        if n < q + 2:
            raise ValueError(f"n = {n} < |supp| + 2")
        mu = CycleType(sigma.cycles, n - q)
        cls = AltClass(mu, 1 if splits_in_alt(mu) else 0)
        for chi in alt_characters(n):
            if is_trivial_char(chi):
                continue
            v = complex(normalized_value(chi, cls))
            out.append(ScanRecord(n, str(chi), v, abs(v) > 1 - eps_near, abs(v - 1)))
    return out


# -- compatibility --


@dataclass
class Compatibility:
    compatible: bool
    violations: list
    undetermined: list
    verdicts: dict

    def to_json(self) -> dict:
        return {
            "compatible": self.compatible,
            "violations": self.violations,
            "undetermined": self.undetermined,
        }


def compatible_at_horizon(psi: Callable, elements: Sequence, fam: CharFamily, spec: DiagProductSpec, N: int,
                          eps_zero: float = DEFAULT_EPS_ZERO, tol: float = 1e-12) -> Compatibility:
    """psi must vanish on every element with a numerical null verdict."""
    violations, undetermined, verdicts = [], [], {}
    for g in elements:
        v = classify_null(g, fam, spec, N, eps_zero)
        verdicts[g.key] = v
        if v.kind == "Undetermined":
            undetermined.append(g.to_text())
            continue
        if v.is_null:
            val = psi(g)
            zero = (val == 0) if isinstance(val, (int, Fraction, Surd)) else abs(complex(val)) <= tol
            if not zero:
                violations.append({"element": g.to_text(), "value": str(val), "product": v.value})
    return Compatibility(not violations, violations, undetermined, verdicts)
