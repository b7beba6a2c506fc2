"""Exact values in Q(sqrt(D1), sqrt(D2), ...).

A value is a finite sum of rational multiples of sqrt(D) over signed
square-free D, with sqrt(D) = i*sqrt(|D|) for D < 0. Split alternating
characters take values (a + b*sqrt(D))/2; tensor products of them need
several radicals at once.
"""

from __future__ import annotations

import math
from decimal import Decimal, localcontext
from fractions import Fraction
from functools import lru_cache
from typing import Union

Number = Union[int, Fraction, "Surd"]


@lru_cache(maxsize=4096)
def squarefree_split(n: int) -> tuple[int, int]:
    """n = s^2 * m with m square-free (sign kept on m)."""
    if n == 0:
        return 0, 0
    sign = -1 if n < 0 else 1
    n = abs(n)
    s, m, p = 1, 1, 2
    while p * p <= n:
        while n % (p * p) == 0:
            n //= p * p
            s *= p
        if n % p == 0:
            n //= p
            m *= p
        p += 1
    return s, sign * m * n


class Surd:
    __slots__ = ("terms",)

    def __init__(self, terms: dict[int, Fraction] | None = None):
        self.terms = {D: Fraction(c) for D, c in (terms or {}).items() if c}

    @classmethod
    def of(cls, x) -> "Surd":
        if isinstance(x, Surd):
            return x
        return cls({1: Fraction(x)})

    @classmethod
    def sqrt(cls, n: int) -> "Surd":
        s, m = squarefree_split(n)
        return cls({m: Fraction(s)}) if n else cls()

    # -- arithmetic --

    def __add__(self, other) -> "Surd":
        o = Surd.of(other)
        t = dict(self.terms)
        for D, c in o.terms.items():
            t[D] = t.get(D, 0) + c
        return Surd(t)

    __radd__ = __add__

    def __neg__(self) -> "Surd":
        return Surd({D: -c for D, c in self.terms.items()})

    def __sub__(self, other) -> "Surd":
        return self + (-Surd.of(other))

    def __rsub__(self, other) -> "Surd":
        return Surd.of(other) - self

    def __mul__(self, other) -> "Surd":
        o = Surd.of(other)
        t: dict[int, Fraction] = {}
        for D1, c1 in self.terms.items():
            for D2, c2 in o.terms.items():
                prod = D1 * D2
                coef = c1 * c2
                if D1 < 0 and D2 < 0:
                    coef = -coef  # i*i
                s, m = squarefree_split(prod)
                t[m] = t.get(m, 0) + coef * s
        return Surd(t)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Surd":
        if isinstance(other, Surd):
            if not other.is_rational():
                raise ZeroDivisionError("division by irrational values is not supported")
            other = other.rational()
        return Surd({D: c / Fraction(other) for D, c in self.terms.items()})

    def __pow__(self, k: int) -> "Surd":
        out = Surd.of(1)
        for _ in range(k):
            out = out * self
        return out

    def conjugate(self) -> "Surd":
        """Complex conjugate."""
        return Surd({D: (-c if D < 0 else c) for D, c in self.terms.items()})

    def abs2(self) -> "Surd":
        return self * self.conjugate()

    # -- predicates --

    def is_zero(self) -> bool:
        return not self.terms

    def is_rational(self) -> bool:
        return all(D == 1 for D in self.terms)

    def is_real(self) -> bool:
        return all(D > 0 for D in self.terms)

    def rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.terms.get(1, Fraction(0))

    def __eq__(self, other) -> bool:
        try:
            return (self - Surd.of(other)).is_zero()
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self) -> int:
        if self.is_rational():
            return hash(self.rational())
        return hash(tuple(sorted(self.terms.items())))

    def sign(self) -> int:
        """Sign of a real value, exact: precision is raised until it is decided."""
        if not self.is_real():
            raise ValueError("sign of a non-real value")
        if self.is_zero():
            return 0
        if self.is_rational():
            return (self.rational() > 0) - (self.rational() < 0)
        # a nonzero element of a real multiquadratic field is never 0, so this terminates
        prec = 30
        while True:
            with localcontext() as ctx:
                ctx.prec = prec + 10
                total = Decimal(0)
                err = Decimal(0)
                for D, c in self.terms.items():
                    term = Decimal(c.numerator) / Decimal(c.denominator) * Decimal(D).sqrt()
                    total += term
                    err += abs(term) * Decimal(10) ** (-prec)
                if abs(total) > err:
                    return 1 if total > 0 else -1
            prec *= 2

    def __lt__(self, other) -> bool:
        return (self - Surd.of(other)).sign() < 0

    def __le__(self, other) -> bool:
        return (self - Surd.of(other)).sign() <= 0

    def __gt__(self, other) -> bool:
        return (self - Surd.of(other)).sign() > 0

    def __ge__(self, other) -> bool:
        return (self - Surd.of(other)).sign() >= 0

    # -- conversions --

    def __complex__(self) -> complex:
        z = 0j
        for D, c in self.terms.items():
            r = float(c) * math.sqrt(abs(D))
            z += complex(0, r) if D < 0 else r
        return z

    def __float__(self) -> float:
        if not self.is_real():
            raise ValueError("not a real value")
        return complex(self).real

    def quadratic_form(self) -> tuple[int, int, int]:
        """(a, b, D) with value (a + b*sqrt(D))/2; requires at most one radical and integers a, b."""
        irr = [D for D in self.terms if D != 1]
        if len(irr) > 1:
            raise ValueError(f"{self} involves several radicals")
        D = irr[0] if irr else 1
        a = 2 * self.terms.get(1, Fraction(0))
        b = 2 * self.terms.get(D, Fraction(0)) if irr else Fraction(0)
        if a.denominator != 1 or b.denominator != 1:
            raise ValueError(f"{self} is not of the form (a + b*sqrt(D))/2")
        return int(a), int(b), D

    def __str__(self) -> str:
        if self.is_rational():
            return str(self.rational())
        try:
            a, b, D = self.quadratic_form()
            return f"{a}{b:+d}*sqrt({D})/2"
        except ValueError:
            parts = []
            for D, c in sorted(self.terms.items()):
                parts.append(str(c) if D == 1 else f"{c}*sqrt({D})")
            return " + ".join(parts)

    def __repr__(self) -> str:
        return f"Surd({self})"


AltCharValue = Surd


def as_surd(x) -> Surd:
    return Surd.of(x)


def parse_quadratic(text: str) -> Surd:
    """Inverse of the ``a+b*sqrt(D)/2`` text form (plain rationals also accepted)."""
    import re

    m = re.fullmatch(r"\s*(-?\d+)([+-]\d+)\*sqrt\((-?\d+)\)/2\s*", text)
    if not m:
        return Surd.of(Fraction(text.strip()))
    a, b, D = (int(g) for g in m.groups())
    return (Surd.of(a) + Surd.sqrt(D) * b) / 2
