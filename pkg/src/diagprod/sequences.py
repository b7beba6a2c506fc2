"""Integer sequences d(n), r(n) indexed from 1.

A sequence is either an explicit finite list or a named rule:

``"5,7,9"``            explicit list (finite; no levels beyond its length)
``"arith:2n+3"``       d(n) = 2n + 3 (any ``An+B``)
``"primes-geq:5"``     the increasing primes >= 5
``"doubling:7"``       d(n) = 7 ** (2 ** n)
``"const:1"``          r(n) = 1
``"linear:1"``         r(n) = n (``linear:c`` gives c*n)

Rules can be prefixed by an explicit list: ``"5,11|arith:2n+3"`` means
d(1)=5, d(2)=11 and d(n) = 2n+3 afterwards.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence


class SequenceError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    # deterministic Miller-Rabin for n < 3.3e24
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def next_prime(n: int) -> int:
    """Smallest prime strictly greater than n."""
    n += 1
    while not is_prime(n):
        n += 1
    return n


class IntSequence:
    """Base class; subclasses implement ``_rule``."""

    name = "sequence"

    def __init__(self, prefix: Sequence[int] = ()):
        self.prefix = tuple(int(v) for v in prefix)

    def __call__(self, n: int) -> int:
        if n < 1:
            raise IndexError(f"sequences are 1-indexed, got {n}")
        if n <= len(self.prefix):
            return self.prefix[n - 1]
        if self.length is not None:
            raise IndexError(f"level {n} beyond finite sequence of length {self.length}")
        return self._rule(n)

    def _rule(self, n: int) -> int:  # pragma: no cover - abstract
        raise NotImplementedError

    @property
    def length(self) -> Optional[int]:
        """Number of levels, or None for an infinite rule."""
        return None

    def take(self, n: int) -> list[int]:
        return [self(i) for i in range(1, n + 1)]

    def tail_reciprocal_bound(self, N: int) -> Optional[Fraction]:
        """Upper bound on sum_{n>N} 1/(d(n)-1), or None if unknown/divergent."""
        return None

    def describe(self) -> str:
        body = self.name
        if self.prefix and self.length is None:
            return ",".join(map(str, self.prefix)) + "|" + body
        return body

    def __repr__(self) -> str:
        return f"IntSequence({self.describe()!r})"

    def __eq__(self, other) -> bool:
        return isinstance(other, IntSequence) and self.describe() == other.describe()

    def __hash__(self) -> int:
        return hash(self.describe())


class ListSequence(IntSequence):
    def __init__(self, values: Sequence[int]):
        super().__init__(values)
        if not self.prefix:
            raise SequenceError("empty sequence")

    @property
    def length(self) -> Optional[int]:
        return len(self.prefix)

    @property
    def name(self) -> str:  # type: ignore[override]
        return ",".join(map(str, self.prefix))

    def tail_reciprocal_bound(self, N: int) -> Optional[Fraction]:
        return sum((Fraction(1, v - 1) for v in self.prefix[N:]), Fraction(0))


class ArithSequence(IntSequence):
    def __init__(self, a: int, b: int, prefix: Sequence[int] = ()):
        super().__init__(prefix)
        self.a, self.b = a, b
        self.name = f"arith:{a}n{b:+d}"

    def _rule(self, n: int) -> int:
        return self.a * n + self.b


class ConstSequence(IntSequence):
    def __init__(self, c: int, prefix: Sequence[int] = ()):
        super().__init__(prefix)
        self.c = c
        self.name = f"const:{c}"

    def _rule(self, n: int) -> int:
        return self.c


class LinearSequence(IntSequence):
    def __init__(self, c: int, prefix: Sequence[int] = ()):
        super().__init__(prefix)
        self.c = c
        self.name = f"linear:{c}"

    def _rule(self, n: int) -> int:
        return self.c * n


class PrimeSequence(IntSequence):
    def __init__(self, start: int, prefix: Sequence[int] = ()):
        super().__init__(prefix)
        self.start = start
        self.name = f"primes-geq:{start}"

    def _rule(self, n: int) -> int:
        return _nth_prime_geq(self.start, n - len(self.prefix))


@lru_cache(maxsize=None)
def _nth_prime_geq(start: int, k: int) -> int:
    if k == 1:
        p = start
        while not is_prime(p):
            p += 1
        return p
    return next_prime(_nth_prime_geq(start, k - 1))


class DoublingSequence(IntSequence):
    """d(n) = base ** (2 ** n); d(n+1) = d(n)**2 so the tail sum is geometric."""

    def __init__(self, base: int = 5, prefix: Sequence[int] = ()):
        super().__init__(prefix)
        if base < 3 or base % 2 == 0:
            raise SequenceError("doubling base must be odd and >= 3")
        self.base = base
        self.name = f"doubling:{base}"

    def _rule(self, n: int) -> int:
        return self.base ** (2 ** n)

    def tail_reciprocal_bound(self, N: int) -> Optional[Fraction]:
        # Finitely many explicit prefix terms, then a geometric tail:
        # (d(n+1)-1)/(d(n)-1) = d(n)+1 >= q := d(first)+1.
        head = sum((Fraction(1, v - 1) for v in self.prefix[N:]), Fraction(0))
        first = max(N + 1, len(self.prefix) + 1)
        x = Fraction(1, self(first) - 1)
        q = self(first) + 1
        return head + x * Fraction(q, q - 1)


_ARITH = re.compile(r"^arith:(-?\d*)n([+-]\d+)?$")


def parse_sequence(text) -> IntSequence:
    """Build a sequence from a rule string, an int list, or an IntSequence."""
    if isinstance(text, IntSequence):
        return text
    if isinstance(text, (list, tuple)):
        return ListSequence(text)
    if isinstance(text, int):
        return ConstSequence(text)
    text = str(text).strip().replace(" ", "")
    prefix: tuple[int, ...] = ()
    if "|" in text:
        head, text = text.split("|", 1)
        prefix = tuple(int(v) for v in head.split(",") if v)
    if ":" not in text:
        if prefix:
            raise SequenceError(f"missing rule after '|' in {text!r}")
        try:
            return ListSequence([int(v) for v in text.split(",") if v])
        except ValueError as exc:
            raise SequenceError(f"bad sequence {text!r}") from exc
    kind, _, arg = text.partition(":")
    try:
        if kind == "arith":
            m = _ARITH.match(text)
            if not m:
                raise SequenceError(f"bad arithmetic rule {text!r}")
            a = int(m.group(1)) if m.group(1) not in ("", "-") else (-1 if m.group(1) == "-" else 1)
            b = int(m.group(2) or 0)
            return ArithSequence(a, b, prefix)
        if kind == "primes-geq":
            return PrimeSequence(int(arg), prefix)
        if kind == "doubling":
            return DoublingSequence(int(arg) if arg else 5, prefix)
        if kind == "const":
            return ConstSequence(int(arg), prefix)
        if kind == "linear":
            return LinearSequence(int(arg) if arg else 1, prefix)
    except ValueError as exc:
        if isinstance(exc, SequenceError):
            raise
        raise SequenceError(f"bad sequence rule {text!r}") from exc
    raise SequenceError(f"unknown sequence rule {kind!r}")


def check_neumann_params(d: IntSequence, r: IntSequence, upto: int) -> None:
    """Raise SequenceError unless (d, r) are valid B(d,r) parameters on 1..upto."""
    prev = None
    for n in range(1, upto + 1):
        dn, rn = d(n), r(n)
        if n == 1 and dn < 5:
            raise SequenceError(f"d(1) = {dn} < 5")
        if dn % 2 == 0:
            raise SequenceError(f"d({n}) = {dn} is even")
        if prev is not None and dn <= prev:
            raise SequenceError(f"d not strictly increasing at n={n}: {prev} -> {dn}")
        if rn < 1 or 2 * rn > dn - 1:
            raise SequenceError(f"r({n}) = {rn} violates 1 <= r and 2r <= d-1 (d={dn})")
        prev = dn
