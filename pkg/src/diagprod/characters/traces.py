"""Class functions, Gram positivity and the trace constructions on finite groups."""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Callable, Hashable, Optional, Sequence

import numpy as np

from ..permutations import Perm
from .alternating import AltChar, class_of, normalized_value
from .surds import Surd


class UndefinedValue(KeyError):
    pass


class ClassFunction:
    """Function on a finite group that is constant on conjugacy classes.

    ``classify`` maps an element to a hashable class label and ``values``
    maps labels to values; a plain callable can be wrapped with
    ``ClassFunction.from_callable``.
    """

    def __init__(self, values: dict, classify: Callable[[object], Hashable], name: str = ""):
        self.values = dict(values)
        self.classify = classify
        self.name = name

    @classmethod
    def from_callable(cls, f: Callable, name: str = "") -> "ClassFunction":
        return _CallableClassFunction(f, name)

    def __call__(self, g):
        c = self.classify(g)
        if c not in self.values:
            raise UndefinedValue(f"{self.name or 'class function'} undefined on class {c}")
        return self.values[c]

    def is_class_function(self, elements: Sequence, conjugators: Sequence, tol: float = 1e-12) -> bool:
        """Spot check f(x g x^-1) = f(g)."""
        for g in elements:
            for x in conjugators:
                if abs(complex(_num(self(x * g * x.inverse()))) - complex(_num(self(g)))) > tol:
                    return False
        return True

    def __repr__(self) -> str:
        return f"ClassFunction({self.name})"


class _CallableClassFunction(ClassFunction):
    def __init__(self, f: Callable, name: str = ""):
        self.f = f
        self.name = name
        self.values = {}
        self.classify = lambda g: g

    def __call__(self, g):
        return self.f(g)


def _num(v):
    if isinstance(v, Surd):
        return complex(v)
    return v


def alt_class_function(chi: AltChar, normalized: bool = True) -> ClassFunction:
    """An Alt(n) character as a function on even permutations."""
    from .alternating import alt_classes

    classes = alt_classes(chi.n)
    vals = {k: (normalized_value(chi, k) if normalized else chi.value(k)) for k in classes}
    return ClassFunction(vals, class_of, name=f"chi{chi}")


def constant_function(c=1) -> ClassFunction:
    return ClassFunction.from_callable(lambda g: Fraction(c), name=f"const {c}")


def delta_e() -> ClassFunction:
    return ClassFunction.from_callable(lambda g: Fraction(int(g.is_identity())), name="delta_e")


class TupleElement(tuple):
    """Element of a direct product, multiplied coordinatewise."""

    def __mul__(self, other):
        return TupleElement(a * b for a, b in zip(self, other))

    def inverse(self) -> "TupleElement":
        return TupleElement(a.inverse() for a in self)

    def is_identity(self) -> bool:
        return all(a.is_identity() for a in self)


def gram_matrix(f: Callable, sample: Sequence) -> list[list]:
    """[f(g_j^-1 g_i)]_{i,j}."""
    inv = [g.inverse() for g in sample]
    try:
        return [[f(inv[j] * gi) for j in range(len(sample))] for gi in sample]
    except UndefinedValue:
        raise
    except KeyError as exc:
        raise UndefinedValue(str(exc)) from exc


def _is_exact_rational(v) -> bool:
    if isinstance(v, (int, Fraction)):
        return True
    return isinstance(v, Surd) and v.is_rational()


def _as_fraction(v) -> Fraction:
    return v.rational() if isinstance(v, Surd) else Fraction(v)


def exact_psd(M: Sequence[Sequence[Fraction]]) -> bool:
    """Exact positive semidefiniteness of a rational symmetric matrix by symmetric elimination."""
    A = [[Fraction(x) for x in row] for row in M]
    n = len(A)
    for i in range(n):
        for j in range(i):
            if A[i][j] != A[j][i]:
                raise ValueError("matrix is not symmetric")
    for k in range(n):
        p = A[k][k]
        if p < 0:
            return False
        if p == 0:
            if any(A[k][j] != 0 for j in range(k + 1, n)):
                return False
            continue
        for i in range(k + 1, n):
            if A[i][k] == 0:
                continue
            f = A[i][k] / p
            row_k = A[k]
            row_i = A[i]
            for j in range(k + 1, n):
                row_i[j] -= f * row_k[j]
            row_i[k] = Fraction(0)
    return True


def gram_min_eigenvalue(f: Callable, sample: Sequence) -> float:
    G = np.array([[complex(_num(v)) for v in row] for row in gram_matrix(f, sample)], dtype=complex)
    if not np.allclose(G, G.conj().T, atol=1e-12):
        raise ValueError("Gram matrix is not Hermitian; f is not a positive-definite candidate")
    return float(np.linalg.eigvalsh(G).min())


def gram_psd_check(f: Callable, sample: Sequence, tol: float = 1e-10, exact: Optional[bool] = None) -> bool:
    """True iff the Gram matrix [f(g_j^-1 g_i)] is positive semidefinite.

    Rational Gram matrices are decided exactly (``exact=None`` picks this
    automatically); otherwise the minimum eigenvalue must be >= -tol.
    """
    G = gram_matrix(f, sample)
    rational = all(_is_exact_rational(v) for row in G for v in row)
    if exact is None:
        exact = rational
    if exact:
        if not rational:
            raise ValueError("exact check needs rational values")
        return exact_psd([[_as_fraction(v) for v in row] for row in G])
    A = np.array([[complex(_num(v)) for v in row] for row in G], dtype=complex)
    if not np.allclose(A, A.conj().T, atol=max(tol, 1e-12)):
        return False
    return bool(np.linalg.eigvalsh(A).min() >= -tol)


def thoma_tensor(per_coordinate: Sequence[Callable]) -> Callable:
    """(g_1, ..., g_k) -> prod_i phi_i(g_i)."""
    fs = list(per_coordinate)

    def f(g):
        if len(g) != len(fs):
            raise ValueError(f"expected a {len(fs)}-tuple")
        vals = [phi(x) for phi, x in zip(fs, g)]
        if all(isinstance(v, (int, Fraction, Surd)) for v in vals):
            out = Surd.of(1)
            for v in vals:
                out = out * v
            return out
        out = 1.0 + 0j
        for v in vals:
            out *= complex(_num(v))
        return out

    return f


def trivial_extension(f: Callable, member: Callable[[object], bool]) -> Callable:
    """f on the subgroup {g : member(g)} and 0 elsewhere."""
    return lambda g: f(g) if member(g) else Fraction(0)


def random_even_perm(d: int, rng: random.Random) -> Perm:
    while True:
        img = list(range(d))
        rng.shuffle(img)
        p = Perm(img, zero_based=True, check=False)
        if p.is_even():
            return p


def alt_elements(n: int) -> list[Perm]:
    """All of Alt(n), generated by closure from the 3-cycles (1 2 k)."""
    gens = [Perm.from_cycles([(1, 2, k)], n) for k in range(3, n + 1)]
    seen = {Perm.identity(n)}
    frontier = list(seen)
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = x * g
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return sorted(seen, key=lambda p: p.key)
