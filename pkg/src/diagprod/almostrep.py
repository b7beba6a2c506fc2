"""Unitary almost representations of marked finite groups.

Matrices are complex128 numpy arrays. Generators are the lower-case labels
of a marking; the upper-case label is always sent to the adjoint. Maps on a
ball are extended from the generators along first BFS words.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .markedgroups import DEFAULT_BUDGET, BallTable, MarkedGroup, ball
from .permutations import Perm


@dataclass(frozen=True)
class Tolerances:
    unitary: float = 1e-10
    exact: float = 1e-12
    singular_guard: float = 1e-8
    converge: float = 1e-8


TOL = Tolerances()


class UnitaryError(ValueError):
    pass


def d_hs(A: np.ndarray, B: np.ndarray) -> float:
    """Normalized Hilbert-Schmidt distance sqrt(Tr((A-B)*(A-B)) / d)."""
    A, B = np.asarray(A), np.asarray(B)
    if A.shape != B.shape or A.shape[0] != A.shape[1]:
        raise ValueError(f"dimension mismatch: {A.shape} vs {B.shape}")
    return float(np.linalg.norm(A - B) / np.sqrt(A.shape[0]))


def polar_unitary(M: np.ndarray, guard: float = TOL.singular_guard) -> np.ndarray:
    """Unitary factor of M via the SVD; raises when M is numerically singular."""
    U, s, Vh = np.linalg.svd(M)
    if s.min() < guard:
        raise np.linalg.LinAlgError(f"smallest singular value {s.min():.3e} below {guard}")
    return U @ Vh


def unitarity_defect(U: np.ndarray) -> float:
    return d_hs(U.conj().T @ U, np.eye(U.shape[0])) * np.sqrt(U.shape[0])


def as_unitary(M, tol: float = TOL.unitary) -> np.ndarray:
    """Validate (or re-unitarize slightly off) a unitary matrix."""
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise UnitaryError(f"not a square matrix: {M.shape}")
    if unitarity_defect(M) > tol:
        M = polar_unitary(M)
    return M


# -- matrix formats --


def matrix_to_json(M: np.ndarray) -> dict:
    return {"dim": int(M.shape[0]), "re": M.real.tolist(), "im": M.imag.tolist()}


def matrix_from_json(data) -> np.ndarray:
    if isinstance(data, str):
        data = json.loads(data)
    return np.array(data["re"], dtype=float) + 1j * np.array(data["im"], dtype=float)


def matrix_to_bytes(M: np.ndarray) -> bytes:
    """Dimension as little-endian uint64, then row-major interleaved re/im float64."""
    d = M.shape[0]
    flat = np.empty(2 * d * d, dtype="<f8")
    flat[0::2] = M.real.ravel()
    flat[1::2] = M.imag.ravel()
    return struct.pack("<Q", d) + flat.tobytes()


def matrix_from_bytes(buf: bytes) -> np.ndarray:
    (d,) = struct.unpack_from("<Q", buf)
    flat = np.frombuffer(buf, dtype="<f8", offset=8, count=2 * d * d)
    return (flat[0::2] + 1j * flat[1::2]).reshape(d, d)


# -- exact representations --


def permutation_matrix(p: Perm) -> np.ndarray:
    """P(g) e_i = e_{g(i)}."""
    d = p.degree
    M = np.zeros((d, d), dtype=complex)
    M[[p(i) - 1 for i in range(1, d + 1)], range(d)] = 1
    return M


def sum_zero_basis(d: int) -> np.ndarray:
    """Orthonormal basis (Helmert) of the complement of the all-ones vector, as columns."""
    Q = np.zeros((d, d - 1))
    for k in range(1, d):
        Q[:k, k - 1] = 1.0
        Q[k, k - 1] = -k
        Q[:, k - 1] /= np.sqrt(k * (k + 1))
    return Q


class Rep:
    """Exact unitary representation of a marked group."""

    def __init__(self, marking, name: str):
        self.marking = marking
        self.name = name

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(l for l in self.marking.labels if l.islower())

    def matrix(self, g) -> np.ndarray:  # pragma: no cover - abstract
        raise NotImplementedError

    @property
    def dim(self) -> int:
        return self.matrix(self.marking.identity()).shape[0]

    def generator_images(self) -> dict[str, np.ndarray]:
        return {l: self.matrix(self.marking.generator(l)) for l in self.labels}

    def __repr__(self) -> str:
        return f"Rep({self.name}, dim={self.dim})"


class TrivialRep(Rep):
    def __init__(self, marking):
        super().__init__(marking, "trivial")

    def matrix(self, g) -> np.ndarray:
        return np.ones((1, 1), dtype=complex)


class PermutationRep(Rep):
    def __init__(self, marking: MarkedGroup):
        super().__init__(marking, "permutation")

    def matrix(self, g: Perm) -> np.ndarray:
        return permutation_matrix(g)


class StandardRep(Rep):
    def __init__(self, marking: MarkedGroup):
        super().__init__(marking, "standard")
        self._Q = sum_zero_basis(marking.degree)

    def matrix(self, g: Perm) -> np.ndarray:
        return self._Q.T @ permutation_matrix(g) @ self._Q


class RegularRep(Rep):
    def __init__(self, marking, budget: int = 100_000):
        super().__init__(marking, "regular")
        self.elements = closure(marking, budget)
        self._index = {marking.key(x): i for i, x in enumerate(self.elements)}

    def matrix(self, g) -> np.ndarray:
        n = len(self.elements)
        M = np.zeros((n, n), dtype=complex)
        for j, h in enumerate(self.elements):
            M[self._index[self.marking.key(self.marking.mul(g, h))], j] = 1
        return M


class TensorRep(Rep):
    """Inner tensor product of two representations of the same marked group."""

    def __init__(self, a: Rep, b: Rep):
        super().__init__(a.marking, f"({a.name} x {b.name})")
        self.a, self.b = a, b

    def matrix(self, g) -> np.ndarray:
        return np.kron(self.a.matrix(g), self.b.matrix(g))


class OuterTensorRep:
    """Representation of a direct product acting on tuples (g_1, ..., g_k)."""

    def __init__(self, parts: Sequence[Rep]):
        self.parts = list(parts)
        self.name = " # ".join(p.name for p in self.parts)

    def matrix(self, g) -> np.ndarray:
        M = np.ones((1, 1), dtype=complex)
        for rep, x in zip(self.parts, g):
            M = np.kron(M, rep.matrix(x))
        return M

    @property
    def dim(self) -> int:
        return int(np.prod([p.dim for p in self.parts]))


@dataclass(frozen=True)
class RepSpec:
    """Named construction: trivial | permutation | standard | regular | tensor | outer."""

    kind: str
    group: object = None
    parts: tuple = ()


def make_rep(spec: RepSpec, budget: int = 100_000):
    k = spec.kind
    if k == "trivial":
        return TrivialRep(spec.group)
    if k == "permutation":
        return PermutationRep(spec.group)
    if k == "standard":
        return StandardRep(spec.group)
    if k == "regular":
        return RegularRep(spec.group, budget)
    if k == "tensor":
        a, b = (make_rep(p, budget) for p in spec.parts)
        return TensorRep(a, b)
    if k == "outer":
        return OuterTensorRep([make_rep(p, budget) for p in spec.parts])
    raise ValueError(f"unknown representation kind {k!r}")


def closure(marking, budget: int = DEFAULT_BUDGET) -> list:
    """All elements of a finite marked group, in BFS order."""
    from .markedgroups import _Explorer

    ex = _Explorer(marking, budget)
    while not ex.closed:
        ex.expand()
    return ex.elements


def finite_dim_trace(rep) -> Callable:
    """g -> tr(rep(g)) / dim."""
    dim = rep.dim
    return lambda g: complex(np.trace(rep.matrix(g))) / dim


# -- almost representations --


class AlmostRep:
    """Generator images (unitaries) of a marked group with a ball horizon."""

    def __init__(self, marking, images: dict[str, np.ndarray], horizon: int, defect_value: Optional[float] = None):
        self.marking = marking
        lower = [l for l in marking.labels if l.islower()]
        if set(images) != set(lower):
            raise ValueError(f"images needed for exactly the labels {lower}")
        self.images = {l: as_unitary(images[l]) for l in lower}
        dims = {M.shape[0] for M in self.images.values()}
        if len(dims) != 1:
            raise ValueError("generator images of different dimensions")
        self.dim = dims.pop()
        self.horizon = horizon
        self.delta = defect(self, ball(marking, horizon)) if defect_value is None else defect_value

    @classmethod
    def from_rep(cls, rep: Rep, horizon: int) -> "AlmostRep":
        return cls(rep.marking, rep.generator_images(), horizon)

    def image(self, label: str) -> np.ndarray:
        return self.images[label] if label.islower() else self.images[label.lower()].conj().T

    def on_ball(self, B: BallTable) -> np.ndarray:
        """Stack of matrices phi(x) along first BFS words."""
        mats = np.empty((len(B), self.dim, self.dim), dtype=complex)
        mats[0] = np.eye(self.dim)
        index = {w: i for i, w in enumerate(B.words)}
        for i in range(1, len(B)):
            w = B.words[i]
            mats[i] = mats[index[w[:-1]]] @ self.image(w[-1])
        return mats

    def to_json(self) -> dict:
        return {
            "labels": sorted(self.images),
            "horizon": self.horizon,
            "defect": self.delta,
            "images": {l: matrix_to_json(M) for l, M in self.images.items()},
        }


def _product_index(marking, B: BallTable) -> np.ndarray:
    n = len(B)
    idx = np.full((n, n), -1, dtype=np.int64)
    for i, g in enumerate(B.elements):
        for j, h in enumerate(B.elements):
            k = B.keys.get(marking.key(marking.mul(g, h)))
            if k is not None:
                idx[i, j] = k
    return idx


def _defect_from(mats: np.ndarray, idx: np.ndarray) -> float:
    d = mats.shape[1]
    worst = 0.0
    for i in range(len(mats)):
        cols = np.nonzero(idx[i] >= 0)[0]
        if not len(cols):
            continue
        prod = np.einsum("ab,nbc->nac", mats[i], mats[cols])
        diff = mats[idx[i, cols]] - prod
        val = float(np.sqrt((np.abs(diff) ** 2).sum(axis=(1, 2)).max() / d))
        worst = max(worst, val)
    return worst


def defect(phi: AlmostRep, B: BallTable) -> float:
    """max d_HS(phi(gh), phi(g) phi(h)) over g, h, gh in the ball."""
    if B.radius > phi.horizon:
        raise ValueError(f"ball radius {B.radius} exceeds the horizon {phi.horizon}")
    return _defect_from(phi.on_ball(B), _product_index(phi.marking, B))


def random_hermitian(d: int, rng: np.random.Generator) -> np.ndarray:
    """Gaussian Hermitian matrix scaled to sqrt(Tr(H^2)/d) = 1."""
    X = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    H = (X + X.conj().T) / 2
    return H / np.sqrt(np.trace(H @ H).real / d)


def expm_hermitian(H: np.ndarray, t: float) -> np.ndarray:
    """exp(i t H) for Hermitian H."""
    w, V = np.linalg.eigh(H)
    return (V * np.exp(1j * t * w)) @ V.conj().T


def trial_rng(master_seed: int, trial: int) -> np.random.Generator:
    """Per-trial generator; trial i always uses the seed sequence (master_seed, i)."""
    return np.random.default_rng([master_seed, trial])


def perturb(rho, eps: float, seed, horizon: int = 1) -> AlmostRep:
    """Multiply each generator image by exp(i eps H), H random Hermitian of unit normalized norm."""
    if eps < 0:
        raise ValueError("eps must be non-negative")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    imgs = rho.generator_images() if isinstance(rho, Rep) else dict(rho.images)
    marking = rho.marking
    out = {}
    for l in sorted(imgs):
        M = imgs[l]
        out[l] = M @ expm_hermitian(random_hermitian(M.shape[0], rng), eps)
    return AlmostRep(marking, out, horizon)


@dataclass
class CorrectionResult:
    converged: bool
    status: str
    iterations: int
    defect: float
    images: dict
    distances: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "converged": self.converged,
            "status": self.status,
            "iterations": self.iterations,
            "defect": self.defect,
            "distances": self.distances,
        }


class _GroupData:
    """Whole-group ball, product table and generator positions for averaging."""

    def __init__(self, marking, labels, budget: int):
        F = closure(marking, budget)
        self.ball = ball(marking, _diameter(marking, budget))
        if len(self.ball) != len(F):
            raise RuntimeError("ball did not close")
        self.order = len(F)
        self.idx = _product_index(marking, self.ball)
        self.gen_index = {l: self.ball.keys[marking.key(marking.generator(l))] for l in labels}


def _average(mats: np.ndarray, data: _GroupData) -> dict[str, np.ndarray]:
    out = {}
    for l, gi in data.gen_index.items():
        avg = np.einsum("nab,ncb->ac", mats[data.idx[gi]], mats.conj()) / data.order
        out[l] = polar_unitary(avg)
    return out


def averaging_step(phi: AlmostRep, budget: int = 100_000) -> dict[str, np.ndarray]:
    """One polar-averaging update of the generator images."""
    data = _GroupData(phi.marking, phi.images, budget)
    return _average(phi.on_ball(data.ball), data)


def correct(phi: AlmostRep, tol: float = TOL.converge, max_iters: int = 50, budget: int = 100_000) -> CorrectionResult:
    """Group-averaged polar correction on the whole (finite) group.

    A(s) <- polar(|F|^-1 sum_h phi(sh) phi(h)^*), then phi is re-extended to F
    from the new generator images; stops once the defect over F is below tol.
    """
    marking = phi.marking
    data = _GroupData(marking, phi.images, budget)
    cur = AlmostRep(marking, phi.images, phi.horizon, defect_value=phi.delta)
    mats = cur.on_ball(data.ball)
    dfc = _defect_from(mats, data.idx)
    it = 0
    status = "converged"
    while dfc >= tol:
        if it >= max_iters:
            status = "max_iters"
            break
        try:
            new = _average(mats, data)
        except np.linalg.LinAlgError:
            status = "singular"
            break
        cur = AlmostRep(marking, new, phi.horizon, defect_value=0.0)
        mats = cur.on_ball(data.ball)
        dfc = _defect_from(mats, data.idx)
        it += 1
    if dfc < tol:
        status = "converged"
    dist = {l: d_hs(cur.images[l], phi.images[l]) for l in phi.images}
    return CorrectionResult(dfc < tol, status, it, dfc, cur.images, dist)


def _diameter(marking, budget: int) -> int:
    from .markedgroups import _Explorer

    ex = _Explorer(marking, budget)
    while not ex.closed:
        ex.expand()
    return ex.radius


@dataclass
class HSCheck:
    best: int
    deviation: float
    within: bool
    deviations: list


def hadwin_shulman_check(target, candidates: Sequence[Callable], sample: Sequence, eps: float) -> HSCheck:
    """Candidate trace minimizing the max deviation from ``target`` on the sample."""
    if not candidates:
        raise ValueError("empty candidate list")
    tv = [complex(target(g)) for g in sample]
    devs = []
    for f in candidates:
        devs.append(max((abs(complex(f(g)) - t) for g, t in zip(sample, tv)), default=0.0))
    best = int(np.argmin(devs))
    return HSCheck(best, devs[best], devs[best] < eps, devs)
