import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.linalg import expm, polar

from diagprod.almostrep import (
    TOL,
    AlmostRep,
    RepSpec,
    UnitaryError,
    as_unitary,
    closure,
    correct,
    d_hs,
    defect,
    expm_hermitian,
    finite_dim_trace,
    hadwin_shulman_check,
    make_rep,
    matrix_from_bytes,
    matrix_from_json,
    matrix_to_bytes,
    matrix_to_json,
    perturb,
    polar_unitary,
    random_hermitian,
    trial_rng,
)
from diagprod.characters.alternating import normalized_value, restrict_to_alt
from diagprod.characters.traces import TupleElement, gram_psd_check, thoma_tensor, alt_class_function
from diagprod.markedgroups import ball, classical_marking
from diagprod.permutations import CycleType, Perm

ALT5 = classical_marking("5,7", 1)
ELEMS = closure(ALT5)


def haar(d, rng):
    Z = (rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))) / np.sqrt(2)
    Q, R = np.linalg.qr(Z)
    return Q * (np.diag(R) / np.abs(np.diag(R)))


def test_d_hs_examples():
    I = np.eye(4)
    assert d_hs(I, I) == 0
    assert d_hs(I, -I) == pytest.approx(2)
    D = np.diag([1, 1, 1, -1])
    assert d_hs(I, D) == pytest.approx(2 / np.sqrt(4))
    with pytest.raises(ValueError):
        d_hs(np.eye(2), np.eye(3))


@given(st.integers(1, 6), st.integers(0, 2 ** 32 - 1))
def test_d_hs_bi_invariance(d, seed):
    rng = np.random.default_rng(seed)
    A, B, U = haar(d, rng), haar(d, rng), haar(d, rng)
    v = d_hs(A, B)
    assert abs(d_hs(U @ A, U @ B) - v) < 1e-10
    assert abs(d_hs(A @ U, B @ U) - v) < 1e-10
    assert v <= 2 + 1e-12


@given(st.integers(1, 6), st.integers(0, 2 ** 32 - 1))
def test_polar_against_scipy(d, seed):
    rng = np.random.default_rng(seed)
    M = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    U, _ = polar(M)
    assert np.allclose(polar_unitary(M), U, atol=1e-9)


def test_polar_singular_guard():
    with pytest.raises(np.linalg.LinAlgError):
        polar_unitary(np.zeros((3, 3)))


@given(st.integers(1, 6), st.integers(0, 2 ** 32 - 1), st.floats(0, 1))
def test_expm_against_scipy(d, seed, t):
    H = random_hermitian(d, np.random.default_rng(seed))
    assert np.allclose(expm_hermitian(H, t), expm(1j * t * H), atol=1e-10)
    assert np.sqrt(np.trace(H @ H).real / d) == pytest.approx(1)


def test_as_unitary_reunitarizes():
    assert np.allclose(as_unitary(2 * np.eye(2)), np.eye(2))
    with pytest.raises(UnitaryError):
        as_unitary(np.ones(3))


@given(st.integers(1, 5), st.integers(0, 2 ** 32 - 1))
def test_matrix_formats_roundtrip(d, seed):
    rng = np.random.default_rng(seed)
    M = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    assert np.array_equal(matrix_from_json(matrix_to_json(M)), M)
    assert np.array_equal(matrix_from_bytes(matrix_to_bytes(M)), M)


def test_binary_layout():
    M = np.array([[1 + 2j, 3], [4, 5 - 1j]])
    buf = matrix_to_bytes(M)
    assert buf[:8] == (2).to_bytes(8, "little")
    vals = np.frombuffer(buf[8:], dtype="<f8")
    assert list(vals) == [1, 2, 3, 0, 4, 0, 5, -1]


@pytest.mark.parametrize("kind", ["trivial", "permutation", "standard", "regular"])
def test_exact_reps_have_zero_defect(kind):
    rep = make_rep(RepSpec(kind, ALT5))
    phi = AlmostRep.from_rep(rep, 4)
    assert phi.delta <= TOL.exact
    assert defect(phi, ball(ALT5, 3)) <= TOL.exact


def test_tensor_rep_zero_defect_and_trace():
    std = RepSpec("standard", ALT5)
    perm = RepSpec("permutation", ALT5)
    rep = make_rep(RepSpec("tensor", parts=(std, perm)))
    assert rep.dim == 20
    assert AlmostRep.from_rep(rep, 3).delta <= TOL.exact
    f, a, b = finite_dim_trace(rep), finite_dim_trace(make_rep(std)), finite_dim_trace(make_rep(perm))
    assert max(abs(f(g) - a(g) * b(g)) for g in ELEMS) < 1e-12


def test_rep_dimensions_and_traces():
    assert make_rep(RepSpec("trivial", ALT5)).dim == 1
    std = make_rep(RepSpec("standard", ALT5))
    assert std.dim == 4
    three = Perm.from_cycles([(1, 2, 3)], 5)
    assert np.trace(std.matrix(three)).real == pytest.approx(1)
    (chi,) = restrict_to_alt((4, 1))
    assert finite_dim_trace(std)(three).real == pytest.approx(float(normalized_value(chi, CycleType((3,), 2)).rational()))
    reg = make_rep(RepSpec("regular", ALT5))
    assert reg.dim == 60
    tr = finite_dim_trace(reg)
    assert all(abs(tr(g) - (1 if g.is_identity() else 0)) < 1e-12 for g in ELEMS)
    perm = finite_dim_trace(make_rep(RepSpec("permutation", ALT5)))
    assert all(abs(perm(g) - sum(1 for i in range(1, 6) if g(i) == i) / 5) < 1e-12 for g in ELEMS)
    with pytest.raises(ValueError):
        make_rep(RepSpec("adjoint", ALT5))


def test_finite_dim_traces_positive_definite_and_invariant():
    for kind in ("trivial", "permutation", "standard", "regular"):
        tr = finite_dim_trace(make_rep(RepSpec(kind, ALT5)))
        assert abs(tr(Perm.identity(5)) - 1) < 1e-12
        assert gram_psd_check(tr, ELEMS)
        for g in ELEMS[:20]:
            for x in ELEMS[:: 7]:
                assert abs(tr(x * g * x.inverse()) - tr(g)) < 1e-12


def test_defect_with_sign_flip():
    # even dimension: flip the 5-cycle image in the standard rep
    rep = make_rep(RepSpec("standard", ALT5))
    imgs = rep.generator_images()
    imgs["s"] = -imgs["s"]
    phi = AlmostRep(ALT5, imgs, 5)
    # s^5 = e but (-S)^5 = -S^5 = -I, so some pair defect reaches d_hs(I, -I) = 2
    assert phi.delta == pytest.approx(2)
    assert defect(phi, ball(ALT5, 0)) == 0


def test_defect_horizon_check():
    phi = AlmostRep.from_rep(make_rep(RepSpec("standard", ALT5)), 2)
    with pytest.raises(ValueError):
        defect(phi, ball(ALT5, 3))


def test_perturb_zero():
    rep = make_rep(RepSpec("standard", ALT5))
    phi = perturb(rep, 0.0, 1, horizon=4)
    assert phi.delta <= TOL.exact


@pytest.mark.parametrize("eps", [0.01, 0.05, 0.1])
def test_perturb_generator_distance(eps):
    rep = make_rep(RepSpec("standard", ALT5))
    for seed in range(20):
        phi = perturb(rep, eps, seed)
        for l, M in rep.generator_images().items():
            assert d_hs(M, phi.images[l]) <= 1.1 * eps


def test_perturb_monte_carlo_envelope():
    rep = make_rep(RepSpec("standard", ALT5))
    B = ball(ALT5, 4)
    worst = 0.0
    for trial in range(100):
        phi = perturb(rep, 0.05, trial_rng(7, trial), horizon=1)
        worst = max(worst, defect(AlmostRep(ALT5, phi.images, 4, defect_value=0.0), B))
    assert worst <= 0.6
    assert worst <= 3 * 4 * 0.05


def test_trial_rng_is_order_independent():
    a = [trial_rng(5, t).normal() for t in range(4)]
    b = [trial_rng(5, t).normal() for t in reversed(range(4))][::-1]
    assert a == b


def test_correct_fixed_point():
    rep = make_rep(RepSpec("standard", ALT5))
    phi = AlmostRep.from_rep(rep, 1)
    res = correct(phi)
    assert res.converged and res.status == "converged"
    assert max(res.distances.values()) <= 1e-12


def test_correct_recovers_small_perturbation():
    rep = make_rep(RepSpec("standard", ALT5))
    for seed in range(5):
        phi = perturb(rep, 0.01, seed)
        res = correct(phi)
        assert res.converged
        for l, M in rep.generator_images().items():
            assert d_hs(res.images[l], M) <= 0.03


def test_correct_large_defect_is_reported():
    rng = np.random.default_rng(0)
    phi = AlmostRep(ALT5, {"s": haar(4, rng), "t": haar(4, rng)}, 1)
    res = correct(phi, max_iters=20)
    assert res.status in ("converged", "max_iters", "singular")
    if res.converged:
        assert res.defect < TOL.converge
    else:
        assert not res.converged


def test_hadwin_shulman_examples():
    std = finite_dim_trace(make_rep(RepSpec("standard", ALT5)))
    reg = finite_dim_trace(make_rep(RepSpec("regular", ALT5)))
    triv = finite_dim_trace(make_rep(RepSpec("trivial", ALT5)))
    hs = hadwin_shulman_check(std, [triv, std], ELEMS, 1e-10)
    assert hs.best == 1 and hs.deviation == 0 and hs.within
    de = lambda g: 1 if g.is_identity() else 0
    hs = hadwin_shulman_check(de, [triv, reg], ELEMS, 1e-10)
    assert hs.best == 1 and hs.deviation < 1e-12
    with pytest.raises(ValueError):
        hadwin_shulman_check(de, [], ELEMS, 0.1)


def test_hadwin_shulman_tensor_on_u3():
    marks = [classical_marking("5,7,9", n) for n in (1, 2, 3)]
    std_chars = [alt_class_function(restrict_to_alt((d - 1, 1))[0]) for d in (5, 7, 9)]
    target = thoma_tensor(std_chars)
    rng = np.random.default_rng(11)
    pools = [closure(marks[0])] + [
        [Perm(list(rng.permutation(d) + 1)) for _ in range(40)] for d in (7, 9)
    ]
    pools[1] = [p for p in pools[1] if p.sign() == 1]
    pools[2] = [p for p in pools[2] if p.sign() == 1]
    sample = [TupleElement((pools[0][i % 60], pools[1][i % len(pools[1])], pools[2][i % len(pools[2])])) for i in range(30)]
    outer = make_rep(RepSpec("outer", parts=tuple(RepSpec("standard", m) for m in marks)))
    perm_outer = make_rep(RepSpec("outer", parts=tuple(RepSpec("permutation", m) for m in marks)))
    hs = hadwin_shulman_check(target, [finite_dim_trace(perm_outer), finite_dim_trace(outer)], sample, 1e-10)
    assert hs.best == 1 and hs.deviation <= 1e-10
