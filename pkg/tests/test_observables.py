import numpy as np
import pytest

from conftest import random_hermitian, random_vector
from hhl_lab.errors import HHLError, LayoutError, NoStableStateError, ZeroProbabilityError
from hhl_lab.filters import FilterSpec
from hhl_lab.observables import (
    ObservableSpec,
    apply_matrix_function,
    estimate_observable,
    estimate_poly2k,
    fixed_point_iteration,
    matrix_function_oracle,
    spectral_radius,
    stable_state,
    swap_operator,
    swap_test,
    swap_test_state,
)
from hhl_lab.pipeline import HHLConfig, solve


def overlap(a, b):
    return abs(np.vdot(a, b)) ** 2


def test_identity_observable_is_one(rng):
    est = estimate_observable(random_vector(4, rng), np.eye(4), 100, rng)
    assert est.value == 1.0 and est.exact == pytest.approx(1.0)


def test_orthogonal_projector_is_zero(rng):
    x = np.kron([0, 1], random_vector(2, rng))
    spec = ObservableSpec.first_qubit_projector(4)
    est = estimate_observable(x, spec, 1000, rng)
    assert est.value == 0.0 and est.exact == pytest.approx(0.0, abs=1e-15)


def test_random_observable_within_three_sigma(rng):
    for _ in range(5):
        M = random_hermitian(5, rng, signs=True)
        x = random_vector(5, rng)
        est = estimate_observable(x, M, 10_000, rng)
        assert est.exact == pytest.approx(np.real(np.vdot(x, M @ x)), abs=1e-10)
        assert abs(est.value - est.exact) <= 3 * est.stderr


def test_observable_errors(rng):
    with pytest.raises(LayoutError):
        estimate_observable(random_vector(3, rng), np.eye(4), 10, rng)
    with pytest.raises(HHLError):
        ObservableSpec(np.array([[0, 1], [0, 0]]))


def test_swap_test_extremes(rng):
    a = random_vector(3, rng)
    assert swap_test(a, a, 100, rng).accept_probability == pytest.approx(1.0)
    assert swap_test([1, 0], [0, 1], 100, rng).accept_probability == pytest.approx(0.5)


def test_swap_test_accept_probability_formula(rng):
    for _ in range(50):
        a, b = random_vector(4, rng), random_vector(4, rng)
        p = swap_test_state(a, b).probabilities("ancilla")[0]
        assert p == pytest.approx((1 + overlap(a, b)) / 2, abs=1e-12)


def test_swap_test_known_overlap(rng):
    a = np.array([1, 0, 0])
    b = np.array([0.8, 0.6, 0])
    res = swap_test(a, b, 10_000, rng)
    assert res.overlap_sq_exact == pytest.approx(0.64)
    assert abs(res.overlap_sq - 0.64) <= 3 * res.stderr
    with pytest.raises(LayoutError):
        swap_test([1, 0], [1, 0, 0], 10, rng)


def test_stable_state_trivial(rng):
    b = random_vector(3, rng)
    assert overlap(stable_state(np.zeros((3, 3)), b).amplitudes, b) == pytest.approx(1, abs=1e-12)
    assert overlap(stable_state(0.5 * np.eye(3), b).amplitudes, b) == pytest.approx(1, abs=1e-12)


def test_stable_state_chain_matches_iteration():
    # lazy random walk on a 4-state chain, damped so that rho < 1
    P = np.array([[0.5, 0.5, 0, 0], [0.25, 0.5, 0.25, 0], [0, 0.25, 0.5, 0.25], [0, 0, 0.5, 0.5]])
    A = 0.9 * P.T
    b = np.array([1.0, 0, 0, 0])
    x = fixed_point_iteration(A, b)
    x = x / np.linalg.norm(x)
    got = stable_state(A, b).amplitudes
    assert np.linalg.norm(got - x * np.vdot(x, got) / abs(np.vdot(x, got))) < 1e-8


def test_stable_state_rejects_unstable():
    assert spectral_radius(np.diag([0.5, -1.0])) == pytest.approx(1.0)
    with pytest.raises(NoStableStateError):
        stable_state(np.diag([0.5, 1.0]), [1, 1])


def test_poly2k_single_copy_matches_observable(rng):
    x = random_vector(3, rng)
    M = random_hermitian(3, rng)
    a = estimate_poly2k(x, 1, M, 2000, 5)
    b = estimate_observable(x, M, 2000, 5)
    assert a.value == b.value and a.exact == pytest.approx(b.exact)


def test_poly2k_purity_and_fourth_moment(rng):
    x = random_vector(3, rng)
    assert estimate_poly2k(x, 2, swap_operator(3), 1000, rng).exact == pytest.approx(1.0)
    diag = np.zeros(9)
    diag[[0, 4, 8]] = 1
    est = estimate_poly2k(x, 2, np.diag(diag), 10_000, rng)
    direct = np.sum(np.abs(x) ** 4)
    assert est.exact == pytest.approx(direct, abs=1e-12)
    assert abs(est.value - direct) <= 3 * est.stderr


def test_matrix_function_examples(rng):
    a = random_hermitian(4, rng, lo=0.1, signs=True)
    b = random_vector(4, rng)
    x = apply_matrix_function(a, b, lambda lam: lam, t0=2000).amplitudes
    ax = a @ b / np.linalg.norm(a @ b)
    assert overlap(x, ax) == pytest.approx(1.0, abs=1e-3)
    x = apply_matrix_function(a, b, lambda lam: np.ones_like(lam)).amplitudes
    assert overlap(x, b) == pytest.approx(1.0, abs=1e-12)


def test_matrix_function_exponential(rng):
    a = random_hermitian(4, rng, signs=True)
    b = random_vector(4, rng)
    t0 = 500
    x = apply_matrix_function(a, b, lambda lam: np.exp(-lam), t0=t0).amplitudes
    ref = matrix_function_oracle(a, b, lambda lam: np.exp(-lam))
    assert np.linalg.norm(x - ref * np.vdot(ref, x) / abs(np.vdot(ref, x))) <= 1 / t0 * 10


def test_matrix_function_filter_reproduces_solve(rng):
    a = random_hermitian(3, rng, lo=0.2)
    b = random_vector(3, rng)
    spec = FilterSpec(5)
    x = apply_matrix_function(a, b, spec, t0=100).amplitudes
    rep = solve(a, b, HHLConfig.create(5, t0=100), amplify=False)
    # same code path; only the final renormalization can differ, at ulp level
    assert np.max(np.abs(x - rep.x_tilde)) < 1e-15


def test_matrix_function_zero_raises(rng):
    with pytest.raises(HHLError):
        apply_matrix_function(np.eye(2), [1, 0], lambda lam: np.zeros_like(lam))
    with pytest.raises(ZeroProbabilityError):
        apply_matrix_function(np.diag([0.5, 1.0]), [1, 0], lambda lam: np.where(lam > 0.75, 1.0, 0.0), t0=2000)
