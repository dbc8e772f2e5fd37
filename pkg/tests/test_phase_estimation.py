import numpy as np
import pytest

from conftest import random_hermitian, random_vector
from hhl_lab.errors import LayoutError
from hhl_lab.linalg import eig_hermitian
from hhl_lab.phase_estimation import (
    CLOCK,
    PhaseEstConfig,
    alpha_closed_form,
    alpha_series,
    concentration_bound,
    conditional_evolution,
    default_clock_dim,
    eigenvalue_grid,
    kernel_weights,
    phase_estimate,
    prepare_psi0,
    psi0_amplitudes,
)
from hhl_lab.qstate import prepare_amplitudes, tensor_product


def test_psi0_examples():
    assert np.allclose(psi0_amplitudes(2), [np.sin(np.pi / 4), np.sin(3 * np.pi / 4)])
    for T in (2, 3, 4, 64):
        amp = psi0_amplitudes(T)
        assert np.sum(amp**2) == pytest.approx(1.0, abs=1e-12)
        assert np.all(amp > 0)
    with pytest.raises(ValueError):
        prepare_psi0(1)


def test_config_invariants():
    with pytest.raises(ValueError):
        PhaseEstConfig(T=1, t0=0.0)
    with pytest.raises(ValueError):
        PhaseEstConfig(T=48, t0=1.0)
    with pytest.raises(ValueError):
        PhaseEstConfig(T=64, t0=10.0)
    cfg = PhaseEstConfig.for_t0(10.0)
    assert cfg.T == 256 == default_clock_dim(10.0)


def test_grid_wraps_negative():
    g = eigenvalue_grid(8, 2 * np.pi)
    assert np.allclose(g, [0, 1, 2, 3, 4, -3, -2, -1])


def _clock_system(a, b, T):
    return tensor_product(prepare_psi0(T), prepare_amplitudes(b))


def test_conditional_evolution_zero_time_is_identity(rng):
    a = random_hermitian(3, rng)
    s = _clock_system(a, random_vector(3, rng), 16)
    out = conditional_evolution(s, a, 0.0)
    assert np.allclose(out.amplitudes, s.amplitudes)


def test_conditional_evolution_eigenstate_phase(rng):
    a = random_hermitian(3, rng)
    e = eig_hermitian(a)
    T, t0 = 16, 0.7
    s = _clock_system(a, e.eigenvectors[:, 1], T)
    out = conditional_evolution(s, a, t0).tensor()
    tau = np.arange(T)
    phase = np.exp(1j * e.eigenvalues[1] * t0 * tau / T)
    assert np.allclose(out, s.tensor() * phase[:, None], atol=1e-12)


def test_conditional_evolution_full_period_identity(rng):
    T = 8
    s = _clock_system(np.eye(2), random_vector(2, rng), T)
    out = conditional_evolution(s, np.eye(2), 2 * np.pi * T)
    assert np.allclose(out.amplitudes, s.amplitudes, atol=1e-10)


def test_conditional_evolution_needs_clock(rng):
    s = prepare_amplitudes(random_vector(2, rng))
    with pytest.raises(LayoutError):
        conditional_evolution(s, np.eye(2), 1.0)


def test_alpha_at_zero():
    val = alpha_closed_form(0.0, 128)
    assert abs(val) == pytest.approx(np.sqrt(2) / (128 * np.sin(np.pi / 256)), rel=1e-12)
    assert abs(val) == pytest.approx(0.90034, abs=1e-5)
    assert abs(val) ** 2 == pytest.approx(0.8106, abs=1e-4)


def test_alpha_closed_form_matches_series(rng):
    T = rng.choice([32, 128, 512], size=200)
    d = rng.uniform(-1, 1, size=200) * T * 0.5
    diff = [abs(alpha_closed_form(x, int(t)) - alpha_series(x, int(t))) for x, t in zip(d, T)]
    assert max(diff) <= 1e-9


@pytest.mark.parametrize("eps", [0.0, 1e-9, 1e-5, 1e-3])
def test_alpha_near_removable_singularity(eps):
    T = 64
    for d in (np.pi + eps, -np.pi - eps, np.pi + 2 * np.pi * T + eps):
        assert abs(alpha_closed_form(d, T) - alpha_series(d, T)) < 1e-9


def test_bound_example():
    d, T = 4 * np.pi, 128
    assert abs(alpha_closed_form(d, T)) ** 2 <= concentration_bound(d)


@pytest.mark.parametrize("lam", [0.1, 0.37, 0.5, 1.0])
@pytest.mark.parametrize("T", [64, 256])
def test_completeness(lam, T):
    t0 = T / 16
    w = kernel_weights([lam], PhaseEstConfig(T, t0))
    assert w.sum() == pytest.approx(1.0, abs=1e-6)


def test_concentration_grid():
    T = 512
    t0 = T / 16
    for lam in np.linspace(-1, 1, 41):
        k = np.arange(T)
        delta = lam * t0 - 2 * np.pi * k
        delta = (delta + np.pi * T) % (2 * np.pi * T) - np.pi * T  # alias to principal range
        far = (np.abs(delta) >= 2 * np.pi) & (np.abs(delta) <= T / 10)
        a2 = np.abs(alpha_closed_form(delta[far], T)) ** 2
        assert np.all(a2 <= concentration_bound(delta[far]))


def test_phase_estimate_on_grid_eigenvalue():
    T, t0 = 256, 16.0
    k_star = 2
    lam = 2 * np.pi * k_star / t0
    a = np.diag([lam / 2, lam]) / 1.0
    out = phase_estimate(prepare_amplitudes([0, 1]), a, PhaseEstConfig(T, t0))
    p = out.probabilities(CLOCK)
    assert p[k_star] == pytest.approx(abs(alpha_closed_form(0.0, T)) ** 2, abs=1e-9)


def test_phase_estimate_matches_kernel(rng):
    a = random_hermitian(4, rng, signs=True)
    e = eig_hermitian(a)
    b = random_vector(4, rng)
    cfg = PhaseEstConfig(128, 8.0)
    out = phase_estimate(prepare_amplitudes(b), a, cfg).tensor()
    in_eig = out @ e.eigenvectors.conj()  # (k, j) amplitudes in the eigenbasis
    beta = e.coefficients(b)
    k = np.arange(cfg.T)
    delta = np.subtract.outer(e.eigenvalues * cfg.t0, 2 * np.pi * k)
    expect = (alpha_closed_form(delta.ravel(), cfg.T).reshape(delta.shape) * beta[:, None]).T
    assert np.max(np.abs(in_eig - expect)) < 1e-9


def test_phase_estimate_rejects_dimension_mismatch():
    with pytest.raises(LayoutError):
        phase_estimate(prepare_amplitudes([1, 0, 0]), np.eye(2) * 0.5, PhaseEstConfig(16, 1.0))
