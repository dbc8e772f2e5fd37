import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hhl_lab.errors import FilterSpecError
from hhl_lab.filters import (
    FLAG,
    ILL,
    WELL,
    FilterSpec,
    f_filter,
    flag_distance,
    flag_rotations,
    flag_state,
    g_filter,
    smoothness_ratio,
    smoothness_slack,
    lipschitz_margin,
    rotate_flag,
)
from hhl_lab.phase_estimation import CLOCK
from hhl_lab.qstate import QuantumState, RegisterLayout


def test_breakpoints_and_midpoint():
    s = FilterSpec(kappa=4)
    assert f_filter(1 / 4, s) == pytest.approx(0.5) and g_filter(1 / 4, s) == 0.0
    for lam in (1 / 8, 0.1, 0.0):
        assert f_filter(lam, s) == 0.0 and g_filter(lam, s) == 0.5
    mid = (1 / 4 + 1 / 8) / 2
    assert f_filter(mid, s) == pytest.approx(0.5 * np.sin(np.pi / 4))
    assert g_filter(mid, s) == pytest.approx(0.35355, abs=1e-5)


def test_negative_eigenvalues_carry_sign():
    s = FilterSpec(kappa=4)
    assert f_filter(-0.5, s) == pytest.approx(-f_filter(0.5, s))
    assert g_filter(-0.01, s) == g_filter(0.01, s)


def test_flag_state_examples():
    kappa = 5
    s = FilterSpec(kappa)
    assert np.allclose(flag_state(1.0, s), [np.sqrt(1 - 1 / (4 * kappa**2)), 1 / (2 * kappa), 0])
    assert np.allclose(flag_state(0.01, s), [np.sqrt(3) / 2, 0, 0.5])


def test_f2_plus_g2_below_one_over_kappa():
    # the definitions give 1/4 on [0, 1/kappa] (see the acceptance suite for the 1/2 claim)
    s = FilterSpec(10)
    lam = np.linspace(0, 0.1, 1000)
    f, g = s.amplitudes(lam)
    assert np.allclose(f**2 + g**2, 0.25, atol=1e-15)


def test_spec_validation():
    with pytest.raises(FilterSpecError):
        FilterSpec(0.5)
    with pytest.raises(FilterSpecError):
        FilterSpec(2, mode="weird")
    with pytest.raises(FilterSpecError):
        FilterSpec(2, mode="simple", c_simple=0.6)
    assert FilterSpec(4, mode="simple").constant == pytest.approx(1 / 8)


def test_simple_mode_agrees_with_filtered_on_well_region():
    f1, _ = FilterSpec(4).amplitudes(np.linspace(0.25, 1, 50))
    f2, g2 = FilterSpec(4, mode="simple").amplitudes(np.linspace(0.25, 1, 50))
    assert np.allclose(f1, f2) and np.all(g2 == 0)


def test_flag_state_rejects_overflow():
    class Bad:
        def amplitudes(self, lam):
            return np.ones_like(lam), np.ones_like(lam)

    with pytest.raises(FilterSpecError):
        flag_state(np.array([0.5]), Bad())


def test_rotations_are_orthogonal_and_map_nothing():
    s = FilterSpec(3)
    lam = np.linspace(-1, 1, 101)
    r = flag_rotations(lam, s)
    eye = np.einsum("kij,kjl->kil", np.swapaxes(r, 1, 2), r)
    assert np.max(np.abs(eye - np.eye(3))) < 1e-12
    assert np.allclose(r[:, :, 0], flag_state(lam, s))


def _clock_flag_state(T, weights):
    amps = np.zeros((T, 3), complex)
    amps[:, 0] = weights
    return QuantumState.from_tensor(RegisterLayout.of((CLOCK, T), (FLAG, 3)), amps)


def test_rotate_flag_simple_c1():
    T, t0 = 16, 2 * np.pi
    w = np.zeros(T)
    w[1] = 1.0  # lambda~ = 1
    out = rotate_flag(_clock_flag_state(T, w), FilterSpec(1, "simple", 1.0), t0)
    assert np.allclose(out.tensor()[1], [0, 1, 0])


def test_rotate_flag_ill_weight():
    T, t0 = 64, 2 * np.pi * 40
    w = np.zeros(T)
    w[1] = 1.0  # lambda~ = 1/40 < 1/(2 kappa) for kappa = 10
    out = rotate_flag(_clock_flag_state(T, w), FilterSpec(10), t0)
    p = out.probabilities(FLAG)
    assert p[ILL] == pytest.approx(0.25) and p[WELL] == 0.0


def test_rotate_flag_unitary(rng):
    T = 32
    layout = RegisterLayout.of((CLOCK, T), ("s", 2), (FLAG, 3))
    v = rng.normal(size=layout.size) + 1j * rng.normal(size=layout.size)
    psi = QuantumState(layout, v / np.linalg.norm(v))
    out = rotate_flag(psi, FilterSpec(4), 2.0)
    assert out.norm == pytest.approx(1.0, abs=1e-12)
    back = rotate_flag(out, FilterSpec(4), 2.0)
    assert np.max(np.abs(back.amplitudes - psi.amplitudes)) < 1e-12


def test_lipschitz_examples():
    s = FilterSpec(10)
    assert lipschitz_margin(0.3, 0.3, s) == 0.0
    assert flag_distance(0.01, 0.04, s) == 0.0
    lam = np.random.default_rng(1).uniform(0, 1, size=(2, 10_000))
    assert np.min(lipschitz_margin(lam[0], lam[1], s)) >= -1e-9


def test_continuity_across_breakpoints():
    kappa = 10
    s = FilterSpec(kappa)
    for lam in (1 / kappa, 1 / (2 * kappa)):
        for x in (lam - 1e-6, lam - 5e-7, lam):
            d = flag_distance(x + 1e-6, x, s)
            assert d <= (np.pi / 2) * kappa * 1e-6 * (1 + 1e-3)


def test_smoothness_holds_with_pi_squared():
    kappa, t0 = 10, 200.0
    s = FilterSpec(kappa)
    lam, delta = np.meshgrid(np.linspace(0, 1, 801), np.linspace(-2 * np.pi, 2 * np.pi, 200))
    assert np.min(smoothness_slack(lam, delta, t0, s, c=np.pi**2)) >= -1e-12
    assert np.max(smoothness_ratio(lam, delta, t0, s)) == pytest.approx(np.pi**2, rel=1e-3)


@settings(max_examples=50, deadline=None)
@given(kappa=st.floats(1, 50), lam=st.floats(-1, 1))
def test_flag_state_unit_norm(kappa, lam):
    for mode in ("filtered", "simple"):
        h = flag_state(np.array(lam), FilterSpec(kappa, mode))
        assert np.linalg.norm(h) == pytest.approx(1.0, abs=1e-12)
