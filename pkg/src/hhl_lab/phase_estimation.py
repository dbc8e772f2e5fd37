"""Phase estimation with the sine-window clock state.

The clock register holds |Psi_0> = sqrt(2/T) sum_tau sin(pi (tau + 1/2) / T) |tau>.
After the conditional evolution sum_tau |tau><tau| (x) exp(i A tau t0 / T),
reading the clock in the Fourier basis |k> = T^{-1/2} sum_tau exp(2 pi i k tau/T)|tau>
(i.e. applying ``inverse_qft``) leaves amplitude alpha(lambda t0 - 2 pi k, T)
on |k>|u_j>.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import LayoutError
from .linalg import EigenDecomposition, eig_hermitian
from .qstate import QuantumState, RegisterLayout, inverse_qft, tensor_product

CLOCK = "clock"
SYSTEM = "system"

# closed form is replaced by the direct sum this close to its removable singularities
_SINGULAR_EPS = 1e-6


def default_clock_dim(t0: float) -> int:
    """Smallest power of two >= 16 t0 (and >= 2)."""
    need = max(2.0, 16.0 * t0)
    return 1 << max(1, math.ceil(math.log2(need) - 1e-12))


@dataclass(frozen=True)
class PhaseEstConfig:
    """Clock dimension ``T`` and total evolution time ``t0``."""

    T: int
    t0: float

    def __post_init__(self):
        if self.T < 2:
            raise ValueError(f"clock dimension T={self.T} < 2: |Psi_0> is not normalized")
        if self.T & (self.T - 1):
            raise ValueError(f"clock dimension T={self.T} is not a power of two")
        if self.t0 < 0:
            raise ValueError("t0 must be nonnegative")
        if self.T < 16 * self.t0:
            raise ValueError(f"T={self.T} < 16 t0 = {16 * self.t0:g}")

    @classmethod
    def for_t0(cls, t0: float, T: int | None = None) -> "PhaseEstConfig":
        return cls(T=T or default_clock_dim(t0), t0=float(t0))

    def grid(self) -> np.ndarray:
        return eigenvalue_grid(self.T, self.t0)


def eigenvalue_grid(T: int, t0: float) -> np.ndarray:
    """lambda~_k = 2 pi k / t0, with k > T/2 wrapped to 2 pi (k - T) / t0."""
    k = np.arange(T)
    k = np.where(k > T // 2, k - T, k)
    return 2.0 * np.pi * k / t0


def psi0_amplitudes(T: int) -> np.ndarray:
    if T < 2:
        raise ValueError(f"clock dimension T={T} < 2: |Psi_0> is not normalized")
    tau = np.arange(T)
    return np.sqrt(2.0 / T) * np.sin(np.pi * (tau + 0.5) / T)


def prepare_psi0(T: int, name: str = CLOCK) -> QuantumState:
    amps = psi0_amplitudes(T).astype(complex)
    return QuantumState(RegisterLayout.of((name, T)), amps)


def psi0_preparation_vector(T: int) -> np.ndarray:
    """Householder vector w with (I - 2 w w^T / w^T w) |0> = |Psi_0>."""
    w = -psi0_amplitudes(T)
    w[0] += 1.0
    return w


def householder(psi: np.ndarray, w: np.ndarray, axis: int) -> np.ndarray:
    """Apply I - 2 w w^dagger / |w|^2 along ``axis`` of ``psi``."""
    ww = np.vdot(w, w).real
    if ww == 0.0:
        return psi
    t = np.moveaxis(psi, axis, 0)
    proj = np.tensordot(w.conj(), t, axes=([0], [0]))
    t = t - (2.0 / ww) * np.multiply.outer(w, proj)
    return np.moveaxis(t, 0, axis)


def conditional_evolution(
    state: QuantumState,
    a,
    t0: float,
    *,
    clock: str = CLOCK,
    system: str = SYSTEM,
    eig: EigenDecomposition | None = None,
    sign: int = 1,
) -> QuantumState:
    """sum_tau |tau><tau| (x) exp(sign i A tau t0 / T), T taken from the clock register."""
    layout = state.layout
    if clock not in layout.names:
        raise LayoutError(f"state has no clock register {clock!r}")
    eig = eig or eig_hermitian(a)
    T = layout.dim(clock)
    if layout.dim(system) != eig.dim:
        raise LayoutError(f"system register has dim {layout.dim(system)}, matrix has {eig.dim}")
    ca, sa = layout.axis(clock), layout.axis(system)
    v = eig.eigenvectors
    t = np.moveaxis(state.tensor(), (ca, sa), (0, 1))
    t = np.tensordot(v.conj().T, t, axes=([1], [1])).swapaxes(0, 1)
    phases = np.exp(sign * 1j * np.outer(np.arange(T) * (t0 / T), eig.eigenvalues))
    t = t * phases.reshape(phases.shape + (1,) * (t.ndim - 2))
    t = np.tensordot(v, t, axes=([1], [1])).swapaxes(0, 1)
    t = np.moveaxis(t, (0, 1), (ca, sa))
    return QuantumState.from_tensor(layout, t, state.normalized)


def alpha_series(delta, T: int) -> np.ndarray:
    """(sqrt 2 / T) sum_tau exp(i tau delta / T) sin(pi (tau + 1/2) / T), summed directly."""
    delta = np.asarray(delta, dtype=float)
    tau = np.arange(T)
    window = np.sin(np.pi * (tau + 0.5) / T)
    phase = np.exp(1j * np.multiply.outer(delta, tau) / T)
    return (np.sqrt(2.0) / T) * (phase @ window)


def alpha_closed_form(delta, T: int):
    """Phase-estimation amplitude for offset delta = lambda t0 - 2 pi k.

    -exp(i delta (1 - 1/T) / 2) sqrt2 cos(delta/2) cos(delta/2T) sin(pi/2T)
        / (T sin((delta + pi) / 2T) sin((delta - pi) / 2T))

    Points where either denominator sine vanishes are removable; there the
    direct sum is used instead.
    """
    scalar = np.ndim(delta) == 0
    d = np.atleast_1d(np.asarray(delta, dtype=float))
    s_plus = np.sin((d + np.pi) / (2 * T))
    s_minus = np.sin((d - np.pi) / (2 * T))
    singular = (np.abs(s_plus) < _SINGULAR_EPS) | (np.abs(s_minus) < _SINGULAR_EPS)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = (
            -np.exp(0.5j * d * (1.0 - 1.0 / T))
            * np.sqrt(2.0)
            * np.cos(d / 2)
            * np.cos(d / (2 * T))
            * np.sin(np.pi / (2 * T))
            / (T * s_plus * s_minus)
        )
    if np.any(singular):
        out[singular] = alpha_series(d[singular], T)
    return complex(out[0]) if scalar else out


def concentration_bound(delta):
    """64 pi^2 / delta^4 bound on |alpha|^2, valid for 2 pi <= |delta| <= T/10."""
    return 64.0 * np.pi**2 / np.asarray(delta, dtype=float) ** 4


def kernel_weights(eigenvalues, cfg: PhaseEstConfig) -> np.ndarray:
    """|alpha_{k|j}|^2 as a (num eigenvalues, T) array from the closed form."""
    lam = np.atleast_1d(np.asarray(eigenvalues, dtype=float))
    k = np.arange(cfg.T)
    delta = np.subtract.outer(lam * cfg.t0, 2 * np.pi * k)
    return np.abs(alpha_closed_form(delta.ravel(), cfg.T).reshape(delta.shape)) ** 2


def phase_estimate(b_state: QuantumState, a, cfg: PhaseEstConfig, *, eig=None) -> QuantumState:
    """Clock (x) system state sum_{j,k} alpha_{k|j} beta_j |k>|u_j> (system in the standard basis)."""
    if len(b_state.layout.registers) != 1:
        raise LayoutError("phase_estimate expects a single-register input state")
    sys_name = b_state.layout.names[0]
    eig = eig or eig_hermitian(a)
    if b_state.layout.dim(sys_name) != eig.dim:
        raise LayoutError(f"input has dim {b_state.layout.dim(sys_name)}, matrix has {eig.dim}")
    state = tensor_product(prepare_psi0(cfg.T), b_state)
    state = conditional_evolution(state, None, cfg.t0, system=sys_name, eig=eig)
    return inverse_qft(state, CLOCK)
