"""Things to do with a solution state once you have it.

Every shot-based estimator also returns the exact value computed from the
amplitudes, so algorithmic error and sampling error can be told apart.
The SWAP test accepts when its ancilla is measured in |0>.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import HHLError, LayoutError, NoStableStateError
from .linalg import HERMITIAN_TOL, condition_number, eig_hermitian
from .qstate import QuantumState, RegisterLayout, prepare_amplitudes, tensor_product

SPECTRAL_TOL = 1e-6


def _vec(x) -> np.ndarray:
    if isinstance(x, QuantumState):
        return x.amplitudes
    v = np.asarray(x, dtype=complex).reshape(-1)
    return v / np.linalg.norm(v)


@dataclass(frozen=True, eq=False)
class ObservableSpec:
    matrix: np.ndarray
    shots: int = 10_000

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise LayoutError(f"observable must be square, got {m.shape}")
        if not np.allclose(m, m.conj().T, atol=HERMITIAN_TOL * max(1.0, np.abs(m).max())):
            raise HHLError("observable is not Hermitian")
        object.__setattr__(self, "matrix", m)

    @classmethod
    def first_qubit_projector(cls, dim: int, shots: int = 10_000) -> "ObservableSpec":
        """|0><0| (x) I: projector onto the lower half of the index range."""
        p = np.zeros((dim, dim))
        p[: dim // 2, : dim // 2] = np.eye(dim // 2)
        return cls(p, shots)


@dataclass
class Estimate:
    value: float
    stderr: float
    exact: float
    shots: int


def estimate_observable(x_state, M, shots: int, rng) -> Estimate:
    """Sample <x|M|x> by measuring in the eigenbasis of M."""
    x = _vec(x_state)
    M = M.matrix if isinstance(M, ObservableSpec) else np.asarray(M, dtype=complex)
    if M.shape != (x.size, x.size):
        raise LayoutError(f"observable is {M.shape}, state has dimension {x.size}")
    eig = eig_hermitian(M)
    p = np.abs(eig.coefficients(x)) ** 2
    p = p / p.sum()
    exact = float(np.real(np.vdot(x, M @ x)))
    rng = np.random.default_rng(rng)
    outcomes = eig.eigenvalues[rng.choice(p.size, size=shots, p=p)]
    value = float(outcomes.mean())
    stderr = float(outcomes.std(ddof=1) / np.sqrt(shots)) if shots > 1 else float("inf")
    return Estimate(value, stderr, exact, shots)


@dataclass
class SwapTestResult:
    overlap_sq: float
    stderr: float
    overlap_sq_exact: float
    accept_probability: float
    accepts: int
    shots: int


def swap_test_state(a, b) -> QuantumState:
    """H . controlled-SWAP . H on |0>_anc |a> |b>, before the ancilla is measured."""
    a, b = _vec(a), _vec(b)
    if a.size != b.size:
        raise LayoutError(f"state dimensions differ: {a.size} vs {b.size}")
    d = a.size
    ab = np.outer(a, b)
    # after the first Hadamard: (|0> ab + |1> ab) / sqrt2; swap on the |1> branch
    branch0, branch1 = ab / np.sqrt(2), ab.T / np.sqrt(2)
    out = np.stack([(branch0 + branch1) / np.sqrt(2), (branch0 - branch1) / np.sqrt(2)])
    layout = RegisterLayout.of(("ancilla", 2), ("a", d), ("b", d))
    return QuantumState.from_tensor(layout, out)


def swap_test(a, b, shots: int, rng) -> SwapTestResult:
    """Estimate |<a|b>|^2 as 2 * (accept frequency) - 1."""
    psi = swap_test_state(a, b)
    p_accept = float(psi.probabilities("ancilla")[0])
    rng = np.random.default_rng(rng)
    accepts = int(rng.binomial(shots, min(1.0, p_accept)))
    freq = accepts / shots
    exact = float(abs(np.vdot(_vec(a), _vec(b))) ** 2)
    stderr = 2.0 * np.sqrt(max(freq * (1 - freq), 0.0) / shots)
    return SwapTestResult(2 * freq - 1, float(stderr), exact, p_accept, accepts, shots)


def spectral_radius(a) -> float:
    return float(np.max(np.abs(np.linalg.eigvals(np.asarray(a, dtype=complex)))))


def stable_state(a_proc, b) -> QuantumState:
    """State proportional to (I - A)^{-1} b for a process x_t = A x_{t-1} + b.

    I - A is generally not Hermitian, so it goes through the Hermitian
    embedding with kappa set to its condition number (all singular values
    then sit on the exactly inverted branch of the filter).
    """
    from .pipeline import general_exact_solution

    a = np.asarray(a_proc, dtype=complex)
    rho = spectral_radius(a)
    if rho >= 1.0 - SPECTRAL_TOL:
        raise NoStableStateError(rho)
    m = np.eye(a.shape[0]) - a
    x = general_exact_solution(m, b, max(1.0, condition_number(m)))
    return prepare_amplitudes(x)


def fixed_point_iteration(a_proc, b, tol: float = 1e-14, max_iter: int = 100_000) -> np.ndarray:
    """x_t = A x_{t-1} + b from x_0 = 0 until the update is below ``tol`` (relative)."""
    a = np.asarray(a_proc, dtype=complex)
    b = np.asarray(b, dtype=complex)
    x = np.zeros_like(b)
    for _ in range(max_iter):
        nxt = a @ x + b
        if np.linalg.norm(nxt - x) <= tol * np.linalg.norm(nxt):
            return nxt
        x = nxt
    raise NoStableStateError(spectral_radius(a))


def estimate_poly2k(x_state, k: int, big_M, shots: int, rng) -> Estimate:
    """<x|^k M |x>^k: a degree-2k polynomial in the amplitudes of x."""
    x = x_state if isinstance(x_state, QuantumState) else prepare_amplitudes(x_state)
    copies = [
        QuantumState(RegisterLayout.of((f"copy{i}", x.layout.size)), x.amplitudes) for i in range(k)
    ]
    return estimate_observable(tensor_product(*copies), big_M, shots, rng)


def swap_operator(d: int) -> np.ndarray:
    s = np.zeros((d * d, d * d))
    for i in range(d):
        for j in range(d):
            s[j * d + i, i * d + j] = 1.0
    return s


class FunctionFlag:
    """Flag amplitudes (f(lambda) / scale, 0) for a user function.

    Outside |lambda| <= ``window`` the function is held at its boundary
    value, since clock labels range well beyond the spectrum.  ``scale`` is
    the largest |f| over the window so that the rotation stays valid.
    """

    mode = "function"

    def __init__(self, func, window: float = 2.0, samples: int = 4001):
        self.func = func
        self.window = window
        grid = np.linspace(-window, window, samples)
        self.scale = float(np.max(np.abs(self._f(grid))))
        if not np.isfinite(self.scale) or self.scale == 0.0:
            raise HHLError("function is zero or not finite on the window")

    def _f(self, lam):
        lam = np.clip(np.asarray(lam, dtype=float), -self.window, self.window)
        return np.asarray(np.broadcast_to(self.func(lam), lam.shape), dtype=float)

    def amplitudes(self, lam):
        f = self._f(lam) / self.scale
        return np.clip(f, -1.0, 1.0), np.zeros_like(f)


def matrix_function_oracle(a, b, func) -> np.ndarray:
    """sum_j f(lambda_j) beta_j |u_j>, normalized."""
    eig = eig_hermitian(a)
    x = eig.apply_function(lambda lam: np.broadcast_to(func(lam), lam.shape), _vec(b))
    return x / np.linalg.norm(x)


def matrix_function_report(a, b, f, *, t0: float = 200.0, T: int | None = None):
    """Run the pipeline with the flag amplitude replaced by f; returns the SolveReport.

    ``f`` is a real function or a FilterSpec (which reproduces ``solve``).
    """
    from .filters import FilterSpec
    from .pipeline import HHLConfig, solve

    spec = f if isinstance(f, FilterSpec) else FunctionFlag(f)
    kappa = f.kappa if isinstance(f, FilterSpec) else 1.0
    cfg = HHLConfig.create(kappa, t0=t0, T=T)
    return solve(a, b, cfg, amplify=False, flag_spec=spec)


def apply_matrix_function(a, b, f, *, t0: float = 200.0, T: int | None = None) -> QuantumState:
    """Pipeline estimate of the state proportional to f(A)|b>."""
    return prepare_amplitudes(matrix_function_report(a, b, f, t0=t0, T=T).x_tilde)
