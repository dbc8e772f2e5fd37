"""The inversion pipeline.

Joint register layout is (clock, system, flag), clock slowest.  U_invert is

    1. |0>_C -> |Psi_0>_C           (Householder reflection, so self-inverse)
    2. sum_tau |tau><tau| (x) exp(i A tau t0 / T)
    3. Fourier read-out of the clock (``inverse_qft``)
    4. flag rotation |nothing> -> |h(lambda~_k)> conditioned on k
    5. undo 3, 2, 1

Steps 1-3 form a unitary P and step 4 a real symmetric R, so
U_invert = P^dagger R P is its own inverse.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .errors import FilterSpecError, HHLError, SingularMatrixError, ZeroProbabilityError
from .filters import FLAG, ILL, NOTHING, WELL, FilterSpec, flag_state, rotate_flag
from .linalg import (
    EigenDecomposition,
    as_hermitian,
    eig_hermitian,
    hermitian_embed,
    singular_values,
)
from .phase_estimation import (
    CLOCK,
    SYSTEM,
    PhaseEstConfig,
    conditional_evolution,
    householder,
    psi0_preparation_vector,
)
from .qstate import (
    QuantumState,
    RegisterLayout,
    inverse_qft,
    postselect,
    prepare_amplitudes,
    qft,
    reduce_to,
    state_distance,
)

DEFAULT_CT = 10.0
DEFAULT_EPSILON = 0.1


@dataclass(frozen=True)
class HHLConfig:
    """Filter, clock and sampling settings for one experiment.

    t0 = c_t kappa / epsilon.  Build with :meth:`create`.
    """

    filter: FilterSpec
    pe: PhaseEstConfig
    epsilon: float
    c_t: float = DEFAULT_CT
    shots: int = 10_000
    seed: int = 0

    def __post_init__(self):
        if self.c_t < 1:
            raise ValueError(f"c_t={self.c_t} < 1")
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")

    @classmethod
    def create(
        cls,
        kappa: float,
        *,
        epsilon: float | None = None,
        t0: float | None = None,
        c_t: float = DEFAULT_CT,
        mode: str = "filtered",
        c_simple: float | None = None,
        T: int | None = None,
        shots: int = 10_000,
        seed: int = 0,
    ) -> "HHLConfig":
        """Either ``epsilon`` or ``t0`` fixes the other through t0 = c_t kappa / epsilon."""
        if t0 is None:
            epsilon = DEFAULT_EPSILON if epsilon is None else epsilon
            t0 = c_t * kappa / epsilon
        elif epsilon is None:
            epsilon = c_t * kappa / t0
        spec = FilterSpec(kappa=kappa, mode=mode, c_simple=c_simple)
        return cls(spec, PhaseEstConfig.for_t0(t0, T), float(epsilon), float(c_t), shots, seed)

    @property
    def kappa(self) -> float:
        return self.filter.kappa

    @property
    def t0(self) -> float:
        return self.pe.t0

    @property
    def T(self) -> int:
        return self.pe.T


def joint_layout(T: int, n: int) -> RegisterLayout:
    return RegisterLayout.of((CLOCK, T), (SYSTEM, n), (FLAG, 3))


def initial_state(b_state: QuantumState, T: int) -> QuantumState:
    """|0>_C |b> |nothing>."""
    b = b_state.amplitudes
    amps = np.zeros((T, b.size, 3), dtype=complex)
    amps[0, :, NOTHING] = b
    return QuantumState.from_tensor(joint_layout(T, b.size), amps)


def apply_u_invert(state: QuantumState, eig: EigenDecomposition, cfg: HHLConfig, *, flag_spec=None) -> QuantumState:
    """Apply U_invert to an arbitrary joint state.

    ``flag_spec`` is anything with an ``amplitudes(lam) -> (f, g)`` method;
    it defaults to the configured filter.
    """
    spec = flag_spec if flag_spec is not None else cfg.filter
    t0 = cfg.t0
    w = psi0_preparation_vector(state.layout.dim(CLOCK))
    ca = state.layout.axis(CLOCK)

    psi = QuantumState.from_tensor(state.layout, householder(state.tensor(), w, ca), state.normalized)
    psi = conditional_evolution(psi, None, t0, eig=eig)
    psi = inverse_qft(psi, CLOCK)
    psi = rotate_flag(psi, spec, t0)
    psi = qft(psi, CLOCK)
    psi = conditional_evolution(psi, None, t0, eig=eig, sign=-1)
    return QuantumState.from_tensor(psi.layout, householder(psi.tensor(), w, ca), psi.normalized)


# U_invert = P^dagger R P with R real symmetric, hence self-adjoint
apply_u_invert_inverse = apply_u_invert


def _prepare(a, b):
    a = as_hermitian(a)
    b_state = b if isinstance(b, QuantumState) else prepare_amplitudes(b)
    return a, b_state


def u_invert(b_state, a, cfg: HHLConfig, *, eig: EigenDecomposition | None = None, flag_spec=None) -> QuantumState:
    """U_invert |0>_C |b> |nothing> on the joint (clock, system, flag) space."""
    a, b_state = _prepare(a, b_state)
    eig = eig or eig_hermitian(a)
    return apply_u_invert(initial_state(b_state, cfg.T), eig, cfg, flag_spec=flag_spec)


def ideal_state(b_state: QuantumState, eig: EigenDecomposition, T: int, spec) -> QuantumState:
    """|0>_C sum_j beta_j |u_j> |h(lambda_j)>: what U_invert does with perfect phase estimation."""
    beta = eig.coefficients(b_state.amplitudes)
    h = flag_state(eig.eigenvalues, spec)
    amps = np.zeros((T, eig.dim, 3), dtype=complex)
    amps[0] = eig.eigenvectors @ (beta[:, None] * h)
    return QuantumState.from_tensor(joint_layout(T, eig.dim), amps)


def flag_weights(state: QuantumState) -> dict[str, float]:
    p = state.probabilities(FLAG)
    return {"nothing": float(p[NOTHING]), "well": float(p[WELL]), "ill": float(p[ILL])}


def postselect_well(state: QuantumState) -> tuple[QuantumState, float]:
    """Condition the joint state on flag = well; returns (state, p~) with p~ exact."""
    return postselect(state, FLAG, WELL)


def system_solution(joint: QuantumState) -> QuantumState:
    """System amplitudes at clock |0> and flag |well>, renormalized."""
    vec = reduce_to(joint, SYSTEM, **{CLOCK: 0, FLAG: WELL}).amplitudes
    if np.linalg.norm(vec) == 0.0:
        raise ZeroProbabilityError(0.0, "clock |0>, flag |well> branch")
    return prepare_amplitudes(vec)


def exact_solution(eig: EigenDecomposition, b, spec) -> np.ndarray:
    """sum_j f(lambda_j) beta_j |u_j>, unnormalized."""
    return eig.apply_function(lambda lam: spec.amplitudes(lam)[0], b)


def joint_distances(actual: QuantumState, ideal: QuantumState) -> dict[str, float]:
    """Joint-space distances for the three comparisons.

    claim1: no postselection; claim2: both postselected on span{well, ill};
    claim3: both postselected on well.  A comparison is NaN when the ideal
    branch has zero weight.
    """
    out = {"claim1": state_distance(actual, ideal)}
    for key, outcomes in (("claim2", [WELL, ILL]), ("claim3", WELL)):
        try:
            ideal_ps, _ = postselect(ideal, FLAG, outcomes)
            actual_ps, _ = postselect(actual, FLAG, outcomes)
        except ZeroProbabilityError:
            out[key] = float("nan")
            continue
        out[key] = state_distance(actual_ps, ideal_ps)
    return out


# ---------------------------------------------------------------------------
# amplitude amplification


def _state_preparation_reflection(b: np.ndarray):
    """(w, phase) with phase * (I - 2 w w^dagger / |w|^2) |0> = |b>."""
    b = np.asarray(b, dtype=complex)
    phase = b[0] / abs(b[0]) if abs(b[0]) > 0 else 1.0
    w = -b / phase
    w[0] += 1.0
    return w, phase


@dataclass
class AmplificationResult:
    state: QuantumState | None
    repetitions: int
    success: bool
    rounds: int
    p_estimate: float


class Amplifier:
    """Amplitude amplification of the well flag with the 1, 2, 4, 8, ... schedule.

    W = U_invert B maps |init> = |0>_C|0>_S|nothing> to the pipeline output.
    Each round restarts from W|init>, applies Q^m with
    Q = W R_init W^dagger R_succ and measures the flag.  A round runs only if
    its m still fits in the budget of 4 kappa applications of Q.

    Round states are deterministic, so they are computed once and cached;
    only the flag measurements consume randomness.
    """

    def __init__(self, a, b, cfg: HHLConfig, *, eig=None, budget: float | None = None):
        a, b_state = _prepare(a, b)
        self.cfg = cfg
        self.eig = eig or eig_hermitian(a)
        self.n = self.eig.dim
        self.budget = int(np.floor(4 * cfg.kappa if budget is None else budget))
        self._w, self._phase = _state_preparation_reflection(b_state.amplitudes)
        self.layout = joint_layout(cfg.T, self.n)
        self.start = self.W(self._init())
        self.p_tilde = float(self.start.probabilities(FLAG)[WELL])
        self._cache: dict[int, QuantumState] = {}

    def _init(self) -> QuantumState:
        amps = np.zeros((self.cfg.T, self.n, 3), dtype=complex)
        amps[0, 0, NOTHING] = 1.0
        return QuantumState.from_tensor(self.layout, amps)

    def _b(self, psi: QuantumState, adjoint: bool) -> QuantumState:
        ax = psi.layout.axis(SYSTEM)
        t = householder(psi.tensor(), self._w, ax)
        t = t * (np.conj(self._phase) if adjoint else self._phase)
        return QuantumState.from_tensor(psi.layout, t, psi.normalized)

    def W(self, psi: QuantumState) -> QuantumState:
        return apply_u_invert(self._b(psi, adjoint=False), self.eig, self.cfg)

    def W_dagger(self, psi: QuantumState) -> QuantumState:
        return self._b(apply_u_invert(psi, self.eig, self.cfg), adjoint=True)

    @staticmethod
    def r_succ(psi: QuantumState) -> QuantumState:
        """I - 2 |well><well| on the flag."""
        t = psi.tensor().copy()
        t[..., WELL] *= -1
        return QuantumState.from_tensor(psi.layout, t, psi.normalized)

    @staticmethod
    def r_init(psi: QuantumState) -> QuantumState:
        """I - 2 |init><init|."""
        t = psi.tensor().copy()
        t[0, 0, NOTHING] *= -1
        return QuantumState.from_tensor(psi.layout, t, psi.normalized)

    def grover(self, psi: QuantumState) -> QuantumState:
        return self.W(self.r_init(self.W_dagger(self.r_succ(psi))))

    def schedule(self) -> list[int]:
        ms, used, m = [], 0, 1
        while used + m <= self.budget:
            ms.append(m)
            used += m
            m *= 2
        return ms

    def round_state(self, m: int) -> QuantumState:
        """Q^m W |init>."""
        if m not in self._cache:
            done = [k for k in self._cache if k < m]
            k = max(done, default=0)
            psi = self._cache[k] if k else self.start
            for _ in range(m - k):
                psi = self.grover(psi)
            self._cache[m] = psi
        return self._cache[m]

    def round_probabilities(self) -> list[float]:
        return [float(self.round_state(m).probabilities(FLAG)[WELL]) for m in self.schedule()]

    def run(self, rng) -> AmplificationResult:
        rng = np.random.default_rng(rng)
        used = 0
        for r, m in enumerate(self.schedule(), start=1):
            psi = self.round_state(m)
            used += m
            p = float(psi.probabilities(FLAG)[WELL])
            if rng.random() < p:
                out, _ = postselect_well(psi)
                return AmplificationResult(out, used, True, r, self.p_tilde)
        return AmplificationResult(None, used, False, len(self.schedule()), self.p_tilde)


def amplitude_amplify(a, b, cfg: HHLConfig, rng, *, eig=None) -> AmplificationResult:
    return Amplifier(a, b, cfg, eig=eig).run(rng)


# ---------------------------------------------------------------------------
# drivers


@dataclass
class SolveReport:
    x_tilde: np.ndarray
    x_exact: np.ndarray
    distance: float
    system_distance: float
    claims: dict
    p_tilde: float
    p_exact: float
    repetitions: int
    amplified: bool
    amplification_success: bool | None
    ill_weight_estimate: float
    flag_weights: dict
    kappa: float
    t0: float
    T: int
    mode: str
    negative_spectrum: bool
    wall_time: float = 0.0
    extra: dict = field(default_factory=dict)

    def to_dict(self, timing: bool = True) -> dict:
        def vec(v):
            return [[float(z.real), float(z.imag)] for z in np.asarray(v).reshape(-1)]

        d = {
            "x_tilde": vec(self.x_tilde),
            "x_exact": vec(self.x_exact),
            "distance": self.distance,
            "system_distance": self.system_distance,
            "claims": self.claims,
            "p_tilde": self.p_tilde,
            "p_exact": self.p_exact,
            "repetitions": self.repetitions,
            "amplified": self.amplified,
            "amplification_success": self.amplification_success,
            "ill_weight_estimate": self.ill_weight_estimate,
            "flag_weights": self.flag_weights,
            "kappa": self.kappa,
            "t0": self.t0,
            "T": self.T,
            "mode": self.mode,
            "negative_spectrum": self.negative_spectrum,
        }
        d.update(self.extra)
        if timing:
            d["wall_time"] = self.wall_time
        return d


def solve(a, b, cfg: HHLConfig, *, amplify: bool = True, eig=None, flag_spec=None) -> SolveReport:
    """Run the pipeline and compare with the filtered exact solution.

    ``distance`` is the joint-space distance after postselecting on well
    (claim 3), ``system_distance`` compares the clock-|0> system branch
    with |x>.  With ``amplify`` the geometric schedule is also simulated
    (seeded by ``cfg.seed``) to count repetitions.
    """
    start = time.perf_counter()
    a, b_state = _prepare(a, b)
    eig = eig or eig_hermitian(a)
    spec = flag_spec if flag_spec is not None else cfg.filter
    if np.min(np.abs(eig.eigenvalues)) == 0.0 and getattr(spec, "mode", None) == "simple":
        raise SingularMatrixError(0.0, "singular matrix needs filtered mode to flag the null space")

    joint = apply_u_invert(initial_state(b_state, cfg.T), eig, cfg, flag_spec=spec)
    ideal = ideal_state(b_state, eig, cfg.T, spec)
    claims = joint_distances(joint, ideal)
    weights = flag_weights(joint)
    p_tilde = weights["well"]
    if p_tilde <= 0.0:
        raise ZeroProbabilityError(p_tilde, "flag outcome 'well'")
    beta = eig.coefficients(b_state.amplitudes)
    f_exact, _ = spec.amplitudes(eig.eigenvalues)
    p_exact = float(np.sum(np.abs(beta) ** 2 * f_exact**2))

    x_exact_vec = exact_solution(eig, b_state.amplitudes, spec)
    if np.linalg.norm(x_exact_vec) == 0.0:
        raise ZeroProbabilityError(0.0, "exact filtered solution")
    x_exact = x_exact_vec / np.linalg.norm(x_exact_vec)
    x_tilde = system_solution(joint).amplitudes
    sys_dist = state_distance(prepare_amplitudes(x_tilde), prepare_amplitudes(x_exact))

    reps, amp_ok = 0, None
    if amplify:
        res = Amplifier(a, b_state, cfg, eig=eig).run(cfg.seed)
        reps, amp_ok = res.repetitions, res.success

    return SolveReport(
        x_tilde=x_tilde,
        x_exact=x_exact,
        distance=claims["claim3"],
        system_distance=sys_dist,
        claims=claims,
        p_tilde=p_tilde,
        p_exact=p_exact,
        repetitions=reps,
        amplified=amplify,
        amplification_success=amp_ok,
        ill_weight_estimate=4.0 * weights["ill"],
        flag_weights=weights,
        kappa=cfg.kappa,
        t0=cfg.t0,
        T=cfg.T,
        mode=getattr(spec, "mode", "custom"),
        negative_spectrum=bool(np.any(eig.eigenvalues < 0)),
        wall_time=time.perf_counter() - start,
    )


@dataclass
class IllProfile:
    state: QuantumState
    weights: dict
    ideal_weights: dict


def ill_conditioned_profile(a, b, cfg: HHLConfig, *, eig=None) -> IllProfile:
    """Non-postselected pipeline output with its flag weights (simulated and ideal)."""
    a, b_state = _prepare(a, b)
    eig = eig or eig_hermitian(a)
    joint = apply_u_invert(initial_state(b_state, cfg.T), eig, cfg)
    ideal = ideal_state(b_state, eig, cfg.T, cfg.filter)
    return IllProfile(joint, flag_weights(joint), flag_weights(ideal))


def general_exact_solution(a, b, kappa: float) -> np.ndarray:
    """Lower block of the filtered inverse of [[0, A], [A^dagger, 0]] applied to (b, 0), normalized."""
    a = np.atleast_2d(np.asarray(a, dtype=complex))
    m, _ = a.shape
    a_unit = a / singular_values(a)[0]
    h = hermitian_embed(a_unit)
    rhs = np.concatenate([np.asarray(b, dtype=complex).reshape(-1), np.zeros(a.shape[1], complex)])
    spec = FilterSpec(kappa)
    x = exact_solution(eig_hermitian(h), rhs, spec)[m:]
    nrm = np.linalg.norm(x)
    if nrm == 0.0:
        raise ZeroProbabilityError(0.0, "well-conditioned part of b")
    return x / nrm


def solve_general(a, b, cfg: HHLConfig, *, amplify: bool = False) -> SolveReport:
    """Solve A x = b for an M x N matrix through the Hermitian embedding.

    A is rescaled to unit spectral norm (directions are unaffected).  The
    embedded right-hand side is (b, 0); the answer is the lower N-block.
    Components of b outside the column space land on zero eigenvalues of the
    embedding and are flagged ill, so ``ill_weight_estimate`` measures their
    squared norm.
    """
    if cfg.filter.mode != "filtered":
        raise FilterSpecError("solve_general needs filtered mode to flag the null space")
    a = np.atleast_2d(np.asarray(a, dtype=complex))
    m, n = a.shape
    b = np.asarray(b, dtype=complex).reshape(-1)
    if b.size != m:
        raise HHLError(f"right-hand side has length {b.size}, matrix has {m} rows")
    scale = singular_values(a)[0]
    if scale == 0.0:
        raise SingularMatrixError(0.0, "zero matrix")
    h = hermitian_embed(a / scale)
    rhs = np.concatenate([b, np.zeros(n, complex)])
    rep = solve(h, rhs, cfg, amplify=amplify)
    lower_tilde = rep.x_tilde[m:]
    lower_exact = rep.x_exact[m:]
    rep.x_tilde = lower_tilde / np.linalg.norm(lower_tilde)
    rep.x_exact = lower_exact / np.linalg.norm(lower_exact)
    rep.system_distance = state_distance(prepare_amplitudes(rep.x_tilde), prepare_amplitudes(rep.x_exact))
    rep.extra = {"shape": [m, n], "scale": float(scale)}
    return rep


__all__ = [
    "HHLConfig",
    "SolveReport",
    "Amplifier",
    "AmplificationResult",
    "IllProfile",
    "initial_state",
    "apply_u_invert",
    "apply_u_invert_inverse",
    "u_invert",
    "ideal_state",
    "flag_weights",
    "postselect_well",
    "system_solution",
    "exact_solution",
    "joint_distances",
    "amplitude_amplify",
    "solve",
    "ill_conditioned_profile",
    "general_exact_solution",
    "solve_general",
]
