"""Circuit simulation by matrix inversion.

A T-gate circuit on n qubits becomes the 3T 2^n dimensional unitary

    U = sum_t |t+1><t| (x) U_t  +  |t+T+1><t+T| (x) I  +  |t+2T+1 mod 3T><t+2T| (x) U_{T+1-t}^dagger

(t = 1..T), which runs the circuit, idles, then runs it backwards.  Time
labels t = 1..3T are stored at indices 0..3T-1; the time register is the
slow index, then the n qubits with qubit 0 most significant.

Inverting A = I - U e^{-1/T} applies U^k for a geometrically distributed k,
so the time register lands in the idle window [T+1, 2T] with probability
e^-2 / (1 + e^-2 + e^-4), leaving the circuit output in the system.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import HHLError

UNITARY_TOL = 1e-10
SERIES_TERMS_PER_T = 60

_S2 = 1 / np.sqrt(2)
NAMED_GATES = {
    "I": np.eye(2),
    "H": np.array([[_S2, _S2], [_S2, -_S2]]),
    "X": np.array([[0, 1], [1, 0]]),
    "Y": np.array([[0, -1j], [1j, 0]]),
    "Z": np.diag([1, -1]),
    "S": np.diag([1, 1j]),
    "T": np.diag([1, np.exp(1j * np.pi / 4)]),
    "CNOT": np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]]),
    "CZ": np.diag([1, 1, 1, -1]),
    "SWAP": np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]]),
}


@dataclass(frozen=True, eq=False)
class Gate:
    """A one- or two-qubit unitary; for two wires the first is the more significant."""

    wires: tuple
    matrix: np.ndarray

    def __post_init__(self):
        wires = tuple(int(w) for w in self.wires)
        m = np.asarray(self.matrix, dtype=complex)
        d = 2 ** len(wires)
        if len(wires) not in (1, 2) or len(set(wires)) != len(wires):
            raise HHLError(f"gate needs one or two distinct wires, got {wires}")
        if m.shape != (d, d):
            raise HHLError(f"gate on {len(wires)} wire(s) needs a {d}x{d} matrix, got {m.shape}")
        if np.max(np.abs(m.conj().T @ m - np.eye(d))) > UNITARY_TOL:
            raise HHLError("gate matrix is not unitary")
        object.__setattr__(self, "wires", wires)
        object.__setattr__(self, "matrix", m)


def named_gate(name: str, wires) -> Gate:
    key = name.upper()
    if key not in NAMED_GATES:
        raise KeyError(f"unknown gate {name!r}; known: {', '.join(NAMED_GATES)}")
    return Gate(tuple(wires), NAMED_GATES[key])


def apply_gate(psi: np.ndarray, gate: Gate, n: int) -> np.ndarray:
    """Apply ``gate`` to the leading 2^n axis of ``psi`` (extra trailing axes allowed)."""
    rest = psi.shape[1:]
    t = psi.reshape((2,) * n + rest)
    k = len(gate.wires)
    g = gate.matrix.reshape((2,) * (2 * k))
    t = np.tensordot(g, t, axes=(list(range(k, 2 * k)), list(gate.wires)))
    t = np.moveaxis(t, list(range(k)), list(gate.wires))
    return t.reshape((2**n,) + rest)


@dataclass(frozen=True, eq=False)
class ClockCircuit:
    n: int
    gates: tuple

    def __post_init__(self):
        if self.n < 1:
            raise HHLError("circuit needs at least one qubit")
        if len(self.gates) < 1:
            raise HHLError("circuit needs at least one gate")
        for g in self.gates:
            if max(g.wires) >= self.n:
                raise HHLError(f"gate wires {g.wires} out of range for n={self.n}")
        object.__setattr__(self, "gates", tuple(self.gates))

    @property
    def T(self) -> int:
        return len(self.gates)

    @property
    def dim(self) -> int:
        return 2**self.n

    def gate_matrix(self, k: int) -> np.ndarray:
        """Full 2^n x 2^n matrix of gate ``k`` (0-based)."""
        return apply_gate(np.eye(self.dim, dtype=complex), self.gates[k], self.n)

    def run(self, psi=None, upto: int | None = None) -> np.ndarray:
        """U_upto ... U_1 |psi>, default |0^n> and all gates."""
        if psi is None:
            psi = np.zeros(self.dim, dtype=complex)
            psi[0] = 1.0
        psi = np.asarray(psi, dtype=complex)
        for g in self.gates[: self.T if upto is None else upto]:
            psi = apply_gate(psi, g, self.n)
        return psi

    def first_qubit_probabilities(self) -> np.ndarray:
        out = self.run()
        p = np.abs(out.reshape(2, -1)) ** 2
        return p.sum(axis=1)

    @classmethod
    def random(cls, n: int, T: int, rng) -> "ClockCircuit":
        """Haar-ish random gates on random wires (two-qubit when n >= 2)."""
        from scipy.stats import unitary_group

        rng = np.random.default_rng(rng)
        gates = []
        for _ in range(T):
            k = 2 if n >= 2 else 1
            wires = tuple(int(w) for w in rng.choice(n, size=k, replace=False))
            gates.append(Gate(wires, unitary_group.rvs(2**k, random_state=rng)))
        return cls(n, tuple(gates))


def build_clock_unitary(circ: ClockCircuit) -> np.ndarray:
    T, d = circ.T, circ.dim
    U = np.zeros((3 * T * d, 3 * T * d), dtype=complex)

    def put(t_to, t_from, block):
        # t labels are 1-based; index = t - 1
        i, j = ((t_to - 1) % (3 * T)) * d, (t_from - 1) * d
        U[i : i + d, j : j + d] = block

    eye = np.eye(d)
    for t in range(1, T + 1):
        g = circ.gate_matrix(t - 1)
        put(t + 1, t, g)
        put(t + T + 1, t + T, eye)
        put(t + 2 * T + 1, t + 2 * T, circ.gate_matrix(T - t).conj().T)
    return U


@dataclass(frozen=True, eq=False)
class ClockMatrices:
    """U, A_inv = I - U e^{-1/T}, and A_herm = [[0, A_inv], [A_inv^dagger, 0]]."""

    circuit: ClockCircuit
    U: np.ndarray
    A_inv: np.ndarray
    A_herm: np.ndarray

    @property
    def T(self) -> int:
        return self.circuit.T

    def rhs(self) -> np.ndarray:
        """|t=1>|0^n> on the clock space."""
        b = np.zeros(self.U.shape[0], dtype=complex)
        b[0] = 1.0
        return b


def build_inversion_matrix(circ: ClockCircuit) -> ClockMatrices:
    U = build_clock_unitary(circ)
    dim = U.shape[0]
    a_inv = np.eye(dim) - U * np.exp(-1.0 / circ.T)
    a_herm = np.zeros((2 * dim, 2 * dim), dtype=complex)
    a_herm[:dim, dim:] = a_inv
    a_herm[dim:, :dim] = a_inv.conj().T
    return ClockMatrices(circ, U, a_inv, a_herm)


def series_inverse(U: np.ndarray, T: int, terms: int | None = None) -> np.ndarray:
    """sum_{k=0}^{K} U^k e^{-k/T} with K = 60 T by default."""
    K = SERIES_TERMS_PER_T * T if terms is None else terms
    out = np.eye(U.shape[0], dtype=complex)
    step = U * np.exp(-1.0 / T)
    term = np.eye(U.shape[0], dtype=complex)
    for _ in range(K):
        term = term @ step
        out += term
    return out


def window_probability(T: int | None = None) -> float:
    """e^-2 / (1 + e^-2 + e^-4): chance the time register lands in [T+1, 2T]."""
    return math.exp(-2) / (1 + math.exp(-2) + math.exp(-4))


def solve_clock(mats: ClockMatrices) -> np.ndarray:
    """x with A_herm (0, x) = (b, 0), i.e. x = (I - U e^{-1/T})^{-1} |1>|0^n>, normalized."""
    dim = mats.U.shape[0]
    rhs = np.concatenate([mats.rhs(), np.zeros(dim, complex)])
    y = np.linalg.solve(mats.A_herm, rhs)
    x = y[dim:]
    return x / np.linalg.norm(x)


def m0_accepting_mask(T: int, n: int) -> np.ndarray:
    """Basis states (t, q) where M_0 outputs 0: t in [T+1, 2T] and qubit 0 reads |0>."""
    d = 2**n
    t = np.repeat(np.arange(1, 3 * T + 1), d)
    q0 = (np.tile(np.arange(d), 3 * T) >> (n - 1)) & 1
    return (t >= T + 1) & (t <= 2 * T) & (q0 == 0)


@dataclass
class InversionStats:
    window_probability: float
    window_probability_exact: float
    fidelity: float
    m0_zero_probability: float
    m0_zero_expected: float
    circuit_first_qubit_zero: float
    shots: int
    m0_zero_count: int

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def simulate_via_inversion(circ: ClockCircuit, shots: int = 10_000, rng=0) -> InversionStats:
    """Solve the clock system and read the circuit output off the time window."""
    T, n, d = circ.T, circ.n, circ.dim
    mats = build_inversion_matrix(circ)
    x = solve_clock(mats).reshape(3 * T, d)
    p_t = np.sum(np.abs(x) ** 2, axis=1)
    window = x[T : 2 * T]
    p_window = float(p_t[T : 2 * T].sum())
    target = circ.run()
    # every slice of the window holds the same conditional state
    cond = window.sum(axis=0)
    cond = cond / np.linalg.norm(cond)
    fidelity = float(abs(np.vdot(target, cond)) ** 2)

    mask = m0_accepting_mask(T, n)
    probs = np.abs(x.reshape(-1)) ** 2
    p_m0 = float(probs[mask].sum())
    p_first = float(circ.first_qubit_probabilities()[0])
    rng = np.random.default_rng(rng)
    count = int(rng.binomial(shots, min(1.0, p_m0))) if shots else 0
    return InversionStats(
        window_probability=p_window,
        window_probability_exact=window_probability(),
        fidelity=fidelity,
        m0_zero_probability=p_m0,
        m0_zero_expected=window_probability() * p_first,
        circuit_first_qubit_zero=p_first,
        shots=shots,
        m0_zero_count=count,
    )


@dataclass(frozen=True, eq=False)
class FirstQubitEmbedding:
    """B = diag(I_{6T2^n}, I - U e^{-1/T}), its permuted form B~ and C = [[0, B~], [B~^dagger, 0]].

    ``perm[i]`` is the index in B of row/column ``i`` of B~.  The permutation
    lists M_0-accepting clock states first, then the identity padding, then
    the rejecting clock states, so that on the solution |y> the designated
    qubit (the most significant bit of the solution-block index, i.e. the
    lower or upper half) reads 0 exactly when M_0 outputs 0.
    """

    B: np.ndarray
    B_tilde: np.ndarray
    C: np.ndarray
    perm: np.ndarray
    rhs: np.ndarray

    @property
    def dim(self) -> int:
        return self.C.shape[0]


def build_first_qubit_embedding(circ: ClockCircuit) -> FirstQubitEmbedding:
    T, n, d = circ.T, circ.n, circ.dim
    mats = build_inversion_matrix(circ)
    pad = 6 * T * d
    xdim = 3 * T * d
    full = pad + xdim
    B = np.eye(full, dtype=complex)
    B[pad:, pad:] = mats.A_inv
    mask = m0_accepting_mask(T, n)
    accept = pad + np.flatnonzero(mask)
    reject = pad + np.flatnonzero(~mask)
    half = full // 2
    if accept.size > half or reject.size > full - half:
        raise HHLError("accepting or rejecting states do not fit their half")
    perm = np.concatenate([accept, np.arange(pad), reject])
    B_tilde = B[np.ix_(perm, perm)]
    C = np.zeros((2 * full, 2 * full), dtype=complex)
    C[:full, full:] = B_tilde
    C[full:, :full] = B_tilde.conj().T
    b = np.zeros(full, dtype=complex)
    b[pad] = 1.0  # |t=1>|0^n> inside the X block
    rhs = np.concatenate([b[perm], np.zeros(full, complex)])
    return FirstQubitEmbedding(B, B_tilde, C, perm, rhs)


def designated_qubit_zero_probability(emb: FirstQubitEmbedding) -> float:
    """P(designated qubit = 0) for the exact solution of C y = (b~, 0)."""
    full = emb.B.shape[0]
    y = np.linalg.solve(emb.C, emb.rhs)[full:]
    p = np.abs(y) ** 2
    return float(p[: full // 2].sum() / p.sum())


def iterated_log2(x: float) -> int:
    """log* base 2: how many times log2 must be applied before the value is <= 1."""
    k = 0
    while x > 1.0:
        x = math.log2(x)
        k += 1
    return k


def hamiltonian_sim_cost(N: float, s: float, t0: float, eps_H: float) -> float:
    """log N (log* N)^2 s^2 t0 9^{sqrt(log(s^2 t0 / eps_H))}, logs base 2."""
    if min(N, s, t0, eps_H) <= 0:
        raise HHLError("cost model arguments must be positive")
    ratio = s * s * t0 / eps_H
    if ratio <= 1.0:
        raise HHLError(f"eps_H={eps_H:g} >= s^2 t0={s * s * t0:g}: cost model undefined")
    return math.log2(N) * iterated_log2(N) ** 2 * s * s * t0 * 9.0 ** math.sqrt(math.log2(ratio))
