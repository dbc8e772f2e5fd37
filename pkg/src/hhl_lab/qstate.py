"""Statevectors over named registers.

Amplitudes live in one flat array; the first register of the layout varies
slowest, so ``state.tensor()`` has one axis per register in layout order.
All operations return new states.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import LayoutError, ZeroProbabilityError

NORM_TOL = 1e-9


@dataclass(frozen=True)
class RegisterLayout:
    registers: tuple[tuple[str, int], ...]

    def __post_init__(self):
        regs = tuple((str(name), int(dim)) for name, dim in self.registers)
        object.__setattr__(self, "registers", regs)
        names = [name for name, _ in regs]
        if not regs:
            raise LayoutError("layout needs at least one register")
        if len(set(names)) != len(names):
            raise LayoutError(f"duplicate register names in {names}")
        for name, dim in regs:
            if dim < 2:
                raise LayoutError(f"register {name!r} has dimension {dim} < 2")

    @classmethod
    def of(cls, *registers) -> "RegisterLayout":
        return cls(tuple(registers))

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.registers)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(dim for _, dim in self.registers)

    @property
    def size(self) -> int:
        return int(np.prod(self.shape))

    def axis(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise LayoutError(f"no register named {name!r} in {self.names}") from None

    def dim(self, name: str) -> int:
        return self.shape[self.axis(name)]

    def header(self) -> str:
        return ",".join(f"{name}:{dim}" for name, dim in self.registers)

    @classmethod
    def parse(cls, text: str) -> "RegisterLayout":
        regs = []
        for item in text.strip().split(","):
            name, _, dim = item.partition(":")
            regs.append((name.strip(), int(dim)))
        return cls(tuple(regs))

    def __add__(self, other: "RegisterLayout") -> "RegisterLayout":
        return RegisterLayout(self.registers + other.registers)


@dataclass(frozen=True, eq=False)
class QuantumState:
    """Complex amplitudes over ``layout``.

    ``normalized=False`` marks sub-normalized branches (projections that were
    not renormalized); otherwise the 2-norm must be 1 within 1e-9.
    """

    layout: RegisterLayout
    amplitudes: np.ndarray
    normalized: bool = True

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size != self.layout.size:
            raise LayoutError(
                f"{amps.size} amplitudes do not match layout {self.layout.header()}"
            )
        if self.normalized and abs(np.linalg.norm(amps) - 1.0) > NORM_TOL:
            raise ValueError(f"state norm {np.linalg.norm(amps):.12g} != 1")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_tensor(cls, layout: RegisterLayout, tensor, normalized: bool = True) -> "QuantumState":
        return cls(layout, np.asarray(tensor).reshape(-1), normalized)

    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape(self.layout.shape)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def renormalized(self) -> "QuantumState":
        n = self.norm
        if n == 0.0:
            raise ZeroProbabilityError(0.0, "state")
        return QuantumState(self.layout, self.amplitudes / n)

    def probabilities(self, register: str) -> np.ndarray:
        """Marginal outcome distribution of one register."""
        ax = self.layout.axis(register)
        p = np.abs(self.tensor()) ** 2
        other = tuple(i for i in range(p.ndim) if i != ax)
        return p.sum(axis=other)

    def apply(self, register: str, matrix) -> "QuantumState":
        """Apply a (square) matrix to one register."""
        ax = self.layout.axis(register)
        matrix = np.asarray(matrix, dtype=complex)
        d = self.layout.shape[ax]
        if matrix.shape != (d, d):
            raise LayoutError(f"matrix shape {matrix.shape} does not fit register {register!r} ({d})")
        t = np.moveaxis(self.tensor(), ax, 0)
        t = np.tensordot(matrix, t, axes=([1], [0]))
        return QuantumState.from_tensor(self.layout, np.moveaxis(t, 0, ax), self.normalized)

    def inner(self, other: "QuantumState") -> complex:
        if self.layout != other.layout:
            raise LayoutError(f"layout mismatch: {self.layout.header()} vs {other.layout.header()}")
        return complex(np.vdot(self.amplitudes, other.amplitudes))


def tensor_product(*states: QuantumState) -> QuantumState:
    layout = states[0].layout
    amps = states[0].amplitudes
    for s in states[1:]:
        layout = layout + s.layout
        amps = np.kron(amps, s.amplitudes)
    return QuantumState(layout, amps, all(s.normalized for s in states))


def prepare_amplitudes(v, name: str = "system") -> QuantumState:
    """Load a nonzero vector as a normalized state on a single register."""
    v = np.asarray(v, dtype=complex).reshape(-1)
    n = np.linalg.norm(v)
    if n == 0.0 or not np.isfinite(n):
        raise ZeroProbabilityError(0.0, "input vector")
    return QuantumState(RegisterLayout.of((name, v.size)), v / n)


def basis_state(layout: RegisterLayout, **indices: int) -> QuantumState:
    """|i_1>|i_2>...; registers not named are left in |0>."""
    idx = tuple(indices.get(name, 0) for name in layout.names)
    amps = np.zeros(layout.shape, dtype=complex)
    amps[idx] = 1.0
    return QuantumState.from_tensor(layout, amps)


def qft_matrix(dim: int) -> np.ndarray:
    """F[k, tau] = exp(+2 pi i k tau / dim) / sqrt(dim)."""
    k = np.arange(dim)
    return np.exp(2j * np.pi * np.outer(k, k) / dim) / np.sqrt(dim)


def qft(state: QuantumState, register: str) -> QuantumState:
    """a_k <- dim^{-1/2} sum_tau exp(+2 pi i k tau / dim) a_tau on ``register``."""
    ax = state.layout.axis(register)
    t = np.fft.ifft(state.tensor(), axis=ax, norm="ortho")
    return QuantumState.from_tensor(state.layout, t, state.normalized)


def inverse_qft(state: QuantumState, register: str) -> QuantumState:
    ax = state.layout.axis(register)
    t = np.fft.fft(state.tensor(), axis=ax, norm="ortho")
    return QuantumState.from_tensor(state.layout, t, state.normalized)


def project(state: QuantumState, register: str, outcomes) -> QuantumState:
    """Zero every amplitude whose ``register`` index is not in ``outcomes`` (unnormalized)."""
    ax = state.layout.axis(register)
    keep = np.zeros(state.layout.shape[ax], dtype=bool)
    keep[np.atleast_1d(outcomes)] = True
    mask_shape = [1] * len(state.layout.shape)
    mask_shape[ax] = -1
    t = state.tensor() * keep.reshape(mask_shape)
    return QuantumState.from_tensor(state.layout, t, normalized=False)


def postselect(state: QuantumState, register: str, outcome) -> tuple[QuantumState, float]:
    """Condition on ``register`` taking ``outcome`` (an index or a collection of indices).

    Returns the renormalized state and the outcome probability.
    """
    proj = project(state, register, outcome)
    p = proj.norm ** 2
    if state.normalized is False:
        p /= state.norm ** 2
    if p <= 0.0:
        raise ZeroProbabilityError(p)
    return proj.renormalized(), float(p)


def reduce_to(state: QuantumState, register: str, **fixed: int) -> QuantumState:
    """Slice out ``register`` with every other register fixed at the given index (default 0).

    The result is the unnormalized conditional amplitude vector on one register.
    """
    idx = []
    for name in state.layout.names:
        if name == register:
            idx.append(slice(None))
        else:
            idx.append(fixed.get(name, 0))
    vec = state.tensor()[tuple(idx)]
    return QuantumState(RegisterLayout.of((register, state.layout.dim(register))), vec, normalized=False)


def sample_counts(state: QuantumState, register: str, shots: int, rng) -> np.ndarray:
    """Outcome counts of ``shots`` measurements of ``register``."""
    rng = np.random.default_rng(rng)
    p = state.probabilities(register)
    p = p / p.sum()
    return rng.multinomial(shots, p)


def sample_measure(state: QuantumState, register: str, rng) -> int:
    """One measurement outcome; ``rng`` is a seed or a Generator."""
    rng = np.random.default_rng(rng)
    p = state.probabilities(register)
    return int(rng.choice(p.size, p=p / p.sum()))


def sample_outcomes(state: QuantumState, register: str, shots: int, rng) -> np.ndarray:
    rng = np.random.default_rng(rng)
    p = state.probabilities(register)
    return rng.choice(p.size, size=shots, p=p / p.sum())


def state_distance(a: QuantumState, b: QuantumState) -> float:
    """sqrt(2 (1 - Re <a|b>)), the Euclidean distance between unit vectors."""
    re = a.inner(b).real
    return float(np.sqrt(max(0.0, 2.0 * (1.0 - re))))


def dump_state(state: QuantumState) -> str:
    lines = [state.layout.header()]
    lines += [f"{z.real:.17g} {z.imag:.17g}" for z in state.amplitudes]
    return "\n".join(lines) + "\n"


def load_state(text: str, path: str | None = None) -> QuantumState:
    from .fileio import parse_state_dump

    return parse_state_dump(text, path)
