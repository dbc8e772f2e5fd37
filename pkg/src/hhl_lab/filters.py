"""Filter functions and the three-level flag rotation.

``filtered`` mode: for |lambda| >= 1/kappa, f = sign(lambda) / (2 kappa |lambda|);
on (1/kappa', 1/kappa) a half-sine/half-cosine interpolation; below 1/kappa',
g = 1/2.  kappa' = 2 kappa.

``simple`` mode: f = C / lambda, g = 0, with a linear ramp f = lambda / C
for |lambda| < C so the amplitude never exceeds 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import FilterSpecError, LayoutError
from .phase_estimation import CLOCK, eigenvalue_grid

FLAG = "flag"
NOTHING, WELL, ILL = 0, 1, 2
FLAG_LABELS = ("nothing", "well", "ill")

LIPSCHITZ_CONST = np.pi / 2
SMOOTHNESS_CONST = np.pi**2 / 2


@dataclass(frozen=True)
class FilterSpec:
    kappa: float
    mode: str = "filtered"
    c_simple: float | None = None

    def __post_init__(self):
        if self.kappa < 1:
            raise FilterSpecError(f"kappa={self.kappa} < 1")
        if self.mode not in ("filtered", "simple"):
            raise FilterSpecError(f"unknown filter mode {self.mode!r}")
        if self.mode == "simple":
            c = self.constant
            if not 0 < c <= 1.0 / self.kappa + 1e-15:
                raise FilterSpecError(f"simple-mode constant {c} outside (0, 1/kappa]")

    @property
    def kappa_prime(self) -> float:
        return 2.0 * self.kappa

    @property
    def constant(self) -> float:
        """Rotation constant of simple mode (defaults to 1 / (2 kappa))."""
        return self.c_simple if self.c_simple is not None else 1.0 / (2.0 * self.kappa)

    def amplitudes(self, lam):
        """(f(lambda), g(lambda)) as float arrays."""
        lam = np.asarray(lam, dtype=float)
        if self.mode == "simple":
            return _simple(lam, self.constant), np.zeros_like(lam)
        return _filtered(lam, self.kappa, self.kappa_prime)


def _filtered(lam, kappa, kappa_prime):
    mag = np.abs(lam)
    sgn = np.where(lam < 0, -1.0, 1.0)
    lo, hi = 1.0 / kappa_prime, 1.0 / kappa
    theta = 0.5 * np.pi * (mag - lo) / (hi - lo)
    with np.errstate(divide="ignore"):
        inv = 1.0 / (2.0 * kappa * mag)
    f = np.where(mag >= hi, inv, np.where(mag >= lo, 0.5 * np.sin(theta), 0.0))
    g = np.where(mag >= hi, 0.0, np.where(mag >= lo, 0.5 * np.cos(theta), 0.5))
    return sgn * f, g


def _simple(lam, c):
    mag = np.abs(lam)
    with np.errstate(divide="ignore", invalid="ignore"):
        f = np.where(mag >= c, c / lam, lam / c)
    return f


def f_filter(lam, spec: FilterSpec):
    f, _ = spec.amplitudes(lam)
    return float(f) if np.ndim(lam) == 0 else f


def g_filter(lam, spec: FilterSpec):
    _, g = spec.amplitudes(lam)
    return float(g) if np.ndim(lam) == 0 else g


def flag_state(lam, spec) -> np.ndarray:
    """|h(lambda)> = (sqrt(1 - f^2 - g^2), f, g) over (nothing, well, ill)."""
    f, g = spec.amplitudes(lam)
    rest = 1.0 - f**2 - g**2
    if np.any(rest < -1e-12):
        raise FilterSpecError(f"f^2 + g^2 exceeds 1 (min slack {np.min(rest):.3e})")
    return np.stack([np.sqrt(np.clip(rest, 0.0, None)), f, g], axis=-1)


def flag_rotations(lam, spec) -> np.ndarray:
    """Real orthogonal 3x3 maps R with R|nothing> = |h(lambda)>, shape (..., 3, 3).

    Each R is a Householder reflection, so R^T = R = R^-1.
    """
    h = flag_state(lam, spec)
    w = -h
    w[..., 0] += 1.0
    ww = np.einsum("...i,...i->...", w, w)
    safe = np.where(ww > 0, ww, 1.0)
    r = np.eye(3) - 2.0 * np.einsum("...i,...j->...ij", w, w) / safe[..., None, None]
    return np.where((ww > 0)[..., None, None], r, np.eye(3))


def rotate_flag(state, spec, t0: float, *, clock: str = CLOCK, flag: str = FLAG):
    """Rotate the flag register conditioned on the clock label lambda~_k = 2 pi k / t0."""
    from .qstate import QuantumState

    layout = state.layout
    if flag not in layout.names or clock not in layout.names:
        raise LayoutError(f"rotate_flag needs registers {clock!r} and {flag!r}")
    if layout.dim(flag) != 3:
        raise LayoutError("flag register must be 3-dimensional")
    ca, fa = layout.axis(clock), layout.axis(flag)
    rot = flag_rotations(eigenvalue_grid(layout.dim(clock), t0), spec)
    t = np.moveaxis(state.tensor(), (ca, fa), (0, -1))
    t = np.einsum("kij,k...j->k...i", rot, t)
    t = np.moveaxis(t, (0, -1), (ca, fa))
    return QuantumState.from_tensor(layout, t, state.normalized)


def flag_distance(lam1, lam2, spec):
    return np.linalg.norm(flag_state(lam1, spec) - flag_state(lam2, spec), axis=-1)


def lipschitz_margin(lam1, lam2, spec, c: float = LIPSCHITZ_CONST):
    """c kappa |lam1 - lam2| - || h(lam1) - h(lam2) ||; nonnegative where the bound holds."""
    return c * spec.kappa * np.abs(np.asarray(lam1) - np.asarray(lam2)) - flag_distance(lam1, lam2, spec)


def smoothness_slack(lam, delta, t0, spec, c: float = SMOOTHNESS_CONST):
    """RHS - LHS of |f - f~|^2 + |g - g~|^2 <= c (kappa/t0)^2 delta^2 (f^2 + g^2),
    where f~ = f(lam - delta / t0)."""
    lam = np.asarray(lam, dtype=float)
    delta = np.asarray(delta, dtype=float)
    f, g = spec.amplitudes(lam)
    ft, gt = spec.amplitudes(lam - delta / t0)
    lhs = (f - ft) ** 2 + (g - gt) ** 2
    rhs = c * (spec.kappa / t0) ** 2 * delta**2 * (f**2 + g**2)
    return rhs - lhs


def smoothness_ratio(lam, delta, t0, spec):
    """LHS / ((kappa/t0)^2 delta^2 (f^2 + g^2)): the smallest constant that works at the point."""
    lam = np.asarray(lam, dtype=float)
    delta = np.asarray(delta, dtype=float)
    f, g = spec.amplitudes(lam)
    ft, gt = spec.amplitudes(lam - delta / t0)
    lhs = (f - ft) ** 2 + (g - gt) ** 2
    den = (spec.kappa / t0) ** 2 * delta**2 * (f**2 + g**2)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(den > 0, lhs / den, np.where(lhs > 0, np.inf, 0.0))
