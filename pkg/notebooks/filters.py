"""
Filter functions
================

f carries 1/(2 kappa lambda) on the well-conditioned part of the spectrum
and g flags the rest.  Between 1/(2 kappa) and 1/kappa the two trade off
along a quarter circle.
"""

import numpy as np

from hhl_lab.filters import FilterSpec, smoothness_ratio, lipschitz_margin

spec = FilterSpec(10)
for lam in (0.0, 0.04, 0.05, 0.075, 0.1, 0.2, 0.5, 1.0, -0.5):
    f, g = spec.amplitudes(np.array(lam))
    print(f"lambda={lam:6.3f}  f={f:.4f}  g={g:.4f}  f^2+g^2={f * f + g * g:.4f}")

# the flag map is (pi/2) kappa Lipschitz
lam = np.random.default_rng(1).uniform(-1, 1, size=(2, 10_000))
print("min Lipschitz margin:", lipschitz_margin(lam[0], lam[1], spec).min())

# worst constant in the smoothness estimate over a grid
l, d = np.meshgrid(np.linspace(0, 1, 801), np.linspace(-2 * np.pi, 2 * np.pi, 200))
print("sup ratio on grid:", smoothness_ratio(l, d, 200.0, spec).max(), "pi^2 =", np.pi**2)
