"""
Error against evolution time
============================

Solve one random 8x8 system with kappa = 10 at increasing t0 and watch the
distance to the exact solution halve with each doubling.
"""

import numpy as np

from hhl_lab import HHLConfig, solve
from hhl_lab.linalg import eig_hermitian

rng = np.random.default_rng(0)
q, _ = np.linalg.qr(rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8)))
lam = np.linspace(0.1, 1.0, 8)
a = (q * lam) @ q.conj().T
b = rng.normal(size=8) + 1j * rng.normal(size=8)
eig = eig_hermitian(a)

print(f"{'t0':>6} {'T':>6} {'system':>10} {'claim1':>10} {'claim3':>10} {'p~':>8}")
prev = None
for t0 in (100, 200, 400, 800, 1600):
    rep = solve(a, b, HHLConfig.create(10, t0=t0), amplify=False, eig=eig)
    ratio = "" if prev is None else f"  ratio {rep.system_distance / prev:.3f}"
    print(f"{t0:6d} {rep.T:6d} {rep.system_distance:10.2e} {rep.claims['claim1']:10.2e} "
          f"{rep.claims['claim3']:10.2e} {rep.p_tilde:8.5f}{ratio}")
    prev = rep.system_distance

# p~ approaches the ideal success probability
print("ideal p =", round(rep.p_exact, 6))
