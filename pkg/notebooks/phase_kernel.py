"""
The phase-estimation kernel
===========================

|alpha(delta)|^2 is the chance of reading clock bin k when lambda t0 sits
delta away from 2 pi k.  The sine-window clock state makes it fall off
like delta^-4.
"""

import numpy as np

from hhl_lab.phase_estimation import alpha_closed_form, alpha_series, concentration_bound

T = 128
for delta in (0.0, np.pi, 2 * np.pi, 4 * np.pi, 8 * np.pi, 12.0):
    a = alpha_closed_form(delta, T)
    bound = concentration_bound(delta) if delta >= 2 * np.pi else float("nan")
    print(f"delta={delta:7.3f}  |alpha|^2={abs(a) ** 2:.3e}  bound={bound:.3e}  "
          f"series diff={abs(a - alpha_series(delta, T)):.1e}")

# the weights over all bins sum to one
lam, t0 = 0.37, T / 16
k = np.arange(T)
w = np.abs(alpha_closed_form(lam * t0 - 2 * np.pi * k, T)) ** 2
print("sum_k |alpha|^2 =", w.sum())
print("most likely bins:", np.argsort(w)[::-1][:3], "expected near", lam * t0 / (2 * np.pi))
