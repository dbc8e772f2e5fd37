"""
Amplitude amplification
=======================

Rounds of 1, 2, 4, ... Grover steps, each followed by a flag measurement,
until the well flag is seen or the 4 kappa budget runs out.
"""

import numpy as np

from hhl_lab import HHLConfig
from hhl_lab.pipeline import Amplifier

kappa = 8
a = np.diag([1.0, 0.5, 0.25, 1 / kappa])
b = np.ones(4) / 2
amp = Amplifier(a, b, HHLConfig.create(kappa, epsilon=0.5))
print("p~ =", round(amp.p_tilde, 5), " budget =", amp.budget)
theta = np.arcsin(np.sqrt(amp.p_tilde))
for m, p in zip(amp.schedule(), amp.round_probabilities()):
    print(f"m={m:3d}  P(well)={p:.4f}  sin^2((2m+1) theta)={np.sin((2 * m + 1) * theta) ** 2:.4f}")

runs = [amp.run(seed) for seed in range(200)]
print("success rate:", np.mean([r.success for r in runs]),
      " mean Grover steps:", np.mean([r.repetitions for r in runs]))
