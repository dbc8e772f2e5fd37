"""
Simulating a circuit by inverting a matrix
==========================================

A T-gate circuit becomes a unitary on a 3T-step clock.  Inverting
I - U exp(-1/T) spreads the state over the clock; the middle third holds
the circuit output.
"""

import numpy as np

from hhl_lab.clock import (
    ClockCircuit,
    build_first_qubit_embedding,
    build_inversion_matrix,
    designated_qubit_zero_probability,
    named_gate,
    simulate_via_inversion,
)

bell = ClockCircuit(2, (named_gate("H", (0,)), named_gate("CNOT", (0, 1))))
st = simulate_via_inversion(bell, shots=10_000, rng=0)
for key, value in st.to_dict().items():
    print(f"{key:28s} {value}")

emb = build_first_qubit_embedding(bell)
print("embedding dim:", emb.dim, " designated qubit P(0):", designated_qubit_zero_probability(emb))

# the condition number is coth(1/2T) when 3T is even
for T in (1, 2, 3, 4):
    mats = build_inversion_matrix(ClockCircuit.random(2, T, np.random.default_rng(T)))
    print(f"T={T}  kappa={np.linalg.cond(mats.A_herm):.3f}  2T={2 * T}  coth(1/2T)={1 / np.tanh(1 / (2 * T)):.3f}")
