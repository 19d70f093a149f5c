"""
Entanglement of phased bars-and-stripes states
===============================================

The uniform BAS(2,2) superposition with relative phases has an average
two-qubit entropy that depends on two phase combinations only. We compare
the closed form with an explicit partial trace and locate its extrema.
"""

import numpy as np

from qcbm import QuantumState
from qcbm.entanglement import (
    PhaseParams,
    avg_two_qubit_entropy,
    entropy_surface,
    phased_bas_state,
    s_bas22_closed_form,
)

# A random phase assignment, evaluated both ways
rng = np.random.default_rng(1)
phases = PhaseParams(*rng.uniform(-np.pi, np.pi, 5))
print("partial trace:", avg_two_qubit_entropy(phased_bas_state(phases)))
print("closed form:  ", s_bas22_closed_form(phases.v1, phases.v2))

# Scan the (v1, v2) torus
V1, V2, S = entropy_surface(64)
i, j = np.unravel_index(np.argmax(S), S.shape)
print(f"max S = {S.max():.5f} bits at v1={V1[i, j]:.4f}, v2={V2[i, j]:.4f}")
print(f"min S = {S.min():.5f} bits")

# For comparison, the cat state sits at exactly one bit
cat = np.zeros(16, dtype=complex)
cat[[0, 15]] = 1 / np.sqrt(2)
print("cat state:", avg_two_qubit_entropy(QuantumState(4, cat)))
