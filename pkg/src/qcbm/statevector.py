"""Dense statevector simulation over the ion-trap native gates Rz, Rx, XX and GMS.

Gate kernels work on amplitude arrays with a leading batch axis, shape
``(B, 2**N)``, so a whole particle swarm can be pushed through one circuit in a
single call. The :class:`QuantumState` wrappers below are the single-state
public surface.

Angles are reduced to ``[-pi, pi)`` before use. Rotations are 4*pi periodic, so
the reduction may flip the global sign of the state; probabilities are
unaffected.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .distribution import EmpiricalDistribution, check_capacity

NORM_TOL = 1e-8


def wrap_angle(theta):
    """Reduce angles to ``[-pi, pi)``."""
    return np.mod(np.asarray(theta, dtype=float) + np.pi, 2 * np.pi) - np.pi


def _angles(theta, batch: int) -> np.ndarray:
    t = wrap_angle(theta)
    if not np.all(np.isfinite(t)):
        raise ValueError("gate angles must be finite")
    return np.broadcast_to(t, (batch,))


# -- batched kernels ---------------------------------------------------------


def rz_batch(psi: np.ndarray, n: int, q: int, theta) -> np.ndarray:
    b = psi.shape[0]
    t = _angles(theta, b)[:, None, None]
    view = psi.reshape(b, 2**q, 2, 2 ** (n - q - 1))
    out = np.empty_like(view)
    out[:, :, 0, :] = view[:, :, 0, :] * np.exp(-0.5j * t)
    out[:, :, 1, :] = view[:, :, 1, :] * np.exp(0.5j * t)
    return out.reshape(b, -1)


def rx_batch(psi: np.ndarray, n: int, q: int, theta) -> np.ndarray:
    b = psi.shape[0]
    t = _angles(theta, b)[:, None, None]
    c, s = np.cos(t / 2), np.sin(t / 2)
    view = psi.reshape(b, 2**q, 2, 2 ** (n - q - 1))
    a0, a1 = view[:, :, 0, :], view[:, :, 1, :]
    out = np.empty_like(view)
    out[:, :, 0, :] = c * a0 - 1j * s * a1
    out[:, :, 1, :] = c * a1 - 1j * s * a0
    return out.reshape(b, -1)


def xx_batch(psi: np.ndarray, n: int, i: int, j: int, theta) -> np.ndarray:
    if i > j:
        i, j = j, i
    b = psi.shape[0]
    t = _angles(theta, b)[:, None, None, None, None, None]
    view = psi.reshape(b, 2**i, 2, 2 ** (j - i - 1), 2, 2 ** (n - j - 1))
    flipped = view[:, :, ::-1, :, ::-1, :]
    out = np.cos(t / 2) * view - 1j * np.sin(t / 2) * flipped
    return out.reshape(b, -1)


# -- single-state API --------------------------------------------------------


@dataclass(frozen=True)
class QuantumState:
    """Normalized amplitude vector; qubit 0 is the most significant bit."""

    num_qubits: int
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        check_capacity(self.num_qubits)
        a = np.array(self.amplitudes, dtype=complex)
        if a.shape != (2**self.num_qubits,):
            raise ValueError(
                f"expected {2**self.num_qubits} amplitudes, got shape {a.shape}"
            )
        norm = np.vdot(a, a).real
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state is not normalized (norm^2 = {norm:.12g})")
        a.flags.writeable = False
        object.__setattr__(self, "amplitudes", a)

    def _batch(self) -> np.ndarray:
        return self.amplitudes.reshape(1, -1)

    def _with(self, psi: np.ndarray) -> "QuantumState":
        return QuantumState(self.num_qubits, psi.reshape(-1))

    def _check_qubit(self, q: int) -> None:
        if not 0 <= q < self.num_qubits:
            raise IndexError(f"qubit {q} out of range for {self.num_qubits} qubits")


def new_zero_state(num_qubits: int) -> QuantumState:
    check_capacity(num_qubits)
    a = np.zeros(2**num_qubits, dtype=complex)
    a[0] = 1.0
    return QuantumState(num_qubits, a)


def apply_rz(state: QuantumState, qubit: int, theta: float) -> QuantumState:
    """``exp(-i theta Z / 2)`` on one qubit."""
    state._check_qubit(qubit)
    return state._with(rz_batch(state._batch(), state.num_qubits, qubit, theta))


def apply_rx(state: QuantumState, qubit: int, theta: float) -> QuantumState:
    """``exp(-i theta X / 2)`` on one qubit."""
    state._check_qubit(qubit)
    return state._with(rx_batch(state._batch(), state.num_qubits, qubit, theta))


def apply_xx(state: QuantumState, qubit_i: int, qubit_j: int, theta: float) -> QuantumState:
    """Molmer-Sorensen ``exp(-i theta X_i X_j / 2)``."""
    state._check_qubit(qubit_i)
    state._check_qubit(qubit_j)
    if qubit_i == qubit_j:
        raise ValueError("XX gate needs two distinct qubits")
    return state._with(
        xx_batch(state._batch(), state.num_qubits, qubit_i, qubit_j, theta)
    )


def apply_gms(state: QuantumState, theta: float) -> QuantumState:
    """Global Molmer-Sorensen gate: XX(theta) on every pair of qubits."""
    n = state.num_qubits
    if n < 2:
        raise ValueError("GMS gate needs at least two qubits")
    psi = state._batch()
    for i, j in itertools.combinations(range(n), 2):
        psi = xx_batch(psi, n, i, j, theta)
    return state._with(psi)


def born_probabilities(state: QuantumState) -> EmpiricalDistribution:
    p = np.abs(state.amplitudes) ** 2
    return EmpiricalDistribution(state.num_qubits, p / p.sum())


def sample_indices(probs: np.ndarray, num_shots: int, rng: np.random.Generator) -> np.ndarray:
    """Draw ``num_shots`` basis indices i.i.d. from ``probs``."""
    if num_shots < 1:
        raise ValueError("num_shots must be >= 1")
    p = np.asarray(probs, dtype=float)
    p = p / p.sum()
    return rng.choice(p.size, size=num_shots, p=p)


def sample_shot_list(state: QuantumState, num_shots: int, rng_seed: int) -> np.ndarray:
    rng = np.random.default_rng(rng_seed)
    return sample_indices(born_probabilities(state).probs, num_shots, rng)


def sample_shots(state: QuantumState, num_shots: int, rng_seed: int) -> EmpiricalDistribution:
    """Measure ``num_shots`` times in the computational basis; returns frequencies."""
    shots = sample_shot_list(state, num_shots, rng_seed)
    return EmpiricalDistribution.from_samples(shots, state.num_qubits)
