"""Probability distributions over computational basis states.

Basis convention used throughout the package:

* qubit 0 is the most significant bit of the basis index;
* spin ``+1`` maps to bit ``0`` and spin ``-1`` maps to bit ``1``.

So the spin string ``(+1, -1, -1)`` is the ket ``|011>`` with basis index 3.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

MAX_QUBITS = 24


class CapacityError(ValueError):
    """Raised when a requested register exceeds the dense-simulation guard."""


def check_capacity(num_qubits: int, limit: int = MAX_QUBITS) -> None:
    if not 1 <= num_qubits <= limit:
        raise CapacityError(f"num_qubits={num_qubits} outside [1, {limit}]")


def spins_to_index(spins: Sequence[int]) -> int:
    index = 0
    for s in spins:
        if s not in (1, -1):
            raise ValueError(f"spin values must be +1 or -1, got {s!r}")
        index = (index << 1) | (1 if s == -1 else 0)
    return index


def index_to_spins(index: int, num_qubits: int) -> tuple[int, ...]:
    if not 0 <= index < 2**num_qubits:
        raise ValueError(f"index {index} out of range for {num_qubits} qubits")
    return tuple(
        -1 if (index >> (num_qubits - 1 - q)) & 1 else 1 for q in range(num_qubits)
    )


def index_to_bitstring(index: int, num_qubits: int) -> str:
    return format(index, f"0{num_qubits}b")


def bitstring_to_index(bits: str) -> int:
    bits = bits.strip()
    if not bits or set(bits) - {"0", "1"}:
        raise ValueError(f"not a bitstring: {bits!r}")
    return int(bits, 2)


def spin_table(num_qubits: int) -> np.ndarray:
    """Spin values of every basis state, shape ``(2**N, N)``, entries ±1."""
    idx = np.arange(2**num_qubits)[:, None]
    shifts = np.arange(num_qubits - 1, -1, -1)[None, :]
    bits = (idx >> shifts) & 1
    return 1 - 2 * bits


@dataclass(frozen=True)
class EmpiricalDistribution:
    """Dense probability vector over the ``2**num_qubits`` basis states."""

    num_qubits: int
    probs: np.ndarray = field(repr=False)

    def __post_init__(self):
        check_capacity(self.num_qubits)
        p = np.asarray(self.probs, dtype=float)
        if p.shape != (2**self.num_qubits,):
            raise ValueError(
                f"expected {2**self.num_qubits} probabilities, got shape {p.shape}"
            )
        if np.any(p < 0) or abs(p.sum() - 1.0) > 1e-10:
            raise ValueError("probabilities must be nonnegative and sum to 1")
        p = p.copy()
        p.flags.writeable = False
        object.__setattr__(self, "probs", p)

    @classmethod
    def from_weights(
        cls, num_qubits: int, weights: Mapping[int, float]
    ) -> "EmpiricalDistribution":
        p = np.zeros(2**num_qubits)
        for k, w in weights.items():
            p[k] += w
        return cls(num_qubits, p)

    @classmethod
    def from_samples(
        cls, samples: Iterable[int], num_qubits: int
    ) -> "EmpiricalDistribution":
        samples = np.asarray(list(samples) if not isinstance(samples, np.ndarray) else samples)
        if samples.size == 0:
            raise ValueError("cannot build a distribution from zero samples")
        counts = np.bincount(samples, minlength=2**num_qubits)
        return cls(num_qubits, counts / counts.sum())

    @classmethod
    def uniform(cls, num_qubits: int) -> "EmpiricalDistribution":
        return cls(num_qubits, np.full(2**num_qubits, 2.0**-num_qubits))

    @property
    def weights(self) -> dict[int, float]:
        """Nonzero entries as ``{basis_index: probability}``."""
        nz = np.flatnonzero(self.probs)
        return {int(k): float(self.probs[k]) for k in nz}

    @property
    def support(self) -> np.ndarray:
        return np.flatnonzero(self.probs)

    def __getitem__(self, index: int) -> float:
        return float(self.probs[index])

    def by_bitstring(self) -> dict[str, float]:
        return {index_to_bitstring(k, self.num_qubits): w for k, w in self.weights.items()}
