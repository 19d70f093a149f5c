"""Reduced density matrices and von Neumann entropies (in bits).

Includes the average two-qubit entropy of 4-qubit states and its closed form
on the family of phased uniform BAS(2,2) states

    (e^{iu1}|0000> + e^{iu2}|0011> + e^{iu3}|0101> + e^{iu4}|1010>
     + e^{iu5}|1100> + |1111>) / sqrt(6),

which depends on the phases only through v1 = u2 - u3 - u4 + u5 and
v2 = u1 - u3 - u4.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.special import xlogy

from ._io import atomic_write_text
from .statevector import QuantumState

EIGEN_FLOOR = 1e-12
NEGATIVE_TOL = 1e-10
LN2 = np.log(2.0)

# |0000>, |0011>, |0101>, |1010>, |1100>, |1111>
BAS22_KETS = (0b0000, 0b0011, 0b0101, 0b1010, 0b1100, 0b1111)

S_GHZ = 1.0
S_BAS22_MIN = np.log2(27 / 2) / 3
S_BAS22_MAX = np.log2(12) / 2


def reduced_density(state: QuantumState, keep) -> np.ndarray:
    """Partial trace onto the qubits in ``keep`` (kept in ascending order)."""
    n = state.num_qubits
    keep = sorted(set(int(q) for q in keep))
    if not keep or len(keep) >= n or keep[0] < 0 or keep[-1] >= n:
        raise ValueError(f"keep={keep} is not a nonempty proper subset of {n} qubits")
    rest = [q for q in range(n) if q not in keep]
    psi = state.amplitudes.reshape((2,) * n).transpose(keep + rest)
    mat = psi.reshape(2 ** len(keep), -1)
    return mat @ mat.conj().T


def check_density_matrix(rho: np.ndarray, tol: float = NEGATIVE_TOL) -> None:
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError("density matrix must be square")
    if np.max(np.abs(rho - rho.conj().T)) > tol:
        raise ValueError("density matrix is not Hermitian")
    if abs(np.trace(rho).real - 1) > tol:
        raise ValueError("density matrix does not have unit trace")
    if np.linalg.eigvalsh(rho).min() < -tol:
        raise ValueError("density matrix has negative eigenvalues")


def von_neumann_entropy(rho: np.ndarray) -> float:
    """``-Tr(rho log2 rho)`` from the eigenvalues above 1e-12."""
    lam = np.linalg.eigvalsh(np.asarray(rho))
    if lam.min() < -NEGATIVE_TOL:
        raise ValueError(f"eigenvalue {lam.min():.3g} is negative beyond round-off")
    lam = lam[lam > EIGEN_FLOOR]
    return float(-np.sum(lam * np.log2(lam)))


def avg_two_qubit_entropy(state: QuantumState) -> float:
    """Mean entropy of the AB, AC and AD reductions of a 4-qubit pure state."""
    if state.num_qubits != 4:
        raise ValueError("average two-qubit entropy is defined here for 4 qubits")
    pairs = ((0, 1), (0, 2), (0, 3))
    return float(np.mean([von_neumann_entropy(reduced_density(state, p)) for p in pairs]))


def all_pair_entropies(state: QuantumState) -> dict[tuple[int, int], float]:
    n = state.num_qubits
    return {
        p: von_neumann_entropy(reduced_density(state, p))
        for p in itertools.combinations(range(n), 2)
    }


@dataclass(frozen=True)
class PhaseParams:
    u1: float = 0.0
    u2: float = 0.0
    u3: float = 0.0
    u4: float = 0.0
    u5: float = 0.0

    @property
    def v1(self) -> float:
        return float(np.mod(self.u2 - self.u3 - self.u4 + self.u5, 2 * np.pi))

    @property
    def v2(self) -> float:
        return float(np.mod(self.u1 - self.u3 - self.u4, 2 * np.pi))


def phased_bas_state(phases: PhaseParams) -> QuantumState:
    u = (phases.u1, phases.u2, phases.u3, phases.u4, phases.u5, 0.0)
    a = np.zeros(16, dtype=complex)
    a[list(BAS22_KETS)] = np.exp(1j * np.asarray(u)) / np.sqrt(6)
    return QuantumState(4, a)


def s_bas22_closed_form(v1, v2):
    """Average two-qubit entropy of the phased BAS(2,2) state at ``(v1, v2)``.

    The arctanh term and the pair ``log2(4 +- 2 sqrt(2) sqrt(1 + cos v1))``
    diverge separately at ``cos(v1/2) = +-1``; with ``a = |cos(v1/2)|`` they
    sum to ``4 + (1+a) log2(1+a) + (1-a) log2(1-a)``, evaluated with
    ``0 log 0 = 0``. Works elementwise on arrays.
    """
    v1 = np.mod(np.asarray(v1, dtype=float), 2 * np.pi)
    v2 = np.mod(np.asarray(v2, dtype=float), 2 * np.pi)
    a = np.abs(np.cos(v1 / 2))
    singular = 4 + (xlogy(1 + a, 1 + a) + xlogy(1 - a, 1 - a)) / LN2

    def g(t):
        return 2 * xlogy(t, 2 * t / 3) / LN2

    c2 = np.cos(v2 / 4) ** 2
    d2 = np.cos((v2 - v1) / 4) ** 2
    bracket = singular + g(c2) + g(1 - c2) + g(d2) + g(1 - d2) - np.log2(31104)
    out = -bracket / 9
    return float(out) if out.ndim == 0 else out


def entropy_surface(num: int = 32) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """``(v1, v2, S)`` on a ``num x num`` grid over ``[0, 2pi)^2``."""
    grid = np.linspace(0, 2 * np.pi, num, endpoint=False)
    V1, V2 = np.meshgrid(grid, grid, indexing="ij")
    return V1, V2, s_bas22_closed_form(V1, V2)


def write_surface_csv(path, num: int = 32) -> Path:
    V1, V2, S = entropy_surface(num)
    lines = ["v1,v2,entropy_bits"]
    lines += [f"{a!r},{b!r},{s!r}" for a, b, s in zip(V1.ravel().tolist(), V2.ravel().tolist(), S.ravel().tolist())]
    return atomic_write_text(path, "\n".join(lines) + "\n")
