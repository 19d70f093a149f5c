"""Synthetic datasets: bars and stripes, thermal Ising, zero-temperature ferromagnet.

BAS pixels map to qubits row-major: pixel ``(r, c)`` of an ``n x m`` image is
qubit ``r * m + c``. White is spin +1 (bit 0), black is spin -1 (bit 1).

Ising energies count every pair once,

    E(x) = sum_{i<j} J_ij x_i x_j + sum_i h_i x_i,

and the Boltzmann weight is ``exp(+E(x) / T)``.
"""

from __future__ import annotations

import json
from functools import lru_cache
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from ._io import atomic_write_text
from .distribution import (
    CapacityError,
    EmpiricalDistribution,
    bitstring_to_index,
    index_to_bitstring,
    spin_table,
    spins_to_index,
)

T_C = 1.0
THERMAL_TEMPERATURES = (2 * T_C, T_C, T_C / 1.5)
MAX_BAS_PIXELS = 24
MAX_ISING_SPINS = 20


# -- bars and stripes --------------------------------------------------------


def _check_bas_size(n: int, m: int) -> None:
    if n < 1 or m < 1:
        raise ValueError("BAS dimensions must be positive")
    if n * m > MAX_BAS_PIXELS:
        raise CapacityError(f"BAS({n},{m}) has {n * m} pixels; limit is {MAX_BAS_PIXELS}")


def num_bas_patterns(n: int, m: int) -> int:
    return 2**n + 2**m - 2


def bas_patterns(n: int, m: int) -> set[tuple[int, ...]]:
    """All BAS(n, m) images as row-major spin tuples."""
    _check_bas_size(n, m)
    patterns = set()
    for rows in range(2**n):
        row_vals = [-1 if (rows >> r) & 1 else 1 for r in range(n)]
        patterns.add(tuple(row_vals[r] for r in range(n) for _ in range(m)))
    for cols in range(2**m):
        col_vals = [-1 if (cols >> c) & 1 else 1 for c in range(m)]
        patterns.add(tuple(col_vals[c] for _ in range(n) for c in range(m)))
    return patterns


def is_bas(pattern: Sequence[int], n: int, m: int) -> bool:
    if len(pattern) != n * m:
        raise ValueError(f"pattern has {len(pattern)} pixels, expected {n * m}")
    # plain tuples: this runs once per basis string in exhaustive checks
    px = tuple(pattern)
    if all(len(set(px[r * m:(r + 1) * m])) == 1 for r in range(n)):
        return True
    return all(len(set(px[c::m])) == 1 for c in range(m))


@lru_cache(maxsize=32)
def bas_indices(n: int, m: int) -> np.ndarray:
    """Sorted basis indices of the BAS(n, m) patterns (read-only, cached)."""
    idx = np.array(sorted(spins_to_index(p) for p in bas_patterns(n, m)))
    idx.flags.writeable = False
    return idx


@lru_cache(maxsize=8)
def bas_mask(n: int, m: int) -> np.ndarray:
    mask = np.zeros(2 ** (n * m), dtype=bool)
    mask[bas_indices(n, m)] = True
    mask.flags.writeable = False
    return mask


def bas_distribution(n: int, m: int) -> EmpiricalDistribution:
    idx = bas_indices(n, m)
    p = np.zeros(2 ** (n * m))
    p[idx] = 1.0 / len(idx)
    return EmpiricalDistribution(n * m, p)


# -- Ising -------------------------------------------------------------------


@dataclass(frozen=True)
class IsingInstance:
    couplings: np.ndarray = field(repr=False)
    fields: np.ndarray = field(repr=False)
    temperature: float = 1.0

    def __post_init__(self):
        J = np.array(self.couplings, dtype=float)
        h = np.array(self.fields, dtype=float)
        if J.ndim != 2 or J.shape[0] != J.shape[1] or h.shape != (J.shape[0],):
            raise ValueError("couplings must be (N, N) and fields (N,)")
        if not np.allclose(J, J.T, atol=0) or np.any(np.diag(J) != 0):
            raise ValueError("couplings must be symmetric with zero diagonal")
        if not self.temperature > 0:
            raise ValueError("temperature must be positive")
        object.__setattr__(self, "couplings", J)
        object.__setattr__(self, "fields", h)

    @property
    def num_spins(self) -> int:
        return self.fields.shape[0]

    def energies(self) -> np.ndarray:
        """``E(x)`` for every basis state, pairs counted once."""
        x = spin_table(self.num_spins).astype(float)
        pair = 0.5 * np.einsum("ki,ij,kj->k", x, self.couplings, x)
        return pair + x @ self.fields


def coupling_std(num_spins: int, scale: str = "sqrt_n") -> float:
    """Standard deviation of the random couplings and fields.

    ``"sqrt_n"`` gives sqrt(N). ``"inv_sqrt_n"`` gives 1/sqrt(N), the
    Sherrington-Kirkpatrick normalization under which the critical temperature
    is ~1, so the preset grid (2, 1, 1/1.5) brackets it.
    """
    if scale == "sqrt_n":
        return float(np.sqrt(num_spins))
    if scale == "inv_sqrt_n":
        return float(1 / np.sqrt(num_spins))
    raise ValueError(f"unknown coupling scale {scale!r}")


def random_ising_instance(
    num_spins: int, temperature: float, rng_seed: int, scale: str = "sqrt_n"
) -> IsingInstance:
    """Couplings (i<j, lexicographic) then fields, all i.i.d. Normal(0, std)."""
    if not 1 <= num_spins <= MAX_ISING_SPINS:
        raise ValueError(f"num_spins must be in [1, {MAX_ISING_SPINS}]")
    if not temperature > 0:
        raise ValueError("temperature must be positive")
    rng = np.random.default_rng(rng_seed)
    sd = coupling_std(num_spins, scale)
    iu = np.triu_indices(num_spins, k=1)
    J = np.zeros((num_spins, num_spins))
    J[iu] = rng.normal(0.0, sd, size=len(iu[0]))
    J = J + J.T
    h = rng.normal(0.0, sd, size=num_spins)
    return IsingInstance(J, h, float(temperature))


def thermal_distribution(instance: IsingInstance) -> EmpiricalDistribution:
    if instance.num_spins > MAX_ISING_SPINS:
        raise ValueError("exact enumeration limited to 20 spins")
    logw = instance.energies() / instance.temperature
    w = np.exp(logw - logw.max())
    return EmpiricalDistribution(instance.num_spins, w / w.sum())


def ferromagnet_distribution(num_qubits: int) -> EmpiricalDistribution:
    p = np.zeros(2**num_qubits)
    p[0] = p[-1] = 0.5
    return EmpiricalDistribution(num_qubits, p)


# -- sampling and file format -----------------------------------------------


def draw_dataset(
    dist: EmpiricalDistribution, size: int, rng_seed: int
) -> tuple[EmpiricalDistribution, np.ndarray]:
    """Exact i.i.d. sample of ``size`` basis indices and its empirical histogram."""
    if size < 1:
        raise ValueError("dataset size must be >= 1")
    rng = np.random.default_rng(rng_seed)
    samples = rng.choice(dist.probs.size, size=size, p=dist.probs)
    return EmpiricalDistribution.from_samples(samples, dist.num_qubits), samples


def write_dataset(path, samples, num_qubits: int, metadata: dict | None = None) -> Path:
    """One bitstring per line, plus a ``<path>.meta.json`` sidecar."""
    path = Path(path)
    lines = [index_to_bitstring(int(s), num_qubits) for s in samples]
    atomic_write_text(path, "\n".join(lines) + "\n")
    meta = {"num_qubits": num_qubits, "num_samples": len(lines)}
    meta.update(metadata or {})
    atomic_write_text(sidecar_path(path), json.dumps(meta, indent=2, sort_keys=True) + "\n")
    return path


def sidecar_path(path) -> Path:
    path = Path(path)
    return path.with_name(path.name + ".meta.json")


def read_dataset(path) -> tuple[np.ndarray, int, dict]:
    """Read a bitstring file; the sidecar is optional."""
    path = Path(path)
    rows = [ln.strip() for ln in path.read_text().splitlines() if ln.strip()]
    if not rows:
        raise ValueError(f"{path}: no samples")
    widths = {len(r) for r in rows}
    if len(widths) != 1:
        raise ValueError(f"{path}: inconsistent bitstring lengths {sorted(widths)}")
    num_qubits = widths.pop()
    samples = np.array([bitstring_to_index(r) for r in rows], dtype=np.int64)
    meta = {}
    side = sidecar_path(path)
    if side.exists():
        meta = json.loads(side.read_text())
        if meta.get("num_qubits", num_qubits) != num_qubits:
            raise ValueError(f"{side}: num_qubits disagrees with the data file")
    return samples, num_qubits, meta
