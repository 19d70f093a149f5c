"""Training costs and evaluation divergences between distributions.

All logarithms here are natural (nats).
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .distribution import EmpiricalDistribution, spin_table

COST_KINDS = ("nll", "emd", "mm")
DEFAULT_EPSILON = 1e-8


@dataclass(frozen=True)
class CostConfig:
    kind: str = "nll"
    epsilon: float = DEFAULT_EPSILON

    def __post_init__(self):
        if self.kind not in COST_KINDS:
            raise ValueError(f"unknown cost kind {self.kind!r}; expected one of {COST_KINDS}")
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")


def _same_register(p: EmpiricalDistribution, q: EmpiricalDistribution) -> None:
    if p.num_qubits != q.num_qubits:
        raise ValueError(
            f"distributions live on {p.num_qubits} and {q.num_qubits} qubits"
        )


def kl_divergence(target: EmpiricalDistribution, model: EmpiricalDistribution) -> float:
    """``D_KL[target | model]`` in nats; ``math.inf`` when the model misses target support."""
    _same_register(target, model)
    p, q = target.probs, model.probs
    s = p > 0
    if np.any(q[s] == 0):
        return math.inf
    return float(np.sum(p[s] * np.log(p[s] / q[s])))


def cost_nll(data: Sequence[int], model: EmpiricalDistribution, epsilon: float = DEFAULT_EPSILON) -> float:
    """Clipped negative log-likelihood of the data samples under ``model``."""
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    data = np.asarray(data, dtype=np.int64)
    if data.size == 0:
        raise ValueError("data must contain at least one sample")
    return float(-np.mean(np.log(np.maximum(epsilon, model.probs[data]))))


# -- earth mover's distance --------------------------------------------------


def hamming_matrix(rows: np.ndarray, cols: np.ndarray) -> np.ndarray:
    x = np.bitwise_xor(np.asarray(rows)[:, None], np.asarray(cols)[None, :])
    return np.array([[int(v).bit_count() for v in r] for r in x], dtype=float).reshape(x.shape)


def transport(supply: np.ndarray, demand: np.ndarray, cost: np.ndarray, max_pivots: int | None = None):
    """Exact balanced transportation problem by the transportation simplex.

    Starts from the north-west corner solution and pivots on the most negative
    reduced cost (MODI potentials) until none remains. Flows only ever change
    by adding and subtracting input masses, so the optimum carries no solver
    tolerance. Returns ``(total_cost, flow)``.
    """
    a = np.asarray(supply, dtype=float).copy()
    b = np.asarray(demand, dtype=float).copy()
    C = np.asarray(cost, dtype=float)
    m, n = C.shape
    if a.shape != (m,) or b.shape != (n,):
        raise ValueError("supply/demand shapes do not match the cost matrix")
    if np.any(a < 0) or np.any(b < 0):
        raise ValueError("masses must be nonnegative")
    if abs(a.sum() - b.sum()) > 1e-9:
        raise ValueError("unbalanced transportation problem")
    b[-1] += a.sum() - b.sum()

    flow = np.zeros((m, n))
    basis: set[tuple[int, int]] = set()
    i = j = 0
    ra, rb = a.copy(), b.copy()
    while True:
        x = min(ra[i], rb[j])
        flow[i, j] = x
        basis.add((i, j))
        ra[i] -= x
        rb[j] -= x
        if i == m - 1 and j == n - 1:
            break
        if i == m - 1:
            j += 1
        elif j == n - 1:
            i += 1
        elif ra[i] <= rb[j]:
            i += 1
        else:
            j += 1

    if max_pivots is None:
        max_pivots = 50 * (m + n) ** 2
    for _ in range(max_pivots):
        adj: dict[int, list[int]] = {k: [] for k in range(m + n)}
        for (r, c) in basis:
            adj[r].append(m + c)
            adj[m + c].append(r)

        u = np.full(m, np.nan)
        v = np.full(n, np.nan)
        u[0] = 0.0
        queue = deque([0])
        while queue:
            node = queue.popleft()
            for nb in adj[node]:
                if node < m:
                    c = nb - m
                    if np.isnan(v[c]):
                        v[c] = C[node, c] - u[node]
                        queue.append(nb)
                else:
                    if np.isnan(u[nb]):
                        u[nb] = C[nb, node - m] - v[node - m]
                        queue.append(nb)

        reduced = C - u[:, None] - v[None, :]
        ei, ej = np.unravel_index(np.argmin(reduced), reduced.shape)
        if reduced[ei, ej] >= -1e-12:
            return float(np.sum(flow * C)), flow

        # tree path from row ei to column ej
        parent = {ei: None}
        queue = deque([ei])
        target = m + ej
        while target not in parent:
            node = queue.popleft()
            for nb in adj[node]:
                if nb not in parent:
                    parent[nb] = node
                    queue.append(nb)
        path = []
        node = target
        while parent[node] is not None:
            prev = parent[node]
            path.append((prev, node - m) if prev < m else (node, prev - m))
            node = prev
        path.reverse()  # starts at row ei, ends at column ej

        minus = path[0::2]
        plus = path[1::2]
        leave = min(minus, key=lambda cell: flow[cell])
        theta = flow[leave]
        for cell in minus:
            flow[cell] -= theta
        for cell in plus:
            flow[cell] += theta
        flow[ei, ej] += theta
        flow[leave] = 0.0
        basis.remove(leave)
        basis.add((int(ei), int(ej)))
    raise RuntimeError("transportation simplex did not converge")


def cost_emd(target: EmpiricalDistribution, model: EmpiricalDistribution) -> float:
    """Earth mover's distance with the Hamming ground metric."""
    _same_register(target, model)
    sp, sq = target.support, model.support
    if np.array_equal(sp, sq) and np.array_equal(target.probs[sp], model.probs[sq]):
        return 0.0
    C = hamming_matrix(sp, sq)
    value, _ = transport(target.probs[sp], model.probs[sq], C)
    return value


# -- moment matching ---------------------------------------------------------


def _moments(probs: np.ndarray, spins: np.ndarray):
    first = probs @ spins
    second = np.einsum("...k,ki,kj->...ij", probs, spins, spins)
    return first, second


def batch_mm(target_probs: np.ndarray, model_probs: np.ndarray, num_qubits: int) -> np.ndarray:
    """Moment-matching cost of each row of ``model_probs`` against the target."""
    n = num_qubits
    x = spin_table(n).astype(float)
    m1_t, m2_t = _moments(np.asarray(target_probs), x)
    m1_m, m2_m = _moments(np.asarray(model_probs), x)
    lower = np.tril_indices(n, k=-1)
    first = np.mean((m1_t - m1_m) ** 2, axis=-1)
    d2 = (m2_t - m2_m)[..., lower[0], lower[1]]
    second = 2.0 / (n * (n - 1)) * np.sum(d2**2, axis=-1)
    return first + second


def cost_mm(target: EmpiricalDistribution, model: EmpiricalDistribution) -> float:
    """Squared error on first and second spin moments."""
    _same_register(target, model)
    if target.num_qubits < 2:
        raise ValueError("moment matching needs at least two qubits")
    return float(batch_mm(target.probs, model.probs, target.num_qubits))


def batch_cost(
    config: CostConfig,
    data_probs: np.ndarray,
    model_probs: np.ndarray,
    num_qubits: int,
) -> np.ndarray:
    """Evaluate ``config`` for a batch of model histograms (rows of ``model_probs``).

    ``data_probs`` is the empirical histogram of the training samples, so the
    NLL here equals :func:`cost_nll` on the sample list.
    """
    model_probs = np.atleast_2d(model_probs)
    if config.kind == "nll":
        logs = np.log(np.maximum(config.epsilon, model_probs))
        return -(logs @ data_probs)
    if config.kind == "mm":
        return batch_mm(data_probs, model_probs, num_qubits)
    target = EmpiricalDistribution(num_qubits, data_probs)
    return np.array(
        [cost_emd(target, EmpiricalDistribution(num_qubits, row)) for row in model_probs]
    )
