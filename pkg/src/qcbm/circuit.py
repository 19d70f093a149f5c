"""Layered circuit templates: rotation layers alternating with XX entangling layers.

Layer ``l`` (1-based) is a single-qubit rotation layer when ``l`` is odd and an
entangling layer when ``l`` is even. A rotation layer applies
``Rz(t3) Rx(t2) Rz(t1)`` to every qubit, with two exceptions that drop
redundant angles:

* the first layer acts on ``|0...0>`` so ``Rz(t1)`` is dropped (angles t2, t3);
* an odd-numbered final layer (L > 1) only adds phases via ``Rz(t3)``, so it is
  dropped (angles t1, t2).

Flat parameter order (version tag ``PARAM_ORDER``): layer-major; inside a
rotation layer qubit-major then rotation identifier k; inside an entangling
layer the topology edges in lexicographic order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .distribution import check_capacity
from .statevector import QuantumState, born_probabilities, rx_batch, rz_batch, xx_batch

PARAM_ORDER = "layer-major/qubit-major/k;edges-lex;v1"
TOPOLOGIES = ("all", "chain", "star")


@dataclass(frozen=True)
class Topology:
    kind: str
    num_qubits: int

    def __post_init__(self):
        if self.kind not in TOPOLOGIES:
            raise ValueError(f"unknown topology {self.kind!r}; expected one of {TOPOLOGIES}")
        if self.num_qubits < 2:
            raise ValueError("a topology needs at least two qubits")

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        n = self.num_qubits
        if self.kind == "all":
            return tuple(itertools.combinations(range(n), 2))
        if self.kind == "chain":
            return tuple((i, i + 1) for i in range(n - 1))
        return tuple((0, j) for j in range(1, n))


@dataclass(frozen=True)
class CircuitTemplate:
    num_qubits: int
    num_layers: int
    topology: str = "all"

    def __post_init__(self):
        check_capacity(self.num_qubits)
        if self.num_qubits < 2:
            raise ValueError("circuit templates need at least two qubits")
        if self.num_layers < 1:
            raise ValueError("num_layers must be >= 1")
        if isinstance(self.topology, Topology):
            object.__setattr__(self, "topology", self.topology.kind)
        Topology(self.topology, self.num_qubits)

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        return Topology(self.topology, self.num_qubits).edges

    def rotation_ids(self, layer: int) -> tuple[int, ...]:
        """Rotation identifiers k kept in odd ``layer`` (1-based)."""
        if layer % 2 == 0:
            return ()
        if layer == 1:
            return (2, 3)
        if layer == self.num_layers:
            return (1, 2)
        return (1, 2, 3)

    def layer_param_count(self, layer: int) -> int:
        if layer % 2 == 0:
            return len(self.edges)
        return len(self.rotation_ids(layer)) * self.num_qubits

    @property
    def num_params(self) -> int:
        return sum(self.layer_param_count(l) for l in range(1, self.num_layers + 1))

    def parameter_labels(self) -> list[tuple]:
        """One label per flat parameter, in canonical order.

        Rotation angles are ``("rot", layer, qubit, k)``, entangling angles
        ``("xx", layer, i, j)``.
        """
        labels = []
        for layer in range(1, self.num_layers + 1):
            if layer % 2:
                for q in range(self.num_qubits):
                    labels.extend(("rot", layer, q, k) for k in self.rotation_ids(layer))
            else:
                labels.extend(("xx", layer, i, j) for i, j in self.edges)
        return labels

    def to_dict(self) -> dict:
        return {
            "num_qubits": self.num_qubits,
            "num_layers": self.num_layers,
            "topology": self.topology,
            "param_order": PARAM_ORDER,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CircuitTemplate":
        tag = d.get("param_order", PARAM_ORDER)
        if tag != PARAM_ORDER:
            raise ValueError(f"unsupported parameter order tag {tag!r}")
        return cls(int(d["num_qubits"]), int(d["num_layers"]), str(d["topology"]))


def param_count(template: CircuitTemplate) -> int:
    return template.num_params


def execute_batch(template: CircuitTemplate, params: np.ndarray) -> np.ndarray:
    """Run the template for a batch of parameter vectors.

    ``params`` has shape ``(B, P)``; the result is the ``(B, 2**N)`` array of
    output amplitudes.
    """
    params = np.atleast_2d(np.asarray(params, dtype=float))
    if params.shape[1] != template.num_params:
        raise ValueError(
            f"expected {template.num_params} parameters, got {params.shape[1]}"
        )
    n = template.num_qubits
    psi = np.zeros((params.shape[0], 2**n), dtype=complex)
    psi[:, 0] = 1.0
    col = 0
    for layer in range(1, template.num_layers + 1):
        if layer % 2:
            ks = template.rotation_ids(layer)
            for q in range(n):
                for k in ks:
                    kernel = rx_batch if k == 2 else rz_batch
                    psi = kernel(psi, n, q, params[:, col])
                    col += 1
        else:
            for i, j in template.edges:
                psi = xx_batch(psi, n, i, j, params[:, col])
                col += 1
    return psi


def execute(template: CircuitTemplate, params: Sequence[float]) -> QuantumState:
    params = np.asarray(params, dtype=float)
    if params.ndim != 1:
        raise ValueError("params must be a flat vector")
    psi = execute_batch(template, params[None, :])
    return QuantumState(template.num_qubits, psi[0])


def build_ghz_recipe(num_qubits: int) -> tuple[CircuitTemplate, np.ndarray]:
    """Cat-state circuit: one rotation layer followed by a GMS(pi/2) layer.

    Even N needs no rotations at all; odd N needs ``Rx(pi/2)`` on every qubit
    before the global entangler. The returned circuit is checked to produce
    ``{0...0: 0.5, 1...1: 0.5}`` before it is handed out.
    """
    if num_qubits < 2:
        raise ValueError("GHZ recipe needs at least two qubits")
    template = CircuitTemplate(num_qubits, 2, "all")
    params = np.zeros(template.num_params)
    for col, label in enumerate(template.parameter_labels()):
        if label[0] == "xx":
            params[col] = np.pi / 2
        elif num_qubits % 2 and label[3] == 2:
            params[col] = np.pi / 2

    p = born_probabilities(execute(template, params)).probs
    target = np.zeros_like(p)
    target[[0, -1]] = 0.5
    if np.max(np.abs(p - target)) > 1e-9:
        raise RuntimeError(f"GHZ recipe failed its distribution check at N={num_qubits}")
    return template, params
