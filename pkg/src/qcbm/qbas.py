"""qBAS(n, m): F1 score of a sampler on the bars-and-stripes task.

Precision is the fraction of BAS patterns among all collected shots. Recall is
measured per batch of ``N_reads`` shots, where ``N_reads`` is the
coupon-collector budget ``ceil(k * H_k)`` for ``k`` BAS patterns.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .datasets import bas_mask, num_bas_patterns
from .statevector import QuantumState, born_probabilities, sample_indices

DEFAULT_REPETITIONS = 25


def coupon_collector_reads(num_patterns: int) -> int:
    if num_patterns < 1:
        raise ValueError("num_patterns must be >= 1")
    harmonic = math.fsum(1.0 / j for j in range(1, num_patterns + 1))
    # k * H_k is an integer only for k in {1, 2}; the slack absorbs round-off there
    return math.ceil(num_patterns * harmonic - 1e-9)


def f1(p: float, r: float) -> float:
    return 0.0 if p + r == 0 else 2 * p * r / (p + r)


def precision(shots, n: int, m: int) -> float:
    shots = np.asarray(shots, dtype=np.int64)
    if shots.size == 0:
        raise ValueError("precision needs at least one shot")
    return float(np.mean(bas_mask(n, m)[shots]))


def recall(shots, n: int, m: int, check_budget: bool = True) -> float:
    """Distinct BAS patterns in one batch over the number of BAS patterns."""
    shots = np.asarray(shots, dtype=np.int64)
    k = num_bas_patterns(n, m)
    if check_budget and shots.size != coupon_collector_reads(k):
        raise ValueError(
            f"recall batch must hold {coupon_collector_reads(k)} shots, got {shots.size}"
        )
    hits = np.unique(shots[bas_mask(n, m)[shots]])
    return hits.size / k


@dataclass
class ScoreReport:
    n: int
    m: int
    num_reads: int
    precision: float
    recalls: list[float]
    scores: list[float]
    pooled_samples: int

    @property
    def mean_score(self) -> float:
        return float(np.mean(self.scores))

    def to_dict(self) -> dict:
        d = asdict(self)
        d["mean_score"] = self.mean_score
        return d


def score_batches(batches: list[np.ndarray], n: int, m: int, extra_shots=None) -> ScoreReport:
    """Score pre-drawn batches; ``extra_shots`` only feed the pooled precision."""
    reads = coupon_collector_reads(num_bas_patterns(n, m))
    pooled = [np.asarray(b, dtype=np.int64) for b in batches]
    if extra_shots is not None and len(extra_shots):
        pooled.append(np.asarray(extra_shots, dtype=np.int64))
    all_shots = np.concatenate(pooled)
    p = precision(all_shots, n, m)
    recalls = [recall(b, n, m) for b in batches]
    return ScoreReport(
        n=n,
        m=m,
        num_reads=reads,
        precision=p,
        recalls=recalls,
        scores=[f1(p, r) for r in recalls],
        pooled_samples=int(all_shots.size),
    )


def qbas_score(
    state: QuantumState,
    n: int,
    m: int,
    repetitions: int = DEFAULT_REPETITIONS,
    rng_seed: int = 0,
) -> ScoreReport:
    """Sample ``repetitions`` batches of ``N_reads`` shots from ``state`` and score them."""
    if repetitions < 1:
        raise ValueError("repetitions must be >= 1")
    if state.num_qubits != n * m:
        raise ValueError(f"state has {state.num_qubits} qubits, BAS({n},{m}) needs {n * m}")
    reads = coupon_collector_reads(num_bas_patterns(n, m))
    probs = born_probabilities(state).probs
    rng = np.random.default_rng(rng_seed)
    batches = [sample_indices(probs, reads, rng) for _ in range(repetitions)]
    return score_batches(batches, n, m)


def score_shots(shots, n: int, m: int) -> ScoreReport:
    """Score an externally recorded shot sequence (e.g. from hardware).

    Consecutive blocks of ``N_reads`` shots form the recall batches; a trailing
    partial block only contributes to precision.
    """
    shots = np.asarray(shots, dtype=np.int64)
    if np.any(shots < 0) or np.any(shots >= 2 ** (n * m)):
        raise ValueError(f"shot indices do not fit BAS({n},{m}) on {n * m} qubits")
    reads = coupon_collector_reads(num_bas_patterns(n, m))
    r = shots.size // reads
    if r < 1:
        raise ValueError(f"need at least {reads} shots to score BAS({n},{m}), got {shots.size}")
    batches = [shots[i * reads:(i + 1) * reads] for i in range(r)]
    return score_batches(batches, n, m, extra_shots=shots[r * reads:])
