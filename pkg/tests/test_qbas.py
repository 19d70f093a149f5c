import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qcbm.datasets import bas_indices, write_dataset, read_dataset
from qcbm.qbas import (
    coupon_collector_reads,
    f1,
    precision,
    qbas_score,
    recall,
    score_batches,
    score_shots,
)
from qcbm.statevector import QuantumState, new_zero_state

BAS22 = [int(i) for i in bas_indices(2, 2)]
TWO_SEVENTHS = 2 / 7


def uniform_bas_state(n, m):
    a = np.zeros(2 ** (n * m), dtype=complex)
    idx = bas_indices(n, m)
    a[idx] = 1 / np.sqrt(len(idx))
    return QuantumState(n * m, a)


@pytest.mark.parametrize("k,reads", [(1, 1), (2, 3), (6, 15), (10, 30), (14, 46), (30, 120), (2046, 16780)])
def test_coupon_collector(k, reads):
    assert coupon_collector_reads(k) == reads


def test_precision_examples():
    assert precision(BAS22 * 3, 2, 2) == 1.0
    assert precision([1, 2, 4, 6], 2, 2) == 0.0
    assert precision(BAS22 + BAS22[:4] + [1, 2, 4, 6, 7], 2, 2) == pytest.approx(2 / 3)


def test_recall_examples():
    full = BAS22 + [BAS22[0]] * 9
    assert recall(full, 2, 2) == 1.0
    assert recall([BAS22[2]] * 15, 2, 2) == pytest.approx(1 / 6)
    assert recall(BAS22[:3] * 5, 2, 2) == 0.5
    with pytest.raises(ValueError):
        recall(BAS22, 2, 2)


def test_f1_degenerate():
    assert f1(0, 0) == 0
    assert f1(1, 1) == 1
    assert f1(1, 1 / 6) == pytest.approx(TWO_SEVENTHS)


def test_uniform_bas_state_scores_high():
    rep = qbas_score(uniform_bas_state(2, 2), 2, 2, repetitions=25, rng_seed=0)
    assert rep.precision == 1.0
    assert rep.mean_score >= 0.95
    assert rep.num_reads == 15 and len(rep.scores) == 25


def test_all_white_state():
    rep = qbas_score(new_zero_state(4), 2, 2, rng_seed=3)
    np.testing.assert_allclose(rep.scores, TWO_SEVENTHS, rtol=1e-12)


def test_zero_bas_mass_state():
    a = np.zeros(16, dtype=complex)
    a[0b0110] = 1
    rep = qbas_score(QuantumState(4, a), 2, 2)
    assert rep.scores == [0.0] * 25


def test_qubit_mismatch():
    with pytest.raises(ValueError):
        qbas_score(new_zero_state(5), 2, 2)


def test_expected_recall_at_budget():
    rng = np.random.default_rng(1234)
    draws = rng.choice(BAS22, size=(1000, 15))
    mean_recall = np.mean([recall(row, 2, 2) for row in draws])
    assert mean_recall >= 0.9


def test_score_is_deterministic_in_shots(rng):
    batches = [rng.integers(0, 16, 15) for _ in range(5)]
    assert score_batches(batches, 2, 2).to_dict() == score_batches(batches, 2, 2).to_dict()


@settings(max_examples=50, deadline=None)
@given(st.lists(st.lists(st.integers(0, 15), min_size=15, max_size=15), min_size=1, max_size=6))
def test_score_invariants(batches):
    rep = score_batches([np.array(b) for b in batches], 2, 2)
    for r, s in zip(rep.recalls, rep.scores):
        assert 0 <= s <= 1
        expected = 0.0 if rep.precision + r == 0 else 2 * rep.precision * r / (rep.precision + r)
        assert s == pytest.approx(expected)
        if s == 1:
            assert rep.precision == 1 and r == 1


def test_score_shots_from_file(tmp_path):
    rng = np.random.default_rng(8)
    shots = rng.choice(BAS22 + [1, 2], size=15 * 4 + 7)
    path = write_dataset(tmp_path / "hw.txt", shots, 4, {"source": "device"})
    back, n, _ = read_dataset(path)
    rep = score_shots(back, 2, 2)
    assert len(rep.scores) == 4
    assert rep.pooled_samples == 67
    assert rep.precision == pytest.approx(np.isin(shots, BAS22).mean())
    with pytest.raises(ValueError):
        score_shots(shots[:10], 2, 2)
    with pytest.raises(ValueError):
        score_shots([99], 2, 2)
