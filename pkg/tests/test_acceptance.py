"""End-to-end acceptance checks, one test per criterion.

Each test reports a PASS/FAIL line through the ``criterion`` fixture; the lines
are collected in the terminal summary.
"""

import itertools
import json
import time

import numpy as np
import pytest

from qcbm import cli
from qcbm.costs import cost_emd
from qcbm.datasets import bas_patterns, is_bas
from qcbm.distribution import EmpiricalDistribution, index_to_spins
from qcbm.entanglement import (
    PhaseParams,
    avg_two_qubit_entropy,
    entropy_surface,
    phased_bas_state,
)
from qcbm.circuit import build_ghz_recipe, execute
from qcbm.qbas import coupon_collector_reads, qbas_score
from qcbm.bootstrap import bootstrap_mean_ci
from qcbm.runner import CircuitSpec, DatasetSpec, ExperimentConfig, run_ddqcl, run_thermal_suite, verify_ghz_recipes
from qcbm.statevector import QuantumState, apply_gms, apply_rx, apply_rz, apply_xx
from qcbm.datasets import bas_indices

from oracles import emd_lp_oracle, gms_matrix, random_distribution, rx_matrix, rz_matrix, xx_matrix

READOUT_BUDGETS = {6: 15, 10: 30, 14: 46, 30: 120, 254: 1554, 510: 3475, 2046: 16780}
T_C = 1.0


def test_c1_readout_budgets(criterion):
    t0 = time.perf_counter()
    got = {k: coupon_collector_reads(k) for k in READOUT_BUDGETS}
    dt = time.perf_counter() - t0
    ok = got == READOUT_BUDGETS and dt < 1e-3
    assert criterion(1, ok, f"reads={list(got.values())} in {dt * 1e3:.3f} ms")


def test_c2_bas_counting(criterion):
    t0 = time.perf_counter()
    bad = []
    for n, m in itertools.product(range(1, 5), repeat=2):
        pats = bas_patterns(n, m)
        strings = (index_to_spins(i, n * m) for i in range(2 ** (n * m)))
        brute = {s for s in strings if is_bas(s, n, m)}
        if not (len(pats) == 2**n + 2**m - 2 and pats == brute):
            bad.append((n, m))
    dt = time.perf_counter() - t0
    ok = not bad and dt < 1.0
    assert criterion(2, ok, f"16 (n,m) pairs, mismatches={bad}, {dt:.3f} s")


def test_c3_ghz_recipes(criterion):
    t0 = time.perf_counter()
    report = verify_ghz_recipes(12)
    dt = time.perf_counter() - t0
    worst = max(r["max_error"] for r in report.values())
    ok = sorted(report) == list(range(2, 13)) and all(r["passed"] for r in report.values()) and worst < 1e-9 and dt < 5
    assert criterion(3, ok, f"N=2..12 max error {worst:.1e}, {dt:.2f} s")


def test_c4_entropy_extrema(criterion):
    t0 = time.perf_counter()
    ghz = avg_two_qubit_entropy(execute(*build_ghz_recipe(4)))
    low = avg_two_qubit_entropy(phased_bas_state(PhaseParams()))
    high = avg_two_qubit_entropy(phased_bas_state(PhaseParams(u4=2 * np.pi / 3, u5=-2 * np.pi / 3)))
    V1, V2, S = entropy_surface(32)
    worst = max(
        abs(avg_two_qubit_entropy(phased_bas_state(PhaseParams(u1=v2, u2=v1))) - s)
        for v1, v2, s in zip(V1.ravel(), V2.ravel(), S.ravel())
    )
    dt = time.perf_counter() - t0
    ok = (
        abs(ghz - 1.0) < 1e-4
        and abs(low - 1.25163) < 1e-4
        and abs(high - 1.79248) < 1e-4
        and worst < 1e-8
        and dt < 10
    )
    assert criterion(4, ok, f"S={ghz:.5f}/{low:.5f}/{high:.5f} bits, grid max dev {worst:.1e}, {dt:.2f} s")


@pytest.mark.slow
def test_c5_trainability(criterion):
    t0 = time.perf_counter()
    medians, best = {}, {}
    for topo in ("all", "chain", "star"):
        cfg = ExperimentConfig(
            dataset=DatasetSpec(kind="bas", n=2, m=2),
            circuit=CircuitSpec(num_layers=2, topology=topo),
            iterations=100,
            restarts=25,
            shots=1000,
            seed=0,
        )
        kls = [r.final_kl for r in run_ddqcl(cfg)]
        medians[topo] = float(np.median(kls))
        best[topo] = min(kls)
    dt = time.perf_counter() - t0
    ok = best["all"] < 0.05 and medians["all"] < medians["chain"] and medians["all"] < medians["star"] and dt < 600
    detail = ", ".join(f"{t}: median {medians[t]:.3f} min {best[t]:.4f}" for t in medians)
    assert criterion(5, ok, f"KL nats {detail}; {dt:.0f} s")


@pytest.mark.slow
def test_c6_depth_temperature_ordering(criterion):
    # scaled-down run: N=5, 10 instances, 50 iterations
    t0 = time.perf_counter()
    temps = (2 * T_C, T_C, T_C / 1.5)
    res = run_thermal_suite(sizes=(5,), temperatures=temps, depths=(1, 2, 3), instances=10, iterations=50,
                            num_resamples=1000)
    med = {(T, L): res.cell(5, T, L).median_final_kl for T in temps for L in (1, 2, 3)}
    cold, hot = T_C / 1.5, 2 * T_C
    gap_hot = med[(hot, 1)] - med[(hot, 3)]
    gap_cold = med[(cold, 1)] - med[(cold, 3)]
    dt = time.perf_counter() - t0
    ok = med[(cold, 3)] <= med[(cold, 2)] <= med[(cold, 1)] and gap_hot < gap_cold and dt < 1800
    table = "; ".join(f"T={T:.3g}: " + "/".join(f"{med[(T, L)]:.3f}" for L in (1, 2, 3)) for T in temps)
    assert criterion(6, ok, f"median KL L1/L2/L3 {table}; gaps {gap_hot:.3f} < {gap_cold:.3f}; {dt:.0f} s")


def test_c7_qbas_closed_forms(criterion):
    t0 = time.perf_counter()
    a = np.zeros(16, dtype=complex)
    a[bas_indices(2, 2)] = 1 / np.sqrt(6)
    uniform = bootstrap_mean_ci(qbas_score(QuantumState(4, a), 2, 2, 25, rng_seed=0).scores, rng_seed=0)
    z = np.zeros(16, dtype=complex)
    z[0] = 1
    white = bootstrap_mean_ci(qbas_score(QuantumState(4, z), 2, 2, 25, rng_seed=0).scores, rng_seed=0)
    dt = time.perf_counter() - t0
    ok = uniform.center >= 0.95 and abs(white.center - 2 / 7) < 0.02 and dt < 5
    assert criterion(7, ok, f"uniform BAS {uniform.center:.4f}, |0000> {white.center:.4f} (2/7={2 / 7:.4f}), {dt:.2f} s")


def test_c8_oracle_equivalence(criterion):
    t0 = time.perf_counter()
    rng = np.random.default_rng(8)
    gate_dev = 0.0
    for n in range(1, 5):
        for _ in range(5):
            a = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
            s = QuantumState(n, a / np.linalg.norm(a))
            t = rng.uniform(-np.pi, np.pi)
            pairs = []
            for q in range(n):
                pairs.append((apply_rz(s, q, t), rz_matrix(n, q, t)))
                pairs.append((apply_rx(s, q, t), rx_matrix(n, q, t)))
            for i, j in itertools.permutations(range(n), 2):
                pairs.append((apply_xx(s, i, j, t), xx_matrix(n, i, j, t)))
            if n >= 2:
                pairs.append((apply_gms(s, t), gms_matrix(n, t)))
            for out, U in pairs:
                gate_dev = max(gate_dev, np.max(np.abs(out.amplitudes - U @ s.amplitudes)))
    emd_dev = 0.0
    for _ in range(50):
        n = int(rng.integers(1, 5))
        p, q = random_distribution(rng, n), random_distribution(rng, n)
        got = cost_emd(EmpiricalDistribution(n, p), EmpiricalDistribution(n, q))
        emd_dev = max(emd_dev, abs(got - emd_lp_oracle(p, q)))
    dt = time.perf_counter() - t0
    ok = gate_dev < 1e-10 and emd_dev < 1e-9 and dt < 30
    assert criterion(8, ok, f"gate max dev {gate_dev:.1e}, EMD max dev {emd_dev:.1e} over 50 pairs, {dt:.2f} s")


def test_c9_reproducibility(criterion, tmp_path, capsys):
    cfg = ExperimentConfig(dataset=DatasetSpec(kind="bas", n=2, m=2), iterations=20, restarts=3, shots=1000, seed=7)
    path = tmp_path / "train.json"
    path.write_text(json.dumps(cfg.to_dict()))
    codes = [cli.main(["train", str(path), "--out", str(tmp_path / run)]) for run in ("a", "b")]
    capsys.readouterr()
    names = sorted(p.name for p in (tmp_path / "a").glob("trace_r*.csv"))
    same = all((tmp_path / "a" / nm).read_bytes() == (tmp_path / "b" / nm).read_bytes() for nm in names)
    ok = codes == [0, 0] and len(names) == 3 and same
    assert criterion(9, ok, f"{len(names)} trace CSVs byte-identical across replays: {same}")
