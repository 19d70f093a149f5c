"""Experiment configuration and the data-driven circuit learning loop.

One training restart: initialize a swarm over the circuit parameters; at every
iteration execute the circuit for each particle, measure ``shots`` times, score
the shot histogram against the training samples, and move the swarm. The exact
KL divergence of the current global best (from noiseless probabilities) is
logged alongside, without touching any random stream.

Seeds: restart ``r`` uses ``seed + r`` for the swarm; the shot stream of
particle ``k`` at evaluation round ``t`` is ``SeedSequence([seed + r, t, k])``;
the dataset draw and Ising instance use ``dataset.seed`` (default: ``seed``).
"""

from __future__ import annotations

import json
import logging
import time
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any

import numpy as np

from ._io import atomic_write_text, config_hash
from .bootstrap import DEFAULT_RESAMPLES, BootstrapSummary, bootstrap_mean_ci, bootstrap_median_trace
from .circuit import TOPOLOGIES, CircuitTemplate, build_ghz_recipe, execute, execute_batch
from .costs import CostConfig, batch_cost, kl_divergence
from .datasets import (
    THERMAL_TEMPERATURES,
    bas_distribution,
    draw_dataset,
    ferromagnet_distribution,
    random_ising_instance,
    thermal_distribution,
)
from .distribution import EmpiricalDistribution
from .pso import SwarmConfig, default_config
from . import pso
from .qbas import DEFAULT_REPETITIONS, ScoreReport, qbas_score
from .statevector import born_probabilities

log = logging.getLogger(__name__)

DATASET_KINDS = ("bas", "thermal", "ferromagnet")
DEFAULT_SHOTS = 1000
DEFAULT_DATA_SIZE = 1000
DEFAULT_RESTARTS = 25


class ConfigError(ValueError):
    """Invalid experiment configuration; the message starts with the field path."""


def _require(cond: bool, path: str, msg: str) -> None:
    if not cond:
        raise ConfigError(f"{path}: {msg}")


@dataclass
class DatasetSpec:
    kind: str = "bas"
    n: int = 2
    m: int = 2
    num_qubits: int | None = None
    temperature: float = 1.0
    coupling_scale: str = "sqrt_n"
    size: int = DEFAULT_DATA_SIZE
    seed: int | None = None

    @property
    def register_size(self) -> int:
        return self.n * self.m if self.kind == "bas" else int(self.num_qubits)

    def validate(self) -> None:
        _require(self.kind in DATASET_KINDS, "dataset.kind", f"must be one of {DATASET_KINDS}")
        if self.kind == "bas":
            _require(self.n >= 1 and self.m >= 1, "dataset.n", "BAS dimensions must be >= 1")
            _require(2 <= self.n * self.m <= 16, "dataset.n", "n*m must be in [2, 16] for training")
        else:
            _require(self.num_qubits is not None, "dataset.num_qubits", "required for this kind")
            _require(2 <= self.num_qubits <= 16, "dataset.num_qubits", "must be in [2, 16]")
        if self.kind == "thermal":
            _require(self.temperature > 0, "dataset.temperature", "must be positive")
            _require(
                self.coupling_scale in ("sqrt_n", "inv_sqrt_n"),
                "dataset.coupling_scale",
                "must be 'sqrt_n' or 'inv_sqrt_n'",
            )
        _require(self.size >= 1, "dataset.size", "must be >= 1")


@dataclass
class CircuitSpec:
    num_layers: int = 2
    topology: str = "all"

    def validate(self) -> None:
        _require(self.num_layers >= 1, "circuit.num_layers", "must be >= 1")
        _require(self.topology in TOPOLOGIES, "circuit.topology", f"must be one of {TOPOLOGIES}")


@dataclass
class ExperimentConfig:
    dataset: DatasetSpec = field(default_factory=DatasetSpec)
    circuit: CircuitSpec = field(default_factory=CircuitSpec)
    cost: CostConfig = field(default_factory=CostConfig)
    swarm: dict = field(default_factory=dict)
    shots: int = DEFAULT_SHOTS
    iterations: int = 100
    restarts: int = DEFAULT_RESTARTS
    patience: int | None = None
    seed: int = 0
    log_kl: bool = True
    output_dir: str | None = None

    def validate(self) -> None:
        self.dataset.validate()
        self.circuit.validate()
        _require(self.shots >= 1, "shots", "must be >= 1")
        _require(self.iterations >= 1, "iterations", "must be >= 1")
        _require(self.restarts >= 1, "restarts", "must be >= 1")
        _require(self.patience is None or self.patience >= 1, "patience", "must be >= 1 or null")
        allowed = {"c1", "c2", "w", "max_step", "num_particles"}
        for key in self.swarm:
            _require(key in allowed, f"swarm.{key}", f"unknown key; allowed {sorted(allowed)}")

    @property
    def template(self) -> CircuitTemplate:
        return CircuitTemplate(self.dataset.register_size, self.circuit.num_layers, self.circuit.topology)

    @property
    def data_seed(self) -> int:
        return self.seed if self.dataset.seed is None else self.dataset.seed

    def seed_ledger(self) -> dict:
        return {
            "base": self.seed,
            "dataset": self.data_seed,
            "restarts": [self.seed + r for r in range(self.restarts)],
        }

    def to_dict(self) -> dict:
        d = asdict(self)
        d.pop("output_dir")
        return d

    def hash(self) -> str:
        return config_hash(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        d = dict(d)
        sections = {"dataset": DatasetSpec, "circuit": CircuitSpec, "cost": CostConfig}
        kwargs: dict[str, Any] = {}
        top = {f.name for f in fields(cls)}
        for key, value in d.items():
            _require(key in top, key, "unknown configuration key")
            if key in sections:
                _require(isinstance(value, dict), key, "must be a mapping")
                known = {f.name for f in fields(sections[key])}
                for sub in value:
                    _require(sub in known, f"{key}.{sub}", "unknown configuration key")
                try:
                    kwargs[key] = sections[key](**value)
                except (TypeError, ValueError) as exc:
                    raise ConfigError(f"{key}: {exc}") from exc
            else:
                kwargs[key] = value
        cfg = cls(**kwargs)
        cfg.validate()
        return cfg

    @classmethod
    def load(cls, path) -> "ExperimentConfig":
        try:
            raw = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: not valid JSON ({exc})") from exc
        return cls.from_dict(raw)


def target_distribution(spec: DatasetSpec) -> EmpiricalDistribution:
    if spec.kind == "bas":
        return bas_distribution(spec.n, spec.m)
    if spec.kind == "ferromagnet":
        return ferromagnet_distribution(spec.num_qubits)
    raise ValueError("thermal targets need an instance seed; use build_target")


def build_target(config: ExperimentConfig) -> EmpiricalDistribution:
    spec = config.dataset
    if spec.kind == "thermal":
        inst = random_ising_instance(
            spec.num_qubits, spec.temperature, config.data_seed, spec.coupling_scale
        )
        return thermal_distribution(inst)
    return target_distribution(spec)


class ShotObjective:
    """Finite-shot cost of a batch of parameter vectors against training data."""

    def __init__(self, template, data_probs, cost: CostConfig, shots: int, seed: int):
        self.template = template
        self.data_probs = np.asarray(data_probs)
        self.cost = cost
        self.shots = shots
        self.seed = seed
        self.round = 0

    def __call__(self, positions: np.ndarray) -> np.ndarray:
        psi = execute_batch(self.template, positions)
        probs = np.abs(psi) ** 2
        probs /= probs.sum(axis=1, keepdims=True)
        freqs = np.empty_like(probs)
        for k, p in enumerate(probs):
            rng = np.random.default_rng([self.seed, self.round, k])
            freqs[k] = rng.multinomial(self.shots, p) / self.shots
        self.round += 1
        return batch_cost(self.cost, self.data_probs, freqs, self.template.num_qubits)


@dataclass
class RunRecord:
    config: dict
    config_hash: str
    restart: int
    seed: int
    iterations: list[int]
    best_costs: list[float]
    kl_trace: list[float]
    best_params: list[float]
    best_cost: float
    final_kl: float
    wall_clock: float
    seed_ledger: dict

    def trace_csv(self) -> str:
        ledger = self.seed_ledger
        head = (
            f"# config_hash={self.config_hash} seed_ledger=base:{ledger['base']};"
            f"dataset:{ledger['dataset']};restart:{self.seed}"
        )
        rows = [head, "iteration,global_best_cost,kl_divergence"]
        for it, c, kl in zip(self.iterations, self.best_costs, self.kl_trace):
            rows.append(f"{it},{c!r},{kl!r}")
        return "\n".join(rows) + "\n"

    def to_dict(self) -> dict:
        return asdict(self)


def _exact_kl(template, target, params) -> float:
    return kl_divergence(target, born_probabilities(execute(template, params)))


def run_restart(config: ExperimentConfig, restart: int, target=None, data=None) -> RunRecord:
    template = config.template
    if target is None:
        target = build_target(config)
    if data is None:
        data, _ = draw_dataset(target, config.dataset.size, config.data_seed)
    seed = config.seed + restart
    swarm = default_config(template.num_params, rng_seed=seed, max_iterations=config.iterations)
    if config.swarm:
        swarm = SwarmConfig(**{**asdict(swarm), **config.swarm})
    objective = ShotObjective(template, data.probs, config.cost, config.shots, seed)

    kls: list[float] = []

    def on_step(state):
        kls.append(_exact_kl(template, target, state.gbest_position) if config.log_kl else float("nan"))

    t0 = time.perf_counter()
    result = pso.run(swarm, objective, template.num_params, patience=config.patience, callback=on_step)
    wall = time.perf_counter() - t0
    final_kl = _exact_kl(template, target, result.best_position)
    log.info("restart %d: cost %.6g, KL %.6g (%.1fs)", restart, result.best_cost, final_kl, wall)
    return RunRecord(
        config=config.to_dict(),
        config_hash=config.hash(),
        restart=restart,
        seed=seed,
        iterations=list(range(1, len(result.trace) + 1)),
        best_costs=[float(c) for c in result.trace],
        kl_trace=kls,
        best_params=result.best_position.tolist(),
        best_cost=float(result.best_cost),
        final_kl=float(final_kl),
        wall_clock=wall,
        seed_ledger=config.seed_ledger(),
    )


def run_ddqcl(config: ExperimentConfig) -> list[RunRecord]:
    """Train ``config.restarts`` independent swarms; write outputs if ``output_dir`` is set."""
    config.validate()
    target = build_target(config)
    data, samples = draw_dataset(target, config.dataset.size, config.data_seed)
    records = [run_restart(config, r, target, data) for r in range(config.restarts)]
    if config.output_dir:
        write_run_outputs(config, records, samples)
    return records


def write_run_outputs(config: ExperimentConfig, records: list[RunRecord], samples=None) -> Path:
    from .datasets import write_dataset

    out = Path(config.output_dir)
    h = config.hash()
    atomic_write_text(out / "config.json", json.dumps(config.to_dict(), indent=2, sort_keys=True) + "\n")
    for rec in records:
        atomic_write_text(out / f"trace_r{rec.restart:03d}.csv", rec.trace_csv())
    best = best_record(records)
    summary = {
        "config_hash": h,
        "seed_ledger": config.seed_ledger(),
        "template": config.template.to_dict(),
        "best_restart": best.restart,
        "kl_units": "nats",
        "records": [
            {k: v for k, v in r.to_dict().items() if k not in ("config", "iterations", "best_costs", "kl_trace")}
            for r in records
        ],
    }
    finals = [r.final_kl for r in records]
    if len(finals) >= 2:
        summary["final_kl_bootstrap"] = bootstrap_median_trace(np.array(finals)[:, None], rng_seed=config.seed)[0].to_dict()
    atomic_write_text(out / "summary.json", json.dumps(summary, indent=2, sort_keys=True) + "\n")
    if samples is not None:
        write_dataset(
            out / "dataset.txt",
            samples,
            config.dataset.register_size,
            {"config_hash": h, "generator": asdict(config.dataset), "seed": config.data_seed},
        )
    return out


def best_record(records: list[RunRecord]) -> RunRecord:
    return min(records, key=lambda r: r.best_cost)


# -- qBAS benchmark ----------------------------------------------------------


@dataclass
class QbasBenchmark:
    report: ScoreReport
    summary: BootstrapSummary
    restart: int | None = None

    def to_dict(self) -> dict:
        return {"report": self.report.to_dict(), "bootstrap": self.summary.to_dict(), "restart": self.restart}


def qbas_benchmark(
    template: CircuitTemplate,
    params,
    n: int = 2,
    m: int = 2,
    repetitions: int = DEFAULT_REPETITIONS,
    rng_seed: int = 0,
    num_resamples: int = DEFAULT_RESAMPLES,
) -> QbasBenchmark:
    state = execute(template, params)
    report = qbas_score(state, n, m, repetitions, rng_seed)
    return QbasBenchmark(report, bootstrap_mean_ci(report.scores, num_resamples, rng_seed))


def run_qbas_benchmark(config: ExperimentConfig, records: list[RunRecord], **kwargs) -> QbasBenchmark:
    """Score the lowest-cost restart of a BAS training run."""
    _require(config.dataset.kind == "bas", "dataset.kind", "qBAS needs a BAS dataset")
    best = best_record(records)
    kwargs.setdefault("rng_seed", config.seed)
    bench = qbas_benchmark(config.template, best.best_params, config.dataset.n, config.dataset.m, **kwargs)
    bench.restart = best.restart
    return bench


# -- thermal suite -----------------------------------------------------------


@dataclass
class ThermalCell:
    num_qubits: int
    temperature: float
    num_layers: int
    final_kls: list[float]
    median_trace: list[BootstrapSummary]

    @property
    def median_final_kl(self) -> float:
        return float(np.median(self.final_kls))


@dataclass
class ThermalSuiteResult:
    cells: list[ThermalCell]
    instances: int
    iterations: int

    def cell(self, num_qubits: int, temperature: float, num_layers: int) -> ThermalCell:
        for c in self.cells:
            if c.num_qubits == num_qubits and np.isclose(c.temperature, temperature) and c.num_layers == num_layers:
                return c
        raise KeyError((num_qubits, temperature, num_layers))

    def to_csv(self) -> str:
        rows = ["num_qubits,temperature,num_layers,iteration,median_kl,lower,upper,excluded"]
        for c in self.cells:
            for it, s in enumerate(c.median_trace, start=1):
                rows.append(
                    f"{c.num_qubits},{c.temperature!r},{c.num_layers},{it},{s.center!r},{s.lower!r},{s.upper!r},{s.excluded_count}"
                )
        return "\n".join(rows) + "\n"


def run_thermal_suite(
    sizes=(5, 6),
    temperatures=THERMAL_TEMPERATURES,
    depths=(1, 2, 3),
    instances: int = 25,
    iterations: int = 50,
    shots: int = DEFAULT_SHOTS,
    seed: int = 0,
    coupling_scale: str = "inv_sqrt_n",
    num_resamples: int = DEFAULT_RESAMPLES,
    output_dir=None,
) -> ThermalSuiteResult:
    """All-to-all circuits of each depth trained on random thermal instances.

    Instance ``i`` of every (size, temperature) cell uses seed ``seed + i`` for
    the Ising couplings, the training draw and the swarm, so depths are
    compared on identical data.
    """
    cells = []
    for n in sizes:
        for T in temperatures:
            for L in depths:
                finals, traces = [], []
                for i in range(instances):
                    cfg = ExperimentConfig(
                        dataset=DatasetSpec(
                            kind="thermal", num_qubits=n, temperature=T,
                            coupling_scale=coupling_scale, seed=seed + i,
                        ),
                        circuit=CircuitSpec(num_layers=L, topology="all"),
                        shots=shots,
                        iterations=iterations,
                        restarts=1,
                        seed=seed + i,
                    )
                    rec = run_restart(cfg, 0)
                    finals.append(rec.final_kl)
                    traces.append(rec.kl_trace)
                med = bootstrap_median_trace(np.array(traces), num_resamples, seed) if instances >= 2 else []
                cells.append(ThermalCell(n, float(T), L, finals, med))
                log.info("thermal N=%d T=%.3g L=%d median KL %.4g", n, T, L, np.median(finals))
    result = ThermalSuiteResult(cells, instances, iterations)
    if output_dir:
        atomic_write_text(Path(output_dir) / "thermal_suite.csv", result.to_csv())
    return result


# -- GHZ recipes -------------------------------------------------------------


def verify_ghz_recipes(max_qubits: int = 12) -> dict[int, dict]:
    """Build and check the cat-state recipe for every N in ``2..max_qubits``."""
    if not 2 <= max_qubits <= 12:
        raise ValueError("max_qubits must be in [2, 12]")
    report = {}
    for n in range(2, max_qubits + 1):
        try:
            template, params = build_ghz_recipe(n)
        except RuntimeError as exc:
            report[n] = {"passed": False, "max_error": float("nan"), "error": str(exc)}
            continue
        p = born_probabilities(execute(template, params)).probs
        target = np.zeros_like(p)
        target[[0, -1]] = 0.5
        err = float(np.max(np.abs(p - target)))
        report[n] = {"passed": err <= 1e-9, "max_error": err, "params": params.tolist()}
    return report
