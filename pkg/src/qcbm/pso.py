"""Global-best particle swarm optimization.

The objective is batched: it receives the ``(num_particles, dim)`` position
matrix and returns one cost per particle. Use :func:`per_particle` to lift a
scalar function.
"""

from __future__ import annotations

import copy
import logging
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

log = logging.getLogger(__name__)

Objective = Callable[[np.ndarray], np.ndarray]

STALL_TOL = 1e-12
DEFAULT_PATIENCE = 20


class ObjectiveError(RuntimeError):
    """The cost oracle failed for a given particle."""

    def __init__(self, particle: int, cause: BaseException | str):
        self.particle = particle
        super().__init__(f"objective failed for particle {particle}: {cause}")


@dataclass(frozen=True)
class SwarmConfig:
    c1: float = 0.5
    c2: float = 0.5
    w: float = 0.5
    max_step: float = np.pi
    num_particles: int = 2
    max_iterations: int = 100
    rng_seed: int = 0

    def __post_init__(self):
        if min(self.c1, self.c2, self.w) < 0:
            raise ValueError("c1, c2 and w must be nonnegative")
        if not self.max_step > 0:
            raise ValueError("max_step must be positive")
        if self.num_particles < 2:
            raise ValueError("a swarm needs at least two particles")


def default_config(param_dim: int, **overrides) -> SwarmConfig:
    """c1 = c2 = w = 0.5, step clamp pi, two particles per parameter."""
    if param_dim < 1:
        raise ValueError("param_dim must be >= 1")
    return SwarmConfig(num_particles=2 * param_dim, **overrides)


@dataclass(frozen=True)
class SwarmState:
    positions: np.ndarray = field(repr=False)
    velocities: np.ndarray = field(repr=False)
    pbest_positions: np.ndarray = field(repr=False)
    pbest_costs: np.ndarray = field(repr=False)
    gbest_position: np.ndarray = field(repr=False)
    gbest_cost: float
    iteration: int
    rng: np.random.Generator = field(repr=False, compare=False)
    config: SwarmConfig = field(repr=False)

    def __post_init__(self):
        for name in ("positions", "velocities", "pbest_positions", "pbest_costs", "gbest_position"):
            getattr(self, name).flags.writeable = False


def per_particle(fn: Callable[[np.ndarray], float]) -> Objective:
    """Wrap a scalar cost ``fn(x)`` as a batched objective."""

    def objective(positions: np.ndarray) -> np.ndarray:
        out = np.empty(len(positions))
        for k, x in enumerate(positions):
            try:
                out[k] = fn(x)
            except Exception as exc:
                raise ObjectiveError(k, exc) from exc
        return out

    return objective


def _evaluate(objective: Objective, positions: np.ndarray) -> np.ndarray:
    costs = np.asarray(objective(positions), dtype=float)
    if costs.shape != (len(positions),):
        raise ValueError(f"objective returned shape {costs.shape}, expected ({len(positions)},)")
    bad = np.flatnonzero(np.isnan(costs))
    if bad.size:
        raise ObjectiveError(int(bad[0]), "cost is NaN")
    return costs


def init_swarm(config: SwarmConfig, param_dim: int, objective: Objective, rng_seed: int | None = None) -> SwarmState:
    """Positions uniform in [-pi, pi), velocities uniform in [-pi/2, pi/2)."""
    seed = config.rng_seed if rng_seed is None else rng_seed
    rng = np.random.default_rng(seed)
    shape = (config.num_particles, param_dim)
    x = rng.uniform(-np.pi, np.pi, size=shape)
    v = rng.uniform(-np.pi / 2, np.pi / 2, size=shape)
    costs = _evaluate(objective, x)
    g = int(np.argmin(costs))
    return SwarmState(
        positions=x,
        velocities=v,
        pbest_positions=x.copy(),
        pbest_costs=costs,
        gbest_position=x[g].copy(),
        gbest_cost=float(costs[g]),
        iteration=0,
        rng=rng,
        config=config,
    )


def step(state: SwarmState, objective: Objective) -> SwarmState:
    cfg = state.config
    x = state.positions
    rng = copy.deepcopy(state.rng)
    r1 = rng.random(x.shape)
    r2 = rng.random(x.shape)
    v = (
        cfg.w * state.velocities
        + cfg.c1 * r1 * (state.pbest_positions - x)
        + cfg.c2 * r2 * (state.gbest_position[None, :] - x)
    )
    v = np.clip(v, -cfg.max_step, cfg.max_step)
    x = x + v
    costs = _evaluate(objective, x)

    improved = costs < state.pbest_costs
    pbest_x = np.where(improved[:, None], x, state.pbest_positions)
    pbest_c = np.where(improved, costs, state.pbest_costs)
    g = int(np.argmin(pbest_c))
    if pbest_c[g] < state.gbest_cost:
        gbest_x, gbest_c = pbest_x[g].copy(), float(pbest_c[g])
    else:
        gbest_x, gbest_c = state.gbest_position, state.gbest_cost
    return replace(
        state,
        positions=x,
        velocities=v,
        pbest_positions=pbest_x,
        pbest_costs=pbest_c,
        gbest_position=gbest_x,
        gbest_cost=gbest_c,
        iteration=state.iteration + 1,
        rng=rng,
    )


@dataclass
class PSOResult:
    best_position: np.ndarray
    best_cost: float
    trace: list[float]
    state: SwarmState
    stopped_early: bool


def run(
    config: SwarmConfig,
    objective: Objective,
    param_dim: int,
    max_iterations: int | None = None,
    patience: int | None = DEFAULT_PATIENCE,
    callback: Callable[[SwarmState], None] | None = None,
) -> PSOResult:
    """Iterate until ``max_iterations`` or a stall of ``patience`` iterations.

    ``trace[t]`` is the global-best cost after iteration ``t + 1``. A stall
    iteration is one whose best cost is not below the previous iteration's by
    more than 1e-12. ``patience=None`` disables early stopping.
    """
    n_iter = config.max_iterations if max_iterations is None else max_iterations
    state = init_swarm(config, param_dim, objective)
    trace: list[float] = []
    stall = 0
    early = False
    for _ in range(n_iter):
        state = step(state, objective)
        if trace and state.gbest_cost >= trace[-1] - STALL_TOL:
            stall += 1
        else:
            stall = 0
        trace.append(state.gbest_cost)
        if callback is not None:
            callback(state)
        if patience is not None and stall >= patience:
            early = True
            log.debug("stopping after %d iterations: no progress for %d", len(trace), patience)
            break
    return PSOResult(state.gbest_position.copy(), state.gbest_cost, trace, state, early)
