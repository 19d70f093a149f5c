"""Quantum circuit Born machines on an ion-trap native gate set.

Statevector simulation, layered circuit templates, synthetic datasets, training
costs, a particle swarm optimizer, the qBAS benchmark score, bootstrap
statistics and entanglement analytics.
"""

from .bootstrap import BootstrapSummary, bootstrap_mean_ci, bootstrap_median_ci, percentile
from .circuit import CircuitTemplate, Topology, build_ghz_recipe, execute, execute_batch, param_count
from .costs import CostConfig, cost_emd, cost_mm, cost_nll, kl_divergence
from .datasets import (
    IsingInstance,
    bas_distribution,
    bas_patterns,
    draw_dataset,
    ferromagnet_distribution,
    is_bas,
    random_ising_instance,
    thermal_distribution,
)
from .distribution import CapacityError, EmpiricalDistribution, index_to_spins, spins_to_index
from .entanglement import (
    PhaseParams,
    avg_two_qubit_entropy,
    phased_bas_state,
    reduced_density,
    s_bas22_closed_form,
    von_neumann_entropy,
)
from .qbas import ScoreReport, coupon_collector_reads, precision, qbas_score, recall, score_shots
from .statevector import (
    QuantumState,
    apply_gms,
    apply_rx,
    apply_rz,
    apply_xx,
    born_probabilities,
    new_zero_state,
    sample_shots,
)

__all__ = [
    "BootstrapSummary",
    "CapacityError",
    "CircuitTemplate",
    "CostConfig",
    "EmpiricalDistribution",
    "IsingInstance",
    "PhaseParams",
    "QuantumState",
    "ScoreReport",
    "Topology",
    "apply_gms",
    "apply_rx",
    "apply_rz",
    "apply_xx",
    "avg_two_qubit_entropy",
    "bas_distribution",
    "bas_patterns",
    "bootstrap_mean_ci",
    "bootstrap_median_ci",
    "born_probabilities",
    "build_ghz_recipe",
    "cost_emd",
    "cost_mm",
    "cost_nll",
    "coupon_collector_reads",
    "draw_dataset",
    "execute",
    "execute_batch",
    "ferromagnet_distribution",
    "index_to_spins",
    "is_bas",
    "kl_divergence",
    "new_zero_state",
    "param_count",
    "percentile",
    "phased_bas_state",
    "precision",
    "qbas_score",
    "random_ising_instance",
    "recall",
    "reduced_density",
    "s_bas22_closed_form",
    "sample_shots",
    "score_shots",
    "spins_to_index",
    "thermal_distribution",
    "von_neumann_entropy",
]

__version__ = "0.1.0"
