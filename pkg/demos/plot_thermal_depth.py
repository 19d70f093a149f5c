"""
Depth versus temperature on random Ising models
================================================

Colder Boltzmann distributions of random Ising instances are harder to
represent. Here we compare all-to-all circuits of depth 1, 2 and 3 on a
scaled-down sweep: N=5, four instances per temperature, 50 iterations.
"""

from qcbm.datasets import THERMAL_TEMPERATURES, random_ising_instance, thermal_distribution
from qcbm.costs import kl_divergence
from qcbm.distribution import EmpiricalDistribution
from qcbm.runner import run_thermal_suite

# How far from uniform is each temperature? (SK-scaled couplings)
for T in THERMAL_TEMPERATURES:
    inst = random_ising_instance(5, T, rng_seed=0, scale="inv_sqrt_n")
    target = thermal_distribution(inst)
    print(f"T={T:.3g}: KL(target | uniform) = {kl_divergence(target, EmpiricalDistribution.uniform(5)):.3f} nats")

result = run_thermal_suite(sizes=(5,), instances=4, iterations=50, num_resamples=1000)

# Median final KL per cell, with the bootstrap interval at the last iteration
for cell in result.cells:
    last = cell.median_trace[-1]
    print(f"T={cell.temperature:.3g} L={cell.num_layers}: median KL {cell.median_final_kl:.3f}  "
          f"(90% CI {last.lower:.3f}-{last.upper:.3f})")
