"""
Preparing cat states with one entangling layer
===============================================

A two-layer all-to-all template can prepare the N-qubit cat state
(|0...0> + |1...1>)/sqrt(2) with every XX angle at pi/2. Odd N needs an
extra Rx(pi/2) on each qubit before the entangling layer.
"""

from qcbm import born_probabilities, build_ghz_recipe, execute

# Build the recipe for five qubits and look at the parameter vector
template, params = build_ghz_recipe(5)
print(template)
for label, value in zip(template.parameter_labels(), params):
    if value:
        print(f"  {label}: {value:+.4f}")

# Only the two cat-state patterns carry weight
dist = born_probabilities(execute(template, params))
for idx, p in dist.weights.items():
    print(f"  {idx:05b}: {p:.12f}")

# The same construction works for every register size up to twelve
for n in range(2, 13):
    t, p = build_ghz_recipe(n)
    probs = born_probabilities(execute(t, p)).probs
    err = max(abs(probs[0] - 0.5), abs(probs[-1] - 0.5), probs[1:-1].max(initial=0.0))
    print(f"N={n:2d}  params={t.num_params:3d}  max error {err:.1e}")
