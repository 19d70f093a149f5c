import itertools
import json

import numpy as np
import pytest

from qcbm.circuit import (
    PARAM_ORDER,
    CircuitTemplate,
    Topology,
    build_ghz_recipe,
    execute,
    execute_batch,
    param_count,
)
from qcbm.statevector import born_probabilities, new_zero_state, apply_xx

from oracles import circuit_matrix_oracle


@pytest.mark.parametrize("n", range(2, 8))
def test_topology_edge_counts(n):
    assert len(Topology("all", n).edges) == n * (n - 1) // 2
    assert Topology("chain", n).edges == tuple((i, i + 1) for i in range(n - 1))
    assert Topology("star", n).edges == tuple((0, j) for j in range(1, n))


def test_unknown_topology():
    with pytest.raises(ValueError):
        Topology("ring", 4)


@pytest.mark.parametrize("topo", ["all", "chain", "star"])
def test_param_count_single_layer(topo):
    assert param_count(CircuitTemplate(4, 1, topo)) == 8


def test_param_count_examples():
    assert param_count(CircuitTemplate(4, 2, "all")) == 14
    assert param_count(CircuitTemplate(4, 2, "chain")) == 11
    assert param_count(CircuitTemplate(4, 2, "star")) == 11


def test_param_count_rules_by_hand():
    # N=5, L=5 all: 2N + 10 + 3N + 10 + 2N
    assert param_count(CircuitTemplate(5, 5, "all")) == 10 + 10 + 15 + 10 + 10
    # N=3, L=3 chain: 2N + 2 + 2N
    assert param_count(CircuitTemplate(3, 3, "chain")) == 6 + 2 + 6


@pytest.mark.parametrize("n", range(2, 10))
def test_chain_star_same_count(n):
    assert param_count(CircuitTemplate(n, 2, "chain")) == param_count(CircuitTemplate(n, 2, "star"))


@pytest.mark.parametrize("n,topo", list(itertools.product(range(2, 8), ["all", "chain", "star"])))
def test_doubling_depth_count(n, topo):
    c2 = param_count(CircuitTemplate(n, 2, topo))
    c4 = param_count(CircuitTemplate(n, 4, topo))
    assert c4 == 2 * c2 - 2 * n + 3 * n


def test_parameter_labels_order():
    t = CircuitTemplate(2, 3, "all")
    assert t.parameter_labels() == [
        ("rot", 1, 0, 2), ("rot", 1, 0, 3), ("rot", 1, 1, 2), ("rot", 1, 1, 3),
        ("xx", 2, 0, 1),
        ("rot", 3, 0, 1), ("rot", 3, 0, 2), ("rot", 3, 1, 1), ("rot", 3, 1, 2),
    ]
    assert len(t.parameter_labels()) == t.num_params


def test_execute_zero_params_is_identity():
    t = CircuitTemplate(4, 4, "all")
    s = execute(t, np.zeros(t.num_params))
    assert born_probabilities(s).weights == {0: 1.0}


def test_execute_reduces_to_xx():
    t = CircuitTemplate(2, 2, "all")
    s = execute(t, [0, 0, 0, 0, np.pi / 2])
    assert born_probabilities(s).weights == pytest.approx({0: 0.5, 3: 0.5})
    np.testing.assert_allclose(s.amplitudes, apply_xx(new_zero_state(2), 0, 1, np.pi / 2).amplitudes, atol=1e-15)


@pytest.mark.parametrize("topo", ["all", "chain", "star"])
@pytest.mark.parametrize("n,layers", [(3, 3), (2, 1), (4, 2), (3, 4), (4, 5)])
def test_execute_matches_matrix_oracle(n, layers, topo, rng):
    t = CircuitTemplate(n, layers, topo)
    for _ in range(3):
        params = rng.uniform(-np.pi, np.pi, t.num_params)
        ref = circuit_matrix_oracle(n, layers, t.edges, params)
        np.testing.assert_allclose(execute(t, params).amplitudes, ref, atol=1e-10)


def test_execute_batch_matches_single(rng):
    t = CircuitTemplate(4, 3, "star")
    P = rng.uniform(-np.pi, np.pi, (7, t.num_params))
    batch = execute_batch(t, P)
    for k in range(7):
        np.testing.assert_array_equal(batch[k], execute(t, P[k]).amplitudes)


def test_execute_is_pure(rng):
    t = CircuitTemplate(3, 3, "all")
    p = rng.uniform(-np.pi, np.pi, t.num_params)
    assert execute(t, p).amplitudes.tobytes() == execute(t, p).amplitudes.tobytes()


def test_entangling_order_independent(rng):
    t = CircuitTemplate(4, 2, "all")
    p = rng.uniform(-np.pi, np.pi, t.num_params)
    ref = execute(t, p).amplitudes
    s = new_zero_state(4)
    # rotation layer via the template with zero XX angles, then XX edges reversed
    q = p.copy()
    q[8:] = 0
    s = execute(t, q)
    for (i, j), theta in reversed(list(zip(t.edges, p[8:]))):
        s = apply_xx(s, i, j, theta)
    np.testing.assert_allclose(s.amplitudes, ref, atol=1e-10)


def test_execute_length_mismatch():
    t = CircuitTemplate(3, 2, "chain")
    with pytest.raises(ValueError):
        execute(t, np.zeros(t.num_params + 1))


@pytest.mark.parametrize("n", range(2, 13))
def test_ghz_recipe(n):
    t, p = build_ghz_recipe(n)
    probs = born_probabilities(execute(t, p)).probs
    target = np.zeros(2**n)
    target[[0, -1]] = 0.5
    assert np.max(np.abs(probs - target)) < 1e-9
    used = p[p != 0]
    np.testing.assert_allclose(np.abs(used), np.pi / 2)


def test_ghz_recipe_parity_variants():
    _, even = build_ghz_recipe(4)
    _, odd = build_ghz_recipe(5)
    assert np.count_nonzero(even) == 6  # GMS only
    assert np.count_nonzero(odd) == 10 + 5  # GMS plus Rx(pi/2) on every qubit


def test_ghz_guard():
    with pytest.raises(ValueError):
        build_ghz_recipe(1)


def test_template_serialization_round_trip():
    t = CircuitTemplate(5, 3, "star")
    d = json.loads(json.dumps(t.to_dict()))
    assert d["param_order"] == PARAM_ORDER
    assert CircuitTemplate.from_dict(d) == t
    d["param_order"] = "something-else"
    with pytest.raises(ValueError):
        CircuitTemplate.from_dict(d)
