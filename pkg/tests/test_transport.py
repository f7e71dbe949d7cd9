import numpy as np
import pytest

from got.errors import ValidationError
from got.generators import (
    random_connected_graph,
    random_distribution,
    random_tree,
)
from got.graphs import DirectedGraph, build_incidence, shortest_path_metric
from got.measures import integrate_pair, tv_distance
from got.transport import (
    beckmann_flow,
    flow_to_constant_pair,
    w1_auto,
    w1_beckmann,
    w1_difference,
    w1_kantorovich,
    w1_tree,
)
from got.worked_examples import binomial_example, path_graph

STAR3 = DirectedGraph(("0", "1", "2", "3"), ((0, 1), (0, 2), (0, 3)), root=0)
CYCLE4 = DirectedGraph(("0", "1", "2", "3"), ((0, 1), (1, 2), (3, 2), (0, 3)), root=0)
F0_CYCLE = np.array([0.25, 0.25, 0.25, 0.25])
F1_CYCLE = np.array([0.09, 0.01, 0.09, 0.81])


def test_w1_tree_examples():
    path = path_graph(3)
    uniform = np.ones(3) / 3
    assert w1_tree(path, uniform, uniform) == 0.0
    assert w1_tree(path, [1, 0, 0], [0, 0, 1]) == pytest.approx(2.0)
    with pytest.raises(ValidationError):
        w1_tree(CYCLE4, F0_CYCLE, F1_CYCLE)


def test_w1_tree_binomial():
    example = binomial_example()
    tree_value = w1_tree(example.graph, example.f0, example.f1)
    oracle, _ = w1_kantorovich(example.graph, example.f0, example.f1)
    assert tree_value == pytest.approx(2.5, abs=1e-12)
    assert abs(tree_value - oracle) <= 1e-8


def test_kantorovich_examples():
    uniform = np.ones(4) / 4
    value, plan = w1_kantorovich(STAR3, uniform, uniform)
    assert value <= 1e-9
    value, _ = w1_kantorovich(STAR3, [0, 1, 0, 0], [0, 0, 1, 0])
    assert value == pytest.approx(2.0)
    value, plan = w1_kantorovich(CYCLE4, F0_CYCLE, F1_CYCLE)
    assert value == pytest.approx(0.8, abs=1e-9)
    assert np.abs(plan.sum(axis=1) - F0_CYCLE).max() <= 1e-8
    assert np.abs(plan.sum(axis=0) - F1_CYCLE).max() <= 1e-8


def test_beckmann_examples():
    single = DirectedGraph(("0", "1"), ((0, 1),))
    value, J = w1_beckmann(single, [1, 0], [1, 0])
    assert value == pytest.approx(0.0, abs=1e-12)
    value, J = w1_beckmann(single, [1, 0], [0, 1])
    assert value == pytest.approx(1.0)
    assert J == pytest.approx([1.0])
    value, J = w1_beckmann(CYCLE4, F0_CYCLE, F1_CYCLE)
    oracle, _ = w1_kantorovich(CYCLE4, F0_CYCLE, F1_CYCLE)
    assert abs(value - oracle) <= 1e-8
    omega = build_incidence(CYCLE4)
    assert np.abs(omega @ J - (F1_CYCLE - F0_CYCLE)).max() <= 1e-8


def test_beckmann_rejects_unbalanced():
    with pytest.raises(ValidationError, match="sum to zero"):
        beckmann_flow(CYCLE4, np.array([1.0, 0, 0, 0]))


def test_flow_to_constant_pair():
    pair = flow_to_constant_pair(np.array([1.0]))
    assert pair.v[0] == pytest.approx([1.0])
    assert pair.g[0] == pytest.approx([1.0])

    pair = flow_to_constant_pair(np.array([0.3, -0.5]))
    assert pair.v[0] == pytest.approx([0.8, -0.8])
    assert pair.g[0] == pytest.approx([0.375, 0.625])

    degenerate = flow_to_constant_pair(np.zeros(3))
    assert np.abs(degenerate.v).max() == 0.0
    assert degenerate.g[0] == pytest.approx([1 / 3] * 3)


def test_flow_pair_energy_matches_total_flow():
    from got.dynamics import energy

    _, J = w1_beckmann(CYCLE4, F0_CYCLE, F1_CYCLE)
    pair = flow_to_constant_pair(J)
    total = np.abs(J).sum()
    for q in (1.0, 2.0, 3.0):
        assert energy(pair, q).value == pytest.approx(total, abs=1e-12)


def test_flow_pair_drives_the_difference():
    rng = np.random.default_rng(0)
    for _ in range(10):
        graph = random_connected_graph(rng, int(rng.integers(2, 9)), 2)
        f0 = random_distribution(rng, graph.n_vertices)
        f1 = random_distribution(rng, graph.n_vertices)
        _, J = w1_beckmann(graph, f0, f1)
        path = integrate_pair(f0, flow_to_constant_pair(J), build_incidence(graph))
        assert np.abs(path.samples[-1] - f1).max() <= 1e-9


def test_w1_auto_dispatch():
    example = binomial_example()
    assert w1_auto(example.graph, example.f0, example.f1) == pytest.approx(
        w1_tree(example.graph, example.f0, example.f1)
    )
    value, _ = w1_beckmann(CYCLE4, F0_CYCLE, F1_CYCLE)
    assert w1_auto(CYCLE4, F0_CYCLE, F1_CYCLE) == pytest.approx(value)


@pytest.mark.parametrize("seed", range(10))
def test_w1_auto_matches_oracle(seed):
    rng = np.random.default_rng(600 + seed)
    if seed % 2:
        graph = random_tree(rng, int(rng.integers(2, 10)))
    else:
        graph = random_connected_graph(rng, int(rng.integers(2, 9)), 3)
    f0 = random_distribution(rng, graph.n_vertices)
    f1 = random_distribution(rng, graph.n_vertices)
    oracle, _ = w1_kantorovich(graph, f0, f1)
    assert abs(w1_auto(graph, f0, f1) - oracle) <= 1e-8


@pytest.mark.parametrize("seed", range(6))
def test_metric_axioms(seed):
    rng = np.random.default_rng(700 + seed)
    graph = random_connected_graph(rng, 7, 2)
    n = graph.n_vertices
    a = random_distribution(rng, n)
    b = random_distribution(rng, n)
    c = random_distribution(rng, n)
    w = lambda x, y: w1_kantorovich(graph, x, y)[0]
    assert abs(w(a, b) - w(b, a)) <= 1e-8
    assert w(a, c) <= w(a, b) + w(b, c) + 1e-8
    assert w(a, a) <= 1e-9
    metric = shortest_path_metric(graph)
    x, y = rng.integers(0, n, size=2)
    dx = np.zeros(n)
    dx[x] = 1.0
    dy = np.zeros(n)
    dy[y] = 1.0
    assert abs(w(dx, dy) - metric[x, y]) <= 1e-8


@pytest.mark.parametrize("seed", range(6))
def test_tv_lower_bound(seed):
    rng = np.random.default_rng(800 + seed)
    graph = random_connected_graph(rng, 8, 2)
    f0 = random_distribution(rng, 8)
    f1 = random_distribution(rng, 8)
    value, _ = w1_beckmann(graph, f0, f1)
    assert tv_distance(f0, f1) <= value + 1e-8


def test_w1_difference_matches_kantorovich():
    rng = np.random.default_rng(5)
    for _ in range(5):
        graph = random_connected_graph(rng, 6, 2)
        f0 = random_distribution(rng, 6)
        f1 = random_distribution(rng, 6)
        direct, _ = w1_kantorovich(graph, f0, f1)
        assert abs(w1_difference(graph, f1 - f0) - direct) <= 1e-8
    # signed vector beyond any distribution pair: scale invariance
    delta = np.array([3.0, -1.0, -1.0, -1.0])
    star_value = w1_difference(STAR3, delta)
    assert star_value == pytest.approx(3.0)
