import numpy as np
import pytest

from got.errors import ValidationError
from got.generators import random_connected_graph, random_tree
from got.graphs import (
    DirectedGraph,
    build_incidence,
    divergence,
    gradient,
    graph_from_json,
    graph_to_json,
    is_outward_tree,
    laplacian,
    outward_tree_structure,
    shortest_path_metric,
    spanning_tree_decomposition,
)
from helpers import row_reduction_rank

SINGLE = DirectedGraph(("0", "1"), ((0, 1),))
PATH3 = DirectedGraph(("0", "1", "2"), ((0, 1), (1, 2)), root=0)
STAR3 = DirectedGraph(("0", "1", "2", "3"), ((0, 1), (0, 2), (0, 3)), root=0)
CYCLE4 = DirectedGraph(("0", "1", "2", "3"), ((0, 1), (1, 2), (3, 2), (0, 3)), root=0)


def test_incidence_single_edge():
    assert np.array_equal(build_incidence(SINGLE), [[-1.0], [1.0]])


def test_incidence_path():
    assert np.array_equal(
        build_incidence(PATH3), [[-1, 0], [1, -1], [0, 1]]
    )


def test_incidence_star_center_row():
    omega = build_incidence(STAR3)
    assert np.array_equal(omega[0], [-1, -1, -1])
    assert np.array_equal(omega.sum(axis=0), np.zeros(3))


def test_graph_validation():
    with pytest.raises(ValidationError, match="self-loop"):
        DirectedGraph(("a", "b"), ((0, 0),))
    with pytest.raises(ValidationError, match="duplicates"):
        DirectedGraph(("a", "b"), ((0, 1), (1, 0)))
    with pytest.raises(ValidationError, match="not connected"):
        DirectedGraph(("a", "b", "c"), ((0, 1),))
    with pytest.raises(ValidationError, match="distinct"):
        DirectedGraph(("a", "a"), ((0, 1),))


def test_gradient_examples():
    assert gradient(build_incidence(SINGLE), [3.0, 5.0]) == pytest.approx([-2.0])
    assert gradient(build_incidence(PATH3), [7.0, 7.0, 7.0]) == pytest.approx([0, 0])
    assert gradient(build_incidence(PATH3), [1.0, 0.0, 0.0]) == pytest.approx([1, 0])
    with pytest.raises(ValidationError):
        gradient(build_incidence(PATH3), [1.0, 2.0])


def test_divergence_examples():
    assert divergence(build_incidence(SINGLE), [1.0]) == pytest.approx([1, -1])
    out = divergence(build_incidence(STAR3), [1 / 3, 1 / 3, 1 / 3])
    assert out == pytest.approx([1.0, -1 / 3, -1 / 3, -1 / 3])
    with pytest.raises(ValidationError):
        divergence(build_incidence(STAR3), [1.0])


def test_laplacian_examples():
    assert np.array_equal(laplacian(build_incidence(SINGLE)), [[1, -1], [-1, 1]])
    assert np.array_equal(
        laplacian(build_incidence(PATH3)),
        [[1, -1, 0], [-1, 2, -1], [0, -1, 1]],
    )


@pytest.mark.parametrize("seed", range(8))
def test_operator_identities_random(seed):
    rng = np.random.default_rng(seed)
    graph = random_connected_graph(rng, int(rng.integers(2, 11)), int(rng.integers(0, 4)))
    omega = build_incidence(graph)
    f = rng.normal(size=graph.n_vertices)
    g = rng.normal(size=graph.n_edges)
    # adjointness: <grad f, g> = <f, div g> = -f', Omega g
    lhs = gradient(omega, f) @ g
    rhs = f @ divergence(omega, g)
    assert abs(lhs - rhs) <= 1e-12
    assert abs(lhs - (-(f @ omega @ g))) <= 1e-12
    # divergence sums to zero
    assert abs(divergence(omega, g).sum()) <= 1e-12
    # laplacian agrees entrywise and annihilates constants
    lap = laplacian(omega)
    assert np.allclose(lap, omega @ omega.T)
    assert np.abs(lap @ np.ones(graph.n_vertices)).max() <= 1e-12
    assert np.allclose(lap @ f, divergence(omega, gradient(omega, f)))
    # rank of the incidence matrix
    assert row_reduction_rank(omega) == graph.n_vertices - 1


def test_metric_examples():
    assert shortest_path_metric(PATH3)[0, 2] == 2
    d = shortest_path_metric(STAR3)
    assert d[1, 2] == 2
    assert all(d[0, i] == 1 for i in (1, 2, 3))
    assert shortest_path_metric(CYCLE4)[0, 2] == 2


@pytest.mark.parametrize("seed", range(5))
def test_metric_axioms_random(seed):
    rng = np.random.default_rng(100 + seed)
    graph = random_connected_graph(rng, 8, 3)
    d = shortest_path_metric(graph)
    n = graph.n_vertices
    assert np.array_equal(d, d.T)
    assert np.array_equal(np.diag(d), np.zeros(n, dtype=d.dtype))
    assert d[~np.eye(n, dtype=bool)].min() >= 1
    for x in range(n):
        for y in range(n):
            assert (d[x] <= d[x, y] + d[y]).all()


def test_decomposition_tree_is_exact_inverse():
    decomp = spanning_tree_decomposition(PATH3)
    assert decomp.nontree_edges == ()
    assert decomp.cycle_basis.shape == (0, 2)
    omega = build_incidence(PATH3)
    reduced = np.delete(omega, decomp.dropped_vertex, axis=0)
    assert np.allclose(reduced @ decomp.right_inverse, np.eye(2))
    assert np.allclose(decomp.right_inverse @ reduced, np.eye(2))


def test_decomposition_four_cycle():
    decomp = spanning_tree_decomposition(CYCLE4)
    assert len(decomp.nontree_edges) == 1
    assert decomp.cycle_basis.shape == (1, 4)
    eps = decomp.cycle_basis[0]
    assert set(np.abs(eps)) == {1.0}
    assert np.abs(build_incidence(CYCLE4) @ eps).max() == 0.0


@pytest.mark.parametrize("seed", range(50))
def test_decomposition_random(seed):
    rng = np.random.default_rng(200 + seed)
    n = int(rng.integers(2, 11))
    graph = random_connected_graph(rng, n, int(rng.integers(0, 5)))
    decomp = spanning_tree_decomposition(graph)
    omega = build_incidence(graph)
    reduced = np.delete(omega, decomp.dropped_vertex, axis=0)
    assert np.abs(reduced @ decomp.right_inverse - np.eye(n - 1)).max() <= 1e-10
    assert len(decomp.tree_edges) == n - 1
    expected_nullity = graph.n_edges - n + 1
    assert decomp.nullity == expected_nullity
    if expected_nullity:
        assert np.abs(omega @ decomp.cycle_basis.T).max() <= 1e-10
        assert row_reduction_rank(decomp.cycle_basis) == expected_nullity
    # right inverse is supported on tree edges only
    for k in decomp.nontree_edges:
        assert np.abs(decomp.right_inverse[k]).max() == 0.0


def test_outward_tree_checks():
    assert is_outward_tree(PATH3)
    inward = DirectedGraph(("0", "1", "2"), ((0, 1), (2, 1)), root=0)
    with pytest.raises(ValidationError, match="points toward the root"):
        outward_tree_structure(inward)
    with pytest.raises(ValidationError, match="closes a cycle"):
        outward_tree_structure(CYCLE4)
    assert not is_outward_tree(CYCLE4)


@pytest.mark.parametrize("seed", range(5))
def test_random_tree_is_outward(seed):
    rng = np.random.default_rng(300 + seed)
    tree = random_tree(rng, 9)
    assert tree.is_tree()
    assert is_outward_tree(tree)


def test_graph_json_round_trip():
    payload = graph_to_json(CYCLE4)
    again = graph_from_json(payload)
    assert again.labels == CYCLE4.labels
    assert again.edges == CYCLE4.edges
    assert again.root == CYCLE4.root


def test_graph_json_errors():
    with pytest.raises(ValidationError):
        graph_from_json({"edges": []})
    with pytest.raises(ValidationError, match="unknown vertex"):
        graph_from_json({"vertices": ["0"], "edges": [{"tail": "0", "head": "9"}]})
    with pytest.raises(ValidationError, match="root"):
        graph_from_json({"vertices": ["0", "1"],
                         "edges": [{"tail": "0", "head": "1"}], "root": "9"})
