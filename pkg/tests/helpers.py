"""Shared generators and oracles for the test suite."""

import numpy as np

from got.graphs import spanning_tree_decomposition
from got.measures import EdgePairPath


def row_reduction_rank(matrix, tol=1e-9):
    """Rank by Gaussian elimination with a pivot tolerance."""
    a = np.array(matrix, dtype=float)
    rows, cols = a.shape
    rank = 0
    for col in range(cols):
        if rank == rows:
            break
        pivot = rank + int(np.argmax(np.abs(a[rank:, col])))
        if abs(a[pivot, col]) <= tol:
            continue
        a[[rank, pivot]] = a[[pivot, rank]]
        a[rank] /= a[rank, col]
        for r in range(rows):
            if r != rank and abs(a[r, col]) > tol:
                a[r] -= a[r, col] * a[rank]
        rank += 1
    return rank


def random_epsilon(rng, decomp, scale=0.5):
    """Random element of the cycle space of the decomposition's graph."""
    m = decomp.graph.n_edges
    if decomp.nullity == 0:
        return np.zeros(m)
    coeff = rng.normal(0.0, scale, size=decomp.nullity)
    return coeff @ decomp.cycle_basis


def random_admissible_pair(rng, graph, f0, f1, max_steps=4, decomp=None):
    """Random pair whose flux integral drives f0 to f1.

    Builds the integral as P (f1 - f0) + epsilon for a random circulation
    epsilon, spreads it over randomly sized intervals with random
    per-interval intensity, and factors each interval either at constant
    speed or against a random positive edge distribution.
    """
    if decomp is None:
        decomp = spanning_tree_decomposition(graph)
    m = graph.n_edges
    delta = (np.asarray(f1, float) - np.asarray(f0, float))[list(decomp.kept_vertices)]
    target = decomp.right_inverse @ delta + random_epsilon(rng, decomp)

    steps = int(rng.integers(1, max_steps + 1))
    durations = rng.dirichlet(np.ones(steps))
    intensity = rng.random(steps) + 0.1
    intensity /= intensity @ durations  # so the time integral hits target
    knots = np.concatenate([[0.0], np.cumsum(durations)])
    knots[-1] = 1.0

    v = np.zeros((steps, m))
    g = np.full((steps, m), 1.0 / m)
    for i in range(steps):
        row = intensity[i] * target
        speed = np.abs(row).sum()
        if speed <= 0.0:
            continue
        if rng.random() < 0.5:
            v[i] = np.where(row >= 0.0, 1.0, -1.0) * speed
            g[i] = np.abs(row) / speed
        else:
            mix = rng.dirichlet(np.ones(m))
            g[i] = mix
            v[i] = row / mix
    return EdgePairPath(knots, v, g)
