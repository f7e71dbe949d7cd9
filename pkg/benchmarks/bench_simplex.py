"""Time the compiled simplex kernel against its pure-numpy twin.

Runs the same batch of coupling and minimal-flow problems through both
kernel flavors and reports wall time per problem plus the worst
disagreement (expected to be zero: the flavors pivot identically).

Usage: python benchmarks/bench_simplex.py [--graphs N] [--size V]
"""

import argparse
import time

import numpy as np

from got import _kernels
from got.generators import random_connected_graph, random_distribution
from got.transport import w1_beckmann, w1_kantorovich


def build_pool(n_graphs: int, max_vertices: int, seed: int = 7):
    rng = np.random.default_rng(seed)
    pool = []
    for _ in range(n_graphs):
        n = int(rng.integers(5, max_vertices + 1))
        graph = random_connected_graph(rng, n, extra_edges=int(rng.integers(0, 4)))
        pool.append((graph, random_distribution(rng, n), random_distribution(rng, n)))
    return pool


def run(pool, kernel):
    previous = _kernels.simplex_iterate
    _kernels.simplex_iterate = kernel
    try:
        start = time.perf_counter()
        values = []
        for graph, f0, f1 in pool:
            vk, _ = w1_kantorovich(graph, f0, f1)
            vb, _ = w1_beckmann(graph, f0, f1)
            values.append((vk, vb))
        elapsed = time.perf_counter() - start
    finally:
        _kernels.simplex_iterate = previous
    return np.array(values), elapsed


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--graphs", type=int, default=60)
    parser.add_argument("--size", type=int, default=12)
    args = parser.parse_args()

    pool = build_pool(args.graphs, args.size)
    lps_per_graph = 2
    total = args.graphs * lps_per_graph

    flavors = []
    if _kernels.simplex_iterate_numba is not None:
        run(pool[:2], _kernels.simplex_iterate_numba)  # trigger compilation
        flavors.append(("numba", _kernels.simplex_iterate_numba))
    else:
        print("numba kernel unavailable (GOT_PURE_NUMPY set or numba missing)")
    flavors.append(("numpy", _kernels.simplex_iterate_numpy))

    results = {}
    print(f"{total} LPs over {args.graphs} random graphs (|V| <= {args.size})")
    for name, kernel in flavors:
        values, elapsed = run(pool, kernel)
        results[name] = values
        print(f"  {name:>6}: {elapsed:8.3f} s total, {1e3 * elapsed / total:7.3f} ms/LP")

    if len(results) == 2:
        gap = float(np.abs(results["numba"] - results["numpy"]).max())
        print(f"  max |numba - numpy| over all values: {gap:.3e}")
        internal = float(np.abs(np.diff(results["numpy"], axis=1)).max())
        print(f"  max |kantorovich - beckmann| (either flavor): {internal:.3e}")


if __name__ == "__main__":
    main()
