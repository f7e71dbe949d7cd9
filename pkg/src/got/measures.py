"""Distributions on vertices and edges, time grids, and piecewise-constant paths.

Time is handled on [0, 1]: vertex distributions are sampled at knots,
velocity/edge-distribution pairs are constant on the intervals between
consecutive knots. Knots are uniform everywhere except for pairs produced
by concatenation, which place their split point exactly; durations always
sum to one.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import ValidationError
from .graphs import DirectedGraph, outward_tree_structure

NEG_TOL = 1e-12
SUM_TOL = 1e-9


def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


def _clean_mass(values, size: int, what: str) -> np.ndarray:
    arr = np.array(values, dtype=float).reshape(-1)
    if arr.shape[0] != size:
        raise ValidationError(f"{what} has length {arr.shape[0]}, expected {size}")
    if size == 0:
        return arr
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{what} contains non-finite entries")
    low = float(arr.min())
    if low < -NEG_TOL:
        raise ValidationError(
            f"{what} has negative mass {low:.3e} at index {int(arr.argmin())}"
        )
    arr[arr < 0.0] = 0.0
    total = float(arr.sum())
    if abs(total - 1.0) > SUM_TOL:
        raise ValidationError(f"{what} sums to {total:.12g}, expected 1")
    return arr


def vertex_distribution(values, n_vertices: int) -> np.ndarray:
    """Validate and clean a probability vector over vertices."""
    return _clean_mass(values, n_vertices, "vertex distribution")


def edge_distribution(values, n_edges: int) -> np.ndarray:
    """Validate and clean a probability vector over edges."""
    return _clean_mass(values, n_edges, "edge distribution")


def edge_velocity(values, n_edges: int) -> np.ndarray:
    arr = np.array(values, dtype=float).reshape(-1)
    if arr.shape[0] != n_edges:
        raise ValidationError(f"velocity has length {arr.shape[0]}, expected {n_edges}")
    if n_edges and not np.all(np.isfinite(arr)):
        raise ValidationError("velocity contains non-finite entries")
    return arr


@dataclass(frozen=True)
class TimeGrid:
    """Uniform grid of M intervals on [0, 1]."""

    steps: int

    def __post_init__(self):
        if int(self.steps) < 1:
            raise ValidationError("time grid needs at least one step")
        object.__setattr__(self, "steps", int(self.steps))

    @cached_property
    def knots(self) -> np.ndarray:
        return _frozen(np.linspace(0.0, 1.0, self.steps + 1))


def _check_knots(knots: np.ndarray) -> np.ndarray:
    knots = np.array(knots, dtype=float).reshape(-1)
    if knots.shape[0] < 2:
        raise ValidationError("a path needs at least two knots")
    if abs(knots[0]) > 1e-12 or abs(knots[-1] - 1.0) > 1e-12:
        raise ValidationError("knots must run from 0 to 1")
    knots[0], knots[-1] = 0.0, 1.0
    if np.any(np.diff(knots) <= 0):
        raise ValidationError("knots must be strictly increasing")
    return knots


@dataclass(frozen=True)
class VertexPath:
    """Vertex distributions sampled at knots.

    ``flagged`` is set by integrate_pair to the first (knot, vertex) whose
    mass fell below -1e-9, meaning the integrated pair does not induce a
    valid distribution path; it is None for clean paths.
    """

    knots: np.ndarray
    samples: np.ndarray
    flagged: tuple[int, int] | None = None

    def __post_init__(self):
        knots = _check_knots(self.knots)
        samples = np.array(self.samples, dtype=float)
        if samples.ndim != 2 or samples.shape[0] != knots.shape[0]:
            raise ValidationError("need one vertex sample per knot")
        object.__setattr__(self, "knots", _frozen(knots))
        object.__setattr__(self, "samples", _frozen(samples))

    @property
    def steps(self) -> int:
        return self.knots.shape[0] - 1

    @property
    def durations(self) -> np.ndarray:
        return np.diff(self.knots)


@dataclass(frozen=True)
class EdgePairPath:
    """A velocity and an edge distribution, constant on each interval."""

    knots: np.ndarray
    v: np.ndarray
    g: np.ndarray

    def __post_init__(self):
        knots = _check_knots(self.knots)
        v = np.array(self.v, dtype=float)
        g = np.array(self.g, dtype=float)
        steps = knots.shape[0] - 1
        if v.ndim != 2 or g.ndim != 2 or v.shape != g.shape or v.shape[0] != steps:
            raise ValidationError("velocity/edge-distribution samples must be "
                                  "(steps, n_edges) arrays on the same grid")
        m = v.shape[1]
        if m and not np.all(np.isfinite(v)):
            raise ValidationError("velocity contains non-finite entries")
        for i in range(steps):
            g[i] = edge_distribution(g[i], m)
        object.__setattr__(self, "knots", _frozen(knots))
        object.__setattr__(self, "v", _frozen(v))
        object.__setattr__(self, "g", _frozen(g))

    @property
    def steps(self) -> int:
        return self.knots.shape[0] - 1

    @property
    def n_edges(self) -> int:
        return self.v.shape[1]

    @property
    def durations(self) -> np.ndarray:
        return np.diff(self.knots)

    def flux(self) -> np.ndarray:
        """Componentwise v*g per interval, shape (steps, n_edges)."""
        return self.v * self.g

    def time_integral(self) -> np.ndarray:
        """Integral of v*g over [0, 1], a vector on edges."""
        return self.durations @ self.flux()

    @staticmethod
    def constant(v, g, steps: int = 1) -> "EdgePairPath":
        """Tile a single (v, g) sample over a uniform grid."""
        grid = TimeGrid(steps)
        v = np.asarray(v, dtype=float).reshape(1, -1)
        g = np.asarray(g, dtype=float).reshape(1, -1)
        return EdgePairPath(
            grid.knots.copy(),
            np.repeat(v, steps, axis=0),
            np.repeat(g, steps, axis=0),
        )


def zero_pair(n_edges: int, steps: int = 1) -> EdgePairPath:
    """Zero velocity with uniform edge mass: the stationary pair."""
    v = np.zeros(n_edges)
    g = np.full(n_edges, 1.0 / n_edges) if n_edges else np.zeros(0)
    return EdgePairPath.constant(v, g, steps)


@dataclass(frozen=True)
class Triple:
    """A vertex path together with a pair path on the same grid."""

    path: VertexPath
    pair: EdgePairPath

    def __post_init__(self):
        if self.path.knots.shape != self.pair.knots.shape or not np.allclose(
            self.path.knots, self.pair.knots, atol=1e-12, rtol=0.0
        ):
            raise ValidationError("vertex path and pair path use different grids")


def tails(tree: DirectedGraph, mass) -> np.ndarray:
    """Tail masses on a rooted tree with outward edges.

    Entry x is the total mass on x and all its descendants, so the root
    entry equals the total mass. Linear in ``mass``.
    """
    root, order, parent_vertex, _ = outward_tree_structure(tree)
    F = np.array(mass, dtype=float).reshape(-1)
    if F.shape[0] != tree.n_vertices:
        raise ValidationError(
            f"mass vector has length {F.shape[0]}, expected {tree.n_vertices}"
        )
    for x in reversed(order):
        if x != root:
            F[parent_vertex[x]] += F[x]
    return F


def integrate_pair(
    f0: np.ndarray, pair: EdgePairPath, omega: np.ndarray
) -> VertexPath:
    """Integrate the discrete transport equation from f0 along the pair.

    Sample j is f0 plus the accumulated incidence-weighted flux of the
    first j intervals, an exact telescoping sum. The result is flagged at
    the first (knot, vertex) where mass drops below -1e-9.
    """
    f0 = np.asarray(f0, dtype=float).reshape(-1)
    n, m = omega.shape
    if f0.shape[0] != n or pair.n_edges != m:
        raise ValidationError("pair, start distribution, and incidence disagree")
    increments = (pair.flux() @ omega.T) * pair.durations[:, None]
    samples = np.empty((pair.steps + 1, n))
    samples[0] = f0
    samples[1:] = f0 + np.cumsum(increments, axis=0)
    flagged = None
    bad = np.argwhere(samples < -1e-9)
    if bad.size:
        flagged = (int(bad[0, 0]), int(bad[0, 1]))
    return VertexPath(pair.knots.copy(), samples, flagged)


def differentiate_path(path: VertexPath) -> np.ndarray:
    """Forward differences of the samples divided by interval lengths."""
    return np.diff(path.samples, axis=0) / path.durations[:, None]


def convex_interpolation(
    f0: np.ndarray, f1: np.ndarray, grid: TimeGrid
) -> VertexPath:
    """Straight-line path (1-t) f0 + t f1 sampled on the grid."""
    f0 = np.asarray(f0, dtype=float).reshape(-1)
    f1 = np.asarray(f1, dtype=float).reshape(-1)
    if f0.shape != f1.shape:
        raise ValidationError("endpoint distributions differ in length")
    t = grid.knots[:, None]
    return VertexPath(grid.knots.copy(), (1.0 - t) * f0 + t * f1)


def tv_distance(f0: np.ndarray, f1: np.ndarray) -> float:
    """Total variation distance, half the l1 distance."""
    f0 = np.asarray(f0, dtype=float).reshape(-1)
    f1 = np.asarray(f1, dtype=float).reshape(-1)
    if f0.shape != f1.shape:
        raise ValidationError("distributions differ in length")
    return 0.5 * float(np.abs(f0 - f1).sum())


def distribution_from_json(payload: dict, labels: tuple[str, ...]) -> np.ndarray:
    """Read ``{"values": {label: mass}}``; keys must cover the labels exactly."""
    if not isinstance(payload, dict) or not isinstance(payload.get("values"), dict):
        raise ValidationError("distribution JSON must be {'values': {label: mass}}")
    values = payload["values"]
    keys = set(values)
    expected = set(labels)
    if keys != expected:
        missing = sorted(expected - keys)
        extra = sorted(keys - expected)
        detail = []
        if missing:
            detail.append(f"missing labels {missing}")
        if extra:
            detail.append(f"unknown labels {extra}")
        raise ValidationError("distribution keys do not match the graph: "
                              + "; ".join(detail))
    try:
        mass = [float(values[label]) for label in labels]
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"distribution values must be numbers: {exc}") from exc
    return vertex_distribution(mass, len(labels))


def load_distribution(path, graph: DirectedGraph) -> np.ndarray:
    try:
        with open(path) as fh:
            payload = json.load(fh)
    except OSError as exc:
        raise ValidationError(f"cannot read distribution file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ValidationError(
            f"distribution file {path} is not valid JSON: {exc}"
        ) from exc
    return distribution_from_json(payload, graph.labels)


def triple_from_json(payload: dict, graph: DirectedGraph) -> Triple:
    """Read ``{"steps": M, "f": [...], "v": [...], "g": [...]}``."""
    if not isinstance(payload, dict):
        raise ValidationError("triple JSON must be an object")
    steps = payload.get("steps")
    if not isinstance(steps, int) or steps < 1:
        raise ValidationError("triple JSON needs a positive integer 'steps'")
    n, m = graph.n_vertices, graph.n_edges
    try:
        f = np.array(payload["f"], dtype=float)
        v = np.array(payload["v"], dtype=float)
        g = np.array(payload["g"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"triple JSON is malformed: {exc}") from exc
    if f.shape != (steps + 1, n):
        raise ValidationError(f"'f' must be {steps + 1} rows of {n} reals")
    if v.shape != (steps, m) or g.shape != (steps, m):
        raise ValidationError(f"'v' and 'g' must be {steps} rows of {m} reals")
    grid = TimeGrid(steps)
    for i in range(steps + 1):
        f[i] = vertex_distribution(f[i], n)
    path = VertexPath(grid.knots.copy(), f)
    pair = EdgePairPath(grid.knots.copy(), v, g)
    return Triple(path, pair)


def triple_to_json(triple: Triple) -> dict:
    return {
        "steps": triple.pair.steps,
        "f": triple.path.samples.tolist(),
        "v": triple.pair.v.tolist(),
        "g": triple.pair.g.tolist(),
    }
