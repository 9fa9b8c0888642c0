"""Tour construction and configuration-path search.

The base tour is a plain Euclidean TSP over cluster base positions.  The
target tour runs one global TSP over all targets lifted into 4D, where each
cluster gets a w-offset proportional to its base-tour rank; the offsets keep
intra-cluster geometry exact while pushing inter-cluster distances above the
largest cluster diameter, so a good tour naturally visits clusters as blocks
in base order.  A stable repair pass enforces that block structure exactly.
The configuration path is then the shortest home-to-home route through the
layered graph of IK solutions, solved exactly by dynamic programming.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import UnreachableTargetError
from .kinematics import ArmModel, JointVector
from .model import Cluster, Target

_IMPROVE_TOL = 1e-12


@dataclass(frozen=True)
class TourProblem:
    """Symmetric Euclidean tour through ``nodes``, anchored at ``home``."""

    nodes: tuple[tuple[float, ...], ...]
    home: tuple[float, ...]

    def __post_init__(self) -> None:
        if not self.nodes:
            raise ValueError("tour needs at least one node")
        dim = len(self.home)
        if any(len(v) != dim for v in self.nodes):
            raise ValueError("all nodes must share the home dimensionality")


def _distance_matrix(problem: TourProblem) -> np.ndarray:
    pts = np.array([problem.home, *problem.nodes])
    diff = pts[:, None, :] - pts[None, :, :]
    return np.sqrt((diff * diff).sum(axis=2))


def tour_length(problem: TourProblem, order: Sequence[int]) -> float:
    """Cycle length home -> order -> home."""
    dist = _distance_matrix(problem)
    idx = [0, *[i + 1 for i in order], 0]
    return float(sum(dist[a, b] for a, b in zip(idx, idx[1:])))


def solve_tsp_2opt(problem: TourProblem, seed: int = 0) -> tuple[int, ...]:
    """Nearest-neighbour start, then first-improvement 2-opt to a local optimum.

    Returns the visit order as indices into ``problem.nodes``; the tour
    implicitly starts and ends at home.  The scan order is deterministic, so
    identical problems give identical tours; ``seed`` is reserved for
    randomized restarts and currently unused.
    """
    del seed
    dist = _distance_matrix(problem)
    k = len(problem.nodes)
    # Nearest-neighbour initialization from home (matrix row 0).
    unvisited = list(range(1, k + 1))
    tour = [0]
    while unvisited:
        last = tour[-1]
        nxt = min(unvisited, key=lambda j: (dist[last, j], j))
        tour.append(nxt)
        unvisited.remove(nxt)
    tour.append(0)

    # First-improvement 2-opt: reversing tour[i:j] only touches two edges.
    improved = True
    while improved:
        improved = False
        for i in range(1, len(tour) - 2):
            a, b = tour[i - 1], tour[i]
            d_ab = dist[a, b]
            row_a = dist[a]
            for j in range(i + 1, len(tour) - 1):
                c, d = tour[j], tour[j + 1]
                delta = row_a[c] + dist[b, d] - d_ab - dist[c, d]
                if delta < -_IMPROVE_TOL:
                    tour[i : j + 1] = reversed(tour[i : j + 1])
                    improved = True
                    a, b = tour[i - 1], tour[i]
                    d_ab = dist[a, b]
                    row_a = dist[a]
    return tuple(v - 1 for v in tour[1:-1])


def cluster_diameter(targets: Sequence[Target], cluster: Cluster) -> float:
    pts = [targets[i].position for i in cluster.target_indices]
    best = 0.0
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            d = math.dist(pts[i], pts[j])
            if d > best:
                best = d
    return best


def virtual_separation(
    targets: Sequence[Target],
    clusters: Sequence[Cluster],
    base_order: Sequence[int],
    h_scale: float,
    home_position: tuple[float, float, float],
) -> TourProblem:
    """Lift targets to 4D with per-cluster w offsets in base-tour order.

    The separation distance h is ``h_scale`` times the largest intra-cluster
    diameter (1 m when every cluster is a single target); cluster at rank r
    gets w = r * h * sqrt(2), home gets w = 0.
    """
    if h_scale < 1.0:
        raise ValueError("h_scale must be >= 1")
    h = h_scale * max(cluster_diameter(targets, c) for c in clusters)
    if h <= 0.0:
        h = 1.0
    rank = {c: r + 1 for r, c in enumerate(base_order)}
    if len(rank) != len(clusters):
        raise ValueError("base_order must cover every cluster exactly once")
    w_of_cluster = {c: rank[c] * h * math.sqrt(2.0) for c in rank}
    w_by_target: dict[int, float] = {}
    for ci, cluster in enumerate(clusters):
        for i in cluster.target_indices:
            w_by_target[i] = w_of_cluster[ci]
    nodes = tuple(
        (t.x, t.y, t.z, w_by_target[i]) for i, t in enumerate(targets)
    )
    return TourProblem(nodes=nodes, home=(*home_position, 0.0))


def solve_target_sequence(
    targets: Sequence[Target],
    clusters: Sequence[Cluster],
    base_order: Sequence[int],
    h_scale: float,
    seed: int,
    home_position: tuple[float, float, float],
) -> tuple[int, ...]:
    """Globally ordered target permutation respecting the base sequence.

    Runs 2-opt on the lifted problem, then stable-partitions the tour by
    base order so cluster blocks are exact even if the heuristic left a
    straggler out of place.
    """
    problem = virtual_separation(targets, clusters, base_order, h_scale, home_position)
    tour = solve_tsp_2opt(problem, seed=seed)
    cluster_of = {}
    for ci, cluster in enumerate(clusters):
        for i in cluster.target_indices:
            cluster_of[i] = ci
    rank = {c: r for r, c in enumerate(base_order)}
    position = {i: p for p, i in enumerate(tour)}
    return tuple(sorted(tour, key=lambda i: (rank[cluster_of[i]], position[i])))


# -- configuration path ------------------------------------------------------


def config_distance(a: Sequence[float], b: Sequence[float]) -> float:
    """Unweighted joint-space L2 distance."""
    return math.sqrt(sum((x - y) ** 2 for x, y in zip(a, b)))


@dataclass(frozen=True)
class ConfigGraph:
    """Layered configuration graph: home, one layer per sequenced target, home."""

    layers: tuple[tuple[JointVector, ...], ...]

    def __post_init__(self) -> None:
        if len(self.layers) < 2:
            raise ValueError("graph needs at least the two home layers")
        for layer in self.layers:
            if not layer:
                raise ValueError("layers must be non-empty")


def build_config_graph(
    model: ArmModel,
    targets: Sequence[Target],
    sequence: Sequence[int],
    clusters: Sequence[Cluster],
    home_config: JointVector,
) -> ConfigGraph:
    """IK-solution layers for the sequenced targets at their cluster bases.

    Raises UnreachableTargetError naming the first sequenced target with no
    IK solution, which signals an unsound region or base assignment.
    """
    base_of: dict[int, tuple[float, float, float]] = {}
    for cluster in clusters:
        for i in cluster.target_indices:
            base_of[i] = cluster.base
    layers: list[tuple[JointVector, ...]] = [(home_config,)]
    for i in sequence:
        sols = model.solve_ik(base_of[i], targets[i], restrict_j1=False)
        if not sols:
            raise UnreachableTargetError(i)
        layers.append(tuple(sols))
    layers.append((home_config,))
    return ConfigGraph(layers=tuple(layers))


def solve_config_sequence(graph: ConfigGraph) -> list[JointVector]:
    """Exact shortest home-to-home path through the layered DAG.

    Plain forward dynamic programming; cost ties keep the lowest predecessor
    index so results are deterministic.
    """
    layers = graph.layers
    costs = [0.0] * len(layers[0])
    back: list[list[int]] = [[-1] * len(layers[0])]
    for k in range(1, len(layers)):
        prev, cur = layers[k - 1], layers[k]
        new_costs = []
        pointers = []
        for node in cur:
            best_cost = math.inf
            best_prev = -1
            for p, pnode in enumerate(prev):
                c = costs[p] + config_distance(pnode, node)
                if c < best_cost - _IMPROVE_TOL:
                    best_cost = c
                    best_prev = p
            new_costs.append(best_cost)
            pointers.append(best_prev)
        costs = new_costs
        back.append(pointers)

    path_idx = [0]
    for k in range(len(layers) - 1, 0, -1):
        path_idx.append(back[k][path_idx[-1]])
    path_idx.reverse()
    return [layers[k][idx] for k, idx in enumerate(path_idx)]


def path_length(path: Sequence[Sequence[float]]) -> float:
    return float(sum(config_distance(a, b) for a, b in zip(path, path[1:])))
