from __future__ import annotations

import itertools
import math
import random

import pytest

from mobiplan.errors import UnreachableTargetError
from mobiplan.kinematics import JointVector, default_arm
from mobiplan.model import Cluster, Target
from mobiplan.oracles import oracle_path, oracle_tsp
from mobiplan.sequencing import (
    ConfigGraph,
    TourProblem,
    build_config_graph,
    config_distance,
    path_length,
    solve_config_sequence,
    solve_target_sequence,
    solve_tsp_2opt,
    tour_length,
    virtual_separation,
)


def random_problem(rng: random.Random, k: int, dim: int = 2) -> TourProblem:
    return TourProblem(
        nodes=tuple(tuple(rng.uniform(0, 10) for _ in range(dim)) for _ in range(k)),
        home=tuple(rng.uniform(0, 10) for _ in range(dim)),
    )


def nearest_neighbour_length(problem: TourProblem) -> float:
    # Independent rebuild of the construction heuristic for the bound check.
    pts = [problem.home, *problem.nodes]
    unvisited = list(range(1, len(pts)))
    tour = [0]
    while unvisited:
        last = tour[-1]
        nxt = min(unvisited, key=lambda j: (math.dist(pts[last], pts[j]), j))
        tour.append(nxt)
        unvisited.remove(nxt)
    tour.append(0)
    return sum(math.dist(pts[a], pts[b]) for a, b in zip(tour, tour[1:]))


def is_two_optimal(problem: TourProblem, order) -> bool:
    pts = [problem.home, *[problem.nodes[i] for i in order], problem.home]
    for i in range(1, len(pts) - 2):
        for j in range(i + 1, len(pts) - 1):
            delta = (
                math.dist(pts[i - 1], pts[j])
                + math.dist(pts[i], pts[j + 1])
                - math.dist(pts[i - 1], pts[i])
                - math.dist(pts[j], pts[j + 1])
            )
            if delta < -1e-9:
                return False
    return True


class TestTsp2Opt:
    def test_single_node(self):
        problem = TourProblem(nodes=((1.0, 0.0),), home=(0.0, 0.0))
        assert solve_tsp_2opt(problem) == (0,)
        assert tour_length(problem, (0,)) == pytest.approx(2.0)

    def test_unit_square_perimeter(self):
        problem = TourProblem(nodes=((1, 0), (1, 1), (0, 1)), home=(0, 0))
        order = solve_tsp_2opt(problem)
        assert tour_length(problem, order) == pytest.approx(4.0)
        best_len, _ = oracle_tsp(problem.nodes, problem.home)
        assert best_len == pytest.approx(4.0)

    def test_two_optimality_and_nn_bound(self):
        rng = random.Random(41)
        for _ in range(50):
            problem = random_problem(rng, rng.randint(2, 9))
            order = solve_tsp_2opt(problem)
            assert sorted(order) == list(range(len(problem.nodes)))
            assert is_two_optimal(problem, order)
            assert tour_length(problem, order) <= nearest_neighbour_length(problem) + 1e-9

    def test_never_beats_oracle(self):
        rng = random.Random(42)
        for _ in range(20):
            problem = random_problem(rng, 7)
            order = solve_tsp_2opt(problem)
            best_len, _ = oracle_tsp(problem.nodes, problem.home)
            assert tour_length(problem, order) >= best_len - 1e-9

    def test_deterministic(self):
        rng = random.Random(43)
        problem = random_problem(rng, 8)
        assert solve_tsp_2opt(problem) == solve_tsp_2opt(problem)


def one_cluster(indices, base=(0.0, 0.0, 0.0)) -> Cluster:
    return Cluster(target_indices=tuple(indices), base=base)


def flat_targets(points3d) -> list[Target]:
    return [Target(x, y, z, 2.0, 0.0) for x, y, z in points3d]


class TestVirtualSeparation:
    def test_h_equals_largest_diameter(self):
        targets = flat_targets([(0, 0, 0.5), (1.2, 0, 0.5), (0.3, 0, 0.5)])
        clusters = [one_cluster([0, 1, 2])]
        problem = virtual_separation(targets, clusters, [0], 1.0, (0, 0, 0))
        ws = {n[3] for n in problem.nodes}
        assert ws == {1.2 * math.sqrt(2.0)}

    def test_all_singletons_default_separation(self):
        targets = flat_targets([(0, 0, 0.5), (5, 0, 0.5)])
        clusters = [one_cluster([0]), one_cluster([1])]
        problem = virtual_separation(targets, clusters, [0, 1], 1.0, (0, 0, 0))
        assert {n[3] for n in problem.nodes} == {math.sqrt(2.0), 2 * math.sqrt(2.0)}

    def test_intra_cluster_distances_unchanged(self):
        rng = random.Random(44)
        targets = flat_targets([(rng.uniform(0, 2), rng.uniform(0, 2), 0.5) for _ in range(8)])
        clusters = [one_cluster(range(0, 4)), one_cluster(range(4, 8))]
        problem = virtual_separation(targets, clusters, [1, 0], 1.0, (0, 0, 0))
        for i, j in itertools.combinations(range(4), 2):
            d3 = math.dist(targets[i].position, targets[j].position)
            d4 = math.dist(problem.nodes[i], problem.nodes[j])
            assert d4 == pytest.approx(d3, abs=1e-12)

    def test_inter_cluster_distance_at_least_h(self):
        rng = random.Random(45)
        for _ in range(50):
            pts = [(rng.uniform(0, 3), rng.uniform(0, 3), 0.5) for _ in range(9)]
            targets = flat_targets(pts)
            clusters = [one_cluster(range(0, 3)), one_cluster(range(3, 6)), one_cluster(range(6, 9))]
            order = [2, 0, 1]
            problem = virtual_separation(targets, clusters, order, 1.0, (0, 0, 0))
            h = max(
                math.dist(targets[i].position, targets[j].position)
                for c in clusters
                for i in c.target_indices
                for j in c.target_indices
            )
            for i in range(3):
                for j in range(3, 6):
                    assert math.dist(problem.nodes[i], problem.nodes[j]) >= h - 1e-9

    def test_rejects_small_h_scale(self):
        targets = flat_targets([(0, 0, 0.5)])
        with pytest.raises(ValueError):
            virtual_separation(targets, [one_cluster([0])], [0], 0.5, (0, 0, 0))


class TestTargetSequence:
    def test_single_cluster_plain_tsp(self):
        targets = flat_targets([(1, 0, 0.5), (2, 0, 0.5), (3, 0, 0.5)])
        clusters = [one_cluster([0, 1, 2])]
        seq = solve_target_sequence(targets, clusters, [0], 1.0, 0, (0, 0, 0.5))
        assert seq == (0, 1, 2)

    def test_two_singleton_clusters_follow_base_order(self):
        targets = flat_targets([(1, 0, 0.5), (4, 0, 0.5)])
        clusters = [one_cluster([0], base=(1, 0, 0)), one_cluster([1], base=(4, 0, 0))]
        seq = solve_target_sequence(targets, clusters, [1, 0], 1.0, 0, (0, 0, 0.5))
        assert seq == (1, 0)

    def test_contiguity_on_random_instances(self):
        rng = random.Random(46)
        for _ in range(10):
            pts = [(rng.uniform(0, 4), rng.uniform(0, 4), 0.5) for _ in range(12)]
            targets = flat_targets(pts)
            clusters = [
                one_cluster(range(0, 4)),
                one_cluster(range(4, 8)),
                one_cluster(range(8, 12)),
            ]
            order = rng.sample(range(3), 3)
            seq = solve_target_sequence(targets, clusters, order, 1.0, 0, (0, 0, 0.5))
            assert sorted(seq) == list(range(12))
            blocks = [i // 4 for i in seq]
            # Each cluster appears as one contiguous block, in base order.
            compact = [b for k, b in enumerate(blocks) if k == 0 or b != blocks[k - 1]]
            assert compact == list(order)


class TestConfigDistance:
    def test_zero_for_identical(self):
        q = JointVector(0.1, 0.2, 0.3, 0.4, 0.5, 0.6)
        assert config_distance(q, q) == 0.0

    def test_single_axis(self):
        a = JointVector(0.0, 0, 0, 0, 0, 0)
        b = JointVector(0.3, 0, 0, 0, 0, 0)
        assert config_distance(a, b) == pytest.approx(0.3)

    def test_symmetry(self):
        rng = random.Random(47)
        for _ in range(10_000):
            a = JointVector(*(rng.uniform(-3, 3) for _ in range(6)))
            b = JointVector(*(rng.uniform(-3, 3) for _ in range(6)))
            assert config_distance(a, b) == config_distance(b, a)


def jv(*qs) -> JointVector:
    return JointVector(*qs, *([0.0] * (6 - len(qs))))


class TestConfigSequence:
    def test_single_forced_path(self):
        graph = ConfigGraph(layers=((jv(0.0),), (jv(1.0),), (jv(0.0),)))
        path = solve_config_sequence(graph)
        assert path == [jv(0.0), jv(1.0), jv(0.0)]

    def test_small_graph_matches_enumeration(self):
        layers = (
            (jv(0.0),),
            (jv(1.0), jv(-1.0)),
            (jv(2.0), jv(0.5)),
            (jv(0.0),),
        )
        graph = ConfigGraph(layers=layers)
        path = solve_config_sequence(graph)
        best_cost, best_combo = oracle_path(layers)
        assert path_length(path) == pytest.approx(best_cost, abs=1e-12)
        assert path == [layers[k][i] for k, i in enumerate(best_combo)]

    def test_random_graphs_match_oracle(self):
        rng = random.Random(48)
        for _ in range(100):
            n_layers = rng.randint(2, 6)
            layers = []
            for k in range(n_layers):
                width = 1 if k in (0, n_layers - 1) else rng.randint(1, 5)
                layers.append(tuple(
                    JointVector(*(rng.uniform(-2, 2) for _ in range(6)))
                    for _ in range(width)
                ))
            graph = ConfigGraph(layers=tuple(layers))
            cost, _ = oracle_path(graph.layers)
            assert path_length(solve_config_sequence(graph)) == pytest.approx(cost, abs=1e-9)

    def test_dp_beats_random_valid_paths(self):
        rng = random.Random(49)
        layers = tuple(
            tuple(JointVector(*(rng.uniform(-2, 2) for _ in range(6))) for _ in range(4))
            if 0 < k < 5 else (jv(0.0),)
            for k in range(6)
        )
        graph = ConfigGraph(layers=layers)
        best = path_length(solve_config_sequence(graph))
        for _ in range(1000):
            path = [layer[rng.randrange(len(layer))] for layer in layers]
            assert path_length(path) >= best - 1e-9

    def test_empty_layer_rejected(self):
        with pytest.raises(ValueError):
            ConfigGraph(layers=((jv(0.0),), (), (jv(0.0),)))


class TestBuildConfigGraph:
    def test_layers_follow_sequence(self):
        arm = default_arm()
        targets = [
            Target(0.7, 0.0, 0.9, math.radians(130.0), 0.0),
            Target(0.65, 0.1, 0.85, math.radians(125.0), 0.0),
        ]
        clusters = [Cluster(target_indices=(0, 1), base=(0.0, 0.0, 0.0))]
        home = jv(0.0)
        graph = build_config_graph(arm, targets, (1, 0), clusters, home)
        assert len(graph.layers) == 4
        assert graph.layers[0] == (home,)
        assert graph.layers[-1] == (home,)
        assert graph.layers[1] == tuple(arm.solve_ik((0, 0, 0), targets[1]))

    def test_unreachable_target_named(self):
        arm = default_arm()
        targets = [Target(5.0, 0.0, 0.9, math.radians(130.0), 0.0)]
        clusters = [Cluster(target_indices=(0,), base=(0.0, 0.0, 0.0))]
        with pytest.raises(UnreachableTargetError) as exc:
            build_config_graph(arm, targets, (0,), clusters, jv(0.0))
        assert exc.value.target_index == 0
