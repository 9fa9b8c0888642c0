from __future__ import annotations

import math

from mobiplan.model import Cluster, Plan, PlanStats, Target
from mobiplan.svg import cluster_color, render_svg


def make_plan(n_clusters: int) -> tuple[Plan, list[Target]]:
    targets = [
        Target(float(c), 0.0, 0.5, math.radians(120.0), 0.0)
        for c in range(n_clusters)
    ]
    clusters = tuple(
        Cluster(target_indices=(c,), base=(float(c), -0.5, math.radians(15.0 * c)))
        for c in range(n_clusters)
    )
    home = (0.0, 0.0, 0.0, 0.0, 0.0, 0.0)
    plan = Plan(
        clusters=clusters,
        base_sequence=tuple(range(n_clusters)),
        target_sequence=tuple(range(n_clusters)),
        config_sequence=tuple([home] * (n_clusters + 2)),
        home_base=(-1.0, 0.0, 0.0),
        home_config=home,
        stats=PlanStats(
            solver="lrg", n_targets=n_clusters, n_floor_points=1,
            cover_size=n_clusters, n_clusters=n_clusters,
            base_tour_length=0.0, target_tour_length=0.0,
            config_path_length=0.0,
        ),
    )
    return plan, targets


def test_single_cluster_single_colour_and_marker():
    plan, targets = make_plan(1)
    svg = render_svg(plan, targets)
    assert svg.count(cluster_color(0)) >= 2  # target dot + base marker strokes
    assert svg.count("<circle") == 2  # one target, one base ring
    assert svg.startswith('<?xml version="1.0"')
    assert 'version="1.1"' in svg


def test_p_clusters_get_p_distinct_colours_and_arrows():
    p = 5
    plan, targets = make_plan(p)
    svg = render_svg(plan, targets)
    colours = {cluster_color(c) for c in range(p)}
    assert len(colours) == p
    for colour in colours:
        assert colour in svg
    # Each base pose carries one heading stroke plus two arrowhead strokes.
    assert svg.count("<line") == 3 * p


def test_render_is_deterministic():
    plan, targets = make_plan(3)
    assert render_svg(plan, targets) == render_svg(plan, targets)
