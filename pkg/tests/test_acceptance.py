"""Acceptance suite: one test per release criterion, one printed verdict each.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the verdict lines.
Each criterion pins its tolerance explicitly; nothing is deferred to later
calibration.
"""

from __future__ import annotations

import math
import random
import time

import numpy as np
import pytest

from mobiplan import tasks
from mobiplan.assignment import AzimuthLimit, azimuthal_width
from mobiplan.kinematics import JointVector
from mobiplan.model import check_feasibility, normalize_azimuth
from mobiplan.oracles import ShellArm, oracle_membership, oracle_path, oracle_scp, oracle_tsp
from mobiplan.pipeline import plan_fingerprint, run_pipeline, verify_plan
from mobiplan.reachability import fit_region, generate_database, region_contains
from mobiplan.scp import (
    build_bigraph,
    floor_point_reaches,
    make_floor_grid,
    solve_greedy,
    solve_lpr,
    solve_lrg,
)
from mobiplan.sequencing import (
    ConfigGraph,
    path_length,
    solve_config_sequence,
    solve_tsp_2opt,
    tour_length,
)
from mobiplan.simplex import simplex_minimize
from mobiplan.model import RobotParams

from conftest import random_instance, random_region, random_target
from test_sequencing import is_two_optimal, nearest_neighbour_length, random_problem


def _verdict(name: str, ok: bool, detail: str = "") -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] {name}"
    if detail:
        line += f" ({detail})"
    print(line)


def test_criterion_1_closed_form_matches_rotation_oracle():
    """Closed-form floor test vs independent rotate-then-test on 1e5 triples."""
    rng = random.Random(1001)
    mismatches = 0
    n_trials = 100_000
    for _ in range(n_trials):
        region = random_region(rng)
        target = random_target(rng)
        fp = (rng.uniform(-2.5, 2.5), rng.uniform(-2.5, 2.5))
        a = floor_point_reaches(target, fp[0], fp[1], region)
        b = oracle_membership(region, target, fp)
        if a != b:
            mismatches += 1
    ok = mismatches == 0
    _verdict("criterion 1: closed-form == rotation oracle on 1e5 triples", ok,
             f"{mismatches} mismatches")
    assert ok


def test_criterion_2_scp_solver_quality():
    """200 random desk-scale instances: feasibility, bounds, 95% optimality."""
    rng = random.Random(1002)
    start = time.perf_counter()
    lrg_optimal = 0
    total = 200
    for _ in range(total):
        inst = random_instance(rng, n_max=12, m_max=12)
        opt = len(oracle_scp(inst.n, inst.sets))
        universe = set(range(inst.n))

        greedy = solve_greedy(inst)
        lpr = solve_lpr(inst)
        lrg = solve_lrg(inst, seed=17)
        for sol in (greedy, lpr, lrg):
            covered = set()
            for i, j in enumerate(sol.covered):
                assert i in inst.sets[j]
                covered.add(i)
            assert covered == universe

        h_n = sum(1.0 / i for i in range(1, inst.n + 1))
        assert len(greedy.chosen) <= h_n * opt + 1e-9

        a = np.zeros((inst.n, len(inst.sets)))
        for j, s in enumerate(inst.sets):
            for i in s:
                a[i, j] = 1.0
        _, lp_obj = simplex_minimize(
            np.ones(len(inst.sets)), a, np.ones(inst.n),
            max_iter=50 * (inst.n + len(inst.sets)),
        )
        f = int(a.sum(axis=1).max())
        assert len(lpr.chosen) <= f * lp_obj + 1e-6

        assert len(lrg.chosen) <= len(greedy.chosen)
        if len(lrg.chosen) == opt:
            lrg_optimal += 1

    elapsed = time.perf_counter() - start
    rate = lrg_optimal / total
    ok = rate >= 0.95 and elapsed < 60.0
    _verdict("criterion 2: SCP solver quality on 200 instances", ok,
             f"LRg optimal {rate:.1%}, {elapsed:.1f}s")
    assert rate >= 0.95
    assert elapsed < 60.0


@pytest.mark.parametrize("voxel", [0.10, 0.05])
def test_criterion_3_region_fit_soundness(voxel):
    """Shell-oracle arm with true radii 0.50/0.85: fit within one diagonal."""
    params = RobotParams(
        j1_lim=math.radians(170), j1_res=math.radians(90),
        z_j2=0.395, l1=0.445, l2=0.445, l=0.25,
    )
    arm = ShellArm(params=params, inner=0.50, outer=0.85)
    db = generate_database(arm, voxel)
    region = fit_region(db, x_min=0.05, z_min=0.30, z_max=0.95, params=params)
    diagonal = voxel * math.sqrt(3.0)
    radii_ok = abs(region.r_min - 0.50) <= diagonal and abs(region.r_max - 0.85) <= diagonal

    centers = db.centers()
    flags = db.valid.ravel()
    unsound = 0
    for p, valid in zip(centers, flags):
        if region_contains(region, tuple(p)) and not valid:
            unsound += 1
    ok = radii_ok and unsound == 0
    _verdict(f"criterion 3: region fit soundness at voxel {voxel}", ok,
             f"r=[{region.r_min:.3f},{region.r_max:.3f}], unsound voxels {unsound}")
    assert radii_ok
    assert unsound == 0


def test_criterion_4_full_scale_two_sided_task():
    """336 targets, two faces, LRg, 0.10 m grid: <= 100 s, <= 6 bases, widths <= 160 deg."""
    spec = tasks.as_spec(tasks.two_sided_drilling_task())
    assert len(spec.targets) == 336
    start = time.perf_counter()
    plan = run_pipeline(spec)
    elapsed = time.perf_counter() - start

    limit = math.radians(160.0)
    widths = [
        azimuthal_width([spec.targets[i].phi for i in c.target_indices]).width
        for c in plan.clusters
    ]
    ok = elapsed <= 100.0 and plan.stats.n_clusters <= 6 and all(
        w <= limit + 1e-9 for w in widths
    )
    _verdict("criterion 4: full-scale two-sided task", ok,
             f"{plan.stats.n_clusters} base poses, "
             f"max width {math.degrees(max(widths)):.1f} deg, {elapsed:.1f}s")
    assert elapsed <= 100.0
    assert plan.stats.n_clusters <= 6
    assert all(w <= limit + 1e-9 for w in widths)


def test_criterion_5_sequencing_correctness():
    """2-opt local optimality and NN bound; oracle ratio; exact config DP."""
    rng = random.Random(1005)
    for _ in range(50):
        problem = random_problem(rng, rng.randint(2, 9))
        order = solve_tsp_2opt(problem)
        assert is_two_optimal(problem, order)
        assert tour_length(problem, order) <= nearest_neighbour_length(problem) + 1e-9

    ratios = []
    for _ in range(20):
        problem = random_problem(rng, 7)
        order = solve_tsp_2opt(problem)
        best_len, _ = oracle_tsp(problem.nodes, problem.home)
        ratios.append(tour_length(problem, order) / best_len)
    mean_ratio = sum(ratios) / len(ratios)

    dp_exact = 0
    for _ in range(100):
        n_layers = rng.randint(2, 6)
        layers = tuple(
            tuple(
                JointVector(*(rng.uniform(-2, 2) for _ in range(6)))
                for _ in range(1 if k in (0, n_layers - 1) else rng.randint(1, 5))
            )
            for k in range(n_layers)
        )
        cost, _ = oracle_path(layers)
        got = path_length(solve_config_sequence(ConfigGraph(layers=layers)))
        if abs(got - cost) <= 1e-9:
            dp_exact += 1

    ok = mean_ratio <= 1.10 and dp_exact == 100
    _verdict("criterion 5: sequencing correctness", ok,
             f"mean 2-opt/optimal ratio {mean_ratio:.4f}, DP exact {dp_exact}/100")
    assert mean_ratio <= 1.10
    assert dp_exact == 100


def test_criterion_6_end_to_end_invariants():
    """Partition, width, admissibility, contiguity and re-run identity on the corpus."""
    corpus = [
        tasks.demo_task(),
        tasks.one_sided_drilling_task(),
        tasks.two_sided_drilling_task(),
    ]
    checked = 0
    for raw in corpus:
        spec = tasks.as_spec(raw)
        plan = run_pipeline(spec)
        # verify_plan re-checks partition, width bound, the closed-form reach
        # test at each base, recentred azimuth range, contiguity and base
        # order; any violation raises.
        verify_plan(plan, spec, spec.region)

        limit = AzimuthLimit.from_joint_limits(spec.robot.j1_lim, spec.robot.j1_res)
        for cluster in plan.clusters:
            for i in cluster.target_indices:
                t = spec.targets[i]
                assert floor_point_reaches(t, cluster.base[0], cluster.base[1], spec.region)
                assert abs(normalize_azimuth(t.phi - cluster.base[2])) <= (
                    limit.delta_phi_max / 2 + 1e-9
                )

        inst = build_bigraph(
            spec.targets, make_floor_grid(spec.targets, spec.cell_size, spec.region), spec.region
        )
        assert check_feasibility(inst).feasible

        again = run_pipeline(spec)
        assert plan_fingerprint(again) == plan_fingerprint(plan)
        checked += 1

    _verdict("criterion 6: end-to-end invariants and determinism", checked == 3,
             f"{checked} corpus tasks")
    assert checked == 3
