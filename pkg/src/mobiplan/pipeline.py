"""End-to-end planning: database, region, bigraph, cover, clusters, tours.

Every stage is timed; the plan file keeps the per-stage breakdown so readers
can aggregate however they like.  Plans are deterministic for a fixed task
and seed, timing fields aside.
"""

from __future__ import annotations

import math
import time
from pathlib import Path
from typing import Any, Callable, Mapping

import yaml

from .assignment import AzimuthLimit, assign_clusters, azimuthal_width
from .errors import ContractError, InfeasibleTaskError
from .kinematics import ArticulatedArm
from .model import (
    Cluster,
    FeasibilityReport,
    GeometricRegion,
    Plan,
    PlanStats,
    check_feasibility,
    normalize_azimuth,
)
from .reachability import (
    ReachabilityDatabase,
    database_cache_key,
    default_database_bounds,
    fit_region,
    generate_database,
)
from .scp import (
    ScpInstance,
    build_bigraph,
    dump_exchange,
    floor_point_reaches,
    make_floor_grid,
    solve_greedy,
    solve_lpr,
    solve_lrg,
)
from .sequencing import (
    TourProblem,
    build_config_graph,
    path_length,
    solve_config_sequence,
    solve_target_sequence,
    solve_tsp_2opt,
    tour_length,
)
from .taskfile import FitSpec, TaskSpec

PLAN_SCHEMA = "mobiplan-plan/1"
_INV_TOL = 1e-9


class _Timer:
    def __init__(self) -> None:
        self.stages: dict[str, float] = {}

    def run(self, name: str, fn: Callable[[], Any]) -> Any:
        start = time.perf_counter()
        result = fn()
        self.stages[name] = time.perf_counter() - start
        return result


def obtain_database(
    task: TaskSpec, db_dir: str | Path | None = None
) -> ReachabilityDatabase:
    """Generate the reachability database, or reuse a content-addressed cache.

    The cache key hashes the robot parameters, voxel size and bounds, so a
    stale sidecar can never be served for a different robot.
    """
    if not isinstance(task.region, FitSpec):
        raise ValueError("task carries an explicit region; no database needed")
    arm = ArticulatedArm(params=task.robot)
    bounds = default_database_bounds(task.robot)
    if db_dir is not None:
        key = database_cache_key(task.robot, task.region.voxel_size, bounds)
        cache = Path(db_dir) / f"rdb-{key}.npz"
        if cache.exists():
            return ReachabilityDatabase.load(cache)
        db = generate_database(arm, task.region.voxel_size, bounds)
        cache.parent.mkdir(parents=True, exist_ok=True)
        db.save(cache)
        return db
    return generate_database(arm, task.region.voxel_size, bounds)


def resolve_region(
    task: TaskSpec, timer: _Timer | None = None, db_dir: str | Path | None = None
) -> GeometricRegion:
    """Explicit region from the task, or fit one from the (cached) database."""
    timer = timer or _Timer()
    if isinstance(task.region, GeometricRegion):
        timer.stages.setdefault("database", 0.0)
        timer.stages.setdefault("region_fit", 0.0)
        return task.region
    fit = task.region
    db = timer.run("database", lambda: obtain_database(task, db_dir))
    z_min = fit.z_min if fit.z_min is not None else min(t.z for t in task.targets)
    z_max = fit.z_max if fit.z_max is not None else max(t.z for t in task.targets)
    return timer.run(
        "region_fit", lambda: fit_region(db, fit.x_min, z_min, z_max, task.robot)
    )


def _solve_cover(task: TaskSpec, inst: ScpInstance):
    if task.solver == "greedy":
        return solve_greedy(inst, task.targets)
    if task.solver == "lpr":
        return solve_lpr(inst, task.targets)
    return solve_lrg(inst, iters=task.lrg_iters, seed=task.seed, targets=task.targets)


def run_pipeline(
    task: TaskSpec,
    db_dir: str | Path | None = None,
    scp_dump: str | Path | None = None,
) -> Plan:
    """Execute the full planning pipeline and return a verified plan.

    Raises InfeasibleTaskError when some target is reachable from no floor
    point and UnreachableTargetError when configuration search hits an empty
    layer; both carry the offending target indices.
    """
    timer = _Timer()
    arm = ArticulatedArm(params=task.robot)
    region = resolve_region(task, timer, db_dir)

    grid = timer.run(
        "floor_grid",
        lambda: make_floor_grid(task.targets, task.cell_size, region, task.floor_extent),
    )
    inst = timer.run("bigraph", lambda: build_bigraph(task.targets, grid, region))
    if scp_dump is not None:
        with open(scp_dump, "w") as fh:
            dump_exchange(inst, fh)
    report: FeasibilityReport = timer.run("feasibility", lambda: check_feasibility(inst))
    if not report.feasible:
        raise InfeasibleTaskError(report.uncovered)

    cover = timer.run("set_cover", lambda: _solve_cover(task, inst))
    limit = AzimuthLimit.from_joint_limits(task.robot.j1_lim, task.robot.j1_res)
    clusters = timer.run(
        "assignment", lambda: assign_clusters(cover, task.targets, limit)
    )

    base_problem = TourProblem(
        nodes=tuple((c.base[0], c.base[1]) for c in clusters),
        home=(task.home_base[0], task.home_base[1]),
    )
    base_order = timer.run(
        "base_tsp", lambda: solve_tsp_2opt(base_problem, seed=task.seed)
    )

    home_tip = arm.forward_kinematics(task.home_base, task.home_config).position
    target_sequence = timer.run(
        "target_tsp",
        lambda: solve_target_sequence(
            task.targets, clusters, base_order, task.h_scale, task.seed, home_tip
        ),
    )

    graph = timer.run(
        "config_graph",
        lambda: build_config_graph(
            arm, task.targets, target_sequence, clusters, task.home_config
        ),
    )
    config_sequence = timer.run("config_dp", lambda: solve_config_sequence(graph))

    target_positions = [home_tip, *[task.targets[i].position for i in target_sequence], home_tip]
    target_tour_len = float(
        sum(math.dist(a, b) for a, b in zip(target_positions, target_positions[1:]))
    )
    stats = PlanStats(
        solver=task.solver,
        n_targets=len(task.targets),
        n_floor_points=grid.m,
        cover_size=len(cover.chosen),
        n_clusters=len(clusters),
        base_tour_length=tour_length(base_problem, base_order),
        target_tour_length=target_tour_len,
        config_path_length=path_length(config_sequence),
        timings=dict(timer.stages),
        total_seconds=float(sum(timer.stages.values())),
    )
    plan = Plan(
        clusters=tuple(clusters),
        base_sequence=tuple(base_order),
        target_sequence=tuple(target_sequence),
        config_sequence=tuple(tuple(float(v) for v in q) for q in config_sequence),
        home_base=task.home_base,
        home_config=tuple(float(v) for v in task.home_config),
        stats=stats,
    )
    verify_plan(plan, task, region)
    return plan


def verify_plan(plan: Plan, task: TaskSpec, region: GeometricRegion) -> None:
    """Assert the plan invariants; raises ContractError on any violation."""
    n = len(task.targets)
    all_indices = sorted(i for c in plan.clusters for i in c.target_indices)
    if all_indices != list(range(n)):
        raise ContractError("clusters do not partition the target universe")

    limit = AzimuthLimit.from_joint_limits(task.robot.j1_lim, task.robot.j1_res)
    for ci, cluster in enumerate(plan.clusters):
        span = azimuthal_width([task.targets[i].phi for i in cluster.target_indices])
        if span.width > limit.delta_phi_max + _INV_TOL:
            raise ContractError(f"cluster {ci} azimuthal width exceeds the limit")
        bx, by, bphi = cluster.base
        for i in cluster.target_indices:
            t = task.targets[i]
            if not floor_point_reaches(t, bx, by, region):
                raise ContractError(f"target {i} fails the reach test at its base")
            if abs(normalize_azimuth(t.phi - bphi)) > limit.delta_phi_max / 2 + _INV_TOL:
                raise ContractError(f"target {i} azimuth outside the recentred range")

    if sorted(plan.base_sequence) != list(range(len(plan.clusters))):
        raise ContractError("base sequence is not a permutation of the clusters")
    if sorted(plan.target_sequence) != list(range(n)):
        raise ContractError("target sequence is not a permutation of the targets")

    cluster_of = {}
    for ci, cluster in enumerate(plan.clusters):
        for i in cluster.target_indices:
            cluster_of[i] = ci
    rank = {c: r for r, c in enumerate(plan.base_sequence)}
    ranks_seen = [rank[cluster_of[i]] for i in plan.target_sequence]
    if ranks_seen != sorted(ranks_seen):
        raise ContractError("target sequence breaks cluster contiguity or base order")

    if len(plan.config_sequence) != n + 2:
        raise ContractError("config sequence must have n + 2 entries")
    if plan.config_sequence[0] != plan.home_config or plan.config_sequence[-1] != plan.home_config:
        raise ContractError("config sequence must start and end at home")


# -- plan files ---------------------------------------------------------------


def plan_to_dict(plan: Plan) -> dict[str, Any]:
    """Plan as plain data.  Angles stay in radians: plan files are machine
    artifacts consumed by executors, and radians round-trip exactly."""
    return {
        "schema": PLAN_SCHEMA,
        "solver": plan.stats.solver,
        "home": {
            "base": list(plan.home_base),
            "config": list(plan.home_config),
        },
        "clusters": [
            {"targets": list(c.target_indices), "base": list(c.base)}
            for c in plan.clusters
        ],
        "base_sequence": ["home", *plan.base_sequence, "home"],
        "target_sequence": list(plan.target_sequence),
        "config_sequence": [list(q) for q in plan.config_sequence],
        "stats": {
            "n_targets": plan.stats.n_targets,
            "n_floor_points": plan.stats.n_floor_points,
            "cover_size": plan.stats.cover_size,
            "n_clusters": plan.stats.n_clusters,
            "base_tour_length": plan.stats.base_tour_length,
            "target_tour_length": plan.stats.target_tour_length,
            "config_path_length": plan.stats.config_path_length,
            "timings": dict(plan.stats.timings),
            "total_seconds": plan.stats.total_seconds,
        },
    }


def plan_from_dict(data: Mapping[str, Any]) -> Plan:
    if data.get("schema") != PLAN_SCHEMA:
        raise ValueError(f"unsupported plan schema: {data.get('schema')!r}")
    seq = [v for v in data["base_sequence"] if v != "home"]
    stats = data["stats"]
    return Plan(
        clusters=tuple(
            Cluster(target_indices=tuple(c["targets"]), base=tuple(c["base"]))
            for c in data["clusters"]
        ),
        base_sequence=tuple(seq),
        target_sequence=tuple(data["target_sequence"]),
        config_sequence=tuple(tuple(q) for q in data["config_sequence"]),
        home_base=tuple(data["home"]["base"]),
        home_config=tuple(data["home"]["config"]),
        stats=PlanStats(
            solver=data["solver"],
            n_targets=stats["n_targets"],
            n_floor_points=stats["n_floor_points"],
            cover_size=stats["cover_size"],
            n_clusters=stats["n_clusters"],
            base_tour_length=stats["base_tour_length"],
            target_tour_length=stats["target_tour_length"],
            config_path_length=stats["config_path_length"],
            timings=dict(stats["timings"]),
            total_seconds=stats["total_seconds"],
        ),
    )


def write_plan(plan: Plan, path: str | Path) -> None:
    Path(path).write_text(yaml.safe_dump(plan_to_dict(plan), sort_keys=True))


def read_plan(path: str | Path) -> Plan:
    return plan_from_dict(yaml.safe_load(Path(path).read_text()))


def plan_fingerprint(plan: Plan) -> str:
    """Stable digest of the plan with timing fields removed."""
    data = plan_to_dict(plan)
    data["stats"].pop("timings")
    data["stats"].pop("total_seconds")
    return yaml.safe_dump(data, sort_keys=True)
