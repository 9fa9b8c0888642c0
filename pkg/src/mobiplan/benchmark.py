"""Benchmark sweeps over solvers, floor grids, target counts and voxel sizes.

Emits one CSV row per measurement plus matplotlib figures rendered next to
the delimited output, mirroring the cluster-count/time panels of the usual
clustering benchmarks and the database-generation timing table.
"""

from __future__ import annotations

import csv
import time
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .assignment import AzimuthLimit, assign_clusters
from .kinematics import ArticulatedArm
from .pipeline import resolve_region
from .reachability import default_database_bounds, generate_database
from .scp import SOLVERS, build_bigraph, make_floor_grid
from .taskfile import TaskSpec

CSV_COLUMNS = [
    "kind", "solver", "grid_size", "voxel_size", "n_targets",
    "n_floor_points", "n_voxels", "bigraph_seconds", "seconds",
    "cover_size", "n_clusters",
]


@dataclass(frozen=True)
class BenchmarkRow:
    kind: str
    solver: str = ""
    grid_size: float | None = None
    voxel_size: float | None = None
    n_targets: int | None = None
    n_floor_points: int | None = None
    n_voxels: int | None = None
    bigraph_seconds: float | None = None
    seconds: float = 0.0
    cover_size: int | None = None
    n_clusters: int | None = None


def run_benchmark(
    task: TaskSpec,
    solvers: Sequence[str] = ("greedy", "lpr", "lrg"),
    grid_sizes: Sequence[float] = (),
    target_counts: Sequence[int] = (),
    voxel_sizes: Sequence[float] = (),
    db_dir: str | Path | None = None,
) -> list[BenchmarkRow]:
    """Measure clustering quality/time over the sweep, plus database timings.

    Cluster rows time the cover solve and cluster assignment together (the
    bigraph build is reported separately since it is shared across solvers);
    target counts subsample the task's target list from the front.
    """
    for s in solvers:
        if s not in SOLVERS:
            raise ValueError(f"unknown solver {s!r}")
    rows: list[BenchmarkRow] = []
    grid_sizes = tuple(grid_sizes) or (task.cell_size,)
    target_counts = tuple(target_counts) or (len(task.targets),)
    limit = AzimuthLimit.from_joint_limits(task.robot.j1_lim, task.robot.j1_res)

    region = resolve_region(task, db_dir=db_dir) if solvers else None
    for grid_size in grid_sizes if solvers else ():
        for n in target_counts:
            if not 1 <= n <= len(task.targets):
                raise ValueError(f"target count {n} outside 1..{len(task.targets)}")
            targets = task.targets[:n]
            grid = make_floor_grid(targets, grid_size, region, task.floor_extent)
            t0 = time.perf_counter()
            inst = build_bigraph(targets, grid, region)
            bigraph_seconds = time.perf_counter() - t0
            for solver in solvers:
                t1 = time.perf_counter()
                if solver == "lrg":
                    cover = SOLVERS[solver](inst, iters=task.lrg_iters, seed=task.seed, targets=targets)
                else:
                    cover = SOLVERS[solver](inst, targets=targets)
                clusters = assign_clusters(cover, targets, limit)
                seconds = time.perf_counter() - t1
                rows.append(
                    BenchmarkRow(
                        kind="cluster",
                        solver=solver,
                        grid_size=grid_size,
                        n_targets=n,
                        n_floor_points=grid.m,
                        bigraph_seconds=bigraph_seconds,
                        seconds=seconds,
                        cover_size=len(cover.chosen),
                        n_clusters=len(clusters),
                    )
                )

    arm = ArticulatedArm(params=task.robot)
    bounds = default_database_bounds(task.robot)
    for voxel in voxel_sizes:
        t0 = time.perf_counter()
        db = generate_database(arm, voxel, bounds)
        rows.append(
            BenchmarkRow(
                kind="db-gen",
                voxel_size=voxel,
                n_voxels=db.n_voxels,
                seconds=time.perf_counter() - t0,
            )
        )
    return rows


def write_csv(rows: Sequence[BenchmarkRow], path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_COLUMNS)
        writer.writeheader()
        for row in rows:
            record = {k: ("" if v is None else v) for k, v in asdict(row).items()}
            writer.writerow(record)


def render_figures(rows: Sequence[BenchmarkRow], out_dir: str | Path) -> list[Path]:
    """Write PNG panels for whichever sweep dimensions are present."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    cluster_rows = [r for r in rows if r.kind == "cluster"]
    db_rows = [r for r in rows if r.kind == "db-gen"]
    solvers = sorted({r.solver for r in cluster_rows})

    def panel(x_of, y_of, xlabel: str, ylabel: str, fname: str, keep) -> None:
        fig, ax = plt.subplots(figsize=(5, 3.5))
        for solver in solvers:
            pts = sorted(
                ((x_of(r), y_of(r)) for r in cluster_rows if r.solver == solver and keep(r)),
            )
            if pts:
                ax.plot([p[0] for p in pts], [p[1] for p in pts], marker="o", label=solver)
        ax.set_xlabel(xlabel)
        ax.set_ylabel(ylabel)
        ax.legend()
        fig.tight_layout()
        path = out_dir / fname
        fig.savefig(path, dpi=120)
        plt.close(fig)
        written.append(path)

    grid_values = sorted({r.grid_size for r in cluster_rows})
    count_values = sorted({r.n_targets for r in cluster_rows})
    if len(count_values) > 1:
        g = grid_values[0]
        panel(lambda r: r.n_targets, lambda r: r.n_clusters,
              "targets", "clusters", "clusters_vs_targets.png", lambda r: r.grid_size == g)
        panel(lambda r: r.n_targets, lambda r: r.seconds,
              "targets", "solve seconds", "time_vs_targets.png", lambda r: r.grid_size == g)
    if len(grid_values) > 1:
        n = count_values[-1]
        panel(lambda r: r.grid_size, lambda r: r.n_clusters,
              "floor grid size (m)", "clusters", "clusters_vs_grid.png", lambda r: r.n_targets == n)
        panel(lambda r: r.grid_size, lambda r: r.seconds,
              "floor grid size (m)", "solve seconds", "time_vs_grid.png", lambda r: r.n_targets == n)
    if len(cluster_rows) > 0 and len(count_values) == 1 and len(grid_values) == 1:
        # Single-cell sweep: bar chart of solver quality and time.
        fig, axes = plt.subplots(1, 2, figsize=(7, 3.2))
        axes[0].bar(solvers, [next(r.n_clusters for r in cluster_rows if r.solver == s) for s in solvers])
        axes[0].set_ylabel("clusters")
        axes[1].bar(solvers, [next(r.seconds for r in cluster_rows if r.solver == s) for s in solvers])
        axes[1].set_ylabel("solve seconds")
        fig.tight_layout()
        path = out_dir / "solver_comparison.png"
        fig.savefig(path, dpi=120)
        plt.close(fig)
        written.append(path)

    if db_rows:
        fig, ax = plt.subplots(figsize=(5, 3.5))
        pts = sorted((r.voxel_size, r.seconds) for r in db_rows)
        ax.plot([p[0] for p in pts], [p[1] for p in pts], marker="s", color="#444444")
        ax.set_xlabel("voxel size (m)")
        ax.set_ylabel("database generation seconds")
        fig.tight_layout()
        path = out_dir / "dbgen_time_vs_voxel.png"
        fig.savefig(path, dpi=120)
        plt.close(fig)
        written.append(path)
    return written
