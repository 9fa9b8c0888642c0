"""Command-line entry points: plan, benchmark, gen-db, render.

Exit codes: 0 success, 2 infeasible task, 3 invalid input, 4 internal
contract violation or solver failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
from pathlib import Path

from .errors import PlanningError, TaskValidationError
from .kinematics import ArticulatedArm
from .pipeline import read_plan, run_pipeline, write_plan
from .reachability import default_database_bounds, generate_database
from .svg import render_svg
from .taskfile import FitSpec, TaskSpec, load_task


def _apply_overrides(task: TaskSpec, args: argparse.Namespace) -> TaskSpec:
    updates: dict[str, object] = {}
    if getattr(args, "solver", None):
        updates["solver"] = args.solver
    if getattr(args, "seed", None) is not None:
        updates["seed"] = args.seed
    if getattr(args, "grid_size", None) is not None:
        updates["cell_size"] = args.grid_size
    if getattr(args, "h_scale", None) is not None:
        updates["h_scale"] = args.h_scale
    return dataclasses.replace(task, **updates) if updates else task


def _cmd_plan(args: argparse.Namespace) -> int:
    task = _apply_overrides(load_task(args.task), args)
    db_dir = args.db_dir or Path(args.task).parent  # cache beside the task file
    plan = run_pipeline(task, db_dir=db_dir, scp_dump=args.dump_scp)
    write_plan(plan, args.output)
    if args.svg:
        Path(args.svg).write_text(render_svg(plan, task.targets))
    s = plan.stats
    print(
        f"planned {s.n_targets} targets: {s.n_clusters} clusters "
        f"({s.cover_size} chosen floor points), solver {s.solver}, "
        f"{s.total_seconds:.2f}s total"
    )
    print(f"plan written to {args.output}")
    return 0


def _cmd_gen_db(args: argparse.Namespace) -> int:
    task = load_task(args.task)
    voxel = args.voxel_size
    if voxel is None:
        if isinstance(task.region, FitSpec):
            voxel = task.region.voxel_size
        else:
            raise TaskValidationError(
                "gen-db", "task has an explicit region; pass --voxel-size"
            )
    arm = ArticulatedArm(params=task.robot)
    db = generate_database(arm, voxel, default_database_bounds(task.robot))
    db.save(args.output)
    print(
        f"database: {db.n_voxels} voxels at {voxel} m, "
        f"{int(db.valid.sum())} valid; written to {args.output}"
    )
    return 0


def _cmd_benchmark(args: argparse.Namespace) -> int:
    from .benchmark import render_figures, run_benchmark, write_csv

    task = load_task(args.task)
    solvers = tuple(s for s in args.solvers.split(",") if s) if args.solvers else ()
    rows = run_benchmark(
        task,
        solvers=solvers,
        grid_sizes=tuple(args.grid_sizes or ()),
        target_counts=tuple(args.target_counts or ()),
        voxel_sizes=tuple(args.voxel_sizes or ()),
        db_dir=args.db_dir,
    )
    write_csv(rows, args.output)
    print(f"{len(rows)} benchmark rows written to {args.output}")
    fig_dir = args.figures or str(Path(args.output).parent)
    for path in render_figures(rows, fig_dir):
        print(f"figure written to {path}")
    return 0


def _cmd_render(args: argparse.Namespace) -> int:
    task = load_task(args.task)
    plan = read_plan(args.plan)
    Path(args.output).write_text(render_svg(plan, task.targets))
    print(f"svg written to {args.output}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mobiplan",
        description="Cluster task targets into mobile-base placements and "
        "sequence the visits.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("plan", help="run the full pipeline on a task file")
    p.add_argument("task")
    p.add_argument("-o", "--output", required=True, help="plan YAML output path")
    p.add_argument("--svg", help="also render the plan to this SVG file")
    p.add_argument("--dump-scp", help="dump the set-cover instance (exchange format)")
    p.add_argument("--db-dir", help="cache directory for reachability databases")
    p.add_argument("--solver", choices=["greedy", "lpr", "lrg"])
    p.add_argument("--seed", type=int)
    p.add_argument("--grid-size", type=float, help="override floor grid cell size (m)")
    p.add_argument("--h-scale", type=float, help="override cluster separation scale")
    p.set_defaults(fn=_cmd_plan)

    p = sub.add_parser("gen-db", help="generate the reachability database sidecar")
    p.add_argument("task")
    p.add_argument("-o", "--output", required=True, help="database .npz output path")
    p.add_argument("--voxel-size", type=float)
    p.set_defaults(fn=_cmd_gen_db)

    p = sub.add_parser("benchmark", help="sweep solvers, grids, target counts")
    p.add_argument("task")
    p.add_argument("-o", "--output", required=True, help="CSV output path")
    p.add_argument("--solvers", default="greedy,lpr,lrg")
    p.add_argument("--grid-sizes", type=float, nargs="*")
    p.add_argument("--target-counts", type=int, nargs="*")
    p.add_argument("--voxel-sizes", type=float, nargs="*")
    p.add_argument("--figures", help="directory for PNG figures (default: CSV directory)")
    p.add_argument("--db-dir")
    p.set_defaults(fn=_cmd_benchmark)

    p = sub.add_parser("render", help="render an existing plan to SVG")
    p.add_argument("task")
    p.add_argument("plan")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(fn=_cmd_render)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except PlanningError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
