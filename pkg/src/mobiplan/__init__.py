"""Mobile-manipulator base placement and task sequencing planner."""

from .assignment import AzimuthLimit, AzimuthalSpan, assign_clusters, azimuthal_width
from .errors import (
    ContractError,
    InfeasibleTaskError,
    PlanningError,
    RegionFitError,
    SolverError,
    TaskValidationError,
    UnreachableTargetError,
)
from .kinematics import ArmModel, ArticulatedArm, JointVector, ToolPose, default_arm
from .model import (
    Cluster,
    FeasibilityReport,
    FloorGrid,
    GeometricRegion,
    Plan,
    PlanStats,
    RobotParams,
    Target,
    check_feasibility,
    normalize_azimuth,
)
from .pipeline import read_plan, run_pipeline, verify_plan, write_plan
from .reachability import (
    Box,
    ReachabilityDatabase,
    default_database_bounds,
    fit_region,
    generate_database,
    region_contains,
)
from .scp import (
    CoverSolution,
    ScpInstance,
    build_bigraph,
    dump_exchange,
    floor_point_reaches,
    make_floor_grid,
    reachable_floor_points,
    solve_exact,
    solve_greedy,
    solve_lpr,
    solve_lrg,
)
from .sequencing import (
    ConfigGraph,
    TourProblem,
    build_config_graph,
    config_distance,
    solve_config_sequence,
    solve_target_sequence,
    solve_tsp_2opt,
    tour_length,
    virtual_separation,
)
from .svg import render_svg
from .taskfile import FitSpec, TaskSpec, load_task, parse_task

__version__ = "0.1.0"

__all__ = [
    "ArmModel",
    "ArticulatedArm",
    "AzimuthLimit",
    "AzimuthalSpan",
    "Box",
    "Cluster",
    "ConfigGraph",
    "ContractError",
    "CoverSolution",
    "FeasibilityReport",
    "FitSpec",
    "FloorGrid",
    "GeometricRegion",
    "InfeasibleTaskError",
    "JointVector",
    "Plan",
    "PlanStats",
    "PlanningError",
    "ReachabilityDatabase",
    "RegionFitError",
    "RobotParams",
    "ScpInstance",
    "SolverError",
    "Target",
    "TaskSpec",
    "TaskValidationError",
    "ToolPose",
    "TourProblem",
    "UnreachableTargetError",
    "assign_clusters",
    "azimuthal_width",
    "build_bigraph",
    "build_config_graph",
    "check_feasibility",
    "config_distance",
    "default_arm",
    "default_database_bounds",
    "dump_exchange",
    "fit_region",
    "floor_point_reaches",
    "generate_database",
    "load_task",
    "make_floor_grid",
    "normalize_azimuth",
    "parse_task",
    "reachable_floor_points",
    "read_plan",
    "region_contains",
    "render_svg",
    "run_pipeline",
    "solve_config_sequence",
    "solve_exact",
    "solve_greedy",
    "solve_lpr",
    "solve_lrg",
    "solve_target_sequence",
    "solve_tsp_2opt",
    "tour_length",
    "verify_plan",
    "virtual_separation",
    "write_plan",
]
