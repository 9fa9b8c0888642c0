"""Task-file loading, schema validation and unit conversion.

Task files are YAML with angles in degrees (drilling specs are written by
people); everything is converted to radians here and nowhere else.  Unknown
keys are rejected with their dotted location so typos surface immediately.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Mapping, Sequence

import yaml

from .errors import TaskValidationError
from .kinematics import JointVector
from .model import GeometricRegion, RobotParams, Target


@dataclass(frozen=True)
class FitSpec:
    """Region-fitting request: operator planes plus the database voxel size."""

    x_min: float
    z_min: float | None
    z_max: float | None
    voxel_size: float


@dataclass(frozen=True)
class TaskSpec:
    """Validated task: targets, robot, floor, region source and run settings."""

    targets: tuple[Target, ...]
    robot: RobotParams
    cell_size: float
    floor_extent: tuple[float, float, float, float] | None
    region: GeometricRegion | FitSpec
    solver: str
    h_scale: float
    seed: int
    lrg_iters: int
    home_base: tuple[float, float, float]
    home_config: JointVector


def _expect_map(value: Any, path: str) -> Mapping[str, Any]:
    if not isinstance(value, Mapping):
        raise TaskValidationError(path, f"expected a mapping, got {type(value).__name__}")
    return value


def _check_keys(data: Mapping[str, Any], path: str, allowed: set[str], required: set[str]) -> None:
    unknown = sorted(set(data) - allowed)
    if unknown:
        raise TaskValidationError(f"{path}.{unknown[0]}", "unknown key")
    missing = sorted(required - set(data))
    if missing:
        raise TaskValidationError(f"{path}.{missing[0]}", "required key missing")


def _number(value: Any, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise TaskValidationError(path, f"expected a number, got {value!r}")
    if not math.isfinite(float(value)):
        raise TaskValidationError(path, "must be finite")
    return float(value)


def _integer(value: Any, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise TaskValidationError(path, f"expected an integer, got {value!r}")
    return value


def _sequence(value: Any, path: str, length: int | None = None) -> Sequence[Any]:
    if not isinstance(value, Sequence) or isinstance(value, (str, bytes)):
        raise TaskValidationError(path, "expected a list")
    if length is not None and len(value) != length:
        raise TaskValidationError(path, f"expected exactly {length} entries, got {len(value)}")
    return value


def _parse_target(entry: Any, path: str) -> Target:
    data = _expect_map(entry, path)
    _check_keys(data, path, {"x", "y", "z", "theta", "phi"}, {"x", "y", "z", "theta", "phi"})
    try:
        return Target(
            x=_number(data["x"], f"{path}.x"),
            y=_number(data["y"], f"{path}.y"),
            z=_number(data["z"], f"{path}.z"),
            theta=math.radians(_number(data["theta"], f"{path}.theta")),
            phi=math.radians(_number(data["phi"], f"{path}.phi")),
        )
    except ValueError as exc:
        raise TaskValidationError(path, str(exc)) from exc


def _parse_robot(data: Mapping[str, Any], path: str) -> RobotParams:
    allowed = {
        "j1_lim", "j1_res", "z_j2", "l1", "l2", "l",
        "joint_limits", "polar_range", "n_sam",
    }
    required = {"j1_lim", "j1_res", "z_j2", "l1", "l2", "l"}
    _check_keys(data, path, allowed, required)
    kwargs: dict[str, Any] = {
        "j1_lim": math.radians(_number(data["j1_lim"], f"{path}.j1_lim")),
        "j1_res": math.radians(_number(data["j1_res"], f"{path}.j1_res")),
        "z_j2": _number(data["z_j2"], f"{path}.z_j2"),
        "l1": _number(data["l1"], f"{path}.l1"),
        "l2": _number(data["l2"], f"{path}.l2"),
        "l": _number(data["l"], f"{path}.l"),
    }
    if "joint_limits" in data:
        vals = _sequence(data["joint_limits"], f"{path}.joint_limits", length=6)
        kwargs["joint_limits"] = tuple(
            math.radians(_number(v, f"{path}.joint_limits[{i}]")) for i, v in enumerate(vals)
        )
    if "polar_range" in data:
        vals = _sequence(data["polar_range"], f"{path}.polar_range", length=2)
        kwargs["polar_range"] = tuple(
            math.radians(_number(v, f"{path}.polar_range[{i}]")) for i, v in enumerate(vals)
        )
    if "n_sam" in data:
        kwargs["n_sam"] = _integer(data["n_sam"], f"{path}.n_sam")
    try:
        return RobotParams(**kwargs)
    except ValueError as exc:
        raise TaskValidationError(path, str(exc)) from exc


def _parse_region(data: Mapping[str, Any], path: str) -> GeometricRegion | FitSpec:
    _check_keys(data, path, {"explicit", "fit"}, set())
    if ("explicit" in data) == ("fit" in data):
        raise TaskValidationError(path, "give exactly one of 'explicit' or 'fit'")
    if "explicit" in data:
        sub = _expect_map(data["explicit"], f"{path}.explicit")
        keys = {"x_min", "z_min", "z_max", "x_s", "z_s", "r_min", "r_max"}
        _check_keys(sub, f"{path}.explicit", keys, keys)
        try:
            return GeometricRegion(
                **{k: _number(sub[k], f"{path}.explicit.{k}") for k in keys}
            )
        except ValueError as exc:
            raise TaskValidationError(f"{path}.explicit", str(exc)) from exc
    sub = _expect_map(data["fit"], f"{path}.fit")
    _check_keys(sub, f"{path}.fit", {"x_min", "z_min", "z_max", "voxel_size"}, {"x_min", "voxel_size"})
    voxel = _number(sub["voxel_size"], f"{path}.fit.voxel_size")
    if voxel <= 0:
        raise TaskValidationError(f"{path}.fit.voxel_size", "must be positive")
    return FitSpec(
        x_min=_number(sub["x_min"], f"{path}.fit.x_min"),
        z_min=_number(sub["z_min"], f"{path}.fit.z_min") if "z_min" in sub else None,
        z_max=_number(sub["z_max"], f"{path}.fit.z_max") if "z_max" in sub else None,
        voxel_size=voxel,
    )


def parse_task(raw: Any, source: str = "task") -> TaskSpec:
    """Validate a raw task mapping and convert to internal units."""
    data = _expect_map(raw, source)
    allowed = {"targets", "robot", "floor", "region", "solver", "h_scale", "seed", "lrg_iters", "home"}
    _check_keys(data, source, allowed, {"targets", "robot", "floor", "region"})

    raw_targets = _sequence(data["targets"], f"{source}.targets")
    if not raw_targets:
        raise TaskValidationError(f"{source}.targets", "at least one target required")
    targets = tuple(
        _parse_target(entry, f"{source}.targets[{i}]") for i, entry in enumerate(raw_targets)
    )

    robot = _parse_robot(_expect_map(data["robot"], f"{source}.robot"), f"{source}.robot")

    floor = _expect_map(data["floor"], f"{source}.floor")
    _check_keys(floor, f"{source}.floor", {"cell_size", "extent"}, {"cell_size"})
    cell_size = _number(floor["cell_size"], f"{source}.floor.cell_size")
    if cell_size <= 0:
        raise TaskValidationError(f"{source}.floor.cell_size", "must be positive")
    extent = None
    if "extent" in floor:
        sub = _expect_map(floor["extent"], f"{source}.floor.extent")
        keys = {"x_lo", "x_hi", "y_lo", "y_hi"}
        _check_keys(sub, f"{source}.floor.extent", keys, keys)
        extent = tuple(_number(sub[k], f"{source}.floor.extent.{k}") for k in ("x_lo", "x_hi", "y_lo", "y_hi"))
        if extent[0] >= extent[1] or extent[2] >= extent[3]:
            raise TaskValidationError(f"{source}.floor.extent", "extent must have positive area")

    region = _parse_region(_expect_map(data["region"], f"{source}.region"), f"{source}.region")

    solver = data.get("solver", "lrg")
    if solver not in ("greedy", "lpr", "lrg"):
        raise TaskValidationError(f"{source}.solver", f"unknown solver {solver!r}")
    h_scale = _number(data.get("h_scale", 1.0), f"{source}.h_scale")
    if h_scale < 1.0:
        raise TaskValidationError(f"{source}.h_scale", "must be >= 1")
    seed = _integer(data.get("seed", 0), f"{source}.seed")
    lrg_iters = _integer(data.get("lrg_iters", 20), f"{source}.lrg_iters")
    if lrg_iters < 1:
        raise TaskValidationError(f"{source}.lrg_iters", "must be >= 1")

    home_base = (0.0, 0.0, 0.0)
    home_config = JointVector(0.0, 0.0, 0.0, 0.0, 0.0, 0.0)
    if "home" in data:
        home = _expect_map(data["home"], f"{source}.home")
        _check_keys(home, f"{source}.home", {"base", "config"}, set())
        if "base" in home:
            sub = _expect_map(home["base"], f"{source}.home.base")
            _check_keys(sub, f"{source}.home.base", {"x", "y", "varphi"}, {"x", "y", "varphi"})
            home_base = (
                _number(sub["x"], f"{source}.home.base.x"),
                _number(sub["y"], f"{source}.home.base.y"),
                math.radians(_number(sub["varphi"], f"{source}.home.base.varphi")),
            )
        if "config" in home:
            vals = _sequence(home["config"], f"{source}.home.config", length=6)
            home_config = JointVector(
                *(math.radians(_number(v, f"{source}.home.config[{i}]")) for i, v in enumerate(vals))
            )

    return TaskSpec(
        targets=targets,
        robot=robot,
        cell_size=cell_size,
        floor_extent=extent,
        region=region,
        solver=solver,
        h_scale=h_scale,
        seed=seed,
        lrg_iters=lrg_iters,
        home_base=home_base,
        home_config=home_config,
    )


def load_task(path: str | Path) -> TaskSpec:
    path = Path(path)
    try:
        raw = yaml.safe_load(path.read_text())
    except yaml.YAMLError as exc:
        raise TaskValidationError(str(path), f"not valid YAML: {exc}") from exc
    return parse_task(raw, source=path.name)
