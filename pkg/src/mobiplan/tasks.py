"""Synthetic drilling-task generators for demos, tests and benchmarks.

Generators return raw task mappings in the task-file schema (angles in
degrees) so they can be dumped to YAML verbatim or fed straight into
:func:`mobiplan.taskfile.parse_task`.  All geometry is deterministic.
"""

from __future__ import annotations

import math
from pathlib import Path
from typing import Any

import yaml

from .taskfile import TaskSpec, parse_task

# Arm tall enough that the reference region constants below are sound for it
# (verified by the region-soundness test): shoulder at 0.825 m, 0.49 m links,
# 0.287 m tool.
TALL_ARM = {
    "j1_lim": 170.0,
    "j1_res": 90.0,
    "z_j2": 0.825,
    "l1": 0.49,
    "l2": 0.49,
    "l": 0.287,
    "joint_limits": [170.0, 150.0, 170.0, 149.0, 149.0, 180.0],
    "polar_range": [110.0, 150.0],
    "n_sam": 10,
}

# Conservative reachable-region constants for TALL_ARM.
TALL_ARM_REGION = {
    "x_min": 0.40,
    "z_min": 0.40,
    "z_max": 1.20,
    "x_s": 0.22,
    "z_s": 0.64,
    "r_min": 0.51,
    "r_max": 0.84,
}

# Default VS-087-like arm used by the small demo task; region constants come
# from a 0.05 m database fit and are frozen here (see test_tasks for the
# soundness check).
DEFAULT_ARM = {
    "j1_lim": 170.0,
    "j1_res": 90.0,
    "z_j2": 0.395,
    "l1": 0.445,
    "l2": 0.445,
    "l": 0.25,
}

DEFAULT_ARM_REGION = {
    "x_min": 0.35,
    "z_min": 0.40,
    "z_max": 0.70,
    "x_s": 0.1915,
    "z_s": 0.2343,
    "r_min": 0.56,
    "r_max": 0.76,
}


def _lerp(lo: float, hi: float, k: int, n: int) -> float:
    return lo if n <= 1 else lo + (hi - lo) * k / (n - 1)


def _face_targets(
    n_across: int,
    n_up: int,
    x: float,
    y_range: tuple[float, float],
    z_range: tuple[float, float],
    phi_range: tuple[float, float],
    theta_range: tuple[float, float],
) -> list[dict[str, float]]:
    """Grid of targets on a vertical face; orientation sweeps the given ranges."""
    out = []
    for col in range(n_across):
        y = _lerp(y_range[0], y_range[1], col, n_across)
        phi = _lerp(phi_range[0], phi_range[1], col, n_across)
        for row in range(n_up):
            z = _lerp(z_range[0], z_range[1], row, n_up)
            theta = _lerp(theta_range[0], theta_range[1], row, n_up)
            out.append(
                {"x": x, "y": round(y, 6), "z": round(z, 6),
                 "theta": round(theta, 6), "phi": round(phi, 6)}
            )
    return out


def two_sided_drilling_task(
    n_front: int = 288, n_back: int = 48, solver: str = "lrg", seed: int = 0
) -> dict[str, Any]:
    """Drilling task on both faces of a 1 m workpiece.

    Front targets span azimuths [-37, 37] degrees, back targets [168, 192],
    polar angles [110, 150] on both sides; 336 targets by default.
    """
    front_cols = max(1, round(math.sqrt(n_front * 2)))
    front_rows = max(1, math.ceil(n_front / front_cols))
    back_cols = max(1, round(math.sqrt(n_back * 1.5)))
    back_rows = max(1, math.ceil(n_back / back_cols))
    targets = _face_targets(
        front_cols, front_rows, 1.6, (-0.5, 0.5), (0.45, 1.15), (-37.0, 37.0), (110.0, 150.0)
    )[:n_front]
    targets += _face_targets(
        back_cols, back_rows, 1.9, (-0.5, 0.5), (0.5, 1.1), (168.0, 192.0), (110.0, 150.0)
    )[:n_back]
    return {
        "targets": targets,
        "robot": dict(TALL_ARM),
        "floor": {"cell_size": 0.10},
        "region": {"explicit": dict(TALL_ARM_REGION)},
        "solver": solver,
        "h_scale": 1.0,
        "seed": seed,
        "home": {"base": {"x": 0.0, "y": 0.0, "varphi": 0.0},
                 "config": [0.0, 0.0, 0.0, 0.0, 0.0, 0.0]},
    }


def one_sided_drilling_task(
    n: int = 264, solver: str = "lrg", seed: int = 0
) -> dict[str, Any]:
    """Front-face-only variant: all azimuths zero, polar [110, 150]."""
    cols = max(1, round(math.sqrt(n * 2)))
    rows = max(1, math.ceil(n / cols))
    targets = _face_targets(
        cols, rows, 1.6, (-0.5, 0.5), (0.45, 1.15), (0.0, 0.0), (110.0, 150.0)
    )[:n]
    return {
        "targets": targets,
        "robot": dict(TALL_ARM),
        "floor": {"cell_size": 0.10},
        "region": {"explicit": dict(TALL_ARM_REGION)},
        "solver": solver,
        "h_scale": 1.0,
        "seed": seed,
        "home": {"base": {"x": 0.0, "y": 0.0, "varphi": 0.0},
                 "config": [0.0, 0.0, 0.0, 0.0, 0.0, 0.0]},
    }


def demo_task() -> dict[str, Any]:
    """Twelve targets in two well-separated groups; runs in well under a second."""
    group_a = _face_targets(3, 2, 0.9, (-0.15, 0.15), (0.48, 0.62), (-20.0, 20.0), (115.0, 145.0))
    group_b = _face_targets(3, 2, 0.9, (2.85, 3.15), (0.48, 0.62), (-20.0, 20.0), (115.0, 145.0))
    return {
        "targets": group_a + group_b,
        "robot": dict(DEFAULT_ARM),
        "floor": {"cell_size": 0.10},
        "region": {"explicit": dict(DEFAULT_ARM_REGION)},
        "solver": "lrg",
        "seed": 7,
        "home": {"base": {"x": -0.5, "y": 1.5, "varphi": 0.0},
                 "config": [0.0, 30.0, 60.0, 0.0, 0.0, 0.0]},
    }


def as_spec(raw: dict[str, Any]) -> TaskSpec:
    """Run a generated mapping through the regular task-file validator."""
    return parse_task(raw, source="generated")


def write_task(raw: dict[str, Any], path: str | Path) -> None:
    Path(path).write_text(yaml.safe_dump(raw, sort_keys=False))
