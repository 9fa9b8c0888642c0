"""Domain value objects shared across the planning pipeline.

All types are immutable after construction and safe to share across threads.
Angles are radians and lengths are metres everywhere inside the library;
degree conversion happens only at the task-file boundary.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np

if TYPE_CHECKING:
    from .scp import ScpInstance

TWO_PI = math.tau

# Absolute slack applied to every geometric boundary comparison.  The
# closed-form floor-point test and the rotate-then-test oracle both use this
# value so the two code paths agree at region boundaries.
GEOM_TOL = 1e-12


def normalize_azimuth(angle: float) -> float:
    """Wrap an angle into (-pi, pi].

    The result is equivalent modulo 2*pi and the wrap is idempotent; the
    embedded direction vector (cos, sin) is preserved to better than 1e-12
    for inputs within a few turns.
    """
    if not math.isfinite(angle):
        raise ValueError(f"azimuth must be finite, got {angle!r}")
    # IEEE remainder is exact and lands in [-pi, pi]; fold -pi up to pi.
    wrapped = math.remainder(angle, TWO_PI)
    if wrapped <= -math.pi:
        wrapped += TWO_PI
    return wrapped


@dataclass(frozen=True)
class Target:
    """A 5D task point: 3D position plus tool-axis orientation.

    The orientation is a unit vector in spherical coordinates: ``theta`` is
    the polar angle from vertical (+z), ``phi`` the azimuth around vertical.
    The sixth pose dimension (rotation about the tool axis) is irrelevant to
    the task and fixed to zero downstream.

    Attributes:
        x, y, z: position in metres, world frame.
        theta: polar angle in radians, within [0, pi].
        phi: azimuthal angle in radians, normalized to (-pi, pi] on
            construction.
    """

    x: float
    y: float
    z: float
    theta: float
    phi: float

    def __post_init__(self) -> None:
        for name in ("x", "y", "z", "theta", "phi"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"target field {name} must be finite")
        if not 0.0 <= self.theta <= math.pi:
            raise ValueError(f"polar angle must be in [0, pi], got {self.theta}")
        object.__setattr__(self, "phi", normalize_azimuth(self.phi))

    @property
    def position(self) -> tuple[float, float, float]:
        return (self.x, self.y, self.z)

    def direction(self) -> tuple[float, float, float]:
        """Unit vector of the tool axis in the world frame."""
        st = math.sin(self.theta)
        return (st * math.cos(self.phi), st * math.sin(self.phi), math.cos(self.theta))


@dataclass(frozen=True)
class FloorGrid:
    """Regular grid of candidate base positions on the floor.

    Point ``j`` lives at ``origin + (col * cell_size, row * cell_size)`` with
    ``j = row * nx + col`` (row-major).
    """

    origin: tuple[float, float]
    cell_size: float
    nx: int
    ny: int

    def __post_init__(self) -> None:
        if self.cell_size <= 0:
            raise ValueError("cell_size must be positive")
        if self.nx < 1 or self.ny < 1:
            raise ValueError("grid must contain at least one point")
        object.__setattr__(self, "origin", (float(self.origin[0]), float(self.origin[1])))

    @property
    def m(self) -> int:
        return self.nx * self.ny

    def point(self, j: int) -> tuple[float, float]:
        row, col = divmod(j, self.nx)
        if not 0 <= row < self.ny:
            raise IndexError(f"floor point index {j} out of range")
        return (self.origin[0] + col * self.cell_size, self.origin[1] + row * self.cell_size)

    def points(self) -> np.ndarray:
        """All floor points as an (m, 2) array, row-major order."""
        xs = self.origin[0] + self.cell_size * np.arange(self.nx)
        ys = self.origin[1] + self.cell_size * np.arange(self.ny)
        gx, gy = np.meshgrid(xs, ys)  # row-major: y varies over rows
        return np.column_stack([gx.ravel(), gy.ravel()])


@dataclass(frozen=True)
class RobotParams:
    """Kinematic parameters of the arm mounted on the mobile base.

    The arm model is a vertical first joint at the base origin, a shoulder at
    height ``z_j2``, a planar two-link arm (``l1``, ``l2``), a two-axis wrist
    and a tool of length ``l`` from the second-last joint to the tip.

    ``j1_res`` is the deliberately narrowed first-joint range used while
    building the reachability database; the slack ``j1_lim - j1_res`` is what
    lets one base pose serve a spread of target azimuths.
    """

    j1_lim: float
    j1_res: float
    z_j2: float
    l1: float
    l2: float
    l: float
    joint_limits: tuple[float, float, float, float, float, float] = (
        math.radians(170.0),
        math.radians(120.0),
        math.radians(150.0),
        2.0,
        2.0,
        math.pi,
    )
    polar_range: tuple[float, float] = (math.radians(110.0), math.radians(150.0))
    n_sam: int = 10

    def __post_init__(self) -> None:
        if not 0.0 < self.j1_res <= self.j1_lim <= math.pi:
            raise ValueError("need 0 < j1_res <= j1_lim <= pi")
        if self.n_sam < 2:
            raise ValueError("n_sam must be at least 2")
        lo, hi = self.polar_range
        if not lo < hi:
            raise ValueError("polar_range must satisfy lo < hi")
        for name in ("z_j2", "l1", "l2", "l"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if len(self.joint_limits) != 6 or any(b <= 0 for b in self.joint_limits):
            raise ValueError("joint_limits must be six positive symmetric bounds")
        object.__setattr__(self, "joint_limits", tuple(float(b) for b in self.joint_limits))
        object.__setattr__(self, "polar_range", (float(lo), float(hi)))

    def sampling_polar_angles(self) -> tuple[float, ...]:
        """Evenly spaced polar angles over polar_range, endpoints included."""
        lo, hi = self.polar_range
        return tuple(lo + (hi - lo) * k / (self.n_sam - 1) for k in range(self.n_sam))

    def content_hash(self) -> str:
        """Stable hash of the parameters, used to key cached databases."""
        payload = repr(
            (
                self.j1_lim,
                self.j1_res,
                self.z_j2,
                self.l1,
                self.l2,
                self.l,
                self.joint_limits,
                self.polar_range,
                self.n_sam,
            )
        ).encode()
        return hashlib.sha256(payload).hexdigest()


@dataclass(frozen=True)
class GeometricRegion:
    """Conservative reachable region: three limit planes plus a spherical shell.

    A robot-frame point (x', y', z') is inside when all five inequalities
    hold:

        z_min <= z' <= z_max
        x' >= x_min
        r_min <= |(x', y', z') - (x_s, 0, z_s)| <= r_max

    The region is an inner approximation of the IK-validated voxel cloud, so
    membership implies reachability for every sampled tool polar angle.
    """

    x_min: float
    z_min: float
    z_max: float
    x_s: float
    z_s: float
    r_min: float
    r_max: float

    def __post_init__(self) -> None:
        if not self.z_min < self.z_max:
            raise ValueError("need z_min < z_max")
        if not 0.0 <= self.r_min < self.r_max:
            raise ValueError("need 0 <= r_min < r_max")
        # Non-emptiness: at the slab height closest to the sphere centre, the
        # outermost shell point (x_s + radius, 0, z*) must clear the x_min plane.
        z_star = min(max(self.z_s, self.z_min), self.z_max)
        dz2 = (z_star - self.z_s) ** 2
        if dz2 >= self.r_max**2:
            raise ValueError("region is empty: shell does not intersect the z slab")
        if self.x_s + math.sqrt(self.r_max**2 - dz2) < self.x_min:
            raise ValueError("region is empty: shell lies behind the x_min plane")


@dataclass(frozen=True)
class Cluster:
    """A group of targets served from one base pose.

    ``base`` is (x_b, y_b, varphi_b): the chosen floor point plus the base
    heading placed at the middle of the members' azimuthal arc.
    """

    target_indices: tuple[int, ...]
    base: tuple[float, float, float]

    def __post_init__(self) -> None:
        if not self.target_indices:
            raise ValueError("cluster must contain at least one target")
        object.__setattr__(self, "target_indices", tuple(int(i) for i in self.target_indices))
        object.__setattr__(self, "base", tuple(float(v) for v in self.base))


@dataclass(frozen=True)
class PlanStats:
    """Solver identity, solution sizes, tour lengths and stage timings."""

    solver: str
    n_targets: int
    n_floor_points: int
    cover_size: int
    n_clusters: int
    base_tour_length: float
    target_tour_length: float
    config_path_length: float
    timings: dict[str, float] = field(default_factory=dict)
    total_seconds: float = 0.0


@dataclass(frozen=True)
class Plan:
    """Complete visit plan: clusters, tours and the configuration sequence.

    ``base_sequence`` orders the clusters; the tour implicitly starts and ends
    at ``home_base``.  ``target_sequence`` is a permutation of all target
    indices with each cluster's members contiguous, in base-sequence order.
    ``config_sequence`` has n + 2 entries: the home configuration, one joint
    vector per sequenced target, and the home configuration again.
    """

    clusters: tuple[Cluster, ...]
    base_sequence: tuple[int, ...]
    target_sequence: tuple[int, ...]
    config_sequence: tuple[tuple[float, float, float, float, float, float], ...]
    home_base: tuple[float, float, float]
    home_config: tuple[float, float, float, float, float, float]
    stats: PlanStats


@dataclass(frozen=True)
class FeasibilityReport:
    """Outcome of the union-covers-universe check."""

    feasible: bool
    uncovered: tuple[int, ...]


def check_feasibility(scp: "ScpInstance") -> FeasibilityReport:
    """Report whether the union of all reachable sets equals the universe.

    Targets that appear in no set are listed in ascending order; an empty
    ``uncovered`` tuple means the task is feasible.
    """
    seen = set()
    for s in scp.sets:
        seen.update(s)
    uncovered = tuple(i for i in range(scp.n) if i not in seen)
    return FeasibilityReport(feasible=not uncovered, uncovered=uncovered)
