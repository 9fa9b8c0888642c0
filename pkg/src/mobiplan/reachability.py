"""Voxel reachability database and the conservative geometric region fit.

The database marks a voxel valid when IK succeeds at its centre for every
sampling polar angle (azimuth fixed to zero, first joint restricted), with
the base pinned at the robot-frame origin facing +x'.  The region fit then
squeezes a plane-bounded spherical shell inside the valid cloud so that
membership certifies reachability.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import RegionFitError
from .kinematics import ArmModel
from .model import GEOM_TOL, GeometricRegion, RobotParams, Target

_ORIGIN_POSE = (0.0, 0.0, 0.0)


@dataclass(frozen=True)
class Box:
    """Axis-aligned box in the robot frame, metres."""

    lo: tuple[float, float, float]
    hi: tuple[float, float, float]

    def __post_init__(self) -> None:
        if any(h <= l for l, h in zip(self.lo, self.hi)):
            raise ValueError("box must have positive extent on every axis")
        object.__setattr__(self, "lo", tuple(float(v) for v in self.lo))
        object.__setattr__(self, "hi", tuple(float(v) for v in self.hi))


def default_database_bounds(params: RobotParams) -> Box:
    """Box covering the arm's entire reachable set: forward half-space plus
    a 0.1 m pad on the horizontal reach and full vertical extent."""
    reach = params.l1 + params.l2 + params.l + 0.1
    top = params.z_j2 + params.l1 + params.l2 + params.l
    return Box(lo=(0.0, -reach, 0.0), hi=(reach, reach, top))


@dataclass(frozen=True)
class ReachabilityDatabase:
    """IK-validated voxel grid relative to the robot frame.

    ``valid`` is a boolean array of shape (nx, ny, nz); voxel (i, j, k) has
    its centre at ``bounds.lo + (i + 0.5, j + 0.5, k + 0.5) * voxel_size``.
    """

    voxel_size: float
    bounds: Box
    valid: np.ndarray
    sampling_polar: tuple[float, ...]

    @property
    def shape(self) -> tuple[int, int, int]:
        return self.valid.shape  # type: ignore[return-value]

    @property
    def n_voxels(self) -> int:
        return int(self.valid.size)

    def centers(self) -> np.ndarray:
        """Voxel centres as an (n_voxels, 3) array, C order."""
        nx, ny, nz = self.shape
        axes = [
            self.bounds.lo[d] + self.voxel_size * (np.arange(n) + 0.5)
            for d, n in zip(range(3), (nx, ny, nz))
        ]
        gx, gy, gz = np.meshgrid(*axes, indexing="ij")
        return np.column_stack([gx.ravel(), gy.ravel(), gz.ravel()])

    # -- serialization -------------------------------------------------

    def save(self, path: str | Path) -> None:
        """Write a binary sidecar: header arrays plus a bit-packed payload."""
        np.savez_compressed(
            Path(path),
            voxel_size=np.float64(self.voxel_size),
            lo=np.asarray(self.bounds.lo),
            hi=np.asarray(self.bounds.hi),
            shape=np.asarray(self.shape, dtype=np.int64),
            sampling_polar=np.asarray(self.sampling_polar),
            bits=np.packbits(self.valid.ravel()),
        )

    @classmethod
    def load(cls, path: str | Path) -> "ReachabilityDatabase":
        with np.load(Path(path)) as data:
            shape = tuple(int(v) for v in data["shape"])
            n = shape[0] * shape[1] * shape[2]
            valid = np.unpackbits(data["bits"], count=n).astype(bool).reshape(shape)
            return cls(
                voxel_size=float(data["voxel_size"]),
                bounds=Box(lo=tuple(data["lo"]), hi=tuple(data["hi"])),
                valid=valid,
                sampling_polar=tuple(float(v) for v in data["sampling_polar"]),
            )


def database_cache_key(params: RobotParams, voxel_size: float, bounds: Box) -> str:
    """Content hash tying a cached database to the inputs that produced it."""
    payload = f"{params.content_hash()}|{voxel_size!r}|{bounds.lo!r}|{bounds.hi!r}"
    return hashlib.sha256(payload.encode()).hexdigest()[:16]


def generate_database(
    model: ArmModel, voxel_size: float, bounds: Box | None = None
) -> ReachabilityDatabase:
    """Sweep the voxel grid with IK queries and record the valid cells.

    A voxel is valid only if IK succeeds at its centre for all sampling polar
    angles with the sampling azimuth fixed at zero and the first joint
    restricted to its reserve range.
    """
    if voxel_size <= 0:
        raise ValueError("voxel_size must be positive")
    params = model.params
    if bounds is None:
        bounds = default_database_bounds(params)
    if any(hi - lo < voxel_size for lo, hi in zip(bounds.lo, bounds.hi)):
        raise ValueError("bounds contain zero whole voxels at this voxel size")
    shape = tuple(
        int(math.ceil((hi - lo) / voxel_size - 1e-9))
        for lo, hi in zip(bounds.lo, bounds.hi)
    )

    angles = params.sampling_polar_angles()
    valid = np.zeros(shape, dtype=bool)
    axes = [bounds.lo[d] + voxel_size * (np.arange(shape[d]) + 0.5) for d in range(3)]
    for i, cx in enumerate(axes[0]):
        for j, cy in enumerate(axes[1]):
            for k, cz in enumerate(axes[2]):
                ok = True
                for theta in angles:
                    target = Target(float(cx), float(cy), float(cz), theta, 0.0)
                    if not model.is_reachable(_ORIGIN_POSE, target, restrict_j1=True):
                        ok = False
                        break
                valid[i, j, k] = ok
    return ReachabilityDatabase(
        voxel_size=voxel_size, bounds=bounds, valid=valid, sampling_polar=angles
    )


def region_contains(region: GeometricRegion, point: tuple[float, float, float]) -> bool:
    """Evaluate the five region inequalities at a robot-frame point.

    Shell comparisons run on squared distances with the shared boundary
    slack, matching the closed-form floor-point test exactly.
    """
    x, y, z = point
    if not (math.isfinite(x) and math.isfinite(y) and math.isfinite(z)):
        raise ValueError("point must be finite")
    if z < region.z_min - GEOM_TOL or z > region.z_max + GEOM_TOL:
        return False
    if x < region.x_min - GEOM_TOL:
        return False
    rho2 = (x - region.x_s) ** 2 + y * y + (z - region.z_s) ** 2
    return region.r_min**2 - GEOM_TOL <= rho2 <= region.r_max**2 + GEOM_TOL


def fit_region(
    db: ReachabilityDatabase,
    x_min: float,
    z_min: float,
    z_max: float,
    params: RobotParams,
) -> GeometricRegion:
    """Fit the widest sound spherical shell inside the plane-bounded slab.

    The shell centre sits at the tool-offset point for the mean sampling
    polar angle.  Radii come from the sorted multiset of slab voxel radii:
    the widest interval free of invalid voxels, shrunk by half the voxel
    space diagonal on both ends so every point of the region stays within
    half a diagonal of a valid voxel centre.
    """
    theta_bar = sum(db.sampling_polar) / len(db.sampling_polar)
    x_s = params.l * math.sin(theta_bar)
    z_s = params.z_j2 + params.l * math.cos(theta_bar)

    centers = db.centers()
    flags = db.valid.ravel()
    in_slab = (
        (centers[:, 0] >= x_min)
        & (centers[:, 2] >= z_min)
        & (centers[:, 2] <= z_max)
    )
    if not np.any(in_slab):
        raise RegionFitError(
            "no voxel centres inside the requested slab; check x_min/z bounds"
        )
    pts = centers[in_slab]
    slab_flags = flags[in_slab]
    radii = np.linalg.norm(pts - np.array([x_s, 0.0, z_s]), axis=1)
    order = np.argsort(radii, kind="stable")
    radii = radii[order]
    slab_flags = slab_flags[order]
    pts = pts[order]

    margin = db.voxel_size * math.sqrt(3.0) / 2.0
    best: tuple[float, float, float] | None = None  # (width, r_lo, r_hi)
    blocking: tuple[np.ndarray, np.ndarray | None] | None = None

    idx = 0
    n = len(radii)
    while idx < n:
        if not slab_flags[idx]:
            idx += 1
            continue
        start = idx
        while idx < n and slab_flags[idx]:
            idx += 1
        # Open interval bounds: the invalid radius on each side, or one
        # voxel beyond the observed data where the run hits the slab edge.
        lo_excl = radii[start - 1] if start > 0 else max(0.0, radii[start] - db.voxel_size)
        hi_excl = radii[idx] if idx < n else radii[idx - 1] + db.voxel_size
        r_lo = lo_excl + margin
        r_hi = hi_excl - margin
        width = r_hi - r_lo
        if best is None or width > best[0]:
            best = (width, r_lo, r_hi)
            blocking = (
                pts[start - 1] if start > 0 else None,
                pts[idx] if idx < n else None,
            )

    if best is None or best[0] <= 0.0 or best[1] < 0.0:
        detail = ""
        if blocking is not None:
            inner, outer = blocking
            names = [
                f"{side} invalid voxel at {tuple(round(float(v), 4) for v in p)}"
                for side, p in (("inner", inner), ("outer", outer))
                if p is not None
            ]
            detail = "; blocked by " + " and ".join(names) if names else ""
        raise RegionFitError(
            "no radius interval wide enough for a valid shell after applying "
            f"the half-diagonal margin{detail}"
        )

    return GeometricRegion(
        x_min=float(x_min),
        z_min=float(z_min),
        z_max=float(z_max),
        x_s=float(x_s),
        z_s=float(z_s),
        r_min=float(best[1]),
        r_max=float(best[2]),
    )
