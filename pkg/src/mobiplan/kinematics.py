"""Analytic arm model backing reachability queries and configuration search.

The arm has a vertical first joint at the base origin, a shoulder at height
``z_j2`` on that axis, a planar two-link arm (``l1``, ``l2``) working in the
vertical plane selected by q1, a two-axis wrist (roll q4 about the forearm,
pitch q5) and a tool of length ``l``.  q6 (rotation about the tool axis) is
irrelevant to 5D targets and fixed to zero.

Solving is exact: every returned joint vector reproduces the requested tool
pose under :meth:`ArticulatedArm.forward_kinematics` to machine precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Protocol, runtime_checkable

from .model import RobotParams, Target, normalize_azimuth

# Slack for acos/joint-limit boundary cases so exactly-stretched or
# exactly-at-limit poses are kept rather than lost to rounding.
_BRANCH_TOL = 1e-10


class JointVector(NamedTuple):
    q1: float
    q2: float
    q3: float
    q4: float
    q5: float
    q6: float


@dataclass(frozen=True)
class ToolPose:
    """Tool tip position and unit tool-axis direction, world frame."""

    position: tuple[float, float, float]
    direction: tuple[float, float, float]


@runtime_checkable
class ArmModel(Protocol):
    """Reachability oracle: deterministic IK over a fixed parameter set."""

    params: RobotParams

    def solve_ik(
        self,
        base_pose: tuple[float, float, float],
        target: Target,
        restrict_j1: bool = False,
    ) -> list[JointVector]: ...

    def is_reachable(
        self,
        base_pose: tuple[float, float, float],
        target: Target,
        restrict_j1: bool = False,
    ) -> bool: ...


def _wrist_frame(q1: float, elev: float) -> tuple[tuple[float, ...], tuple[float, ...], tuple[float, ...]]:
    """Right-handed forearm frame: x along the forearm, y horizontal-left."""
    c1, s1 = math.cos(q1), math.sin(q1)
    ce, se = math.cos(elev), math.sin(elev)
    x_f = (c1 * ce, s1 * ce, se)
    y_f = (-s1, c1, 0.0)
    z_f = (
        x_f[1] * y_f[2] - x_f[2] * y_f[1],
        x_f[2] * y_f[0] - x_f[0] * y_f[2],
        x_f[0] * y_f[1] - x_f[1] * y_f[0],
    )
    return x_f, y_f, z_f


@dataclass(frozen=True)
class ArticulatedArm:
    """Default analytic arm.  Pure and reentrant; share freely across threads."""

    params: RobotParams

    # -- inverse kinematics ------------------------------------------------

    def solve_ik(
        self,
        base_pose: tuple[float, float, float],
        target: Target,
        restrict_j1: bool = False,
    ) -> list[JointVector]:
        """Enumerate analytic IK branches that satisfy the joint limits.

        Branches are shoulder forward/backward (where the flipped q1 is
        admissible) times elbow up/down; the wrist angles are then determined
        by the tool direction.  Returns the empty list when unreachable, and
        orders solutions by (q1, q2, q3) for determinism.
        """
        p = self.params
        xb, yb, varphi = base_pose
        cb, sb = math.cos(varphi), math.sin(varphi)
        dx, dy = target.x - xb, target.y - yb
        # Target expressed in the base frame.
        tx = dx * cb + dy * sb
        ty = -dx * sb + dy * cb
        tz = target.z
        rel_phi = normalize_azimuth(target.phi - varphi)
        st, ct = math.sin(target.theta), math.cos(target.theta)
        ux = st * math.cos(rel_phi)
        uy = st * math.sin(rel_phi)
        uz = ct

        # Wrist centre: tool tip minus the tool vector.
        wx = tx - p.l * ux
        wy = ty - p.l * uy
        wz = tz - p.l * uz
        if wz < 0.0:
            return []  # wrist below floor level: reject outright

        q1_bound = p.j1_res if restrict_j1 else p.j1_lim
        radial = math.hypot(wx, wy)
        q1_fwd = math.atan2(wy, wx) if radial > 0.0 else 0.0

        lim2, lim3, lim4, lim5 = p.joint_limits[1:5]
        zeta = wz - p.z_j2
        sols: list[JointVector] = []

        for q1, rho in ((q1_fwd, radial), (normalize_azimuth(q1_fwd + math.pi), -radial)):
            if abs(q1) > q1_bound + _BRANCH_TOL:
                continue
            d2 = rho * rho + zeta * zeta
            c3 = (d2 - p.l1 * p.l1 - p.l2 * p.l2) / (2.0 * p.l1 * p.l2)
            if abs(c3) > 1.0 + _BRANCH_TOL:
                continue
            c3 = min(1.0, max(-1.0, c3))
            q3_mag = math.acos(c3)
            elbow_branches = (q3_mag,) if q3_mag == 0.0 else (q3_mag, -q3_mag)
            for q3 in elbow_branches:
                if abs(q3) > lim3 + _BRANCH_TOL:
                    continue
                q2 = math.atan2(zeta, rho) - math.atan2(
                    p.l2 * math.sin(q3), p.l1 + p.l2 * math.cos(q3)
                )
                q2 = normalize_azimuth(q2)
                if abs(q2) > lim2 + _BRANCH_TOL:
                    continue
                wrist = self._solve_wrist(q1, q2 + q3, (ux, uy, uz), lim4, lim5)
                if wrist is None:
                    continue
                q4, q5 = wrist
                sols.append(JointVector(q1, q2, q3, q4, q5, 0.0))

        sols.sort(key=lambda q: (q.q1, q.q2, q.q3))
        return sols

    @staticmethod
    def _solve_wrist(
        q1: float,
        elev: float,
        u: tuple[float, float, float],
        lim4: float,
        lim5: float,
    ) -> tuple[float, float] | None:
        """Wrist angles pointing the tool along ``u``; None if outside limits.

        The two wrist branches (q5 >= 0 and its mirrored twin) reach the same
        direction; the non-negative q5 branch is canonical and the mirror is
        only used when the canonical q4 violates its limit.
        """
        x_f, y_f, z_f = _wrist_frame(q1, elev)
        v1 = u[0] * x_f[0] + u[1] * x_f[1] + u[2] * x_f[2]
        v2 = u[0] * y_f[0] + u[1] * y_f[1] + u[2] * y_f[2]
        v3 = u[0] * z_f[0] + u[1] * z_f[1] + u[2] * z_f[2]
        v1 = min(1.0, max(-1.0, v1))
        q5 = math.acos(v1)
        if math.sin(q5) < 1e-12:
            # Tool parallel to the forearm: roll is free, take q4 = 0.
            candidates = [(0.0, 0.0 if v1 > 0.0 else math.pi)]
        else:
            q4 = math.atan2(v2, -v3)
            candidates = [(q4, q5), (normalize_azimuth(q4 + math.pi), -q5)]
        for q4, q5 in candidates:
            if abs(q4) <= lim4 + _BRANCH_TOL and abs(q5) <= lim5 + _BRANCH_TOL:
                return (q4, q5)
        return None

    def is_reachable(
        self,
        base_pose: tuple[float, float, float],
        target: Target,
        restrict_j1: bool = False,
    ) -> bool:
        return bool(self.solve_ik(base_pose, target, restrict_j1))

    # -- forward kinematics ------------------------------------------------

    def forward_kinematics(
        self, base_pose: tuple[float, float, float], q: JointVector
    ) -> ToolPose:
        """Tool pose produced by a joint vector, for round-trip verification."""
        p = self.params
        xb, yb, varphi = base_pose
        rho = p.l1 * math.cos(q.q2) + p.l2 * math.cos(q.q2 + q.q3)
        height = p.z_j2 + p.l1 * math.sin(q.q2) + p.l2 * math.sin(q.q2 + q.q3)
        c1, s1 = math.cos(q.q1), math.sin(q.q1)
        w = (c1 * rho, s1 * rho, height)

        x_f, y_f, z_f = _wrist_frame(q.q1, q.q2 + q.q3)
        c5, s5 = math.cos(q.q5), math.sin(q.q5)
        c4, s4 = math.cos(q.q4), math.sin(q.q4)
        # Tool direction in the forearm frame: Rx(q4) @ Ry(q5) @ ex.
        a, b, c = c5, s4 * s5, -c4 * s5
        u = (
            a * x_f[0] + b * y_f[0] + c * z_f[0],
            a * x_f[1] + b * y_f[1] + c * z_f[1],
            a * x_f[2] + b * y_f[2] + c * z_f[2],
        )
        tip = (w[0] + p.l * u[0], w[1] + p.l * u[1], w[2] + p.l * u[2])

        cbs, sbs = math.cos(varphi), math.sin(varphi)
        world_tip = (
            xb + tip[0] * cbs - tip[1] * sbs,
            yb + tip[0] * sbs + tip[1] * cbs,
            tip[2],
        )
        world_dir = (u[0] * cbs - u[1] * sbs, u[0] * sbs + u[1] * cbs, u[2])
        return ToolPose(position=world_tip, direction=world_dir)


def default_arm() -> ArticulatedArm:
    """Arm with the library's default VS-087-like parameters."""
    return ArticulatedArm(
        params=RobotParams(
            j1_lim=math.radians(170.0),
            j1_res=math.radians(90.0),
            z_j2=0.395,
            l1=0.445,
            l2=0.445,
            l=0.25,
        )
    )
