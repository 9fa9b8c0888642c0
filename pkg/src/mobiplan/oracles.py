"""Independent brute-force references used only by tests and acceptance runs.

Everything here is deliberately written against plain data and the core
domain types, never against the solver modules it is meant to validate, so
the two code paths cannot share a bug.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

from .model import GEOM_TOL, GeometricRegion, RobotParams, Target


def oracle_membership(
    region: GeometricRegion, target: Target, floor_point: tuple[float, float]
) -> bool:
    """Rotate-then-test reference for the closed-form floor-point check.

    Expresses the target position in the robot frame of a base standing at
    ``floor_point`` with heading equal to the target azimuth, then evaluates
    the five region inequalities directly (squared-distance comparisons with
    the shared boundary slack).
    """
    fx, fy = floor_point
    c, s = math.cos(target.phi), math.sin(target.phi)
    dx, dy = target.x - fx, target.y - fy
    xr = dx * c + dy * s
    yr = dy * c - dx * s
    zr = target.z
    if zr < region.z_min - GEOM_TOL or zr > region.z_max + GEOM_TOL:
        return False
    if xr < region.x_min - GEOM_TOL:
        return False
    rho2 = (xr - region.x_s) ** 2 + yr * yr + (zr - region.z_s) ** 2
    return region.r_min**2 - GEOM_TOL <= rho2 <= region.r_max**2 + GEOM_TOL


def oracle_scp(
    n: int, sets: Sequence[frozenset[int]], max_sets: int = 24, max_combos: int = 2_000_000
) -> tuple[int, ...]:
    """Minimum cover by subset enumeration in order of cardinality.

    Refuses instances beyond the exhaustive budget.  Returns the chosen set
    indices of the first (lexicographically smallest) optimal cover.
    """
    nonempty = [j for j, s in enumerate(sets) if s]
    if len(nonempty) > max_sets:
        raise ValueError(f"oracle limited to {max_sets} non-empty sets")
    union: set[int] = set()
    for s in sets:
        union |= s
    if union != set(range(n)):
        raise ValueError("instance is infeasible")
    examined = 0
    for size in range(0 if n == 0 else 1, len(nonempty) + 1):
        for combo in itertools.combinations(nonempty, size):
            examined += 1
            if examined > max_combos:
                raise ValueError("oracle enumeration budget exceeded")
            covered: set[int] = set()
            for j in combo:
                covered |= sets[j]
            if len(covered) == n:
                return combo
    return ()


def oracle_tsp(
    nodes: Sequence[Sequence[float]], home: Sequence[float], max_nodes: int = 9
) -> tuple[float, tuple[int, ...]]:
    """Exact shortest home-anchored cycle by permutation enumeration."""
    if len(nodes) > max_nodes:
        raise ValueError(f"oracle limited to {max_nodes} tour nodes")
    best_len = math.inf
    best_order: tuple[int, ...] = ()
    for perm in itertools.permutations(range(len(nodes))):
        length = math.dist(home, nodes[perm[0]])
        for a, b in zip(perm, perm[1:]):
            length += math.dist(nodes[a], nodes[b])
        length += math.dist(nodes[perm[-1]], home)
        if length < best_len - 1e-12:
            best_len = length
            best_order = perm
    return best_len, best_order


def oracle_path(
    layers: Sequence[Sequence[Sequence[float]]], max_paths: int = 10_000
) -> tuple[float, tuple[int, ...]]:
    """Exact shortest layered path by full enumeration."""
    total = 1
    for layer in layers:
        total *= len(layer)
        if total > max_paths:
            raise ValueError(f"oracle limited to {max_paths} paths")
    best_cost = math.inf
    best: tuple[int, ...] = ()
    for combo in itertools.product(*[range(len(layer)) for layer in layers]):
        cost = 0.0
        for k in range(len(layers) - 1):
            a = layers[k][combo[k]]
            b = layers[k + 1][combo[k + 1]]
            cost += math.dist(a, b)
        if cost < best_cost - 1e-12:
            best_cost = cost
            best = combo
    return best_cost, best


@dataclass(frozen=True)
class ShellArm:
    """Orientation-blind oracle arm: reachable iff inside a known shell.

    Gives region fitting a closed-form ground truth; the fitted radii must
    land within one voxel diagonal of ``(inner, outer)``.  Quacks like an
    arm model without importing one.
    """

    params: RobotParams
    inner: float
    outer: float

    def _center(self) -> tuple[float, float, float]:
        angles = self.params.sampling_polar_angles()
        theta_bar = sum(angles) / len(angles)
        return (
            self.params.l * math.sin(theta_bar),
            0.0,
            self.params.z_j2 + self.params.l * math.cos(theta_bar),
        )

    def is_reachable(
        self,
        base_pose: tuple[float, float, float],
        target: Target,
        restrict_j1: bool = False,
    ) -> bool:
        del restrict_j1
        cx, cy, cz = self._center()
        bx, by, varphi = base_pose
        c, s = math.cos(varphi), math.sin(varphi)
        dx, dy = target.x - bx, target.y - by
        p = (dx * c + dy * s, dy * c - dx * s, target.z)
        r = math.dist(p, (cx, cy, cz))
        return self.inner <= r <= self.outer

    def solve_ik(
        self,
        base_pose: tuple[float, float, float],
        target: Target,
        restrict_j1: bool = False,
    ) -> list[tuple[float, float, float, float, float, float]]:
        if self.is_reachable(base_pose, target, restrict_j1):
            return [(0.0, 0.0, 0.0, 0.0, 0.0, 0.0)]
        return []
