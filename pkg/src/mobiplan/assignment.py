"""Cluster assignment under the per-base azimuthal width limit.

A base pose can serve targets whose azimuths fit inside an arc no wider than
``delta_phi_max = 2 * (j1_lim - j1_res)``: centring the base heading on the
arc lets the spare first-joint range absorb the spread.  Chosen sets whose
azimuthal span exceeds the limit are split into the minimum number of arcs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .model import TWO_PI, Cluster, Target, normalize_azimuth
from .scp import CoverSolution

_WIDTH_TOL = 1e-12


@dataclass(frozen=True)
class AzimuthalSpan:
    """Circular span of a set of azimuths.

    ``gaps[k]`` is the circular distance from sorted azimuth k to the next
    one (the last gap wraps around); the span width is the full turn minus
    the largest gap, and ``mid`` is the centre of the covered arc.
    """

    azimuths: tuple[float, ...]
    gaps: tuple[float, ...]
    width: float
    mid: float


@dataclass(frozen=True)
class AzimuthLimit:
    """Maximum azimuthal width one base pose can serve."""

    delta_phi_max: float

    def __post_init__(self) -> None:
        if not 0.0 < self.delta_phi_max:
            raise ValueError("delta_phi_max must be positive")

    @classmethod
    def from_joint_limits(cls, j1_lim: float, j1_res: float) -> "AzimuthLimit":
        return cls(delta_phi_max=2.0 * (j1_lim - j1_res))


def azimuthal_width(azimuths: Sequence[float]) -> AzimuthalSpan:
    """Sort azimuths, enumerate circular gaps, return width and arc midpoint."""
    if not azimuths:
        raise ValueError("need at least one azimuth")
    ordered = tuple(sorted(normalize_azimuth(a) for a in azimuths))
    k = len(ordered)
    gaps = tuple(
        ordered[(i + 1) % k] - ordered[i] + (TWO_PI if i == k - 1 else 0.0)
        for i in range(k)
    )
    max_idx = max(range(k), key=lambda i: (gaps[i], -i))  # first max on ties
    width = TWO_PI - gaps[max_idx]
    start = ordered[(max_idx + 1) % k]
    mid = normalize_azimuth(start + width / 2.0)
    return AzimuthalSpan(azimuths=ordered, gaps=gaps, width=width, mid=mid)


def split_into_arcs(
    indices: Sequence[int], azimuth_of: Sequence[float], limit: AzimuthLimit
) -> list[list[int]]:
    """Split members into the fewest arcs of width <= delta_phi_max.

    The sweep anchors at the end of the largest circular gap and cuts greedy
    arcs, which is minimum for covering points on a circle once no arc can
    span the anchor gap.
    """
    span = azimuthal_width([azimuth_of[i] for i in indices])
    max_idx = max(range(len(span.gaps)), key=lambda i: (span.gaps[i], -i))
    anchor = span.azimuths[(max_idx + 1) % len(span.azimuths)]

    # Order members by angular offset from the anchor, ties by index.
    def offset(i: int) -> float:
        d = normalize_azimuth(azimuth_of[i]) - anchor
        return d + TWO_PI if d < -_WIDTH_TOL else max(d, 0.0)

    ordered = sorted(indices, key=lambda i: (offset(i), i))
    arcs: list[list[int]] = []
    arc_start = -math.inf
    for i in ordered:
        off = offset(i)
        if not arcs or off - arc_start > limit.delta_phi_max + _WIDTH_TOL:
            arcs.append([i])
            arc_start = off
        else:
            arcs[-1].append(i)
    return arcs


def assign_clusters(
    solution: CoverSolution, targets: Sequence[Target], limit: AzimuthLimit
) -> list[Cluster]:
    """Emit width-bounded clusters from the chosen sets.

    Repeatedly emits the largest pending set whose span fits the limit (base
    heading at the arc midpoint), removing emitted targets from other pending
    sets; when only oversized sets remain, the largest is split into minimum
    arcs and the loop continues.  Pending sets start from the cover's
    per-target assignment, so they are disjoint and updates are no-ops, but
    the loop tolerates overlapping input as well.
    """
    azimuth_of = [t.phi for t in targets]
    point_of = dict(zip(solution.chosen, solution.chosen_points))

    # Pending work: (floor index, arc serial, member list).  The serial keeps
    # emission deterministic after splits.
    pending: list[tuple[int, int, list[int]]] = []
    for j in solution.chosen:
        members = sorted(i for i, owner in enumerate(solution.covered) if owner == j)
        if members:
            pending.append((j, 0, members))

    clusters: list[Cluster] = []
    serial = 1
    while pending:
        spans = {
            (j, a): azimuthal_width([azimuth_of[i] for i in members])
            for j, a, members in pending
        }
        fitting = [
            entry
            for entry in pending
            if spans[(entry[0], entry[1])].width <= limit.delta_phi_max + _WIDTH_TOL
        ]
        if fitting:
            j, a, members = max(fitting, key=lambda e: (len(e[2]), -e[0], -e[1]))
            span = spans[(j, a)]
            fx, fy = point_of[j]
            clusters.append(
                Cluster(target_indices=tuple(members), base=(fx, fy, span.mid))
            )
            emitted = set(members)
            pending = [
                (pj, pa, left)
                for pj, pa, pm in pending
                if not (pj == j and pa == a)
                for left in [[i for i in pm if i not in emitted]]
                if left
            ]
        else:
            j, a, members = max(pending, key=lambda e: (len(e[2]), -e[0], -e[1]))
            pending = [e for e in pending if not (e[0] == j and e[1] == a)]
            for arc in split_into_arcs(members, azimuth_of, limit):
                pending.append((j, serial, arc))
                serial += 1
    return clusters
