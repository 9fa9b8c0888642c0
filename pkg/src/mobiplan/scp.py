"""Target-floor bipartite graph and uniform-cost set cover solvers.

The closed-form floor-point test evaluates, for one target, which grid points
admit a base placement whose (rotated) geometric region contains that target.
Transposing those per-target sets yields the reachable set of every floor
point, which is exactly a uniform-cost set cover instance: pick the fewest
floor points whose reachable sets cover all targets.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import IO, Iterable, Sequence

import numpy as np

from .errors import InfeasibleTaskError, SolverError
from .model import (
    GEOM_TOL,
    FloorGrid,
    GeometricRegion,
    Target,
    check_feasibility,
)
from .simplex import simplex_minimize


@dataclass(frozen=True)
class ScpInstance:
    """Universe of target indices plus one reachable set per floor point."""

    n: int
    sets: tuple[frozenset[int], ...]
    floor: FloorGrid

    def __post_init__(self) -> None:
        if len(self.sets) != self.floor.m:
            raise ValueError("need exactly one set per floor point")
        for s in self.sets:
            for i in s:
                if not 0 <= i < self.n:
                    raise ValueError(f"set element {i} outside universe of size {self.n}")


@dataclass(frozen=True)
class CoverSolution:
    """Chosen floor points plus the per-target assignment.

    ``covered[i]`` is the chosen floor-point index serving target ``i``;
    ``chosen_points`` carries the floor coordinates so downstream cluster
    assignment does not need the grid.
    """

    chosen: tuple[int, ...]
    chosen_points: tuple[tuple[float, float], ...]
    covered: tuple[int, ...]
    solver: str


# -- closed-form floor-point test -------------------------------------------


def _disc_radii_sq(region: GeometricRegion, z: float) -> tuple[float, float] | None:
    """Squared radii of the reachable floor annulus for a target height z.

    Returns None when the target height misses the shell or the z slab
    entirely (no floor point can reach it).
    """
    if z < region.z_min - GEOM_TOL or z > region.z_max + GEOM_TOL:
        return None
    dz2 = (z - region.z_s) ** 2
    if dz2 > region.r_max**2 + GEOM_TOL:
        return None
    r_max_sq = max(0.0, region.r_max**2 - dz2)
    r_min_sq = 0.0 if dz2 > region.r_min**2 else region.r_min**2 - dz2
    return r_min_sq, r_max_sq


def floor_point_reaches(
    target: Target, fx: float, fy: float, region: GeometricRegion
) -> bool:
    """Closed-form test: can a base at (fx, fy) reach the target?

    Equivalent to rotating the region by the target azimuth about the base
    and testing containment, but evaluated directly on floor coordinates.
    """
    radii = _disc_radii_sq(region, target.z)
    if radii is None:
        return False
    r_min_sq, r_max_sq = radii
    c, s = math.cos(target.phi), math.sin(target.phi)
    dx, dy = target.x - fx, target.y - fy
    if dx * c + dy * s < region.x_min - GEOM_TOL:
        return False
    d2 = (dx - region.x_s * c) ** 2 + (dy - region.x_s * s) ** 2
    return r_min_sq - GEOM_TOL <= d2 <= r_max_sq + GEOM_TOL


def reachable_floor_points(
    target: Target, grid: FloorGrid, region: GeometricRegion
) -> frozenset[int]:
    """Indices of all grid points from which the target is reachable."""
    radii = _disc_radii_sq(region, target.z)
    if radii is None:
        return frozenset()
    r_min_sq, r_max_sq = radii
    pts = grid.points()
    c, s = math.cos(target.phi), math.sin(target.phi)
    dx = target.x - pts[:, 0]
    dy = target.y - pts[:, 1]
    front = dx * c + dy * s >= region.x_min - GEOM_TOL
    ex = dx - region.x_s * c
    ey = dy - region.x_s * s
    d2 = ex * ex + ey * ey
    mask = front & (d2 >= r_min_sq - GEOM_TOL) & (d2 <= r_max_sq + GEOM_TOL)
    return frozenset(int(j) for j in np.nonzero(mask)[0])


def make_floor_grid(
    targets: Sequence[Target],
    cell_size: float,
    region: GeometricRegion,
    extent: tuple[float, float, float, float] | None = None,
) -> FloorGrid:
    """Grid over the target footprint inflated by the maximum disc reach.

    The reachable disc of a target is centred x_s behind it along its
    azimuth, so no floor point further than r_max + |x_s| from some target
    can ever qualify; the inflated bounding box loses nothing.  ``extent``
    overrides the automatic box as (x_lo, x_hi, y_lo, y_hi).
    """
    if extent is not None:
        x_lo, x_hi, y_lo, y_hi = extent
    else:
        pad = region.r_max + abs(region.x_s)
        x_lo = min(t.x for t in targets) - pad
        x_hi = max(t.x for t in targets) + pad
        y_lo = min(t.y for t in targets) - pad
        y_hi = max(t.y for t in targets) + pad
    ox = math.floor(x_lo / cell_size) * cell_size
    oy = math.floor(y_lo / cell_size) * cell_size
    nx = int(math.ceil((x_hi - ox) / cell_size)) + 1
    ny = int(math.ceil((y_hi - oy) / cell_size)) + 1
    return FloorGrid(origin=(ox, oy), cell_size=cell_size, nx=nx, ny=ny)


def build_bigraph(
    targets: Sequence[Target], grid: FloorGrid, region: GeometricRegion
) -> ScpInstance:
    """Run the floor-point test once per target and transpose the incidence."""
    if not targets:
        raise ValueError("no targets")
    members: list[list[int]] = [[] for _ in range(grid.m)]
    for i, target in enumerate(targets):
        for j in reachable_floor_points(target, grid, region):
            members[j].append(i)
    sets = tuple(frozenset(ms) for ms in members)
    return ScpInstance(n=len(targets), sets=sets, floor=grid)


def dump_exchange(inst: ScpInstance, stream: IO[str]) -> None:
    """Plain-text exchange dump: one line per set, floor index then members."""
    for j, s in enumerate(inst.sets):
        if s:
            stream.write(f"{j} " + " ".join(str(i) for i in sorted(s)) + "\n")
        else:
            stream.write(f"{j}\n")


# -- solvers -----------------------------------------------------------------


def _require_feasible(inst: ScpInstance) -> None:
    report = check_feasibility(inst)
    if not report.feasible:
        raise InfeasibleTaskError(report.uncovered)


def _greedy_sets(
    sets: Sequence[frozenset[int]], n: int, rng: random.Random | None = None
) -> list[int]:
    """Pick sets by most-uncovered-first until the universe is covered.

    Ties go to the lowest index; with ``rng`` given, ties are instead broken
    by a seeded draw (used by the Lagrangian solver's exploration).
    """
    uncovered = set(range(n))
    chosen: list[int] = []
    while uncovered:
        best_gain = 0
        ties: list[int] = []
        for j, s in enumerate(sets):
            gain = len(s & uncovered)
            if gain > best_gain:
                best_gain = gain
                ties = [j]
            elif gain == best_gain and gain > 0:
                ties.append(j)
        if not ties:
            raise InfeasibleTaskError(tuple(sorted(uncovered)))
        pick = ties[0] if rng is None or len(ties) == 1 else rng.choice(ties)
        chosen.append(pick)
        uncovered -= sets[pick]
    return chosen


def _finalize(
    inst: ScpInstance,
    chosen: Iterable[int],
    solver: str,
    target_xy: Sequence[tuple[float, float]] | None = None,
) -> CoverSolution:
    """Build the CoverSolution: nearest-floor-point assignment plus pruning."""
    chosen = sorted(set(chosen))
    pts = {j: inst.floor.point(j) for j in chosen}
    covered = [-1] * inst.n
    for i in range(inst.n):
        candidates = [j for j in chosen if i in inst.sets[j]]
        if not candidates:
            raise InfeasibleTaskError((i,))
        if len(candidates) == 1 or target_xy is None:
            covered[i] = candidates[0]
        else:
            tx, ty = target_xy[i]
            covered[i] = min(
                candidates,
                key=lambda j: ((pts[j][0] - tx) ** 2 + (pts[j][1] - ty) ** 2, j),
            )
    used = sorted(set(covered))
    return CoverSolution(
        chosen=tuple(used),
        chosen_points=tuple(inst.floor.point(j) for j in used),
        covered=tuple(covered),
        solver=solver,
    )


def _attach_targets(inst: ScpInstance, targets: Sequence[Target] | None) -> list[tuple[float, float]] | None:
    if targets is None:
        return None
    if len(targets) != inst.n:
        raise ValueError("targets length must match the universe size")
    return [(t.x, t.y) for t in targets]


def solve_greedy(
    inst: ScpInstance, targets: Sequence[Target] | None = None
) -> CoverSolution:
    """Classic greedy cover: highest uncovered gain, lowest index on ties."""
    _require_feasible(inst)
    chosen = _greedy_sets(inst.sets, inst.n)
    return _finalize(inst, chosen, "greedy", _attach_targets(inst, targets))


def solve_lpr(
    inst: ScpInstance,
    targets: Sequence[Target] | None = None,
    max_iter: int | None = None,
) -> CoverSolution:
    """LP relaxation plus deterministic threshold rounding.

    Solves the relaxation with the built-in simplex, keeps every set with
    x_j >= 1/f where f is the maximum element frequency, then greedily prunes
    redundant picks.  The rounded cover is always feasible and at most f
    times the LP objective.
    """
    _require_feasible(inst)
    n, m = inst.n, len(inst.sets)
    a = np.zeros((n, m))
    for j, s in enumerate(inst.sets):
        for i in s:
            a[i, j] = 1.0
    cap = max_iter if max_iter is not None else 50 * (n + m)
    x, _ = simplex_minimize(np.ones(m), a, np.ones(n), max_iter=cap)
    freq = a.sum(axis=1)
    f = int(freq.max())
    threshold = 1.0 / f
    chosen = [j for j in range(m) if x[j] >= threshold - 1e-9]
    # Prune: drop sets (smallest LP weight first) that are fully redundant.
    for j in sorted(chosen, key=lambda j: (x[j], j)):
        rest = [k for k in chosen if k != j]
        if rest and set().union(*(inst.sets[k] for k in rest)) >= set(range(n)):
            chosen = rest
    return _finalize(inst, chosen, "lpr", _attach_targets(inst, targets))


def solve_lrg(
    inst: ScpInstance,
    iters: int = 20,
    seed: int = 0,
    targets: Sequence[Target] | None = None,
) -> CoverSolution:
    """Lagrangian-relaxation guided greedy, best cover over all iterations.

    Iteration zero is the plain greedy cover, so the result never exceeds
    greedy.  Each following iteration runs a weighted greedy whose set score
    is the summed multiplier mass of its uncovered elements, with seeded
    random tie-breaking, then takes a decaying subgradient step on the
    multipliers.
    """
    if iters < 1:
        raise ValueError("iters must be >= 1")
    _require_feasible(inst)
    rng = random.Random(seed)
    sets = inst.sets
    n = inst.n

    best = _greedy_sets(sets, n)
    best = _prune_cover(sets, n, best)

    # Multipliers start at each element's cheapest per-element set price.
    u = np.zeros(n)
    for i in range(n):
        u[i] = min(1.0 / len(s) for s in sets if i in s)

    for k in range(iters):
        cover = _weighted_greedy(sets, n, u, rng)
        cover = _prune_cover(sets, n, cover)
        if len(cover) < len(best):
            best = cover
        counts = np.zeros(n)
        for j in cover:
            for i in sets[j]:
                counts[i] += 1.0
        g = 1.0 - counts
        norm = float(g @ g)
        if norm < 1e-12:
            break  # exact cover: no multiplier pressure left
        # Held-Karp style step towards closing the bound gap, 1/(1+k) decay.
        bound = float(u.sum() + sum(min(0.0, 1.0 - sum(u[i] for i in s)) for s in sets))
        step = (len(best) - bound) / norm / (1.0 + k)
        u = np.maximum(0.0, u + step * g)

    return _finalize(inst, best, "lrg", _attach_targets(inst, targets))


def _weighted_greedy(
    sets: Sequence[frozenset[int]], n: int, u: np.ndarray, rng: random.Random
) -> list[int]:
    uncovered = set(range(n))
    chosen: list[int] = []
    while uncovered:
        best_score = 0.0
        ties: list[int] = []
        for j, s in enumerate(sets):
            live = s & uncovered
            if not live:
                continue
            score = float(sum(u[i] for i in live))
            if score > best_score + 1e-12:
                best_score = score
                ties = [j]
            elif score >= best_score - 1e-12:
                ties.append(j)
        if not ties:
            raise InfeasibleTaskError(tuple(sorted(uncovered)))
        pick = ties[0] if len(ties) == 1 else rng.choice(ties)
        chosen.append(pick)
        uncovered -= sets[pick]
    return chosen


def _prune_cover(sets: Sequence[frozenset[int]], n: int, cover: list[int]) -> list[int]:
    """Drop redundant sets, smallest contribution first."""
    cover = sorted(set(cover))
    universe = set(range(n))
    for j in sorted(cover, key=lambda j: (len(sets[j]), j)):
        rest = [k for k in cover if k != j]
        if rest and set().union(*(sets[k] for k in rest)) >= universe:
            cover = rest
    return cover


def solve_exact(
    inst: ScpInstance,
    targets: Sequence[Target] | None = None,
    max_sets: int = 24,
) -> CoverSolution:
    """Provably minimum cover by branch and bound; refuses large instances."""
    nonempty = [j for j, s in enumerate(inst.sets) if s]
    if len(nonempty) > max_sets:
        raise SolverError(
            f"exact solver limited to {max_sets} non-empty sets, got {len(nonempty)}"
        )
    _require_feasible(inst)
    sets = inst.sets
    n = inst.n
    best = _greedy_sets(sets, n)
    max_size = max(len(s) for s in sets if s)

    def branch(uncovered: frozenset[int], chosen: list[int]) -> None:
        nonlocal best
        if not uncovered:
            if len(chosen) < len(best):
                best = list(chosen)
            return
        lower = len(chosen) + math.ceil(len(uncovered) / max_size)
        if lower >= len(best):
            return
        # Branch on the uncovered element with the fewest candidate sets.
        pivot = min(
            uncovered, key=lambda i: (sum(1 for j in nonempty if i in sets[j]), i)
        )
        for j in nonempty:
            if pivot in sets[j]:
                branch(uncovered - sets[j], chosen + [j])

    branch(frozenset(range(n)), [])
    return _finalize(inst, best, "exact", _attach_targets(inst, targets))


SOLVERS = {
    "greedy": solve_greedy,
    "lpr": solve_lpr,
    "lrg": solve_lrg,
    "exact": solve_exact,
}
