"""Exception hierarchy with CLI exit-code mapping."""

from __future__ import annotations


class PlanningError(Exception):
    """Base class for all planner failures."""

    exit_code = 1


class TaskValidationError(PlanningError):
    """Malformed task input; message carries the dotted location of the bad key."""

    exit_code = 3

    def __init__(self, location: str, message: str):
        self.location = location
        super().__init__(f"{location}: {message}")


class InfeasibleTaskError(PlanningError):
    """Some targets are reachable from no floor point."""

    exit_code = 2

    def __init__(self, uncovered: tuple[int, ...]):
        self.uncovered = uncovered
        shown = ", ".join(str(i) for i in uncovered[:10])
        more = "" if len(uncovered) <= 10 else f" (+{len(uncovered) - 10} more)"
        super().__init__(f"task infeasible, uncovered target indices: {shown}{more}")


class UnreachableTargetError(PlanningError):
    """A sequenced target produced no IK solution at its cluster's base pose."""

    exit_code = 4

    def __init__(self, target_index: int):
        self.target_index = target_index
        super().__init__(
            f"no arm configuration for target {target_index} at its assigned base pose; "
            "the region promised reachability, so the region or base assignment is unsound"
        )


class RegionFitError(PlanningError):
    """No valid radius interval exists inside the plane-bounded voxel slab."""

    exit_code = 4


class SolverError(PlanningError):
    """A solver exceeded its iteration or size budget."""

    exit_code = 4


class ContractError(PlanningError):
    """An internal invariant was violated; indicates a planner bug."""

    exit_code = 4
