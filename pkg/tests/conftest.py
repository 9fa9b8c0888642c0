from __future__ import annotations

import math
import random

import pytest

from mobiplan import tasks
from mobiplan.model import FloorGrid, GeometricRegion, Target
from mobiplan.scp import ScpInstance
from mobiplan.taskfile import TaskSpec


@pytest.fixture(scope="session")
def demo_spec() -> TaskSpec:
    return tasks.as_spec(tasks.demo_task())


def make_instance(sets: list[set[int]], n: int) -> ScpInstance:
    """Wrap raw sets in an instance with a synthetic one-row floor grid."""
    grid = FloorGrid(origin=(0.0, 0.0), cell_size=1.0, nx=len(sets), ny=1)
    return ScpInstance(n=n, sets=tuple(frozenset(s) for s in sets), floor=grid)


def random_instance(rng: random.Random, n_max: int = 12, m_max: int = 12) -> ScpInstance:
    """Random feasible uniform-cost instance (n <= n_max, m <= m_max)."""
    n = rng.randint(2, n_max)
    m = rng.randint(2, m_max)
    sets: list[set[int]] = []
    for _ in range(m):
        size = rng.randint(0, n)
        sets.append(set(rng.sample(range(n), size)))
    covered = set().union(*sets) if sets else set()
    for i in range(n):
        if i not in covered:
            sets[rng.randrange(m)].add(i)
    return make_instance(sets, n)


def random_region(rng: random.Random) -> GeometricRegion:
    """Random valid region; retries until the five constraints admit points."""
    while True:
        r_min = rng.uniform(0.0, 0.7)
        r_max = r_min + rng.uniform(0.05, 0.8)
        try:
            return GeometricRegion(
                x_min=rng.uniform(0.05, 0.5),
                z_min=(z_lo := rng.uniform(0.0, 0.8)),
                z_max=z_lo + rng.uniform(0.1, 1.0),
                x_s=rng.uniform(0.0, 0.4),
                z_s=rng.uniform(0.0, 1.5),
                r_min=r_min,
                r_max=r_max,
            )
        except ValueError:
            continue


def random_target(rng: random.Random) -> Target:
    return Target(
        x=rng.uniform(-2.0, 2.0),
        y=rng.uniform(-2.0, 2.0),
        z=rng.uniform(0.0, 2.0),
        theta=rng.uniform(0.0, math.pi),
        phi=rng.uniform(-math.pi, math.pi),
    )
