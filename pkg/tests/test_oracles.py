from __future__ import annotations

import math

import pytest

from mobiplan.model import GeometricRegion, Target
from mobiplan.oracles import oracle_membership, oracle_path, oracle_scp, oracle_tsp

REGION = GeometricRegion(
    x_min=0.40, z_min=0.40, z_max=1.20, x_s=0.22, z_s=0.64, r_min=0.51, r_max=0.84
)


class TestOracleMembership:
    def test_worked_floor_points(self):
        t = Target(1.0, 0.0, 0.64, math.radians(130.0), 0.0)
        assert not oracle_membership(REGION, t, (0.3, 0.0))
        assert oracle_membership(REGION, t, (0.2, 0.0))

    def test_zero_azimuth_reduces_to_frame_shift(self):
        from mobiplan.reachability import region_contains

        t = Target(0.9, 0.2, 0.7, math.radians(120.0), 0.0)
        for fx, fy in [(0.0, 0.0), (0.2, -0.1), (0.5, 0.6)]:
            assert oracle_membership(REGION, t, (fx, fy)) == region_contains(
                REGION, (t.x - fx, t.y - fy, t.z)
            )


class TestOracleScp:
    def test_partition(self):
        sets = (frozenset({0, 1}), frozenset({2}), frozenset({3, 4}))
        assert oracle_scp(5, sets) == (0, 1, 2)

    def test_infeasible_rejected(self):
        with pytest.raises(ValueError):
            oracle_scp(3, (frozenset({0}),))

    def test_budget_refusal(self):
        sets = tuple(frozenset({0}) for _ in range(30))
        with pytest.raises(ValueError):
            oracle_scp(1, sets)


class TestOracleTsp:
    def test_square_perimeter(self):
        length, order = oracle_tsp(((1, 0), (1, 1), (0, 1)), (0, 0))
        assert length == pytest.approx(4.0)

    def test_budget_refusal(self):
        nodes = tuple((float(i), 0.0) for i in range(10))
        with pytest.raises(ValueError):
            oracle_tsp(nodes, (0.0, 0.0))


class TestOraclePath:
    def test_forced_path(self):
        layers = (((0.0,),), ((3.0,), (1.0,)), ((0.0,),))
        cost, combo = oracle_path(layers)
        assert combo == (0, 1, 0)
        assert cost == pytest.approx(2.0)

    def test_budget_refusal(self):
        layers = tuple(tuple((float(i),) for i in range(10)) for _ in range(5))
        with pytest.raises(ValueError):
            oracle_path(layers)
