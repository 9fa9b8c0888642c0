from __future__ import annotations

import math

import pytest

from mobiplan import tasks
from mobiplan.assignment import AzimuthLimit
from mobiplan.errors import ContractError, InfeasibleTaskError, UnreachableTargetError
from mobiplan.model import GeometricRegion
from mobiplan.pipeline import (
    plan_fingerprint,
    read_plan,
    run_pipeline,
    verify_plan,
    write_plan,
)
from mobiplan.scp import floor_point_reaches
from mobiplan.taskfile import parse_task
import dataclasses


@pytest.fixture(scope="module")
def demo_plan(demo_spec):
    return run_pipeline(demo_spec)


class TestRunPipeline:
    def test_demo_produces_two_clusters(self, demo_spec, demo_plan):
        assert demo_plan.stats.n_clusters == 2
        assert demo_plan.stats.n_targets == 12

    def test_partition_and_width_invariants(self, demo_spec, demo_plan):
        verify_plan(demo_plan, demo_spec, demo_spec.region)

    def test_base_admissibility(self, demo_spec, demo_plan):
        limit = AzimuthLimit.from_joint_limits(
            demo_spec.robot.j1_lim, demo_spec.robot.j1_res
        )
        for cluster in demo_plan.clusters:
            for i in cluster.target_indices:
                t = demo_spec.targets[i]
                assert floor_point_reaches(t, cluster.base[0], cluster.base[1], demo_spec.region)
                off = abs(((t.phi - cluster.base[2]) + math.pi) % (2 * math.pi) - math.pi)
                assert off <= limit.delta_phi_max / 2 + 1e-9

    def test_deterministic_rerun(self, demo_spec, demo_plan):
        again = run_pipeline(demo_spec)
        assert plan_fingerprint(again) == plan_fingerprint(demo_plan)

    def test_timing_fields_sum_to_total(self, demo_plan):
        total = demo_plan.stats.total_seconds
        assert sum(demo_plan.stats.timings.values()) == pytest.approx(total, rel=0.05)

    def test_config_sequence_structure(self, demo_spec, demo_plan):
        assert len(demo_plan.config_sequence) == len(demo_spec.targets) + 2
        assert demo_plan.config_sequence[0] == tuple(demo_spec.home_config)
        assert demo_plan.config_sequence[-1] == tuple(demo_spec.home_config)

    def test_infeasible_task_reports_uncovered(self, demo_spec):
        # Push one target far outside any reachable disc.
        bad = list(demo_spec.targets)
        bad[3] = dataclasses.replace(bad[3], z=5.0)
        task = dataclasses.replace(demo_spec, targets=tuple(bad))
        with pytest.raises(InfeasibleTaskError) as exc:
            run_pipeline(task)
        assert 3 in exc.value.uncovered

    def test_unsound_region_names_unreachable_target(self, demo_spec):
        # A region that claims far more reach than the arm has: the cover
        # happily picks a distant floor point, then configuration search
        # must fail loudly on the first sequenced target.
        lying = GeometricRegion(
            x_min=0.35, z_min=0.4, z_max=0.7, x_s=0.19, z_s=0.23,
            r_min=1.2, r_max=2.4,
        )
        task = dataclasses.replace(demo_spec, region=lying)
        with pytest.raises(UnreachableTargetError):
            run_pipeline(task)

    def test_fit_mode_with_cache(self, tmp_path):
        raw = tasks.demo_task()
        raw["region"] = {"fit": {"x_min": 0.35, "z_min": 0.40, "z_max": 0.70,
                                  "voxel_size": 0.1}}
        task = parse_task(raw)
        plan1 = run_pipeline(task, db_dir=tmp_path)
        caches = list(tmp_path.glob("rdb-*.npz"))
        assert len(caches) == 1
        plan2 = run_pipeline(task, db_dir=tmp_path)
        assert plan_fingerprint(plan1) == plan_fingerprint(plan2)
        # Cached run must not add a second database.
        assert list(tmp_path.glob("rdb-*.npz")) == caches

    def test_scp_dump_written(self, demo_spec, tmp_path):
        dump = tmp_path / "inst.scp"
        run_pipeline(demo_spec, scp_dump=dump)
        lines = dump.read_text().splitlines()
        assert lines
        first = lines[0].split()
        assert all(tok.isdigit() for tok in first)

    def test_verify_catches_broken_partition(self, demo_spec, demo_plan):
        broken = dataclasses.replace(
            demo_plan, target_sequence=demo_plan.target_sequence[:-1] + (0,)
        )
        with pytest.raises(ContractError):
            verify_plan(broken, demo_spec, demo_spec.region)


class TestPlanFile:
    def test_roundtrip_identity(self, demo_plan, tmp_path):
        path = tmp_path / "plan.yaml"
        write_plan(demo_plan, path)
        assert read_plan(path) == demo_plan

    def test_fingerprint_ignores_timings(self, demo_plan):
        slower = dataclasses.replace(
            demo_plan,
            stats=dataclasses.replace(
                demo_plan.stats,
                timings={k: v + 1.0 for k, v in demo_plan.stats.timings.items()},
                total_seconds=demo_plan.stats.total_seconds + 9.0,
            ),
        )
        assert plan_fingerprint(slower) == plan_fingerprint(demo_plan)

    def test_base_sequence_has_home_sentinels(self, demo_plan, tmp_path):
        import yaml

        path = tmp_path / "plan.yaml"
        write_plan(demo_plan, path)
        data = yaml.safe_load(path.read_text())
        assert data["base_sequence"][0] == "home"
        assert data["base_sequence"][-1] == "home"
        assert data["schema"] == "mobiplan-plan/1"

    def test_unknown_schema_rejected(self, tmp_path):
        import yaml

        path = tmp_path / "plan.yaml"
        path.write_text(yaml.safe_dump({"schema": "other/9"}))
        with pytest.raises(ValueError):
            read_plan(path)
