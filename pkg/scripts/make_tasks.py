#!/usr/bin/env python3
"""Regenerate the task files shipped under tasks/."""

from __future__ import annotations

import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from mobiplan import tasks  # noqa: E402

OUT = pathlib.Path(__file__).resolve().parents[1] / "tasks"


def main() -> None:
    OUT.mkdir(exist_ok=True)
    tasks.write_task(tasks.demo_task(), OUT / "demo_12.yaml")
    tasks.write_task(tasks.one_sided_drilling_task(), OUT / "drill_one_sided_264.yaml")
    tasks.write_task(tasks.two_sided_drilling_task(), OUT / "drill_two_sided_336.yaml")
    for p in sorted(OUT.glob("*.yaml")):
        print(f"wrote {p}")


if __name__ == "__main__":
    main()
