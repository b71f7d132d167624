# SPDX-FileCopyrightText: Copyright (c) 2024-present eqprox contributors.
# All rights reserved.
# SPDX-License-Identifier: BSD-3-Clause
#
# "compare_reports.py -h" for help.

import argparse
from dataclasses import dataclass
import json
import sys
from typing import Any, Dict, Iterable, List, Optional


@dataclass
class CellChange:
    cell: str
    baseline_status: Optional[str]
    contender_status: Optional[str]
    baseline_estimate: Optional[float]
    contender_estimate: Optional[float]

    @property
    def delta(self) -> float:
        if self.baseline_estimate is None or self.contender_estimate is None:
            return float("inf")
        return abs(self.contender_estimate - self.baseline_estimate)

    def __str__(self):
        return (
            f"Cell {self.cell}: {self.baseline_status} -> {self.contender_status}, "
            f"estimate {self.baseline_estimate} -> {self.contender_estimate}"
        )


def load_report(path: str) -> Dict[str, Any]:
    with open(path) as f:
        return json.loads(f.read())


# Pairs up cells by id. A cell present on one side only shows up with None on
# the other side.
def compare(baseline: Dict[str, Any], contender: Dict[str, Any]) -> List[CellChange]:
    base_cells = {c["cell"]: c for c in baseline["cells"]}
    cont_cells = {c["cell"]: c for c in contender["cells"]}
    changes: List[CellChange] = []
    for cell in list(base_cells) + [c for c in cont_cells if c not in base_cells]:
        a, b = base_cells.get(cell, {}), cont_cells.get(cell, {})
        if a == b:
            continue
        changes.append(
            CellChange(
                cell=cell,
                baseline_status=a.get("status"),
                contender_status=b.get("status"),
                baseline_estimate=a.get("expansion_estimate"),
                contender_estimate=b.get("expansion_estimate"),
            )
        )
    return changes


def summarize(changes: Iterable[CellChange], num_tops: int = 5) -> None:
    changes = sorted(changes, key=lambda c: c.delta, reverse=True)
    status_changes = [c for c in changes if c.baseline_status != c.contender_status]
    print(f"{len(changes)} cells differ, {len(status_changes)} with a different status.")
    for c in status_changes:
        print(f"  {c}")
    print()
    print(f"Top {num_tops} estimate changes:")
    for c in changes[:num_tops]:
        print(f"  {c}")


if __name__ == "__main__":
    parser = argparse.ArgumentParser(
        description="Compares two `eqprox bench` JSON reports cell by cell. Exits 1 when they differ."
    )
    parser.add_argument("baseline", type=str, help="The baseline report")
    parser.add_argument("contender", type=str, help="The contender report")
    args = parser.parse_args()

    with open(args.baseline, "rb") as f:
        baseline_bytes = f.read()
    with open(args.contender, "rb") as f:
        contender_bytes = f.read()
    if baseline_bytes == contender_bytes:
        print("Reports are byte-identical.")
        sys.exit(0)

    baseline, contender = load_report(args.baseline), load_report(args.contender)
    if baseline.get("seed") != contender.get("seed"):
        print(f"Note: seeds differ ({baseline.get('seed')} vs {contender.get('seed')}).")
    summarize(compare(baseline, contender))
    sys.exit(1)
