"""Determinism of config-driven runs and their artifacts."""

from __future__ import annotations

import tempfile
from pathlib import Path
from typing import List

from ..experiments import preset_example, run_from_config
from ..output import read_csv
from ..solvers import ProblemKind
from .base import BaseCheck, CheckContext, CheckFinding

SHORT_WINDOW = (4.9, 5.0)


# Check: the same config run twice yields byte-identical CSV, SVG and manifest files, and the
# CSV has one header row plus one row per node.
class ReproducibilityCheck(BaseCheck):
    slug = "reproducibility"
    title = "Byte-identical reruns"
    suite = "examples"
    description = "Runs a short Example I window twice and compares every artifact."

    def evaluate(self, context: CheckContext) -> List[CheckFinding]:
        config = preset_example(1, ProblemKind.REDUCED_PRIMAL, snapshots=SHORT_WINDOW)
        config = config.model_copy(update={"output": config.output.model_copy(update={"formats": ["csv", "svg"]})})
        findings: List[CheckFinding] = []
        with tempfile.TemporaryDirectory() as first, tempfile.TemporaryDirectory() as second:
            manifest = run_from_config(config, Path(first))
            run_from_config(config, Path(second))
            for name in manifest.artifacts:
                same = (Path(first) / name).read_bytes() == (Path(second) / name).read_bytes()
                findings.append(CheckFinding(name=f"{name} identical", passed=same, detail="byte comparison"))

            headers, columns = read_csv(Path(first) / f"{config.stem}.csv")
            rows = len(columns["x"])
            findings.append(
                CheckFinding(
                    name="csv layout",
                    passed=len(headers) == 1 + len(SHORT_WINDOW) and rows == config.grid.n + 1,
                    detail=f"{len(headers)} columns, {rows} data rows, header {','.join(headers)}",
                )
            )
        return findings


__all__ = ["ReproducibilityCheck"]
