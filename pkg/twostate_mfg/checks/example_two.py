"""Example II: loss of monotonicity of w and with it the dual inverse."""

from __future__ import annotations

from typing import List

from ..analysis import Monotonicity, inversion_consistency, monotonicity_check
from ..errors import NotInvertibleError
from ..experiments import select_example2_default
from ..solvers import ProblemKind
from .base import BaseCheck, CheckContext, CheckFinding
from .helpers import example_trace


# Check: with the swept default κ and orientation, w(·, T) is increasing but w(·, 0) is not
# monotone, and inverting it at t = 0 is refused.
class ExampleTwoMonotonicityCheck(BaseCheck):
    slug = "example-two-monotonicity"
    title = "Example II monotonicity loss"
    suite = "examples"
    description = "Monotonicity verdicts at t = T and t = 0, and the inversion error at t = 0."

    def evaluate(self, context: CheckContext) -> List[CheckFinding]:
        kappa, orientation = select_example2_default()
        primal = example_trace(context, 2, ProblemKind.REDUCED_PRIMAL)
        terminal = monotonicity_check(primal.snapshot(primal.march.T))
        final = monotonicity_check(primal.snapshot(0.0))
        findings = [
            CheckFinding(
                name="terminal w increasing",
                passed=terminal.verdict is Monotonicity.INCREASING,
                detail=f"verdict {terminal.verdict.value}",
            ),
            CheckFinding(
                name="w(., 0) non-monotone",
                passed=final.verdict is Monotonicity.NON_MONOTONE,
                detail=f"kappa={kappa:g} {orientation}: verdict {final.verdict.value}"
                + (f", first violation at {final.violation:.4f}" if final.violation is not None else ""),
            ),
        ]

        dual = example_trace(context, 2, ProblemKind.REDUCED_DUAL)
        try:
            inversion_consistency(primal, dual, 0.0)
        except NotInvertibleError as exc:
            findings.append(CheckFinding(name="inversion refused at t=0", passed=True, detail=str(exc)))
        else:
            findings.append(
                CheckFinding(name="inversion refused at t=0", passed=False, detail="inversion unexpectedly succeeded")
            )
        return findings


__all__ = ["ExampleTwoMonotonicityCheck"]
