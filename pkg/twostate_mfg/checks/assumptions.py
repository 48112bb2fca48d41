"""Structural assumptions of the cost family."""

from __future__ import annotations

from typing import List

from ..model import CostModel, validate_assumptions
from .base import BaseCheck, CheckContext, CheckFinding
from .helpers import consistency_models

ASSUMPTION_SAMPLES = 1000


# Check: strong convexity holds with γ = ½ and fails for γ = 0.6; c/‖α‖ grows without bound;
# every preset's f matches its declared potential and Lipschitz constant.
class AssumptionCheck(BaseCheck):
    slug = "assumptions"
    title = "Convexity, growth and cost structure"
    suite = "consistency"
    description = "Sampled (A1)/(A2) evidence for the quadratic switching cost plus preset structure checks."

    def evaluate(self, context: CheckContext) -> List[CheckFinding]:
        cost = CostModel.from_preset("example1")
        sharp = validate_assumptions(cost, 0.5, samples=ASSUMPTION_SAMPLES, seed=context.seed)
        loose = validate_assumptions(cost, 0.6, samples=ASSUMPTION_SAMPLES, seed=context.seed)
        findings = [
            CheckFinding(
                name="convexity with gamma=0.5",
                passed=sharp.convexity_holds,
                detail=f"{len(sharp.violations)} violation(s) in {sharp.samples} samples",
                measured=float(len(sharp.violations)),
                threshold=0.0,
            ),
            CheckFinding(
                name="convexity fails for gamma=0.6",
                passed=not loose.convexity_holds,
                detail=f"{len(loose.violations)} violation(s) in {loose.samples} samples",
                measured=float(len(loose.violations)),
            ),
            CheckFinding(
                name="superlinear growth",
                passed=sharp.superlinear,
                detail=", ".join(f"c/|a|={ratio:.3g} at |a|={norm:g}" for norm, ratio in sharp.growth),
            ),
        ]
        for name, model in consistency_models().items():
            defects = model.structure_defects()
            findings.append(
                CheckFinding(
                    name=f"{name}: cost structure",
                    passed=not defects,
                    detail="; ".join(defects) or "potential and Lipschitz declarations hold",
                )
            )
        return findings


__all__ = ["AssumptionCheck"]
