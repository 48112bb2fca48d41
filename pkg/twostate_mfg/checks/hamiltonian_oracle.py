"""Closed-form Hamiltonian against direct minimization over switching rates."""

from __future__ import annotations

from typing import List

import numpy as np

from .. import model as core
from .base import BaseCheck, CheckContext, CheckFinding
from .helpers import consistency_models, finding, sample_theta, sample_values

ORACLE_SAMPLES = 100
ORACLE_TOLERANCE = 1e-4


# Check: h(z, θ, i) equals the minimum of c(i, θ, μ) + μ·Δᵢz over a 0.01-spaced rate grid on [0, 10].
# Why: the closed form is what every solver uses; the grid minimum is independent of it.
class HamiltonianOracleCheck(BaseCheck):
    slug = "hamiltonian-oracle"
    title = "Closed-form Hamiltonian vs brute force"
    suite = "consistency"
    description = "Grid minimization of the running cost plus rate-weighted value differences."

    def evaluate(self, context: CheckContext) -> List[CheckFinding]:
        findings: List[CheckFinding] = []
        for offset, (name, cost) in enumerate(consistency_models().items()):
            rng = np.random.default_rng(context.seed + offset)
            worst = 0.0
            for _ in range(ORACLE_SAMPLES):
                z = sample_values(rng)
                theta = sample_theta(rng)
                i = int(rng.integers(1, 3))
                closed = core.hamiltonian_h(z, theta, i, cost)
                worst = max(worst, abs(closed - core.brute_force_hamiltonian(z, theta, i, cost)))
            findings.append(finding(f"{name}: |h - grid minimum|", worst, ORACLE_TOLERANCE))
        return findings


__all__ = ["HamiltonianOracleCheck"]
