"""Checks tying the reduced coefficients and switching rates to their Hamiltonians."""

from __future__ import annotations

from typing import List

import numpy as np

from .. import model as core
from .base import BaseCheck, CheckContext, CheckFinding
from .helpers import (
    IDENTITY_TOLERANCE,
    central_difference,
    coefficient_identity_residuals,
    consistency_models,
    finding,
    sample_theta,
    sample_values,
)

IDENTITY_SAMPLES = 1000
RATE_SAMPLES = 100


# Check: q = ∂H̃/∂ζ and r = −∂H̃/∂p at random points away from the kink w = 0.
# Why: the primal transport equation is the gradient of the potential equation only with these signs.
class PotentialIdentityCheck(BaseCheck):
    slug = "potential-identities"
    title = "Reduced coefficient identities"
    suite = "consistency"
    description = "Compares q and r with central differences of the reduced primal Hamiltonian."

    def evaluate(self, context: CheckContext) -> List[CheckFinding]:
        findings: List[CheckFinding] = []
        for offset, (name, cost) in enumerate(consistency_models().items()):
            worst_q, worst_r = coefficient_identity_residuals(cost, IDENTITY_SAMPLES, context.seed + offset)
            findings.append(finding(f"{name}: q - dH/dzeta", worst_q, IDENTITY_TOLERANCE))
            findings.append(finding(f"{name}: r + dH/dp", worst_r, IDENTITY_TOLERANCE))
        return findings


# Check: the optimal rate towards the other state is ∂h/∂zʲ, rates are antisymmetric, and
# h, g₁ and r, q only see z¹ − z².
class RateIdentityCheck(BaseCheck):
    slug = "rate-identities"
    title = "Switching-rate identities"
    suite = "consistency"
    description = "Rate-gradient identity, antisymmetry and translation invariance."

    def evaluate(self, context: CheckContext) -> List[CheckFinding]:
        rng = np.random.default_rng(context.seed)
        cost = core.CostModel.from_preset("example1")
        worst_gradient = 0.0
        antisymmetry = 0.0
        translation = 0.0
        for _ in range(RATE_SAMPLES):
            z = sample_values(rng)
            theta = sample_theta(rng)
            i = int(rng.integers(1, 3))
            j = 2 if i == 1 else 1
            rates = core.optimal_rate(z, theta, i)

            def h_along_j(value: float) -> float:
                shifted = core.ValuePair(value, z.z2) if j == 1 else core.ValuePair(z.z1, value)
                return core.hamiltonian_h(shifted, theta, i, cost)

            derivative = central_difference(h_along_j, z.value(j))
            worst_gradient = max(worst_gradient, abs(rates[j - 1] - derivative))
            antisymmetry = max(antisymmetry, abs(rates[0] + rates[1]))

            c = float(rng.uniform(-10.0, 10.0))
            moved = z.shifted(c)
            w = moved.difference
            translation = max(
                translation,
                abs(core.hamiltonian_h(moved, theta, i, cost) - core.hamiltonian_h(z, theta, i, cost)),
                abs(core.drift_g1(moved, theta) - core.drift_g1(z, theta)),
                abs(core.reduced_q(w, theta.zeta, cost) - core.reduced_q(z.difference, theta.zeta, cost)),
            )
        return [
            finding("alpha_j - dh/dz^j", worst_gradient, IDENTITY_TOLERANCE),
            finding("alpha_1 + alpha_2", antisymmetry, 0.0),
            finding("translation invariance", translation, 1e-9),
        ]


__all__ = ["PotentialIdentityCheck", "RateIdentityCheck"]
