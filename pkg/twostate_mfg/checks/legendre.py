"""Discrete Legendre transform of the terminal potential."""

from __future__ import annotations

from typing import List

import numpy as np

from ..analysis import discrete_legendre
from ..numerics import Grid1D
from .base import BaseCheck, CheckContext, CheckFinding
from .helpers import finding

LEGENDRE_NODES = 400
LEGENDRE_TOLERANCE = 2e-3


def _analytic_dual(upsilon: np.ndarray) -> np.ndarray:
    """Legendre transform of ζ² − ζ over [0, 1]."""
    inner = (upsilon + 1.0) ** 2 / 4.0
    return np.where(upsilon < -1.0, 0.0, np.where(upsilon > 1.0, upsilon, inner))


# Check: the double transform of ζ² − ζ returns it, and the single transform matches (ῡ + 1)²/4.
# Why: the dual potential's terminal data is built from this transform.
class LegendreInvolutionCheck(BaseCheck):
    slug = "legendre-involution"
    title = "Legendre involution of the terminal potential"
    suite = "consistency"
    description = "Double discrete transform at 401 nodes and the analytic single transform."

    def evaluate(self, context: CheckContext) -> List[CheckFinding]:
        primal = Grid1D(0.0, 1.0, LEGENDRE_NODES).sample(lambda zeta: zeta**2 - zeta)
        dual_grid = Grid1D(-2.0, 2.0, LEGENDRE_NODES)
        transformed = discrete_legendre(primal, dual_grid)
        recovered = discrete_legendre(transformed, primal.grid)

        at_zero = float(np.interp(0.0, dual_grid.nodes, transformed.values))
        return [
            finding("double transform error", float(np.max(np.abs(recovered.values - primal.values))), LEGENDRE_TOLERANCE),
            finding("Phi_T(0) - 0.25", abs(at_zero - 0.25), LEGENDRE_TOLERANCE),
            finding(
                "Phi_T - (v+1)^2/4",
                float(np.max(np.abs(transformed.values - _analytic_dual(dual_grid.nodes)))),
                LEGENDRE_TOLERANCE,
            ),
        ]


__all__ = ["LegendreInvolutionCheck"]
