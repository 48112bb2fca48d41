"""Post-processing of solution traces.

Gradient extraction, discrete Legendre transforms, inversion, shock and
monotonicity detection, field comparison, a characteristics oracle and
self-convergence rates.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import ConfigurationError, DomainError, NotInvertibleError, NumericalError
from .model import CostModel, reduced_q_kernel, reduced_r_kernel
from .numerics import Field, Grid1D, central_gradient, legendre_transform
from .solvers import ProblemKind, SolutionTrace, TerminalData

logger = logging.getLogger(__name__)

Interval = Tuple[float, float]

INCLUSION_TOLERANCE = 1e-12
INVERSION_WINDOW: Interval = (0.1, 0.9)


@dataclass(frozen=True, slots=True)
class ComparisonReport:
    l_inf: float
    l1: float
    l2: float
    restricted_domain: Interval


@dataclass(frozen=True, slots=True)
class ShockReport:
    t: float
    max_slope: float
    total_variation: float
    shock_flag: bool
    location: float


class Monotonicity(str, Enum):
    INCREASING = "increasing"
    DECREASING = "decreasing"
    NON_MONOTONE = "non-monotone"


@dataclass(frozen=True, slots=True)
class MonotonicityVerdict:
    verdict: Monotonicity
    violation: Optional[float] = None

    @property
    def monotone(self) -> bool:
        return self.verdict is not Monotonicity.NON_MONOTONE


def _within(x: np.ndarray, interval: Interval) -> np.ndarray:
    return (x >= interval[0] - INCLUSION_TOLERANCE) & (x <= interval[1] + INCLUSION_TOLERANCE)


def discrete_legendre(field: Field, dual_grid: Grid1D) -> Field:
    """Φ(ῡₖ) = max over nodes ζⱼ of (ζⱼ ῡₖ − Υ(ζⱼ))."""
    return Field(dual_grid, legendre_transform(field.x, field.values, dual_grid.nodes))


def monotonicity_check(field: Field, tolerance: float = 1e-10) -> MonotonicityVerdict:
    """Classify by the signs of consecutive differences larger than ``tolerance``.

    A field with no significant differences counts as increasing.
    """
    differences = np.diff(field.values)
    significant = np.flatnonzero(np.abs(differences) > tolerance)
    if significant.size == 0:
        return MonotonicityVerdict(Monotonicity.INCREASING)
    signs = np.sign(differences[significant])
    flips = np.flatnonzero(signs != signs[0])
    if flips.size == 0:
        return MonotonicityVerdict(Monotonicity.INCREASING if signs[0] > 0 else Monotonicity.DECREASING)
    return MonotonicityVerdict(Monotonicity.NON_MONOTONE, float(field.x[significant[flips[0]]]))


def numerical_inverse(field: Field, query_values: Sequence[float]) -> np.ndarray:
    """Coordinates x with field(x) = v for each query, by piecewise-linear inversion."""
    verdict = monotonicity_check(field)
    if not verdict.monotone:
        raise NotInvertibleError(
            f"Field is not invertible: monotonicity fails near x={verdict.violation:g}",
            location=verdict.violation,
        )
    x, values = field.x, np.asarray(field.values)
    if verdict.verdict is Monotonicity.DECREASING:
        x, values = x[::-1], values[::-1]
    queries = np.asarray(query_values, dtype=float)
    low, high = values[0], values[-1]
    outside = (queries < low - INCLUSION_TOLERANCE) | (queries > high + INCLUSION_TOLERANCE)
    if np.any(outside):
        raise DomainError(f"Query values {queries[outside].tolist()} lie outside the field range [{low}, {high}]")
    return np.interp(queries, values, x)


def compare_fields(f: Field, g: Field, restrict: Optional[Interval] = None) -> ComparisonReport:
    """L∞, L¹ and L² norms of f − g on f's nodes inside the common domain."""
    low = max(f.grid.a, g.grid.a)
    high = min(f.grid.b, g.grid.b)
    if restrict is not None:
        low, high = max(low, restrict[0]), min(high, restrict[1])
    if high < low:
        raise DomainError(f"Fields do not overlap on the requested interval {restrict}")
    mask = _within(f.x, (low, high))
    if not np.any(mask):
        raise DomainError(f"No nodes of the first field lie in [{low}, {high}]")
    x = f.x[mask]
    difference = np.asarray(f.values)[mask] - np.interp(x, g.x, g.values)
    return ComparisonReport(
        l_inf=float(np.max(np.abs(difference))),
        l1=float(np.trapezoid(np.abs(difference), x)),
        l2=float(math.sqrt(np.trapezoid(difference**2, x))),
        restricted_domain=(float(low), float(high)),
    )


def _slope_profile(field: Field, restrict: Optional[Interval]) -> Tuple[np.ndarray, np.ndarray]:
    x = field.x
    slopes = np.abs(np.diff(field.values)) / field.grid.dx
    midpoints = 0.5 * (x[:-1] + x[1:])
    if restrict is not None:
        keep = _within(x[:-1], restrict) & _within(x[1:], restrict)
        slopes, midpoints = slopes[keep], midpoints[keep]
    return slopes, midpoints


def shock_indicator(
    trace: SolutionTrace,
    slope_factor: float = 10.0,
    restrict: Optional[Interval] = None,
) -> List[ShockReport]:
    """Per-snapshot max one-sided slope, total variation and shock flag.

    A snapshot is flagged when its max slope reaches ``slope_factor`` times the
    terminal max slope.
    """
    if not trace.snapshots:
        raise ConfigurationError("Shock indicator needs at least one snapshot")
    terminal_slopes, _ = _slope_profile(trace.terminal, restrict)
    reference = float(terminal_slopes.max()) if terminal_slopes.size else 0.0
    reports: List[ShockReport] = []
    for t, field in trace.snapshots:
        slopes, midpoints = _slope_profile(field, restrict)
        if slopes.size == 0:
            raise DomainError(f"Restriction {restrict} leaves no grid intervals")
        peak = int(np.argmax(slopes))
        max_slope = float(slopes[peak])
        reports.append(
            ShockReport(
                t=t,
                max_slope=max_slope,
                total_variation=float(np.sum(slopes) * field.grid.dx),
                shock_flag=max_slope > 0.0 and max_slope >= slope_factor * reference,
                location=float(midpoints[peak]),
            )
        )
    return reports


def inversion_consistency(
    primal: SolutionTrace,
    dual: SolutionTrace,
    t: float,
    restrict: Interval = INVERSION_WINDOW,
) -> ComparisonReport:
    """Compare Z(w(ζ, t), t) against ζ on the primal restriction."""
    w = primal.snapshot(t)
    z = dual.snapshot(t)
    verdict = monotonicity_check(w)
    if not verdict.monotone:
        raise NotInvertibleError(
            f"Primal snapshot at t={t:g} is not invertible near zeta={verdict.violation:g}",
            location=verdict.violation,
        )
    mask = _within(w.x, restrict)
    zeta = w.x[mask]
    difference = np.interp(np.asarray(w.values)[mask], z.x, z.values) - zeta
    return ComparisonReport(
        l_inf=float(np.max(np.abs(difference))),
        l1=float(np.trapezoid(np.abs(difference), zeta)),
        l2=float(math.sqrt(np.trapezoid(difference**2, zeta))),
        restricted_domain=(float(restrict[0]), float(restrict[1])),
    )


_GRADIENT_OF = {
    ProblemKind.POTENTIAL_PRIMAL: ProblemKind.REDUCED_PRIMAL,
    ProblemKind.POTENTIAL_DUAL: ProblemKind.REDUCED_DUAL,
}


def gradient_trace(trace: SolutionTrace) -> SolutionTrace:
    """Trace of w_p = ∂Υ or Z_p = ∂Φ from a potential trace."""
    try:
        problem = _GRADIENT_OF[trace.problem]
    except KeyError as exc:
        raise ConfigurationError(f"Gradient traces need a potential formulation, got {trace.problem.value}") from exc
    return replace(
        trace,
        problem=problem,
        terminal=central_gradient(trace.terminal),
        snapshots=[(t, central_gradient(field)) for t, field in trace.snapshots],
        warnings=list(trace.warnings),
    )


def characteristics(
    model: CostModel,
    grid: Grid1D,
    terminal: Union[TerminalData, Field],
    horizon: float,
    step: float = 1e-4,
) -> Field:
    """Reduced primal solution at τ = horizon by RK4 on ζ̇ = r(w, ζ), ẇ = q(w, ζ).

    One characteristic starts from every grid node; the resulting curve is
    resampled onto the grid, so it is only meaningful before characteristics
    cross.
    """
    start = terminal if isinstance(terminal, Field) else terminal.sample(grid)
    zeta = np.array(grid.nodes)
    w = np.array(start.values)
    steps = int(round(horizon / step))
    if steps < 0 or abs(steps * step - horizon) > 1e-9 * max(1.0, horizon):
        raise ConfigurationError(f"Horizon {horizon} is not a whole number of RK4 steps of {step}")

    def rhs(z: np.ndarray, v: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        return reduced_r_kernel(v, z), reduced_q_kernel(v, z, model)

    for _ in range(steps):
        k1z, k1w = rhs(zeta, w)
        k2z, k2w = rhs(zeta + 0.5 * step * k1z, w + 0.5 * step * k1w)
        k3z, k3w = rhs(zeta + 0.5 * step * k2z, w + 0.5 * step * k2w)
        k4z, k4w = rhs(zeta + step * k3z, w + step * k3w)
        zeta = zeta + step / 6.0 * (k1z + 2.0 * k2z + 2.0 * k3z + k4z)
        w = w + step / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w)

    if np.any(np.diff(zeta) <= 0.0):
        raise NumericalError("Characteristics crossed before the requested horizon")
    return Field(grid, np.interp(grid.nodes, zeta, w))


def convergence_order(coarse: Field, mid: Field, fine: Field, restrict: Optional[Interval] = None) -> float:
    """log₂ of successive L¹ self-differences on grids refined by two."""
    first = compare_fields(coarse, mid, restrict).l1
    second = compare_fields(mid, fine, restrict).l1
    if second == 0.0:
        return math.inf
    order = math.log2(first / second)
    logger.debug("Self-convergence: e1=%.3e e2=%.3e order=%.3f", first, second, order)
    return order


__all__ = [
    "ComparisonReport",
    "Monotonicity",
    "MonotonicityVerdict",
    "ShockReport",
    "characteristics",
    "compare_fields",
    "convergence_order",
    "discrete_legendre",
    "gradient_trace",
    "inversion_consistency",
    "monotonicity_check",
    "numerical_inverse",
    "shock_indicator",
]
