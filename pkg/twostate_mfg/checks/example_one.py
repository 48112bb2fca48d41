"""Example I: shock formation, dual boundary layers and cross-formulation agreement."""

from __future__ import annotations

from typing import List

import numpy as np

from ..analysis import (
    characteristics,
    compare_fields,
    convergence_order,
    gradient_trace,
    inversion_consistency,
    shock_indicator,
)
from ..model import CostModel
from ..solvers import ProblemKind, TerminalData
from .base import BaseCheck, CheckContext, CheckFinding
from .helpers import example_trace, finding

HORIZON = 5.0
SHOCK_MIN_SLOPE = 20.0
LAYER_NODES = 5
LAYER_GAP = 0.25
WINDOW_TIME = 4.9
PRIMAL_WINDOW = (0.1, 0.9)
DUAL_WINDOW = (-1.6, 1.6)
CROSS_TOLERANCE = 5e-2
CHARACTERISTIC_TIME = 4.95
CHARACTERISTIC_TOLERANCE = 5e-3
MIN_ORDER = 0.8
GRADIENT_RESTRICTION = (0.05, 0.95)


def _shock_findings(label: str, reports) -> List[CheckFinding]:
    terminal = reports[0]
    final = reports[-1]
    return [
        CheckFinding(
            name=f"{label}: terminal profile smooth",
            passed=not terminal.shock_flag,
            detail=f"terminal max slope {terminal.max_slope:.3f}",
            measured=terminal.max_slope,
        ),
        CheckFinding(
            name=f"{label}: shock at t={final.t:g}",
            passed=final.shock_flag and final.max_slope >= SHOCK_MIN_SLOPE,
            detail=f"max slope {final.max_slope:.2f} at x={final.location:.4f}",
            measured=final.max_slope,
            threshold=SHOCK_MIN_SLOPE,
        ),
    ]


# Check: w(·, 0) develops a shock (slope ≥ 20, ten times the terminal slope) in both primal formulations.
class ExampleOneShockCheck(BaseCheck):
    slug = "example-one-shock"
    title = "Example I shock formation"
    suite = "examples"
    description = "Reduced primal w and gradient of the primal potential at t = 0."

    def evaluate(self, context: CheckContext) -> List[CheckFinding]:
        primal = example_trace(context, 1, ProblemKind.REDUCED_PRIMAL)
        potential = gradient_trace(example_trace(context, 1, ProblemKind.POTENTIAL_PRIMAL))
        findings = _shock_findings("w", shock_indicator(primal))
        findings += _shock_findings("w_p", shock_indicator(potential, restrict=GRADIENT_RESTRICTION))
        return findings


# Check: near both truncated dual ends Z stays far from the imposed far-field values for a while.
class ExampleOneBoundaryLayerCheck(BaseCheck):
    slug = "example-one-boundary-layer"
    title = "Example I dual boundary layers"
    suite = "examples"
    description = "Largest |Z - boundary value| within five nodes of an end at some t < T."

    def evaluate(self, context: CheckContext) -> List[CheckFinding]:
        dual = example_trace(context, 1, ProblemKind.REDUCED_DUAL)
        widest, when = 0.0, HORIZON
        for t, field in dual.snapshots:
            if t >= HORIZON:
                continue
            values = np.asarray(field.values)
            left = np.max(np.abs(values[1 : LAYER_NODES + 1] - 1.0))
            right = np.max(np.abs(values[-LAYER_NODES - 1 : -1] - 0.0))
            gap = float(max(left, right))
            if gap > widest:
                widest, when = gap, t
        return [
            CheckFinding(
                name="boundary layer",
                passed=widest > LAYER_GAP,
                detail=f"largest gap {widest:.3f} at t={when:g}",
                measured=widest,
                threshold=LAYER_GAP,
            )
        ]


# Check: before the shock, gradients of the potentials match the transport solutions, more
# closely on the finer grid.
class CrossFormulationCheck(BaseCheck):
    slug = "cross-formulation"
    title = "Primal/potential and dual/potential agreement"
    suite = "examples"
    description = "L-infinity gaps at t = T - 0.1 for N = 200 and N = 400."

    def evaluate(self, context: CheckContext) -> List[CheckFinding]:
        findings: List[CheckFinding] = []
        pairs = (
            ("w vs w_p", ProblemKind.REDUCED_PRIMAL, ProblemKind.POTENTIAL_PRIMAL, PRIMAL_WINDOW),
            ("Z vs Z_p", ProblemKind.REDUCED_DUAL, ProblemKind.POTENTIAL_DUAL, DUAL_WINDOW),
        )
        for label, transport, potential, window in pairs:
            gaps = []
            for n in (200, 400):
                times = None if n == 200 else (WINDOW_TIME, HORIZON)
                direct = example_trace(context, 1, transport, n=n, times=times).snapshot(WINDOW_TIME)
                derived = gradient_trace(example_trace(context, 1, potential, n=n, times=times)).snapshot(WINDOW_TIME)
                gaps.append(compare_fields(direct, derived, window).l_inf)
            findings.append(finding(f"{label} at N=200", gaps[0], CROSS_TOLERANCE))
            findings.append(
                CheckFinding(
                    name=f"{label} shrinks with N",
                    passed=gaps[1] < gaps[0],
                    detail=f"N=200: {gaps[0]:.3e}, N=400: {gaps[1]:.3e}",
                    measured=gaps[1],
                    threshold=gaps[0],
                )
            )
        return findings


# Check: Z(w(ζ, t), t) = ζ on [0.1, 0.9] shortly before T.
class ExampleOneInversionCheck(BaseCheck):
    slug = "example-one-inversion"
    title = "Example I primal-dual inversion"
    suite = "examples"
    description = "Inversion consistency at t = T - 0.1."

    def evaluate(self, context: CheckContext) -> List[CheckFinding]:
        primal = example_trace(context, 1, ProblemKind.REDUCED_PRIMAL)
        dual = example_trace(context, 1, ProblemKind.REDUCED_DUAL)
        report = inversion_consistency(primal, dual, WINDOW_TIME)
        return [finding("inversion L-infinity", report.l_inf, CROSS_TOLERANCE)]


# Check: the upwind solution follows RK4 characteristics over a short horizon.
class CharacteristicsCheck(BaseCheck):
    slug = "characteristics-oracle"
    title = "Method-of-characteristics agreement"
    suite = "examples"
    description = "Reduced primal w at T - 0.05 against RK4 characteristics from 201 seeds."

    def evaluate(self, context: CheckContext) -> List[CheckFinding]:
        primal = example_trace(context, 1, ProblemKind.REDUCED_PRIMAL)
        computed = primal.snapshot(CHARACTERISTIC_TIME)
        oracle = characteristics(
            CostModel.from_preset("example1"),
            primal.grid,
            TerminalData("linear-w"),
            HORIZON - CHARACTERISTIC_TIME,
        )
        return [finding("w vs characteristics", compare_fields(computed, oracle).l_inf, CHARACTERISTIC_TOLERANCE)]


# Check: L¹ self-convergence of the upwind scheme is at least first order in a smooth window.
class ConvergenceCheck(BaseCheck):
    slug = "convergence-order"
    title = "Self-convergence order"
    suite = "examples"
    description = "N = 100, 200, 400 with dt proportional to 1/N, compared at t = T - 0.1."

    def evaluate(self, context: CheckContext) -> List[CheckFinding]:
        fields = [
            example_trace(context, 1, ProblemKind.REDUCED_PRIMAL, n=n, dt=dt, times=(WINDOW_TIME, HORIZON)).snapshot(WINDOW_TIME)
            for n, dt in ((100, 2e-4), (200, 1e-4), (400, 5e-5))
        ]
        order = convergence_order(*fields)
        return [finding("L1 order", order, MIN_ORDER, at_most=False)]


__all__ = [
    "CharacteristicsCheck",
    "ConvergenceCheck",
    "CrossFormulationCheck",
    "ExampleOneBoundaryLayerCheck",
    "ExampleOneInversionCheck",
    "ExampleOneShockCheck",
]
