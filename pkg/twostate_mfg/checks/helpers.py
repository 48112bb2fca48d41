"""Shared helpers available to check implementations."""

from __future__ import annotations

import logging
import threading
from typing import Callable, Dict, Optional, Sequence, Tuple, TypeVar

import numpy as np

from .. import model as core
from ..experiments import DEFAULT_DT, EXAMPLE_HORIZONS, preset_example, solve
from ..model import CostModel, ProbabilityPair, ValuePair
from ..solvers import ProblemKind, SolutionTrace
from .base import CheckContext, CheckFinding

logger = logging.getLogger(__name__)

T = TypeVar("T")

FD_STEP = 1e-5
IDENTITY_TOLERANCE = 1e-6
KINK_EXCLUSION = 1e-3

PRIMAL_TIMES = (0.0, 4.9, 4.95, 5.0)
DUAL_TIMES = (4.5, 4.9, 4.95, 4.98, 4.99, 5.0)

_RUN_LOCKS_KEY = "_run_locks"
_RUNS_KEY = "_runs"


def finding(name: str, measured: float, threshold: float, *, at_most: bool = True, detail: str = "") -> CheckFinding:
    """Finding for a ``measured ≤ threshold`` (or ``≥``) predicate."""
    passed = measured <= threshold if at_most else measured >= threshold
    relation = "<=" if at_most else ">="
    text = detail or f"{measured:.3e} {relation} {threshold:.3e}"
    return CheckFinding(name=name, passed=bool(passed), detail=text, measured=float(measured), threshold=float(threshold))


def central_difference(function: Callable[[float], float], x: float, step: float = FD_STEP) -> float:
    return (function(x + step) - function(x - step)) / (2.0 * step)


def consistency_models() -> Dict[str, CostModel]:
    """Models the identity checks sweep: Example I and both Example II orientations."""
    return {
        "example1": CostModel.from_preset("example1"),
        "example2-paper": CostModel.from_preset("example2-paper", 4.0),
        "example2-gradient": CostModel.from_preset("example2-gradient", 4.0),
    }


def sample_away_from_kink(rng: np.random.Generator, low: float, high: float) -> float:
    while True:
        value = float(rng.uniform(low, high))
        if abs(value) >= KINK_EXCLUSION:
            return value


def sample_values(rng: np.random.Generator, low: float = -5.0, high: float = 5.0) -> ValuePair:
    """Random z with |z¹ − z²| away from the kink."""
    while True:
        z = ValuePair(float(rng.uniform(low, high)), float(rng.uniform(low, high)))
        if abs(z.difference) >= KINK_EXCLUSION:
            return z


def sample_theta(rng: np.random.Generator) -> ProbabilityPair:
    return ProbabilityPair.from_zeta(float(rng.uniform(0.0, 1.0)))


def coefficient_identity_residuals(model: CostModel, samples: int, seed: int) -> Tuple[float, float]:
    """Worst |q − ∂H̃/∂ζ| and |r + ∂H̃/∂p| over random (w, ζ)."""
    rng = np.random.default_rng(seed)
    worst_q = worst_r = 0.0
    for _ in range(samples):
        w = sample_away_from_kink(rng, -5.0, 5.0)
        zeta = float(rng.uniform(0.01, 0.99))
        dH_dzeta = central_difference(lambda s: core.reduced_H_primal(w, s, model), zeta)
        dH_dp = central_difference(lambda p: core.reduced_H_primal(p, zeta, model), w)
        worst_q = max(worst_q, abs(core.reduced_q(w, zeta, model) - dH_dzeta))
        worst_r = max(worst_r, abs(core.reduced_r(w, zeta, model) + dH_dp))
    return worst_q, worst_r


def _run_lock(context: CheckContext, key: Tuple) -> threading.Lock:
    with context.lock:
        locks = context.metadata.setdefault(_RUN_LOCKS_KEY, {})
        return locks.setdefault(key, threading.Lock())


def cached(context: CheckContext, key: Tuple, factory: Callable[[], T]) -> T:
    """Compute ``factory()`` once per suite run, even across worker threads."""
    with _run_lock(context, key):
        runs = context.metadata.setdefault(_RUNS_KEY, {})
        if key not in runs:
            logger.debug("Computing shared run %s", key)
            runs[key] = factory()
        return runs[key]


def example_trace(
    context: CheckContext,
    example_id: int,
    problem: ProblemKind,
    *,
    n: int = 200,
    dt: float = DEFAULT_DT,
    times: Optional[Sequence[float]] = None,
) -> SolutionTrace:
    """Shared Example run; Example I dual runs stop early by default."""
    if times is None:
        if example_id == 1:
            times = DUAL_TIMES if problem.is_dual else PRIMAL_TIMES
        else:
            times = (0.0, EXAMPLE_HORIZONS[2])
    times = tuple(sorted(times))
    key = ("example", example_id, problem, n, dt, times)

    def run() -> SolutionTrace:
        config = preset_example(example_id, problem, snapshots=times, n=n)
        config = config.model_copy(update={"time": config.time.model_copy(update={"dt": dt})})
        return solve(config)

    return cached(context, key, run)


__all__ = [
    "DUAL_TIMES",
    "FD_STEP",
    "IDENTITY_TOLERANCE",
    "PRIMAL_TIMES",
    "cached",
    "central_difference",
    "coefficient_identity_residuals",
    "consistency_models",
    "example_trace",
    "finding",
    "sample_away_from_kink",
    "sample_theta",
    "sample_values",
]
