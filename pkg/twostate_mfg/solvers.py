"""The four reduced one-dimensional formulations and their backward marches."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, List, Mapping, Optional, Tuple, Union

import numpy as np

from .errors import ConfigurationError, MissingPotentialError, NonFiniteError, NumericalError
from .model import (
    CostModel,
    reduced_H_dual_kernel,
    reduced_H_primal_kernel,
    reduced_q_kernel,
    reduced_r_kernel,
)
from .numerics import (
    BoundarySpec,
    Field,
    GodunovHamiltonian,
    Grid1D,
    TimeMarch,
    batched_real_roots,
    check_cfl,
    godunov_update,
    kink_at_zero,
    legendre_transform,
    upwind_update,
)

logger = logging.getLogger(__name__)

DUAL_RANGE = (-0.05, 1.05)
FAR_FIELD_SLOPE = 0.1
FAR_FIELD_OFFSET = 5
LEGENDRE_PRIMAL_INTERVALS = 200


class ProblemKind(str, Enum):
    REDUCED_PRIMAL = "reduced-primal"
    REDUCED_DUAL = "reduced-dual"
    POTENTIAL_PRIMAL = "potential-primal"
    POTENTIAL_DUAL = "potential-dual"

    @property
    def is_dual(self) -> bool:
        return self in (ProblemKind.REDUCED_DUAL, ProblemKind.POTENTIAL_DUAL)

    @property
    def is_potential(self) -> bool:
        return self in (ProblemKind.POTENTIAL_PRIMAL, ProblemKind.POTENTIAL_DUAL)


TERMINAL_PRESETS = ("linear-w", "potential-linear", "dual-inverse-linear", "dual-potential-legendre")


@dataclass(frozen=True)
class TerminalData:
    """Named terminal profile.

    ``linear-w`` is w_T = slope·ζ + offset (defaults 2, −1); ``potential-linear``
    is its antiderivative vanishing at ζ = 0; ``dual-inverse-linear`` is the
    clamped inverse of w_T; ``dual-potential-legendre`` is the discrete Legendre
    transform of the potential-linear profile sampled on ``primal_n`` intervals.
    """

    preset: str
    params: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.preset not in TERMINAL_PRESETS:
            raise ConfigurationError(
                f"Unknown terminal preset {self.preset!r}; expected one of {', '.join(TERMINAL_PRESETS)}"
            )
        unknown = set(self.params) - {"slope", "offset", "primal_n"}
        if unknown:
            raise ConfigurationError(f"Unknown terminal parameters: {', '.join(sorted(unknown))}")
        if self.slope <= 0.0:
            raise ConfigurationError(f"Terminal slope must be positive, got {self.slope}")

    @property
    def slope(self) -> float:
        return float(self.params.get("slope", 2.0))

    @property
    def offset(self) -> float:
        return float(self.params.get("offset", -1.0))

    def _potential(self, zeta: np.ndarray) -> np.ndarray:
        return 0.5 * self.slope * zeta**2 + self.offset * zeta

    def sample(self, grid: Grid1D) -> Field:
        x = grid.nodes
        if self.preset == "linear-w":
            values = self.slope * x + self.offset
        elif self.preset == "potential-linear":
            values = self._potential(x)
        elif self.preset == "dual-inverse-linear":
            values = np.clip((x - self.offset) / self.slope, 0.0, 1.0)
        else:
            primal = Grid1D(0.0, 1.0, int(self.params.get("primal_n", LEGENDRE_PRIMAL_INTERVALS)))
            values = legendre_transform(primal.nodes, self._potential(primal.nodes), x)
        return Field(grid, values)


@dataclass(slots=True)
class StepDiagnostics:
    """Per-step monitors recorded by every march."""

    max_speed: np.ndarray
    cfl: np.ndarray
    min_value: np.ndarray
    max_value: np.ndarray

    @classmethod
    def allocate(cls, steps: int) -> "StepDiagnostics":
        return cls(*(np.zeros(steps) for _ in range(4)))

    def record(self, index: int, speed: float, cfl: float, values: np.ndarray) -> None:
        self.max_speed[index] = speed
        self.cfl[index] = cfl
        self.min_value[index] = values.min()
        self.max_value[index] = values.max()

    def summary(self) -> Dict[str, float]:
        if self.cfl.size == 0:
            return {"steps": 0, "max_speed": 0.0, "max_cfl": 0.0, "min_value": 0.0, "max_value": 0.0}
        return {
            "steps": int(self.cfl.size),
            "max_speed": float(self.max_speed.max()),
            "max_cfl": float(self.cfl.max()),
            "min_value": float(self.min_value.min()),
            "max_value": float(self.max_value.max()),
        }


@dataclass
class SolutionTrace:
    """Snapshots of one march, ordered from t = T down to the earliest request."""

    problem: ProblemKind
    grid: Grid1D
    march: TimeMarch
    terminal: Field
    snapshots: List[Tuple[float, Field]]
    diagnostics: StepDiagnostics
    warnings: List[str] = field(default_factory=list)

    @property
    def times(self) -> List[float]:
        return [t for t, _ in self.snapshots]

    def snapshot(self, t: float) -> Field:
        """Field at the realized snapshot time nearest to ``t``."""
        target = self.march.time_of(self.march.step_of(t))
        for time, values in self.snapshots:
            if abs(time - target) <= 1e-12:
                return values
        raise ConfigurationError(f"No snapshot at t={t}; available: {', '.join(f'{s:g}' for s in self.times)}")


Advance = Callable[[np.ndarray], Tuple[np.ndarray, float]]
Monitor = Callable[[int, np.ndarray], None]


def _march(
    problem: ProblemKind,
    grid: Grid1D,
    march: TimeMarch,
    terminal: Field,
    initial: np.ndarray,
    advance: Advance,
    monitor: Optional[Monitor] = None,
) -> SolutionTrace:
    schedule = march.schedule()
    final = max(schedule)
    diagnostics = StepDiagnostics.allocate(final)
    snapshots: List[Tuple[float, Field]] = []
    logger.info(
        "Solving %s on [%g, %g] with n=%d, T=%g, dt=%g (%d steps)",
        problem.value, grid.a, grid.b, grid.n, march.T, march.dt, final,
    )

    values = initial
    if 0 in schedule:
        snapshots.append((schedule[0], Field(grid, values)))
    for step in range(1, final + 1):
        new, speed = advance(values)
        cfl = check_cfl(speed, march.dt, grid.dx, step=step)
        if not np.all(np.isfinite(new)):
            raise NonFiniteError(
                f"{problem.value} produced a non-finite value",
                step=step,
                diagnostics={"max_speed": speed, "cfl": cfl},
            )
        values = new
        diagnostics.record(step - 1, speed, cfl, values)
        if monitor is not None:
            monitor(step, values)
        if step in schedule:
            snapshots.append((schedule[step], Field(grid, values)))
            logger.debug("Captured %s snapshot at t=%g", problem.value, schedule[step])

    logger.info("Finished %s: max CFL %.4f", problem.value, diagnostics.summary()["max_cfl"])
    return SolutionTrace(problem, grid, march, terminal, snapshots, diagnostics)


def _terminal_field(terminal: Union[TerminalData, Field], grid: Grid1D) -> Field:
    if isinstance(terminal, Field):
        if terminal.grid != grid:
            raise ConfigurationError("Terminal field is sampled on a different grid")
        return terminal
    return terminal.sample(grid)


def _require_unit_interval(grid: Grid1D, problem: ProblemKind) -> None:
    if grid.a != 0.0 or grid.b != 1.0:
        raise ConfigurationError(f"{problem.value} is posed on [0, 1], got [{grid.a}, {grid.b}]")


def _require_dual_domain(grid: Grid1D, problem: ProblemKind) -> None:
    if not (grid.a < -1.0 and grid.b > 1.0):
        raise ConfigurationError(f"{problem.value} needs a domain containing [-1, 1], got [{grid.a}, {grid.b}]")


def _require_potential(model: CostModel) -> None:
    if not model.has_simplex_potential():
        raise MissingPotentialError(f"Cost model {model.name!r} has no potential for the potential formulations")


# ---------------------------------------------------------------------------
# Hamiltonians of the potential formulations


def primal_hamiltonian(model: CostModel) -> GodunovHamiltonian:
    """Ĥ(ζ, p) = −H̃(p, ζ); convex in p with its kink at p = 0."""
    return GodunovHamiltonian(
        eval=lambda x, p: -reduced_H_primal_kernel(p, x, model),
        critical_points=kink_at_zero,
        name="potential-primal",
    )


def dual_hamiltonian(model: CostModel) -> GodunovHamiltonian:
    """Ĥ(ῡ, p) = H̃(ῡ, p).

    ∂Ĥ/∂p = f(1, p) − f(2, p) − ½ῡ|ῡ|, so critical points are the real roots of
    that polynomial in p when the costs are polynomials.
    """
    gap = model.gap_polynomial

    def critical_points(x: np.ndarray) -> np.ndarray:
        return batched_real_roots(gap, 0.5 * x * np.abs(x))

    return GodunovHamiltonian(
        eval=lambda x, p: reduced_H_dual_kernel(x, p, model),
        critical_points=critical_points if gap is not None else None,
        name="potential-dual",
    )


# ---------------------------------------------------------------------------
# Solvers


def solve_reduced_primal(
    model: CostModel,
    grid: Grid1D,
    march: TimeMarch,
    terminal: Union[TerminalData, Field],
) -> SolutionTrace:
    """March w_τ + r(w, ζ) w_ζ = q(w, ζ) with outflow boundaries."""
    problem = ProblemKind.REDUCED_PRIMAL
    _require_unit_interval(grid, problem)
    start = _terminal_field(terminal, grid)
    zeta, dx, dt = grid.nodes, grid.dx, march.dt
    boundary = BoundarySpec.outflow()
    gap = model.mean_field_gap(zeta)

    def advance(w: np.ndarray) -> Tuple[np.ndarray, float]:
        velocity = reduced_r_kernel(w, zeta)
        source = gap - 0.5 * w * np.abs(w)
        return upwind_update(w, velocity, source, dt, dx, boundary), float(np.max(np.abs(velocity)))

    def monitor(step: int, w: np.ndarray) -> None:
        left = reduced_r_kernel(w[0], 0.0)
        right = reduced_r_kernel(w[-1], 1.0)
        if left > 0.0 or right < 0.0:
            raise NumericalError(
                "Boundary velocities point inward; outflow boundaries are invalid",
                step=step,
                diagnostics={"r_left": float(left), "r_right": float(right)},
            )

    return _march(problem, grid, march, start, np.array(start.values), advance, monitor)


class _DualRangeMonitor:
    """Warns once per run when Z leaves its expected range or the far field is steep."""

    def __init__(self, grid: Grid1D) -> None:
        self.grid = grid
        self.warnings: List[str] = []
        self._range_warned = False
        self._slope_warned = False

    def __call__(self, step: int, values: np.ndarray) -> None:
        if not self._range_warned:
            low, high = float(values.min()), float(values.max())
            if low < DUAL_RANGE[0] or high > DUAL_RANGE[1]:
                self._range_warned = True
                self._warn(f"Z left [{DUAL_RANGE[0]}, {DUAL_RANGE[1]}] at step {step}: range [{low:.4f}, {high:.4f}]")
        if not self._slope_warned and values.size > 2 * FAR_FIELD_OFFSET + 1:
            k = FAR_FIELD_OFFSET
            dx = self.grid.dx
            slopes = (abs(values[k + 1] - values[k - 1]), abs(values[-k] - values[-k - 2]))
            steepest = max(slopes) / (2.0 * dx)
            if steepest > FAR_FIELD_SLOPE:
                self._slope_warned = True
                self._warn(f"Far-field slope {steepest:.3f} exceeds {FAR_FIELD_SLOPE} at step {step}; domain may be too small")

    def _warn(self, message: str) -> None:
        logger.warning(message)
        self.warnings.append(message)


def solve_reduced_dual(
    model: CostModel,
    grid: Grid1D,
    march: TimeMarch,
    terminal: Union[TerminalData, Field],
    boundary: Optional[BoundarySpec] = None,
) -> SolutionTrace:
    """March Z_τ + q(ῡ, Z) Z_ῡ = r(ῡ, Z); Dirichlet ends re-imposed every step."""
    problem = ProblemKind.REDUCED_DUAL
    _require_dual_domain(grid, problem)
    boundary = boundary or BoundarySpec.dirichlet(1.0, 0.0)
    if boundary.kind != "dirichlet":
        raise ConfigurationError(f"{problem.value} needs Dirichlet far-field values, got {boundary.kind!r}")
    start = _terminal_field(terminal, grid)
    upsilon, dx, dt = grid.nodes, grid.dx, march.dt
    monitor = _DualRangeMonitor(grid)

    def advance(z: np.ndarray) -> Tuple[np.ndarray, float]:
        # Z sits in the ζ slot of r and q
        velocity = reduced_q_kernel(upsilon, z, model)
        source = reduced_r_kernel(upsilon, z)
        new = upwind_update(z, velocity, source, dt, dx, boundary)
        new[0], new[-1] = boundary.left_value, boundary.right_value
        return new, float(np.max(np.abs(velocity)))

    trace = _march(problem, grid, march, start, np.array(start.values), advance, monitor)
    trace.warnings.extend(monitor.warnings)
    return trace


def solve_potential_primal(
    model: CostModel,
    grid: Grid1D,
    march: TimeMarch,
    terminal: Union[TerminalData, Field],
    boundary: Optional[BoundarySpec] = None,
) -> SolutionTrace:
    """March Υ_τ + Ĥ(ζ, Υ_ζ) = 0 with state constraints emulated by large Dirichlet data."""
    problem = ProblemKind.POTENTIAL_PRIMAL
    _require_unit_interval(grid, problem)
    _require_potential(model)
    boundary = boundary or BoundarySpec.large_dirichlet()
    start = _terminal_field(terminal, grid)
    tabulated = primal_hamiltonian(model).tabulated(grid.nodes)
    dx, dt = grid.dx, march.dt

    def advance(upsilon: np.ndarray) -> Tuple[np.ndarray, float]:
        return godunov_update(upsilon, tabulated, dt, dx, boundary)

    return _march(problem, grid, march, start, boundary.initialize(np.array(start.values)), advance)


def solve_potential_dual(
    model: CostModel,
    grid: Grid1D,
    march: TimeMarch,
    terminal: Union[TerminalData, Field],
    boundary: Optional[BoundarySpec] = None,
) -> SolutionTrace:
    """March Φ_τ + Ĥ(ῡ, Φ_ῡ) = 0 with asymptotically linear ends (slope 1 left, 0 right)."""
    problem = ProblemKind.POTENTIAL_DUAL
    _require_dual_domain(grid, problem)
    _require_potential(model)
    boundary = boundary or BoundarySpec.asymptotic_slope(1.0, 0.0)
    start = _terminal_field(terminal, grid)
    tabulated = dual_hamiltonian(model).tabulated(grid.nodes)
    dx, dt = grid.dx, march.dt

    def advance(phi: np.ndarray) -> Tuple[np.ndarray, float]:
        return godunov_update(phi, tabulated, dt, dx, boundary)

    return _march(problem, grid, march, start, np.array(start.values), advance)


SOLVERS = {
    ProblemKind.REDUCED_PRIMAL: solve_reduced_primal,
    ProblemKind.REDUCED_DUAL: solve_reduced_dual,
    ProblemKind.POTENTIAL_PRIMAL: solve_potential_primal,
    ProblemKind.POTENTIAL_DUAL: solve_potential_dual,
}


__all__ = [
    "BoundarySpec",
    "ProblemKind",
    "SOLVERS",
    "SolutionTrace",
    "StepDiagnostics",
    "TERMINAL_PRESETS",
    "TerminalData",
    "dual_hamiltonian",
    "primal_hamiltonian",
    "solve_potential_dual",
    "solve_potential_primal",
    "solve_reduced_dual",
    "solve_reduced_primal",
]
