"""Grids, time marching and explicit scheme kernels.

Both schemes march in τ = T − t from terminal data. ``upwind_step`` handles
nonconservative advection-reaction ``u_τ + v(x, u) u_x = s(x, u)`` and
``godunov_step`` handles ``φ_τ + Ĥ(x, φ_x) = 0``. The public steppers work on
:class:`Field` objects; the ``*_update`` kernels work on raw arrays and are what
the solvers call inside their loops.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, Dict, Optional, Tuple

import numpy as np
from numpy.polynomial import Polynomial

from .errors import CFLViolationError, ConfigurationError, DomainError, NonFiniteError

logger = logging.getLogger(__name__)

NodeFunction = Callable[[np.ndarray, np.ndarray], np.ndarray]

STEP_COUNT_TOLERANCE = 1e-9
DENSE_SAMPLES = 33
SPEED_STEP = 1e-6
ROOT_IMAG_TOLERANCE = 1e-9

BOUNDARY_KINDS = ("outflow", "dirichlet", "large-dirichlet", "asymptotic-slope")


@dataclass(frozen=True, slots=True)
class Grid1D:
    """Equidistant grid of ``n`` intervals on [a, b]."""

    a: float
    b: float
    n: int

    def __post_init__(self) -> None:
        if not (np.isfinite(self.a) and np.isfinite(self.b)):
            raise ConfigurationError(f"Grid endpoints must be finite, got [{self.a}, {self.b}]")
        if not self.b > self.a:
            raise ConfigurationError(f"Grid requires b > a, got [{self.a}, {self.b}]")
        if isinstance(self.n, bool) or not isinstance(self.n, (int, np.integer)) or self.n < 2:
            raise ConfigurationError(f"Grid requires an integer n >= 2, got {self.n}")

    @property
    def dx(self) -> float:
        return (self.b - self.a) / self.n

    @property
    def size(self) -> int:
        return self.n + 1

    @property
    def nodes(self) -> np.ndarray:
        return self.a + self.dx * np.arange(self.n + 1)

    def sample(self, function: Callable[[np.ndarray], np.ndarray]) -> "Field":
        return Field(self, np.asarray(function(self.nodes), dtype=float))

    def constant(self, value: float) -> "Field":
        return Field(self, np.full(self.size, float(value)))


@dataclass(frozen=True, slots=True)
class Field:
    """Nodal samples of a solution on a grid."""

    grid: Grid1D
    values: np.ndarray

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=float)
        if values.shape != (self.grid.size,):
            raise ConfigurationError(
                f"Field needs {self.grid.size} values for the grid, got shape {values.shape}"
            )
        if not np.all(np.isfinite(values)):
            bad = int(np.flatnonzero(~np.isfinite(values))[0])
            raise NonFiniteError(f"Field has a non-finite value at node {bad}")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def x(self) -> np.ndarray:
        return self.grid.nodes

    def with_values(self, values: np.ndarray) -> "Field":
        return Field(self.grid, values)

    def __len__(self) -> int:
        return self.grid.size


@dataclass(frozen=True)
class TimeMarch:
    """Horizon, step and requested snapshot times of a backward march."""

    T: float
    dt: float
    snapshot_times: Tuple[float, ...] = ()

    def __post_init__(self) -> None:
        if not (np.isfinite(self.T) and self.T > 0.0):
            raise ConfigurationError(f"Horizon T must be positive and finite, got {self.T}")
        if not (np.isfinite(self.dt) and self.dt > 0.0):
            raise ConfigurationError(f"Time step dt must be positive and finite, got {self.dt}")
        ratio = self.T / self.dt
        if abs(ratio - round(ratio)) > STEP_COUNT_TOLERANCE * max(1.0, ratio):
            raise ConfigurationError(f"T / dt must be an integer step count, got {ratio}")
        times = tuple(float(t) for t in self.snapshot_times) or (float(self.T), 0.0)
        for t in times:
            if not np.isfinite(t) or t < -self.dt / 2 or t > self.T + self.dt / 2:
                raise ConfigurationError(f"Snapshot time {t} lies outside [0, {self.T}]")
        object.__setattr__(self, "snapshot_times", tuple(sorted(set(times), reverse=True)))

    @property
    def steps(self) -> int:
        return int(round(self.T / self.dt))

    def step_of(self, t: float) -> int:
        """Nearest step index k with t ≈ T − k·dt."""
        return min(max(int(round((self.T - t) / self.dt)), 0), self.steps)

    def time_of(self, step: int) -> float:
        return round(self.T - step * self.dt, 12) + 0.0

    def schedule(self) -> Dict[int, float]:
        """Map of step index to realized snapshot time."""
        return {self.step_of(t): self.time_of(self.step_of(t)) for t in self.snapshot_times}

    @property
    def final_step(self) -> int:
        return max(self.schedule())


@dataclass(frozen=True, slots=True)
class BoundarySpec:
    """Boundary treatment shared by both schemes.

    ``outflow`` uses interior one-sided differences, ``dirichlet`` imposes
    ``left_value``/``right_value`` at inflow ends, ``large-dirichlet`` holds both
    ends at ``large_value`` and ``asymptotic-slope`` extrapolates each end from
    its neighbour with ``left_slope``/``right_slope``.
    """

    kind: str = "outflow"
    left_value: float = 0.0
    right_value: float = 0.0
    large_value: float = 10.0
    left_slope: float = 1.0
    right_slope: float = 0.0

    def __post_init__(self) -> None:
        if self.kind not in BOUNDARY_KINDS:
            raise ConfigurationError(f"Unknown boundary kind {self.kind!r}; expected one of {', '.join(BOUNDARY_KINDS)}")
        numbers = (self.left_value, self.right_value, self.large_value, self.left_slope, self.right_slope)
        if not all(np.isfinite(v) for v in numbers):
            raise ConfigurationError("Boundary values must be finite")
        if self.large_value <= 0.0:
            raise ConfigurationError(f"large_value must be positive, got {self.large_value}")

    @classmethod
    def outflow(cls) -> "BoundarySpec":
        return cls("outflow")

    @classmethod
    def dirichlet(cls, left: float, right: float) -> "BoundarySpec":
        return cls("dirichlet", left_value=left, right_value=right)

    @classmethod
    def large_dirichlet(cls, value: float = 10.0) -> "BoundarySpec":
        return cls("large-dirichlet", large_value=value)

    @classmethod
    def asymptotic_slope(cls, left: float = 1.0, right: float = 0.0) -> "BoundarySpec":
        return cls("asymptotic-slope", left_slope=left, right_slope=right)

    def initialize(self, values: np.ndarray) -> np.ndarray:
        """Terminal data adjusted for kinds that hold the boundary from the start."""
        if self.kind != "large-dirichlet":
            return values
        held = np.array(values, dtype=float)
        held[0] = held[-1] = self.large_value
        return held

    def apply(self, new: np.ndarray, velocity: Optional[np.ndarray], dx: float) -> None:
        """Impose the boundary on an updated array in place."""
        if self.kind == "dirichlet":
            # inflow ends only; outward-pointing ends keep their upwind update
            if velocity is None or velocity[0] >= 0.0:
                new[0] = self.left_value
            if velocity is None or velocity[-1] < 0.0:
                new[-1] = self.right_value
        elif self.kind == "large-dirichlet":
            new[0] = new[-1] = self.large_value
        elif self.kind == "asymptotic-slope":
            new[0] = new[1] - self.left_slope * dx
            new[-1] = new[-2] + self.right_slope * dx


@dataclass(frozen=True)
class GodunovHamiltonian:
    """Vectorized Hamiltonian Ĥ(x, p) with optional critical points in p.

    ``critical_points`` maps an array of nodes to an ``(n, k)`` array of p
    values where ∂Ĥ/∂p vanishes or kinks (NaN entries are ignored). When it is
    ``None`` the flux falls back to dense sampling of each interval.
    """

    eval: NodeFunction
    critical_points: Optional[Callable[[np.ndarray], np.ndarray]] = None
    name: str = "H"

    def critical_table(self, x: np.ndarray) -> Optional[np.ndarray]:
        if self.critical_points is None:
            return None
        x = np.atleast_1d(np.asarray(x, dtype=float))
        table = np.asarray(self.critical_points(x), dtype=float)
        if table.ndim == 1:
            table = table[:, None]
        return table

    def tabulated(self, nodes: np.ndarray) -> "TabulatedHamiltonian":
        """Freeze critical points on fixed nodes for repeated steps."""
        nodes = np.asarray(nodes, dtype=float)
        return TabulatedHamiltonian(self, nodes, self.critical_table(nodes))


@dataclass(frozen=True)
class TabulatedHamiltonian:
    hamiltonian: GodunovHamiltonian
    nodes: np.ndarray
    table: Optional[np.ndarray]


def kink_at_zero(x: np.ndarray) -> np.ndarray:
    """Critical-point table with the single entry p = 0 at every node."""
    return np.zeros((np.asarray(x).size, 1))


def batched_real_roots(polynomial: Polynomial, shifts: np.ndarray) -> np.ndarray:
    """Real roots of ``polynomial(p) − shiftₖ`` for every shift, NaN padded.

    Uses one stacked companion-matrix eigenvalue solve. Returns an array of
    shape ``(len(shifts), degree)``.
    """
    shifts = np.atleast_1d(np.asarray(shifts, dtype=float))
    coef = polynomial.trim().coef
    degree = coef.size - 1
    if degree < 1:
        return np.empty((shifts.size, 0))
    lowest = (coef[0] - shifts) / coef[-1]
    monic = np.broadcast_to(coef[1:-1] / coef[-1], (shifts.size, degree - 1))
    companion = np.zeros((shifts.size, degree, degree))
    if degree > 1:
        companion[:, np.arange(1, degree), np.arange(degree - 1)] = 1.0
    companion[:, 0, -1] = -lowest
    if degree > 1:
        companion[:, 1:, -1] = -monic
    roots = np.linalg.eigvals(companion)
    real = np.abs(roots.imag) <= ROOT_IMAG_TOLERANCE * (1.0 + np.abs(roots.real))
    return np.where(real, roots.real, np.nan)


# ---------------------------------------------------------------------------
# Stability


def cfl_number(max_speed: float, grid: Grid1D, march: TimeMarch) -> float:
    """max_speed · dt / Δx; callers reject values above 1."""
    if max_speed < 0.0:
        raise DomainError(f"max_speed must be nonnegative, got {max_speed}")
    return float(max_speed) * march.dt / grid.dx


def check_cfl(max_speed: float, dt: float, dx: float, step: Optional[int] = None) -> float:
    cfl = float(max_speed) * dt / dx
    if not np.isfinite(cfl):
        raise NonFiniteError("Characteristic speed is not finite", step=step)
    if cfl > 1.0:
        raise CFLViolationError(
            f"CFL number {cfl:.4f} exceeds 1 (max speed {max_speed:.4g}, dt {dt:g}, dx {dx:g})",
            step=step,
            diagnostics={"cfl": cfl, "max_speed": float(max_speed), "dt": dt, "dx": dx},
        )
    return cfl


# ---------------------------------------------------------------------------
# Upwind scheme


def one_sided_differences(u: np.ndarray, dx: float) -> Tuple[np.ndarray, np.ndarray]:
    """Backward and forward differences; end nodes reuse the interior one."""
    diff = np.diff(u) / dx
    backward = np.concatenate((diff[:1], diff))
    forward = np.concatenate((diff, diff[-1:]))
    return backward, forward


def upwind_update(
    u: np.ndarray,
    velocity: np.ndarray,
    source: np.ndarray,
    dt: float,
    dx: float,
    boundary: BoundarySpec,
) -> np.ndarray:
    """One explicit upwind step on raw arrays; v ≥ 0 takes the backward difference."""
    backward, forward = one_sided_differences(u, dx)
    slope = np.where(velocity >= 0.0, backward, forward)
    new = u - dt * velocity * slope + dt * source
    boundary.apply(new, velocity, dx)
    return new


def upwind_step(
    field: Field,
    velocity: NodeFunction,
    source: NodeFunction,
    dt: float,
    boundary: BoundarySpec,
) -> Field:
    """Explicit Euler upwind step of u_τ + v(x, u) u_x = s(x, u)."""
    x, u = field.x, np.asarray(field.values)
    v = np.broadcast_to(np.asarray(velocity(x, u), dtype=float), u.shape)
    s = np.broadcast_to(np.asarray(source(x, u), dtype=float), u.shape)
    check_cfl(float(np.max(np.abs(v))), dt, field.grid.dx)
    return field.with_values(upwind_update(u, v, s, dt, field.grid.dx, boundary))


# ---------------------------------------------------------------------------
# Godunov scheme


def _flux_candidates(lo: np.ndarray, hi: np.ndarray, table: Optional[np.ndarray]) -> np.ndarray:
    if table is None:
        fractions = np.linspace(0.0, 1.0, DENSE_SAMPLES)[1:-1]
        interior = lo[:, None] + (hi - lo)[:, None] * fractions[None, :]
    else:
        inside = (table > lo[:, None]) & (table < hi[:, None])
        interior = np.where(inside, table, lo[:, None])
    return np.concatenate((lo[:, None], hi[:, None], interior), axis=1)


def godunov_select(
    H: GodunovHamiltonian,
    x: np.ndarray,
    p_left: np.ndarray,
    p_right: np.ndarray,
    table: Optional[np.ndarray],
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Godunov fluxes, the extremal slopes attaining them, and every slope compared per node."""
    lo = np.minimum(p_left, p_right)
    hi = np.maximum(p_left, p_right)
    candidates = _flux_candidates(lo, hi, table)
    values = np.asarray(H.eval(x[:, None], candidates), dtype=float)
    pick = np.where(p_left <= p_right, np.argmin(values, axis=1), np.argmax(values, axis=1))
    rows = np.arange(lo.size)
    return values[rows, pick], candidates[rows, pick], candidates


def godunov_flux(H: GodunovHamiltonian, x: float, p_left: float, p_right: float) -> float:
    """min of Ĥ(x, ·) on [p_left, p_right] if p_left ≤ p_right, else max on [p_right, p_left]."""
    nodes = np.array([x], dtype=float)
    flux, _, _ = godunov_select(H, nodes, np.array([p_left], dtype=float), np.array([p_right], dtype=float), H.critical_table(nodes))
    return float(flux[0])


def hamiltonian_speed(H: GodunovHamiltonian, x: np.ndarray, p: np.ndarray) -> np.ndarray:
    """|∂Ĥ/∂p| by central differences at the given slopes."""
    h = SPEED_STEP * (1.0 + np.abs(p))
    return np.abs(H.eval(x, p + h) - H.eval(x, p - h)) / (2.0 * h)


def godunov_update(
    phi: np.ndarray,
    tabulated: TabulatedHamiltonian,
    dt: float,
    dx: float,
    boundary: BoundarySpec,
) -> Tuple[np.ndarray, float]:
    """One explicit Godunov step on raw arrays; returns new values and max speed."""
    backward, forward = one_sided_differences(phi, dx)
    x = tabulated.nodes
    H = tabulated.hamiltonian
    flux, p_star, candidates = godunov_select(H, x, backward, forward, tabulated.table)
    # max |∂Ĥ/∂p| over the interval endpoints and the critical points between them
    speeds = np.max(hamiltonian_speed(H, x[:, None], candidates), axis=1)
    if boundary.kind == "large-dirichlet":
        # slopes into the held end values only emulate the state constraint
        inner = np.array([1, -2])
        speeds[inner] = hamiltonian_speed(H, x[inner], p_star[inner])
    if boundary.kind != "outflow":
        # imposed end values are not marched
        speeds = speeds[1:-1]
    new = phi - dt * flux
    boundary.apply(new, None, dx)
    return new, float(np.max(speeds))


def godunov_step(field: Field, H: GodunovHamiltonian, dt: float, boundary: BoundarySpec) -> Field:
    """Explicit Euler Godunov step of φ_τ + Ĥ(x, φ_x) = 0."""
    tabulated = H.tabulated(field.x)
    new, speed = godunov_update(np.asarray(field.values), tabulated, dt, field.grid.dx, boundary)
    check_cfl(speed, dt, field.grid.dx)
    return field.with_values(new)


# ---------------------------------------------------------------------------
# Derived fields


def central_gradient(field: Field) -> Field:
    """Central differences inside, second-order one-sided differences at the ends."""
    return field.with_values(np.gradient(np.asarray(field.values), field.grid.dx, edge_order=2))


def legendre_transform(x: np.ndarray, values: np.ndarray, dual_nodes: np.ndarray) -> np.ndarray:
    """max over j of (xⱼ·yₖ − valuesⱼ) for every dual node yₖ."""
    return np.max(np.outer(dual_nodes, x) - np.asarray(values)[None, :], axis=1)


__all__ = [
    "BOUNDARY_KINDS",
    "BoundarySpec",
    "Field",
    "GodunovHamiltonian",
    "Grid1D",
    "TabulatedHamiltonian",
    "TimeMarch",
    "batched_real_roots",
    "central_gradient",
    "cfl_number",
    "check_cfl",
    "godunov_flux",
    "godunov_select",
    "godunov_step",
    "godunov_update",
    "hamiltonian_speed",
    "kink_at_zero",
    "legendre_transform",
    "one_sided_differences",
    "upwind_step",
    "upwind_update",
]
