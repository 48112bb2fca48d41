"""Model-level functions of the two-state game with quadratic switching cost.

Cost, Hamiltonians, optimal switching rates, drifts and the reduced
coefficients ``r`` and ``q`` of the scalar primal equation. Every evaluator is
a pure function; the ``*_kernel`` variants accept numpy arrays and skip domain
checks so the schemes can evaluate slightly outside the simplex.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np
from numpy.polynomial import Polynomial

from .errors import ConfigurationError, DomainError, InvalidStateError, MissingPotentialError

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]
StateCost = Callable[[np.ndarray], np.ndarray]
Potential = Callable[[np.ndarray, np.ndarray], np.ndarray]

STATES = (1, 2)
SIMPLEX_TOLERANCE = 1e-12

PRESETS = ("example1", "example2-paper", "example2-gradient")


def positive_part(x: ArrayLike) -> ArrayLike:
    """(x)⁺ = max(x, 0)."""
    return np.maximum(x, 0.0)


def negative_part(x: ArrayLike) -> ArrayLike:
    """(x)⁻ = max(−x, 0)."""
    return np.maximum(-np.asarray(x, dtype=float), 0.0)


def _check_state(i: int) -> int:
    if i not in STATES:
        raise InvalidStateError(f"State index must be 1 or 2, got {i!r}")
    return i


def _check_zeta(zeta: ArrayLike) -> None:
    values = np.asarray(zeta, dtype=float)
    if np.any(values < 0.0) or np.any(values > 1.0) or not np.all(np.isfinite(values)):
        raise DomainError(f"zeta must lie in [0, 1], got {zeta!r}")


@dataclass(frozen=True, slots=True)
class ProbabilityPair:
    """Fractions (θ₁, θ₂) of players in each state."""

    theta1: float
    theta2: float

    def __post_init__(self) -> None:
        if not (np.isfinite(self.theta1) and np.isfinite(self.theta2)):
            raise DomainError("Probability entries must be finite")
        if self.theta1 < 0.0 or self.theta2 < 0.0:
            raise DomainError(f"Probability entries must be nonnegative, got {self.theta1}, {self.theta2}")
        if abs(self.theta1 + self.theta2 - 1.0) > SIMPLEX_TOLERANCE:
            raise DomainError(f"Probability entries must sum to 1, got {self.theta1 + self.theta2}")

    @classmethod
    def from_zeta(cls, zeta: float) -> "ProbabilityPair":
        _check_zeta(zeta)
        return cls(float(zeta), 1.0 - float(zeta))

    @property
    def zeta(self) -> float:
        return self.theta1

    def fraction(self, i: int) -> float:
        return self.theta1 if _check_state(i) == 1 else self.theta2


@dataclass(frozen=True, slots=True)
class ValuePair:
    """Values (z¹, z²) of the two states; also used for dual coordinates (υ¹, υ²)."""

    z1: float
    z2: float

    def __post_init__(self) -> None:
        if not (np.isfinite(self.z1) and np.isfinite(self.z2)):
            raise DomainError(f"Value entries must be finite, got {self.z1}, {self.z2}")

    @property
    def difference(self) -> float:
        """Reduced coordinate w = z¹ − z²."""
        return self.z1 - self.z2

    def value(self, i: int) -> float:
        return self.z1 if _check_state(i) == 1 else self.z2

    def shifted(self, c: float) -> "ValuePair":
        return ValuePair(self.z1 + c, self.z2 + c)


@dataclass(frozen=True)
class CostModel:
    """Running-cost data of a separable two-state game.

    ``state_costs`` hold f(1, ·) and f(2, ·) as functions of θ₁ along the
    simplex (θ₂ = 1 − θ₁). ``potential`` is F(θ₁, θ₂) when f is its gradient;
    polynomial formulas are valid for any real argument. The switching cost is
    always the quadratic c₀(i, μ) = ½ Σ_{j≠i} μⱼ².
    """

    name: str
    state_costs: Tuple[StateCost, StateCost]
    potential: Optional[Potential] = None
    kappa: float = 0.0
    lipschitz: float = 1.0

    # -- construction -----------------------------------------------------

    @classmethod
    def from_preset(cls, preset: str, kappa: float = 1.0) -> "CostModel":
        """Return one of the declared cost families."""
        zeta = Polynomial([0.0, 1.0])
        rest = Polynomial([1.0, -1.0])
        if preset == "example1":
            return cls(
                name=preset,
                state_costs=(rest, zeta),
                potential=lambda t1, t2: t1 * t2,
                lipschitz=1.0,
            )
        if kappa < 0.0 or not np.isfinite(kappa):
            raise ConfigurationError(f"kappa must be a nonnegative finite number, got {kappa}")
        if preset == "example2-gradient":
            return cls(
                name=preset,
                state_costs=(2.0 * kappa * zeta * rest**2, 2.0 * kappa * zeta**2 * rest),
                potential=lambda t1, t2: kappa * t1**2 * t2**2,
                kappa=kappa,
                lipschitz=2.0 * kappa,
            )
        if preset == "example2-paper":
            # swapped gradient of κθ₁²θ₂²: not a two-variable gradient, but the
            # reduced potential still exists along the simplex
            return cls(
                name=preset,
                state_costs=(2.0 * kappa * zeta**2 * rest, 2.0 * kappa * zeta * rest**2),
                kappa=kappa,
                lipschitz=2.0 * kappa,
            )
        raise ConfigurationError(f"Unknown cost preset {preset!r}; expected one of {', '.join(PRESETS)}")

    @classmethod
    def from_coefficients(
        cls,
        f1: Sequence[float],
        f2: Sequence[float],
        name: str = "polynomial",
    ) -> "CostModel":
        """Build a model from polynomial coefficients in θ₁ (lowest degree first)."""
        if not f1 or not f2:
            raise ConfigurationError("Polynomial costs need at least one coefficient per state")
        p1, p2 = Polynomial(list(f1)), Polynomial(list(f2))
        samples = np.linspace(0.0, 1.0, 1001)
        lipschitz = float(max(np.max(np.abs(p1.deriv()(samples))), np.max(np.abs(p2.deriv()(samples)))))
        return cls(name=name, state_costs=(p1, p2), lipschitz=max(lipschitz, 1e-12))

    # -- evaluation ---------------------------------------------------------

    def f(self, i: int, theta: ProbabilityPair) -> float:
        """Mean-field cost f(i, θ)."""
        return float(self.state_cost(i, theta.theta1))

    def state_cost(self, i: int, zeta: ArrayLike) -> np.ndarray:
        """f(i, (ζ, 1 − ζ)), vectorized in ζ."""
        return np.asarray(self.state_costs[_check_state(i) - 1](np.asarray(zeta, dtype=float)), dtype=float)

    @property
    def has_potential(self) -> bool:
        return self.potential is not None

    def F(self, theta1: ArrayLike, theta2: ArrayLike) -> np.ndarray:
        if not self.has_potential:
            raise MissingPotentialError(f"Cost model {self.name!r} does not declare a potential F")
        return np.asarray(self.potential(np.asarray(theta1, dtype=float), np.asarray(theta2, dtype=float)), dtype=float)

    @property
    def gap_polynomial(self) -> Optional[Polynomial]:
        """f(1, ·) − f(2, ·) as a polynomial in ζ, when both costs are polynomials."""
        f1, f2 = self.state_costs
        if isinstance(f1, Polynomial) and isinstance(f2, Polynomial):
            return (f1 - f2).trim()
        return None

    def mean_field_gap(self, zeta: ArrayLike) -> np.ndarray:
        """f(1, (ζ, 1 − ζ)) − f(2, (ζ, 1 − ζ))."""
        z = np.asarray(zeta, dtype=float)
        return np.asarray(self.state_costs[0](z) - self.state_costs[1](z), dtype=float)

    def has_simplex_potential(self) -> bool:
        return self.has_potential or self.gap_polynomial is not None

    def simplex_potential(self, zeta: ArrayLike) -> np.ndarray:
        """Reduced potential F̃ with F̃′ = f(1, ·) − f(2, ·).

        Uses F(ζ, 1 − ζ) when F exists; otherwise the antiderivative of the
        polynomial gap vanishing at ζ = 0. Both extend to any real ζ.
        """
        z = np.asarray(zeta, dtype=float)
        if self.has_potential:
            return np.asarray(self.potential(z, 1.0 - z), dtype=float)
        gap = self.gap_polynomial
        if gap is None:
            raise MissingPotentialError(
                f"Cost model {self.name!r} has neither a potential nor polynomial state costs"
            )
        return np.asarray(gap.integ(lbnd=0.0)(z), dtype=float)

    def structure_defects(self, samples: int = 101, step: float = 1e-5, tolerance: float = 1e-6) -> List[str]:
        """Sampled checks of the gradient and Lipschitz declarations."""
        defects: List[str] = []
        zeta = np.linspace(0.0, 1.0, samples)
        if self.has_potential:
            t1, t2 = zeta, 1.0 - zeta
            dF1 = (self.F(t1 + step, t2) - self.F(t1 - step, t2)) / (2.0 * step)
            dF2 = (self.F(t1, t2 + step) - self.F(t1, t2 - step)) / (2.0 * step)
            for i, derivative in ((1, dF1), (2, dF2)):
                worst = float(np.max(np.abs(self.state_cost(i, zeta) - derivative)))
                if worst > tolerance:
                    defects.append(f"f({i}, .) differs from dF/dtheta{i} by {worst:.3e}")
        for i in STATES:
            quotients = np.abs(np.diff(self.state_cost(i, zeta))) / np.diff(zeta)
            worst = float(np.max(quotients))
            if worst > self.lipschitz * (1.0 + 1e-9):
                defects.append(f"f({i}, .) difference quotient {worst:.3e} exceeds Lipschitz bound {self.lipschitz}")
        return defects


# ---------------------------------------------------------------------------
# Pointwise game functions


def switching_cost(i: int, rates: Sequence[float]) -> float:
    """Quadratic switching cost c₀(i, μ) = ½ Σ_{j≠i} μⱼ²."""
    _check_state(i)
    return 0.5 * sum(float(mu) ** 2 for j, mu in zip(STATES, rates) if j != i)


def running_cost(i: int, theta: ProbabilityPair, rates: Sequence[float], model: CostModel) -> float:
    """c(i, θ, μ) = f(i, θ) + c₀(i, μ)."""
    return model.f(i, theta) + switching_cost(i, rates)


def hamiltonian_h(z: ValuePair, theta: ProbabilityPair, i: int, model: CostModel) -> float:
    """Closed-form generalized Legendre transform of the quadratic running cost."""
    j = 2 if _check_state(i) == 1 else 1
    gap = z.value(i) - z.value(j)
    return model.f(i, theta) - 0.5 * float(positive_part(gap)) ** 2


def optimal_rate(z: ValuePair, theta: ProbabilityPair, i: int) -> Tuple[float, float]:
    """Minimizing switching rates (α*₁, α*₂), with α*₁ = −α*₂."""
    if _check_state(i) == 1:
        alpha2 = float(positive_part(z.z1 - z.z2))
        return -alpha2, alpha2
    alpha1 = float(positive_part(z.z2 - z.z1))
    return alpha1, -alpha1


def drift_g1(z: ValuePair, theta: ProbabilityPair) -> float:
    """g₁(z, θ) = −θ₁ (z¹ − z²)⁺ + θ₂ (z² − z¹)⁺; g₂ = −g₁."""
    return float(-theta.theta1 * positive_part(z.z1 - z.z2) + theta.theta2 * positive_part(z.z2 - z.z1))


def hamiltonian_H(z: ValuePair, theta: ProbabilityPair, model: CostModel) -> float:
    """Two-state Hamiltonian of a potential game."""
    kinetic = theta.theta1 * float(positive_part(z.z1 - z.z2)) ** 2 + theta.theta2 * float(positive_part(z.z2 - z.z1)) ** 2
    return float(model.F(theta.theta1, theta.theta2)) - 0.5 * kinetic


def brute_force_hamiltonian(
    z: ValuePair,
    theta: ProbabilityPair,
    i: int,
    model: CostModel,
    rate_max: float = 10.0,
    rate_step: float = 0.01,
) -> float:
    """Minimize c(i, θ, μ) + μ·Δᵢz over a grid of rates.

    Only the rate towards the other state matters: c does not depend on μᵢ and
    the i-th component of Δᵢz vanishes.
    """
    j = 2 if _check_state(i) == 1 else 1
    grid = np.linspace(0.0, rate_max, int(round(rate_max / rate_step)) + 1)
    objective = model.f(i, theta) + 0.5 * grid**2 + grid * (z.value(j) - z.value(i))
    return float(np.min(objective))


# ---------------------------------------------------------------------------
# Reduced coefficients and Hamiltonians


def reduced_r_kernel(w: ArrayLike, zeta: ArrayLike) -> np.ndarray:
    """r(w, ζ) = ζ w⁺ − (1 − ζ) w⁻ without domain checks."""
    w = np.asarray(w, dtype=float)
    zeta = np.asarray(zeta, dtype=float)
    return zeta * positive_part(w) - (1.0 - zeta) * negative_part(w)


def reduced_q_kernel(w: ArrayLike, zeta: ArrayLike, model: CostModel) -> np.ndarray:
    """q(w, ζ) = f(1, ·) − f(2, ·) − ½ w|w| without domain checks."""
    w = np.asarray(w, dtype=float)
    return model.mean_field_gap(zeta) - 0.5 * w * np.abs(w)


def reduced_r(w: ArrayLike, zeta: ArrayLike, model: Optional[CostModel] = None) -> ArrayLike:
    """Advection velocity of the reduced primal equation; independent of f."""
    _check_zeta(zeta)
    result = reduced_r_kernel(w, zeta)
    return float(result) if result.ndim == 0 else result


def reduced_q(w: ArrayLike, zeta: ArrayLike, model: CostModel) -> ArrayLike:
    """Source of the reduced primal equation."""
    _check_zeta(zeta)
    result = reduced_q_kernel(w, zeta, model)
    return float(result) if result.ndim == 0 else result


def reduced_H_primal_kernel(p: ArrayLike, zeta: ArrayLike, model: CostModel) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    zeta = np.asarray(zeta, dtype=float)
    kinetic = zeta * positive_part(p) ** 2 + (1.0 - zeta) * negative_part(p) ** 2
    return -0.5 * kinetic + model.simplex_potential(zeta)


def reduced_H_primal(p: ArrayLike, zeta: ArrayLike, model: CostModel) -> ArrayLike:
    """H̃(p, ζ) = −½[ζ(p⁺)² + (1 − ζ)(p⁻)²] + F(ζ, 1 − ζ); concave in p."""
    _check_zeta(zeta)
    result = reduced_H_primal_kernel(p, zeta, model)
    return float(result) if result.ndim == 0 else result


def reduced_H_dual_kernel(upsilon: ArrayLike, p: ArrayLike, model: CostModel) -> np.ndarray:
    upsilon = np.asarray(upsilon, dtype=float)
    p = np.asarray(p, dtype=float)
    return -0.5 * (negative_part(upsilon) ** 2 + p * np.abs(upsilon) * upsilon) + model.simplex_potential(p)


def reduced_H_dual(upsilon: ArrayLike, p: ArrayLike, model: CostModel) -> ArrayLike:
    """H̃(ῡ, p) = −½[(ῡ⁻)² + p|ῡ|ῡ] + F(p, 1 − p) for any real p."""
    result = reduced_H_dual_kernel(upsilon, p, model)
    return float(result) if result.ndim == 0 else result


# ---------------------------------------------------------------------------
# Structural assumptions


@dataclass(slots=True)
class AssumptionViolation:
    state: int
    theta: ProbabilityPair
    alpha: Tuple[float, float]
    alpha_prime: Tuple[float, float]
    margin: float


@dataclass(slots=True)
class AssumptionReport:
    """Sampled evidence for strong convexity (A1) and superlinear growth (A2)."""

    gamma: float
    samples: int
    violations: List[AssumptionViolation] = field(default_factory=list)
    growth: List[Tuple[float, float]] = field(default_factory=list)

    @property
    def convexity_holds(self) -> bool:
        return not self.violations

    @property
    def superlinear(self) -> bool:
        ratios = [ratio for _, ratio in self.growth]
        return len(ratios) > 1 and all(b > a for a, b in zip(ratios, ratios[1:]))


def _cost_gradient(i: int, rates: np.ndarray) -> np.ndarray:
    gradient = np.array(rates, dtype=float)
    gradient[i - 1] = 0.0
    return gradient


def _convexity_margin(
    i: int, theta: ProbabilityPair, alpha: np.ndarray, alpha_prime: np.ndarray, gamma: float, model: CostModel
) -> float:
    lhs = running_cost(i, theta, alpha_prime, model) - running_cost(i, theta, alpha, model)
    delta = alpha_prime - alpha
    delta[i - 1] = 0.0  # c does not depend on the i-th rate
    rhs = float(_cost_gradient(i, alpha) @ delta) + gamma * float(delta @ delta)
    return lhs - rhs


def validate_assumptions(
    model: CostModel,
    gamma: float,
    samples: int = 1000,
    seed: int = 0,
    rate_max: float = 10.0,
) -> AssumptionReport:
    """Spot-check (A1) at random (i, θ, α, α′) and tabulate c/‖α‖ for (A2)."""
    if gamma <= 0.0:
        raise DomainError(f"gamma must be positive, got {gamma}")
    rng = np.random.default_rng(seed)
    report = AssumptionReport(gamma=gamma, samples=samples)

    for _ in range(samples):
        i = int(rng.integers(1, 3))
        theta = ProbabilityPair.from_zeta(float(rng.uniform(0.0, 1.0)))
        alpha = rng.uniform(0.0, rate_max, size=2)
        alpha_prime = rng.uniform(0.0, rate_max, size=2)
        margin = _convexity_margin(i, theta, alpha, alpha_prime, gamma, model)
        scale = 1.0 + abs(running_cost(i, theta, alpha_prime, model)) + abs(running_cost(i, theta, alpha, model))
        if margin < -1e-9 * scale:
            report.violations.append(
                AssumptionViolation(
                    state=i,
                    theta=theta,
                    alpha=(float(alpha[0]), float(alpha[1])),
                    alpha_prime=(float(alpha_prime[0]), float(alpha_prime[1])),
                    margin=margin,
                )
            )

    theta = ProbabilityPair.from_zeta(0.5)
    for magnitude in (1.0, 10.0, 100.0, 1000.0, 10000.0):
        rates = (0.0, magnitude)
        report.growth.append((magnitude, running_cost(1, theta, rates, model) / magnitude))

    logger.debug("Assumption check: %d violations of (A1) with gamma=%s", len(report.violations), gamma)
    return report


__all__ = [
    "AssumptionReport",
    "AssumptionViolation",
    "CostModel",
    "PRESETS",
    "ProbabilityPair",
    "STATES",
    "ValuePair",
    "brute_force_hamiltonian",
    "drift_g1",
    "hamiltonian_H",
    "hamiltonian_h",
    "negative_part",
    "optimal_rate",
    "positive_part",
    "reduced_H_dual",
    "reduced_H_dual_kernel",
    "reduced_H_primal",
    "reduced_H_primal_kernel",
    "reduced_q",
    "reduced_q_kernel",
    "reduced_r",
    "reduced_r_kernel",
    "running_cost",
    "switching_cost",
    "validate_assumptions",
]
