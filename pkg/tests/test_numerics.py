from __future__ import annotations

import numpy as np
import pytest
from numpy.polynomial import Polynomial

from twostate_mfg.errors import CFLViolationError, ConfigurationError, DomainError, NonFiniteError
from twostate_mfg.numerics import (
    BoundarySpec,
    Field,
    GodunovHamiltonian,
    Grid1D,
    TimeMarch,
    batched_real_roots,
    central_gradient,
    cfl_number,
    check_cfl,
    godunov_flux,
    godunov_step,
    godunov_update,
    kink_at_zero,
    legendre_transform,
    upwind_step,
)

QUADRATIC = GodunovHamiltonian(eval=lambda x, p: 0.5 * p**2 + 0.0 * x, critical_points=kink_at_zero, name="p^2/2")
SAMPLED_QUADRATIC = GodunovHamiltonian(eval=lambda x, p: 0.5 * p**2 + 0.0 * x, name="p^2/2 sampled")
ABSOLUTE = GodunovHamiltonian(eval=lambda x, p: np.abs(p) + 0.0 * x, critical_points=kink_at_zero, name="|p|")


def _zero(x, u):
    return np.zeros_like(x)


def _one(x, u):
    return np.ones_like(x)


def test_grid_geometry():
    grid = Grid1D(0.0, 1.0, 200)
    assert grid.dx == pytest.approx(0.005)
    assert grid.size == 201
    assert grid.nodes[0] == 0.0
    assert grid.nodes[-1] == pytest.approx(1.0)


@pytest.mark.parametrize(("a", "b", "n"), [(1.0, 0.0, 10), (0.0, 1.0, 1), (0.0, 1.0, 2.5), (0.0, float("inf"), 4)])
def test_grid_rejects_invalid_setup(a, b, n):
    with pytest.raises(ConfigurationError):
        Grid1D(a, b, n)


def test_field_is_validated_and_read_only():
    grid = Grid1D(0.0, 1.0, 4)
    with pytest.raises(ConfigurationError):
        Field(grid, np.zeros(4))
    with pytest.raises(NonFiniteError):
        Field(grid, np.array([0.0, 1.0, np.nan, 0.0, 0.0]))
    field = grid.constant(2.0)
    with pytest.raises(ValueError):
        field.values[0] = 1.0
    assert len(field) == 5


def test_time_march_schedule():
    march = TimeMarch(5.0, 1e-4, (0.0, 4.9))
    assert march.steps == 50000
    assert march.snapshot_times == (4.9, 0.0)
    assert march.schedule() == {1000: 4.9, 50000: 0.0}
    assert march.final_step == 50000


def test_time_march_defaults_and_validation():
    assert TimeMarch(1.0, 0.1).snapshot_times == (1.0, 0.0)
    with pytest.raises(ConfigurationError):
        TimeMarch(1.0, 0.3)
    with pytest.raises(ConfigurationError):
        TimeMarch(1.0, 0.1, (1.5,))
    with pytest.raises(ConfigurationError):
        TimeMarch(0.0, 0.1)


def test_cfl_number_examples():
    grid = Grid1D(0.0, 1.0, 200)
    assert cfl_number(1.0, grid, TimeMarch(1.0, 1e-5)) == pytest.approx(0.002)
    assert cfl_number(0.0, grid, TimeMarch(1.0, 1e-5)) == 0.0
    assert cfl_number(100.0, grid, TimeMarch(1.0, 1e-4)) == pytest.approx(2.0)
    with pytest.raises(DomainError):
        cfl_number(-1.0, grid, TimeMarch(1.0, 1e-4))


def test_check_cfl_rejects_unstable_and_non_finite_speeds():
    with pytest.raises(CFLViolationError) as excinfo:
        check_cfl(100.0, 1e-4, 0.005, step=7)
    assert excinfo.value.diagnostics["cfl"] == pytest.approx(2.0)
    assert "(step 7)" in str(excinfo.value)
    with pytest.raises(NonFiniteError):
        check_cfl(float("inf"), 1e-4, 0.005)


def test_upwind_constant_field_is_a_fixed_point():
    field = Grid1D(0.0, 1.0, 20).constant(0.3)
    new = upwind_step(field, _one, _zero, 0.01, BoundarySpec.outflow())
    np.testing.assert_allclose(new.values, 0.3, atol=1e-15)


def test_upwind_unit_cfl_shifts_by_one_node():
    grid = Grid1D(0.0, 1.0, 10)
    field = grid.sample(lambda x: x**2)
    new = upwind_step(field, _one, _zero, grid.dx, BoundarySpec.outflow())
    np.testing.assert_allclose(new.values[1:], field.values[:-1], atol=1e-12)


def test_upwind_uses_forward_difference_for_negative_velocity():
    grid = Grid1D(0.0, 1.0, 10)
    field = grid.sample(lambda x: x**2)
    new = upwind_step(field, lambda x, u: -np.ones_like(x), _zero, grid.dx, BoundarySpec.outflow())
    np.testing.assert_allclose(new.values[:-1], field.values[1:], atol=1e-12)


def test_upwind_pure_source_step():
    field = Grid1D(0.0, 1.0, 10).sample(np.sin)
    new = upwind_step(field, _zero, _one, 0.1, BoundarySpec.outflow())
    np.testing.assert_allclose(new.values, field.values + 0.1, atol=1e-14)


def test_upwind_dirichlet_imposes_only_inflow_ends():
    field = Grid1D(0.0, 1.0, 10).constant(0.5)
    new = upwind_step(field, _one, _zero, 0.01, BoundarySpec.dirichlet(1.0, 0.0))
    assert new.values[0] == 1.0
    assert new.values[-1] == pytest.approx(0.5)


def test_upwind_step_rejects_cfl_above_one():
    grid = Grid1D(0.0, 1.0, 10)
    with pytest.raises(CFLViolationError):
        upwind_step(grid.constant(0.0), _one, _zero, 2.0 * grid.dx, BoundarySpec.outflow())


def test_boundary_kinds():
    values = np.arange(5, dtype=float)
    np.testing.assert_array_equal(BoundarySpec.large_dirichlet(10.0).initialize(values), [10, 1, 2, 3, 10])
    np.testing.assert_array_equal(BoundarySpec.outflow().initialize(values), values)

    sloped = values.copy()
    BoundarySpec.asymptotic_slope(1.0, 0.0).apply(sloped, None, 0.5)
    assert sloped[0] == pytest.approx(0.5)
    assert sloped[-1] == pytest.approx(3.0)

    held = values.copy()
    BoundarySpec.dirichlet(-1.0, 7.0).apply(held, None, 0.5)
    assert (held[0], held[-1]) == (-1.0, 7.0)

    with pytest.raises(ConfigurationError):
        BoundarySpec("periodic")
    with pytest.raises(ConfigurationError):
        BoundarySpec.large_dirichlet(-1.0)


@pytest.mark.parametrize("hamiltonian", [QUADRATIC, SAMPLED_QUADRATIC])
@pytest.mark.parametrize(("p_left", "p_right", "expected"), [(-1.0, 1.0, 0.0), (1.0, 2.0, 0.5), (2.0, 1.0, 2.0)])
def test_godunov_flux_examples(hamiltonian, p_left, p_right, expected):
    assert godunov_flux(hamiltonian, 0.0, p_left, p_right) == pytest.approx(expected, abs=1e-12)


def test_godunov_flux_matches_dense_scan():
    dense = np.linspace(-0.7, 1.3, 1001)
    assert godunov_flux(QUADRATIC, 0.0, -0.7, 1.3) == pytest.approx(np.min(0.5 * dense**2), abs=1e-12)
    assert godunov_flux(QUADRATIC, 0.0, 1.3, -0.7) == pytest.approx(np.max(0.5 * dense**2), abs=1e-12)


def test_godunov_affine_field_decreases_uniformly():
    grid = Grid1D(0.0, 1.0, 10)
    field = grid.sample(lambda x: 0.3 * x + 1.0)
    new = godunov_step(field, QUADRATIC, 0.01, BoundarySpec.outflow())
    np.testing.assert_allclose(new.values, field.values - 0.01 * 0.045, atol=1e-12)


def test_godunov_wedge_keeps_tip_and_lowers_flanks():
    grid = Grid1D(-1.0, 1.0, 20)
    field = grid.sample(np.abs)
    dt = 0.05
    new = godunov_step(field, ABSOLUTE, dt, BoundarySpec.outflow())
    tip = 10
    assert new.values[tip] == pytest.approx(field.values[tip], abs=1e-9)
    flanks = np.delete(np.arange(grid.size), tip)
    np.testing.assert_allclose(new.values[flanks], field.values[flanks] - dt, atol=1e-9)


def test_godunov_zero_field_is_stationary():
    field = Grid1D(0.0, 1.0, 10).constant(0.0)
    new = godunov_step(field, QUADRATIC, 0.01, BoundarySpec.outflow())
    np.testing.assert_array_equal(new.values, 0.0)


def test_godunov_step_rejects_cfl_above_one():
    grid = Grid1D(0.0, 1.0, 10)
    field = grid.sample(lambda x: 5.0 * x)
    with pytest.raises(CFLViolationError):
        godunov_step(field, QUADRATIC, grid.dx, BoundarySpec.outflow())


def test_batched_real_roots():
    linear = batched_real_roots(Polynomial([0.0, 2.0]), np.array([1.0, 2.0]))
    np.testing.assert_allclose(linear, [[0.5], [1.0]])

    quadratic = batched_real_roots(Polynomial([-1.0, 0.0, 1.0]), np.array([0.0, -2.0]))
    np.testing.assert_allclose(np.sort(quadratic[0]), [-1.0, 1.0], atol=1e-12)
    assert np.all(np.isnan(quadratic[1]))

    assert batched_real_roots(Polynomial([3.0]), np.zeros(4)).shape == (4, 0)


def test_central_gradient_examples():
    grid = Grid1D(0.0, 1.0, 10)
    np.testing.assert_allclose(central_gradient(grid.sample(lambda x: x**2)).values, 2.0 * grid.nodes, atol=1e-10)
    np.testing.assert_array_equal(central_gradient(grid.constant(4.0)).values, 0.0)

    fine = Grid1D(0.0, 1.0, 200)
    gradient = central_gradient(fine.sample(np.sin))
    error = np.max(np.abs(gradient.values[1:-1] - np.cos(fine.nodes[1:-1])))
    assert error <= fine.dx**2


def test_legendre_transform_of_zero_is_positive_part():
    x = np.linspace(0.0, 1.0, 11)
    dual = np.linspace(-2.0, 2.0, 9)
    np.testing.assert_allclose(legendre_transform(x, np.zeros_like(x), dual), np.maximum(dual, 0.0), atol=1e-15)


@pytest.mark.parametrize("speed", [0.7, -0.7])
@pytest.mark.parametrize("profile", [lambda x: np.tanh(8.0 * (x - 0.4)), lambda x: np.cos(3.0 * x)])
def test_upwind_keeps_monotone_data_monotone(speed, profile):
    grid = Grid1D(0.0, 1.0, 40)
    field = grid.sample(profile)
    # data only enters at the inflow end
    boundary = BoundarySpec.dirichlet(float(field.values[0]), float(field.values[-1]))
    new = upwind_step(field, lambda x, u: np.full_like(x, speed), _zero, 0.9 * grid.dx / abs(speed), boundary)
    before, after = np.diff(field.values), np.diff(new.values)
    assert np.all(after * np.sign(before[0]) >= -1e-15)
    assert new.values.min() >= field.values.min() - 1e-15
    assert new.values.max() <= field.values.max() + 1e-15


def test_steppers_are_bit_reproducible():
    grid = Grid1D(-1.0, 1.0, 50)
    field = grid.sample(lambda x: np.sin(2.0 * x) + 0.5 * x**2)
    velocity = lambda x, u: np.cos(x) + 0.1 * u  # noqa: E731
    first = upwind_step(field, velocity, _one, 0.004, BoundarySpec.outflow())
    second = upwind_step(field, velocity, _one, 0.004, BoundarySpec.outflow())
    assert first.values.tobytes() == second.values.tobytes()
    first = godunov_step(field, QUADRATIC, 0.004, BoundarySpec.asymptotic_slope())
    second = godunov_step(field, QUADRATIC, 0.004, BoundarySpec.asymptotic_slope())
    assert first.values.tobytes() == second.values.tobytes()


@pytest.mark.parametrize("hamiltonian", [QUADRATIC, ABSOLUTE, SAMPLED_QUADRATIC])
@pytest.mark.parametrize("p", [-2.5, 0.0, 1e-9, 0.75])
def test_godunov_flux_of_a_point_interval_is_the_hamiltonian(hamiltonian, p):
    assert godunov_flux(hamiltonian, 0.3, p, p) == float(hamiltonian.eval(0.3, p))


def _piecewise_quadratic(rng):
    """Continuous Ĥ with a kink at k and one quadratic branch on each side."""
    kink, level = rng.uniform(-1.5, 1.5), rng.uniform(-1.0, 1.0)
    curvature = rng.choice([-1.0, 1.0], size=2) * rng.uniform(0.2, 2.0, size=2)
    slope = rng.uniform(-3.0, 3.0, size=2)

    def evaluate(x, p):
        s = np.asarray(p, dtype=float) - kink
        left = curvature[0] * s**2 + slope[0] * s
        right = curvature[1] * s**2 + slope[1] * s
        return level + np.where(s < 0.0, left, right) + 0.0 * x

    vertices = kink - slope / (2.0 * curvature)
    critical = np.array([kink, *vertices])
    hamiltonian = GodunovHamiltonian(
        eval=evaluate,
        critical_points=lambda x: np.tile(critical, (np.asarray(x).size, 1)),
        name="piecewise quadratic",
    )
    return hamiltonian, critical


def test_godunov_flux_matches_dense_scan_on_random_piecewise_quadratics():
    rng = np.random.default_rng(2024)
    inside = outside = 0
    for _ in range(100):
        hamiltonian, critical = _piecewise_quadratic(rng)
        p_left, p_right = rng.uniform(-3.0, 3.0, size=2)
        lo, hi = min(p_left, p_right), max(p_left, p_right)
        within = (critical > lo) & (critical < hi)
        inside += int(within.any())
        outside += int((~within).any())

        scan = np.linspace(lo, hi, 1001)
        values = hamiltonian.eval(0.0, scan)
        resolution = float(np.max(np.abs(np.diff(values)))) + 1e-9
        flux = godunov_flux(hamiltonian, 0.0, p_left, p_right)
        if p_left <= p_right:
            assert np.min(values) - resolution <= flux <= np.min(values) + 1e-9
        else:
            assert np.max(values) - 1e-9 <= flux <= np.max(values) + resolution
    assert inside > 0 and outside > 0


def test_godunov_speed_covers_the_whole_slope_interval():
    # steep only at x = 0, where the flux picks the flat slope p = 0
    hamiltonian = GodunovHamiltonian(
        eval=lambda x, p: 0.5 * p**2 * np.where(np.abs(x) < 0.5, 1.0, 1e-3),
        critical_points=kink_at_zero,
        name="localized p^2/2",
    )
    grid = Grid1D(-2.0, 2.0, 4)
    field = Field(grid, [1.0, 1.0, 0.0, 1.0, 1.0])
    new, speed = godunov_update(np.asarray(field.values), hamiltonian.tabulated(grid.nodes), 0.5, grid.dx, BoundarySpec.outflow())
    assert speed == pytest.approx(1.0, rel=1e-6)
    assert new[2] == 0.0
    with pytest.raises(CFLViolationError):
        godunov_step(field, hamiltonian, 2.0, BoundarySpec.outflow())
