"""Grid integration against a direct four-dimensional evaluation oracle."""

import math

import numpy as np
import pytest

from thetatmss import (
    GridResolutionError,
    QuadratureGrid,
    TmssParams,
    WignerGaussian,
    grid_second_moments,
    impurity_closed_form,
    mode_marginal,
    moment_errors,
    quadrature_impurity,
    theta_tmss_covariance,
    vacuum_covariance,
    vb_rotation,
    wigner_eval,
)
from thetatmss.wigner import _marginals

SECOND_MOMENT_POWERS = ((0, 0), (1, 0), (0, 1), (2, 0), (0, 2), (1, 1))


def oracle_marginal(sigma, grid, power_x=0, power_p=0):
    """Partial trace by brute meshgrid evaluation of the Wigner function.

    Builds the whole four-axis tensor in one shot and sums the trailing two
    axes, optionally weighted by x2^a p2^b. Slow and memory-hungry, but with
    no factorization tricks whatsoever: the exponent is assembled through the
    quadratic form directly and can never overflow, since it is nonpositive.
    """
    w = WignerGaussian(sigma)
    g = grid.points
    z = np.stack(np.meshgrid(g[0], g[1], g[2], g[3], indexing="ij"), axis=-1)
    values = w(z)
    if power_x:
        values = values * g[2][None, None, :, None] ** power_x
    if power_p:
        values = values * g[3][None, None, None, :] ** power_p
    return values.sum(axis=(2, 3)) * grid.spacings[2] * grid.spacings[3]


def test_wigner_value_at_origin_for_pure_state():
    sigma = theta_tmss_covariance(TmssParams(0.8, 0.5))
    # det sigma = 1/256 for every pure member, so W(0) = 4 / pi^2
    assert math.isclose(
        wigner_eval(sigma, np.zeros(4)), 4.0 / math.pi**2, rel_tol=1e-12
    )
    assert math.isclose(
        wigner_eval(vacuum_covariance(1), np.zeros(2)), 2.0 / math.pi, rel_tol=1e-14
    )


def test_wigner_batch_shapes_and_validation():
    w = WignerGaussian(vacuum_covariance(2))
    points = np.zeros((5, 3, 4))
    assert w(points).shape == (5, 3)
    with pytest.raises(ValueError):
        w(np.zeros((5, 3)))
    with pytest.raises(ValueError):
        WignerGaussian(np.eye(3))
    with pytest.raises(ValueError):
        WignerGaussian(-np.eye(4))


def test_wigner_pointwise_rotation_identity():
    # the rotated state's Wigner function is the base one pulled back
    # through the inverse point map
    rng = np.random.default_rng(5)
    params = TmssParams(0.9, 0.0)
    base = theta_tmss_covariance(params)
    theta = 1.1
    rotated = theta_tmss_covariance(TmssParams(0.9, theta))
    inverse = np.linalg.inv(vb_rotation(theta))
    for z in rng.normal(scale=0.7, size=(20, 4)):
        lhs = wigner_eval(rotated, z)
        rhs = wigner_eval(base, inverse @ z)
        assert math.isclose(lhs, rhs, rel_tol=1e-10)


def test_grid_construction_and_validation():
    sigma = vacuum_covariance(2)
    grid = QuadratureGrid.from_covariance(sigma, 40, 6.5)
    assert grid.points_per_axis == 40
    for axis in range(4):
        g = grid.points[axis]
        h = grid.spacings[axis]
        # midpoint grid: symmetric, uniform, first cell centered
        assert np.allclose(g + g[::-1], 0.0, atol=1e-15)
        assert math.isclose(g[1] - g[0], h, rel_tol=1e-12)
        assert math.isclose(g[0], -6.5 * 0.5 + h / 2.0, rel_tol=1e-12)
    with pytest.raises(ValueError):
        QuadratureGrid.from_covariance(sigma, 16, 8.0)
    with pytest.raises(ValueError):
        QuadratureGrid.from_covariance(sigma, 64, 4.0)
    with pytest.raises(ValueError):
        QuadratureGrid.from_covariance(np.eye(2) * 0.25, 64, 8.0)


def test_marginal_matches_meshgrid_oracle():
    sigma = theta_tmss_covariance(TmssParams(0.3, 0.9))
    grid = QuadratureGrid.from_covariance(sigma, 32, 6.0)
    ours = mode_marginal(sigma, grid)
    oracle = oracle_marginal(sigma, grid)
    assert np.max(np.abs(ours - oracle)) <= 1e-13 * oracle.max()


def test_overflow_fallback_matches_meshgrid_oracle():
    # at r = 1 the factored pairwise terms exceed the double range and the
    # row-tensor path takes over; it must agree with the direct evaluation
    sigma = theta_tmss_covariance(TmssParams(1.0, 0.0))
    grid = QuadratureGrid.from_covariance(sigma, 32, 8.0)
    ours = mode_marginal(sigma, grid)
    assert np.isfinite(ours).all()
    oracle = oracle_marginal(sigma, grid)
    assert np.max(np.abs(ours - oracle)) <= 1e-13 * oracle.max()


def test_weighted_marginals_match_meshgrid_oracle():
    sigma = theta_tmss_covariance(TmssParams(0.4, 0.7))
    grid = QuadratureGrid.from_covariance(sigma, 32, 6.0)
    maps = _marginals(sigma, grid, SECOND_MOMENT_POWERS)
    for a, b in SECOND_MOMENT_POWERS:
        oracle = oracle_marginal(sigma, grid, a, b)
        scale = np.max(np.abs(oracle))
        assert np.max(np.abs(maps[a, b] - oracle)) <= 1e-13 * scale


def test_quadrature_impurity_agrees_with_closed_form():
    params = TmssParams(0.5, 0.7)
    sigma = theta_tmss_covariance(params)
    grid = QuadratureGrid.from_covariance(sigma, 96, 7.0)
    measured = quadrature_impurity(sigma, grid)
    assert math.isclose(measured, impurity_closed_form(params).value, abs_tol=1e-10)


def test_quadrature_impurity_through_fallback_path():
    params = TmssParams(1.0, 0.0)
    sigma = theta_tmss_covariance(params)
    grid = QuadratureGrid.from_covariance(sigma, 64, 8.0)
    measured = quadrature_impurity(sigma, grid)
    assert math.isclose(measured, impurity_closed_form(params).value, abs_tol=1e-8)


def test_quadrature_impurity_of_vacuum_is_zero():
    sigma = vacuum_covariance(2)
    grid = QuadratureGrid.from_covariance(sigma, 64, 7.0)
    assert abs(quadrature_impurity(sigma, grid)) < 1e-10


def test_wrong_purity_prefactor_is_caught():
    # the constant in purity = c * integral(W^2) is pi in this convention;
    # pi^2 would miss the exact vacuum value by pi - 1
    sigma = vacuum_covariance(2)
    grid = QuadratureGrid.from_covariance(sigma, 64, 7.0)
    wrong = quadrature_impurity(sigma, grid, purity_prefactor=math.pi**2)
    assert math.isclose(wrong, 1.0 - math.pi, abs_tol=1e-9)
    assert abs(wrong - 0.0) > 2.0


def test_underresolved_grid_raises():
    sigma = theta_tmss_covariance(TmssParams(0.8, 0.0))
    grid = QuadratureGrid.from_covariance(sigma, 32, 8.0)
    with pytest.raises(GridResolutionError):
        quadrature_impurity(sigma, grid)
    assert issubclass(GridResolutionError, RuntimeError)


def test_norm_tolerance_is_adjustable():
    sigma = theta_tmss_covariance(TmssParams(0.8, 0.0))
    grid = QuadratureGrid.from_covariance(sigma, 32, 8.0)
    # the same grid passes once the mass check is loosened past its ~2e-5 bias
    value = quadrature_impurity(sigma, grid, norm_tol=1e-3)
    assert math.isfinite(value)


def test_second_moments_recover_covariance():
    params = TmssParams(0.5, 1.1)
    sigma = theta_tmss_covariance(params)
    grid = QuadratureGrid.from_covariance(sigma, 96, 7.0)
    moments = grid_second_moments(sigma, grid)
    assert np.allclose(moments, sigma, rtol=1e-6, atol=1e-10)
    errors = moment_errors(sigma, grid)
    zero = np.abs(sigma) <= 1e-12
    assert not zero.any()
    assert errors.max() < 1e-6

    # the node angle zeroes the cross-mode block, exercising the absolute tier
    node_sigma = theta_tmss_covariance(TmssParams(0.5, math.pi / 2.0))
    node_grid = QuadratureGrid.from_covariance(node_sigma, 96, 7.0)
    node_errors = moment_errors(node_sigma, node_grid)
    node_zero = np.abs(node_sigma) <= 1e-12
    assert node_zero.any()
    assert node_errors[node_zero].max() < 1e-8
    assert node_errors[~node_zero].max() < 1e-6


def test_threads_do_not_change_bits():
    sigma = theta_tmss_covariance(TmssParams(0.6, 0.5))
    grid = QuadratureGrid.from_covariance(sigma, 48, 7.0)
    single = mode_marginal(sigma, grid, threads=1)
    threaded = mode_marginal(sigma, grid, threads=3)
    assert np.array_equal(single, threaded)
    maps_one = _marginals(sigma, grid, SECOND_MOMENT_POWERS, threads=1)
    maps_four = _marginals(sigma, grid, SECOND_MOMENT_POWERS, threads=4)
    for key in maps_one:
        assert np.array_equal(maps_one[key], maps_four[key])


def test_marginal_power_validation():
    sigma = vacuum_covariance(2)
    grid = QuadratureGrid.from_covariance(sigma, 32, 6.0)
    with pytest.raises(ValueError):
        _marginals(sigma, grid, [(-1, 0)])
