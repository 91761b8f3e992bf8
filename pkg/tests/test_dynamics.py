import math
import time

import numpy as np
import pytest
from numpy.testing import assert_allclose

from levicat import (CoherenceCurve, CollapseParams, ConfigurationError,
                     RateDataset, coherence_dynamic, coherence_static,
                     default_separation_grid, generate_synthetic_dataset)

COLLAPSE = CollapseParams(lambda_csl=1e-21, r_c=100e-9, m0=1.66e-27,
                          r0_dp=1e-10)
MASS = 1e-17
RADIUS = 50e-9
OMEGA = 2.0 * math.pi * 1e5
X_ZPF = 2.896897880891785e-12


def quadratic_exposure(coeff, dx_max, omega, t):
    """Closed-form integral of coeff * (dx_max cos(omega t'))^2 over [0, t]."""
    return coeff * dx_max**2 * (0.5 * t + np.sin(2.0 * omega * t) / (4.0 * omega))


def test_static_curve_is_exponential():
    times = np.linspace(0.0, 3.0, 50)
    curve = coherence_static(0.5, 1.2, 0.8, times)
    assert_allclose(curve.values, 0.5 * np.exp(-2.0 * times), rtol=1e-13)
    assert curve.c0 == 0.5
    assert curve.values[0] == 0.5


def test_static_curve_rejects_negative_rates():
    with pytest.raises(ConfigurationError):
        coherence_static(1.0, -1.0, 0.0, [0.0, 1.0])
    with pytest.raises(ConfigurationError):
        coherence_static(1.0, 0.0, -1.0, [0.0, 1.0])


@pytest.mark.parametrize("kwargs", [
    dict(times=[], values=[], c0=1.0),
    dict(times=[0.0, 1.0], values=[1.0], c0=1.0),
    dict(times=[[0.0, 1.0]], values=[[1.0, 0.5]], c0=1.0),
    dict(times=[1.0, 0.5], values=[1.0, 0.5], c0=1.0),
    dict(times=[-1.0, 0.5], values=[1.0, 0.5], c0=1.0),
    dict(times=[0.0, 0.0], values=[1.0, 0.5], c0=1.0),
    dict(times=[0.0, 1.0], values=[1.0, 0.5], c0=0.0),
    dict(times=[0.0, 1.0], values=[1.0, 0.0], c0=1.0),
    dict(times=[0.0, 1.0], values=[0.5, 1.0], c0=1.0),
])
def test_curve_validation(kwargs):
    with pytest.raises(ConfigurationError):
        CoherenceCurve(**kwargs)


def test_dynamic_matches_analytic_quadratic_exposure():
    # for a quadratic rate the breathing integral has a closed form
    coeff = 1e21
    alpha = 2.0
    dx_max = 2.0 * alpha * X_ZPF
    period = 2.0 * math.pi / OMEGA
    times = np.array([0.1, 0.25, 0.375, 0.5, 0.75, 1.0, 1.5, 2.3, 3.0]) * period
    curve = coherence_dynamic(1.0, lambda dx: coeff * dx * dx, alpha, X_ZPF,
                              OMEGA, times)
    expected = np.exp(-quadratic_exposure(coeff, dx_max, OMEGA, times))
    assert_allclose(curve.values, expected, rtol=1e-8)


def test_dynamic_with_constant_rate_matches_static():
    times = np.linspace(1e-7, 1e-4, 40)
    dynamic = coherence_dynamic(0.9, lambda dx: 3000.0, 1.0, X_ZPF, OMEGA,
                                times)
    static = coherence_static(0.9, 3000.0, 0.0, times)
    assert_allclose(dynamic.values, static.values, rtol=1e-9)


def test_dynamic_spans_millions_of_cycles_cheaply():
    # ~1e6 trap periods; cost must stay at one quadrature per sample
    coeff = 3e20
    alpha = 2.0
    dx_max = 2.0 * alpha * X_ZPF
    times = np.array([1e-3, 0.1, 1.0, 5.0, 10.0])
    start = time.perf_counter()
    curve = coherence_dynamic(1.0, lambda dx: coeff * dx * dx, alpha, X_ZPF,
                              OMEGA, times)
    elapsed = time.perf_counter() - start
    expected = np.exp(-quadratic_exposure(coeff, dx_max, OMEGA, times))
    assert_allclose(curve.values, expected, rtol=1e-6)
    assert elapsed < 2.0


def test_dynamic_rejects_bad_times():
    rate = lambda dx: 1.0
    with pytest.raises(ConfigurationError):
        coherence_dynamic(1.0, rate, 1.0, X_ZPF, OMEGA, [])
    with pytest.raises(ConfigurationError):
        coherence_dynamic(1.0, rate, 1.0, X_ZPF, OMEGA, [1e-5, 1e-6])


def test_default_separation_grid():
    grid = default_separation_grid(COLLAPSE, 31)
    assert grid.shape == (31,)
    assert_allclose(grid[0], COLLAPSE.r_c / 10.0, rtol=1e-12)
    assert_allclose(grid[-1], COLLAPSE.r_c * 10.0, rtol=1e-12)
    assert np.all(np.diff(np.log(grid)) > 0)
    with pytest.raises(ConfigurationError):
        default_separation_grid(COLLAPSE, 0)


def test_synthetic_dataset_is_deterministic():
    grid = default_separation_grid(COLLAPSE, 12)
    a = generate_synthetic_dataset(1e-21, 1.2e-42, COLLAPSE, MASS, RADIUS,
                                   grid, 0.05, seed=7)
    b = generate_synthetic_dataset(1e-21, 1.2e-42, COLLAPSE, MASS, RADIUS,
                                   grid, 0.05, seed=7)
    assert np.array_equal(a.gamma, b.gamma)
    assert np.array_equal(a.sigma, b.sigma)
    c = generate_synthetic_dataset(1e-21, 1.2e-42, COLLAPSE, MASS, RADIUS,
                                   grid, 0.05, seed=8)
    assert not np.array_equal(a.gamma, c.gamma)
    assert a.lambda_true == 1e-21
    assert a.seed == 7
    assert len(a) == 12


def test_synthetic_draws_stable_under_grid_append():
    # each point owns a spawned substream, so extending the grid upward
    # cannot disturb draws at existing points
    grid = default_separation_grid(COLLAPSE, 10)
    extended = np.concatenate([grid, [grid[-1] * 2.0, grid[-1] * 4.0]])
    short = generate_synthetic_dataset(1e-21, 1.2e-42, COLLAPSE, MASS, RADIUS,
                                       grid, 0.05, seed=3)
    long = generate_synthetic_dataset(1e-21, 1.2e-42, COLLAPSE, MASS, RADIUS,
                                      extended, 0.05, seed=3)
    assert np.array_equal(short.gamma, long.gamma[:10])
    assert np.array_equal(short.sigma, long.sigma[:10])


def test_synthetic_noise_is_calibrated():
    from levicat import gamma_total

    grid = default_separation_grid(COLLAPSE, 200)
    data = generate_synthetic_dataset(1e-21, 1.2e-42, COLLAPSE, MASS, RADIUS,
                                      grid, 0.05, seed=11)
    star = gamma_total(1.2e-42, COLLAPSE, MASS, RADIUS, grid)
    assert_allclose(data.sigma, 0.05 * star, rtol=1e-13)
    z = (data.gamma - star) / data.sigma
    assert abs(np.mean(z)) < 0.25
    assert 0.8 < np.std(z) < 1.2
    assert np.max(np.abs(z)) < 6.0
    assert data.n_resampled == 0


def test_synthetic_resampling_keeps_rates_positive():
    grid = default_separation_grid(COLLAPSE, 40)
    data = generate_synthetic_dataset(1e-21, 1.2e-42, COLLAPSE, MASS, RADIUS,
                                      grid, 5.0, seed=2)
    assert np.all(data.gamma > 0)
    assert data.n_resampled > 0


def test_synthetic_dataset_validation():
    grid = default_separation_grid(COLLAPSE, 5)
    with pytest.raises(ConfigurationError):
        generate_synthetic_dataset(1e-21, 1.2e-42, COLLAPSE, MASS, RADIUS,
                                   grid, 0.0, seed=0)
    with pytest.raises(ConfigurationError):
        generate_synthetic_dataset(-1e-21, 1.2e-42, COLLAPSE, MASS, RADIUS,
                                   grid, 0.05, seed=0)
    # zero truth everywhere leaves no scale for the noise
    with pytest.raises(ConfigurationError):
        generate_synthetic_dataset(0.0, 0.0, COLLAPSE, MASS, RADIUS, grid,
                                   0.05, seed=0)


@pytest.mark.parametrize("kwargs", [
    dict(delta_x=[2e-7, 1e-7], gamma=[1.0, 1.0], sigma=[0.1, 0.1]),
    dict(delta_x=[-1e-7, 1e-7], gamma=[1.0, 1.0], sigma=[0.1, 0.1]),
    dict(delta_x=[1e-7, 2e-7], gamma=[1.0], sigma=[0.1, 0.1]),
    dict(delta_x=[1e-7, 2e-7], gamma=[1.0, -1.0], sigma=[0.1, 0.1]),
    dict(delta_x=[1e-7, 2e-7], gamma=[1.0, 1.0], sigma=[0.1, 0.0]),
    dict(delta_x=[[1e-7]], gamma=[[1.0]], sigma=[[0.1]]),
])
def test_rate_dataset_validation(kwargs):
    with pytest.raises(ConfigurationError):
        RateDataset(**kwargs)


def test_rate_dataset_allows_empty():
    empty = RateDataset(delta_x=[], gamma=[], sigma=[])
    assert len(empty) == 0
