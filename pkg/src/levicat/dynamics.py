"""Coherence decay curves and synthetic rate datasets.

Static curves assume a frozen superposition; dynamic curves average the
separation breathing of a trapped cat over the oscillation cycle.  Synthetic
datasets attach truth-proportional Gaussian noise to model rates with a
counter-based RNG so that a (seed, grid) pair fixes every byte of output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np
from scipy.integrate import quad

from .errors import ConfigurationError
from .params import CollapseParams
from .rates import gamma_total

__all__ = [
    "CoherenceCurve",
    "RateDataset",
    "coherence_static",
    "coherence_dynamic",
    "default_separation_grid",
    "generate_synthetic_dataset",
]

# Relative slack allowed when enforcing monotone decay, to absorb quadrature
# round-off on samples at nearly equal times.
_MONOTONE_SLACK = 1e-9


@dataclass(frozen=True)
class CoherenceCurve:
    """Sampled coherence C(t): times [s] strictly increasing from >= 0,
    values positive and non-increasing."""

    times: np.ndarray
    values: np.ndarray
    c0: float

    def __post_init__(self) -> None:
        times = np.asarray(self.times, dtype=float)
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)
        if times.ndim != 1 or times.shape != values.shape:
            raise ConfigurationError("times and values must be matching 1-D arrays")
        if times.size == 0:
            raise ConfigurationError("coherence curve needs at least one sample")
        if times[0] < 0 or np.any(np.diff(times) <= 0):
            raise ConfigurationError("times must be strictly increasing and >= 0")
        if self.c0 <= 0:
            raise ConfigurationError("initial coherence must be > 0")
        if np.any(values <= 0):
            raise ConfigurationError("coherence values must stay positive")
        if np.any(np.diff(values) > _MONOTONE_SLACK * self.c0):
            raise ConfigurationError("coherence values must be non-increasing")


@dataclass(frozen=True)
class RateDataset:
    """Measured (or synthetic) decay rates on a separation grid.

    delta_x strictly increasing [m]; gamma [1/s] positive; sigma [1/s]
    strictly positive.  Truth metadata records how a synthetic set was drawn;
    n_resampled counts noise draws rejected for turning a rate negative.
    """

    delta_x: np.ndarray
    gamma: np.ndarray
    sigma: np.ndarray
    lambda_true: float | None = None
    d_pp_true: float | None = None
    noise_fraction: float | None = None
    seed: int | None = None
    n_resampled: int = 0

    def __post_init__(self) -> None:
        delta_x = np.asarray(self.delta_x, dtype=float)
        gamma = np.asarray(self.gamma, dtype=float)
        sigma = np.asarray(self.sigma, dtype=float)
        for name, arr in (("delta_x", delta_x), ("gamma", gamma), ("sigma", sigma)):
            if arr.ndim != 1:
                raise ConfigurationError(f"{name} must be 1-D")
        if not (delta_x.shape == gamma.shape == sigma.shape):
            raise ConfigurationError("dataset columns must have matching lengths")
        if delta_x.size:
            if np.any(delta_x <= 0) or np.any(np.diff(delta_x) <= 0):
                raise ConfigurationError(
                    "delta_x must be strictly increasing and positive")
            if np.any(gamma <= 0):
                raise ConfigurationError("rates must be positive")
            if np.any(sigma <= 0):
                raise ConfigurationError("uncertainties must be strictly positive")
        object.__setattr__(self, "delta_x", delta_x)
        object.__setattr__(self, "gamma", gamma)
        object.__setattr__(self, "sigma", sigma)

    def __len__(self) -> int:
        return int(self.delta_x.size)


def coherence_static(c0: float, gamma_env_rate: float, gamma_csl_rate: float,
                     times) -> CoherenceCurve:
    """C(t) = c0 exp(-(Gamma_env + Gamma_CSL) t) for a frozen separation."""
    if gamma_env_rate < 0 or gamma_csl_rate < 0:
        raise ConfigurationError("decay rates must be >= 0")
    t = np.asarray(times, dtype=float)
    total = gamma_env_rate + gamma_csl_rate
    return CoherenceCurve(times=t, values=c0 * np.exp(-total * t), c0=c0)


def coherence_dynamic(c0: float, rate_fn: Callable[[float], float],
                      alpha_mag: float, x_zpf: float, omega: float,
                      times, rel_tol: float = 1e-8) -> CoherenceCurve:
    """C(t) = c0 exp(-int_0^t Gamma(dx(t')) dt') with dx(t') = 2|alpha| x_zpf |cos(Omega t')|.

    The exposure integrand is periodic with quarter-period symmetry, so the
    cumulative integral is one adaptive quadrature over a falling quarter
    reused exactly, plus one short partial-quarter quadrature per sample.
    A curve spanning millions of trap cycles costs the same as one cycle.
    """
    t = np.asarray(times, dtype=float)
    if t.size == 0 or t[0] < 0 or np.any(np.diff(t) <= 0):
        raise ConfigurationError("times must be strictly increasing and >= 0")
    dx_max = 2.0 * alpha_mag * x_zpf
    quarter = 0.5 * math.pi / omega  # T/4

    def falling_exposure(span: float) -> float:
        """Exposure over [0, span] of a quarter where |cos| falls 1 -> 0."""
        span = min(max(span, 0.0), quarter)
        if span == 0.0:
            return 0.0
        value, _ = quad(lambda s: rate_fn(dx_max * math.cos(omega * s)),
                        0.0, span, epsrel=rel_tol, epsabs=0.0, limit=200)
        return value

    per_quarter = falling_exposure(quarter)
    exposures = np.empty_like(t)
    for i, t_i in enumerate(t):
        n_quarters = math.floor(t_i / quarter)
        remainder = t_i - n_quarters * quarter
        # Even quarters fall 1 -> 0; odd quarters are the mirror image.
        if n_quarters % 2 == 0:
            tail = falling_exposure(remainder)
        else:
            tail = per_quarter - falling_exposure(quarter - remainder)
        exposures[i] = n_quarters * per_quarter + tail
    return CoherenceCurve(times=t, values=c0 * np.exp(-exposures), c0=c0)


def default_separation_grid(collapse: CollapseParams, n_points: int = 30) -> np.ndarray:
    """Log-spaced separations spanning [r_c / 10, 10 r_c]."""
    if n_points < 1:
        raise ConfigurationError("grid needs at least one point")
    return np.logspace(math.log10(collapse.r_c / 10.0),
                       math.log10(collapse.r_c * 10.0), n_points)


def generate_synthetic_dataset(lambda_true: float, d_pp_true: float,
                               collapse: CollapseParams, mass: float,
                               radius: float, delta_x_grid, noise_fraction: float,
                               seed: int) -> RateDataset:
    """Draw gamma_i = Gamma*(dx_i) (1 + noise z_i), sigma_i = noise Gamma*(dx_i).

    Each grid point consumes its own counter-based substream (spawned from the
    master seed by point index), so inserting or removing points leaves every
    other point's draw unchanged.  Draws that would make a rate non-positive
    are rejected and redrawn; the count is recorded on the dataset.
    """
    if noise_fraction <= 0:
        raise ConfigurationError("noise fraction must be > 0")
    if lambda_true < 0 or d_pp_true < 0:
        raise ConfigurationError("truth parameters must be >= 0")
    grid = np.sort(np.asarray(delta_x_grid, dtype=float))
    truth_collapse = replace(collapse, lambda_csl=lambda_true)
    gamma_star = np.atleast_1d(
        gamma_total(d_pp_true, truth_collapse, mass, radius, grid))
    if np.any(gamma_star <= 0):
        raise ConfigurationError(
            "model rate vanishes on the grid; synthetic noise is undefined")

    substreams = np.random.SeedSequence(seed).spawn(grid.size)
    gamma = np.empty_like(gamma_star)
    n_resampled = 0
    for i, stream in enumerate(substreams):
        rng = np.random.Generator(np.random.Philox(stream))
        while True:
            value = gamma_star[i] * (1.0 + noise_fraction * rng.standard_normal())
            if value > 0:
                gamma[i] = value
                break
            n_resampled += 1
    return RateDataset(
        delta_x=grid,
        gamma=gamma,
        sigma=noise_fraction * gamma_star,
        lambda_true=lambda_true,
        d_pp_true=d_pp_true,
        noise_fraction=noise_fraction,
        seed=seed,
        n_resampled=n_resampled,
    )
