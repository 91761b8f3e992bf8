"""Parameter-space scans: exclusion maps, mass amplification, rate families.

A point (lambda, r_c) is *detectable* when the collapse rate it implies at
the working separation meets or exceeds the experiment's rate sensitivity
Gamma_min.  Detectability is monotone in lambda (the rate is linear in it),
which the tests exploit as a set-inclusion invariant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import AMU
from .errors import ConfigurationError
from .params import CollapseParams, GasSpec, ParticleSpec
from .rates import RatePoint, csl_form_factor, d_pp_gas, gamma_csl_max, gamma_env, rate_table

__all__ = [
    "ExclusionMap",
    "MassScanRow",
    "scan_exclusion",
    "critical_lambda",
    "scan_mass",
    "scan_rates_vs_separation",
    "default_lambda_grid",
    "default_rc_grid",
]


def default_lambda_grid(n_points: int = 61) -> np.ndarray:
    """log10(lambda) samples covering 1e-24 to 1e-16 1/s."""
    return np.linspace(-24.0, -16.0, n_points)


def default_rc_grid(n_points: int = 41) -> np.ndarray:
    """log10(r_c) samples covering 10^-8.5 to 10^-6.5 m."""
    return np.linspace(-8.5, -6.5, n_points)


@dataclass(frozen=True)
class ExclusionMap:
    """Detectability over a (log10 lambda, log10 r_c) grid."""

    log10_lambda: np.ndarray
    log10_rc: np.ndarray
    detectable: np.ndarray  # bool, shape (lambda, r_c)
    gamma_min: float
    delta_x: float
    mass: float
    radius: float
    m0: float

    def __post_init__(self) -> None:
        expected = (self.log10_lambda.size, self.log10_rc.size)
        if self.detectable.shape != expected:
            raise ConfigurationError("detectability grid shape mismatch")


def scan_exclusion(mass: float, radius: float, delta_x: float, gamma_min: float,
                   m0: float = 1.66e-27, log10_lambda=None,
                   log10_rc=None) -> ExclusionMap:
    """Evaluate Gamma_CSL(lambda, r_c) >= Gamma_min over the grid."""
    if gamma_min <= 0:
        raise ConfigurationError("gamma_min must be > 0")
    if delta_x <= 0:
        raise ConfigurationError("delta_x must be > 0")
    lam_grid = default_lambda_grid() if log10_lambda is None else np.asarray(
        log10_lambda, dtype=float)
    rc_grid = default_rc_grid() if log10_rc is None else np.asarray(
        log10_rc, dtype=float)
    rc = 10.0**rc_grid
    form = np.array([csl_form_factor(delta_x / r, radius / r) for r in rc])
    rates = (10.0 ** lam_grid[:, None]) * (mass / m0) ** 2 * form[None, :]
    return ExclusionMap(
        log10_lambda=lam_grid, log10_rc=rc_grid,
        detectable=rates >= gamma_min, gamma_min=gamma_min, delta_x=delta_x,
        mass=mass, radius=radius, m0=m0)


def critical_lambda(r_c: float, mass: float, radius: float, delta_x: float,
                    gamma_min: float, m0: float = 1.66e-27) -> float:
    """Smallest detectable lambda at one r_c: Gamma_CSL(lambda_crit) = Gamma_min."""
    form = csl_form_factor(delta_x / r_c, radius / r_c)
    if form <= 0:
        return math.inf
    return gamma_min / ((mass / m0) ** 2 * form)


@dataclass(frozen=True)
class MassScanRow:
    mass_amu: float
    gamma_csl_max: float
    gamma_env_comparison: float


def scan_mass(collapse: CollapseParams, gas: GasSpec, density: float,
              masses, delta_x: float) -> list[MassScanRow]:
    """Saturated collapse rate lambda (m/m0)^2 versus the gas-limited
    environmental rate for particles of the same material.

    Particle radius is rescaled with mass at fixed density, so each row is a
    self-consistent sphere; the environmental comparison is evaluated at the
    fixed working separation delta_x.
    """
    if density <= 0:
        raise ConfigurationError("density must be > 0")
    rows = []
    for mass in np.asarray(masses, dtype=float):
        radius = (3.0 * mass / (4.0 * math.pi * density)) ** (1.0 / 3.0)
        particle = ParticleSpec(radius=radius, density=density, mass=mass)
        env_rate = float(gamma_env(d_pp_gas(gas, particle, mass), delta_x))
        rows.append(MassScanRow(
            mass_amu=mass / AMU,
            gamma_csl_max=gamma_csl_max(collapse, mass),
            gamma_env_comparison=env_rate,
        ))
    return rows


def scan_rates_vs_separation(d_pp: float, collapse: CollapseParams,
                             radius: float, masses,
                             delta_x_grid) -> dict[float, list[RatePoint]]:
    """Rate-channel tables on a shared separation grid, one per mass."""
    out: dict[float, list[RatePoint]] = {}
    for mass in np.asarray(masses, dtype=float):
        out[float(mass)] = rate_table(d_pp, collapse, float(mass), radius,
                                      delta_x_grid)
    return out
