"""Momentum-diffusion budgets and superposition decay rates.

Environmental channels are summarized by a single momentum-diffusion
constant D_pp [kg^2 m^2 / s^3]; every channel and every decay rate is an
explicit closed form so the numbers stay auditable.  Rates are per second,
separations in meters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import quad

from .constants import G_NEWTON, HBAR, K_B
from .errors import ConfigurationError
from .params import CollapseParams, GasSpec, ParticleSpec, TrapSpec

__all__ = [
    "DiffusionBudget",
    "RatePoint",
    "d_pp_gas",
    "d_pp_trap",
    "d_pp_blackbody",
    "diffusion_budget",
    "gamma_env",
    "heating_from_dpp",
    "calibrate_dpp_from_heating",
    "csl_form_factor",
    "gamma_csl",
    "gamma_csl_small_sep",
    "gamma_csl_max",
    "gamma_dp",
    "gamma_total",
    "rate_table",
    "cycle_averaged_gamma",
]


def _check_delta_x(delta_x) -> np.ndarray | float:
    arr = np.asarray(delta_x, dtype=float)
    if np.any(arr < 0):
        raise ConfigurationError("superposition separation must be >= 0")
    return delta_x


@dataclass(frozen=True)
class DiffusionBudget:
    """Per-channel momentum-diffusion constants [kg^2 m^2 / s^3]."""

    gas: float
    trap: float
    blackbody: float

    @property
    def total(self) -> float:
        return self.gas + self.trap + self.blackbody


@dataclass(frozen=True)
class RatePoint:
    """Decay rates [1/s] at one superposition separation [m]."""

    delta_x: float
    gamma_env: float
    gamma_csl: float
    gamma_dp: float
    gamma_total: float


def d_pp_gas(gas: GasSpec, particle: ParticleSpec, mass: float) -> float:
    """Gas-collision momentum diffusion.

    D_pp = (8 / sqrt(2 pi)) (P / v_T) m^2 m_g / (m + m_g)^2 sigma with the
    thermal speed v_T = sqrt(2 k_B T / m_g).
    """
    if mass <= 0:
        raise ConfigurationError("mass must be > 0")
    v_thermal = math.sqrt(2.0 * K_B * gas.temperature / gas.molecule_mass)
    sigma = gas.effective_cross_section(particle)
    reduced = mass**2 * gas.molecule_mass / (mass + gas.molecule_mass) ** 2
    return (8.0 / math.sqrt(2.0 * math.pi)) * (gas.pressure / v_thermal) * reduced * sigma


def d_pp_trap(trap: TrapSpec) -> float:
    """Photon-recoil momentum diffusion (2/3) Gamma_sc (hbar k)^2."""
    k = 2.0 * math.pi / trap.laser_wavelength
    return (2.0 / 3.0) * trap.scattering_rate * (HBAR * k) ** 2


def d_pp_blackbody(gas: GasSpec) -> float:
    """Aggregate blackbody contribution, taken directly from configuration."""
    return gas.blackbody_dpp


def diffusion_budget(particle: ParticleSpec, trap: TrapSpec, gas: GasSpec,
                     mass: float) -> DiffusionBudget:
    return DiffusionBudget(
        gas=d_pp_gas(gas, particle, mass),
        trap=d_pp_trap(trap),
        blackbody=d_pp_blackbody(gas),
    )


def gamma_env(d_pp: float, delta_x):
    """Environmental dephasing rate D_pp dx^2 / hbar^2."""
    if d_pp < 0:
        raise ConfigurationError("D_pp must be >= 0")
    _check_delta_x(delta_x)
    return d_pp * np.square(delta_x) / HBAR**2


def heating_from_dpp(d_pp: float, mass: float, omega: float) -> float:
    """Phonon heating rate ndot = D_pp / (hbar m Omega) [quanta/s]."""
    return d_pp / (HBAR * mass * omega)


def calibrate_dpp_from_heating(ndot: float, mass: float, omega: float) -> float:
    """Invert a measured heating rate: D_pp = hbar m Omega ndot."""
    if ndot < 0:
        raise ConfigurationError("heating rate must be >= 0")
    return HBAR * mass * omega * ndot


def csl_form_factor(u, v):
    """Geometry factor f(u, v) = 1 - (1 + v^2)^(-3/2) exp(-u^2 / (4 (1 + v^2)))
    for u = dx / r_c and v = R / r_c.  Dimensionless, in [0, 1)."""
    u = np.asarray(u, dtype=float)
    one_plus_v2 = 1.0 + np.square(np.asarray(v, dtype=float))
    out = 1.0 - one_plus_v2**-1.5 * np.exp(-np.square(u) / (4.0 * one_plus_v2))
    return out if out.ndim else float(out)


def gamma_csl(collapse: CollapseParams, mass: float, radius: float, delta_x):
    """Mass-proportional localization rate lambda (m / m0)^2 f(dx/r_c, R/r_c)."""
    _check_delta_x(delta_x)
    amplification = (mass / collapse.m0) ** 2
    f = csl_form_factor(np.asarray(delta_x, dtype=float) / collapse.r_c,
                        radius / collapse.r_c)
    return collapse.lambda_csl * amplification * f


def gamma_csl_small_sep(collapse: CollapseParams, mass: float, radius: float, delta_x):
    """Quadratic small-separation form lambda (m/m0)^2 dx^2 / (4 r_c^2 (1 + R^2/r_c^2)).

    This is the stated small-dx expansion of the separation-dependent part of
    the full rate and is provided for asymptotic cross-checks only; the exact
    expansion carries an extra factor (1 + R^2/r_c^2)^(-3/2) that tends to 1
    for R << r_c.
    """
    _check_delta_x(delta_x)
    amplification = (mass / collapse.m0) ** 2
    denom = 4.0 * collapse.r_c**2 * (1.0 + (radius / collapse.r_c) ** 2)
    return collapse.lambda_csl * amplification * np.square(delta_x) / denom


def gamma_csl_max(collapse: CollapseParams, mass: float) -> float:
    """Saturation plateau lambda (m / m0)^2 reached for dx >> r_c."""
    return collapse.lambda_csl * (mass / collapse.m0) ** 2


def gamma_dp(mass: float, r0: float, delta_x):
    """Gravitational self-energy decoherence rate.

    Gamma = (G m^2 / (hbar sqrt(pi) r0)) (1 - r0 / sqrt(r0^2 + dx^2));
    saturates at the prefactor for dx >> r0.
    """
    if r0 <= 0:
        raise ConfigurationError("r0 must be > 0")
    _check_delta_x(delta_x)
    prefactor = G_NEWTON * mass**2 / (HBAR * math.sqrt(math.pi) * r0)
    dx = np.asarray(delta_x, dtype=float)
    bracket = 1.0 - r0 / np.sqrt(r0**2 + np.square(dx))
    out = prefactor * bracket
    return out if out.ndim else float(out)


def gamma_total(d_pp: float, collapse: CollapseParams, mass: float,
                radius: float, delta_x):
    """Environmental plus mass-proportional collapse rate.

    The gravitational-collapse channel is reported separately and is not part
    of the total used for data generation or fitting.
    """
    return gamma_env(d_pp, delta_x) + gamma_csl(collapse, mass, radius, delta_x)


def rate_table(d_pp: float, collapse: CollapseParams, mass: float,
               radius: float, delta_x_grid) -> list[RatePoint]:
    """Evaluate every rate channel on a separation grid."""
    grid = np.asarray(delta_x_grid, dtype=float)
    env = np.atleast_1d(gamma_env(d_pp, grid))
    csl = np.atleast_1d(gamma_csl(collapse, mass, radius, grid))
    dp = np.atleast_1d(gamma_dp(mass, collapse.r0_dp, grid))
    return [
        RatePoint(delta_x=float(dx), gamma_env=float(e), gamma_csl=float(c),
                  gamma_dp=float(d), gamma_total=float(e + c))
        for dx, e, c, d in zip(np.atleast_1d(grid), env, csl, dp)
    ]


def cycle_averaged_gamma(rate_fn: Callable[[float], float], alpha_mag: float,
                         x_zpf: float, omega: float,
                         rel_tol: float = 1e-8) -> float:
    """Average rate_fn(dx(t)) over one trap period.

    The separation breathes as dx(t) = 2 |alpha| x_zpf |cos(Omega t)|; by
    symmetry the average is taken over a quarter period, where the integrand
    is smooth, with adaptive quadrature at relative tolerance rel_tol.
    For a quadratic rate this reproduces the analytic factor <cos^2> = 1/2.
    """
    if alpha_mag < 0:
        raise ConfigurationError("alpha magnitude must be >= 0")
    if omega <= 0:
        raise ConfigurationError("omega must be > 0")
    dx_max = 2.0 * alpha_mag * x_zpf
    quarter = 0.5 * math.pi / omega  # T/4
    value, _ = quad(lambda t: rate_fn(dx_max * math.cos(omega * t)),
                    0.0, quarter, epsrel=rel_tol, epsabs=0.0, limit=200)
    return value / quarter
