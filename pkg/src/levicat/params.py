"""Parameter records for the particle, trap, gas environment, and collapse models.

Everything here is strict SI. The records are frozen dataclasses validated on
construction; helper functions derive the secondary scales (zero-point motion,
Lamb-Dicke parameter, effective mass) used throughout the package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .constants import HBAR
from .errors import ConfigurationError

__all__ = [
    "ParticleSpec",
    "TrapSpec",
    "GasSpec",
    "CollapseParams",
    "DerivedScales",
    "geometric_mass",
    "effective_mass",
    "mass_discrepancy",
    "derive_scales",
]


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise ConfigurationError(message)


@dataclass(frozen=True)
class ParticleSpec:
    """Nanoparticle geometry and material.

    radius [m], density [kg/m^3], optional explicit mass [kg] (overrides the
    geometric value when given), internal_temperature [K].
    """

    radius: float
    density: float
    mass: float | None = None
    internal_temperature: float = 20.0

    def __post_init__(self) -> None:
        _require(self.radius > 0, f"particle radius must be > 0, got {self.radius}")
        _require(self.density > 0, f"particle density must be > 0, got {self.density}")
        if self.mass is not None:
            _require(self.mass > 0, f"explicit mass must be > 0, got {self.mass}")
        _require(
            self.internal_temperature >= 0,
            f"internal temperature must be >= 0, got {self.internal_temperature}",
        )


@dataclass(frozen=True)
class TrapSpec:
    """Optical trap: angular_frequency [rad/s], laser_wavelength [m],
    laser_power [W], photon scattering_rate [1/s]."""

    angular_frequency: float
    laser_wavelength: float = 1064e-9
    laser_power: float = 5e-3
    scattering_rate: float = 0.0

    def __post_init__(self) -> None:
        _require(self.angular_frequency > 0,
                 f"trap angular frequency must be > 0, got {self.angular_frequency}")
        _require(self.laser_wavelength > 0,
                 f"laser wavelength must be > 0, got {self.laser_wavelength}")
        _require(self.laser_power > 0,
                 f"laser power must be > 0, got {self.laser_power}")
        _require(self.scattering_rate >= 0,
                 f"scattering rate must be >= 0, got {self.scattering_rate}")


@dataclass(frozen=True)
class GasSpec:
    """Residual gas environment: pressure [Pa], temperature [K],
    molecule_mass [kg], collision cross_section [m^2] (None selects the
    geometric cross-section of the particle), and an aggregate blackbody
    momentum-diffusion constant blackbody_dpp [kg^2 m^2 / s^3]."""

    pressure: float
    temperature: float
    molecule_mass: float
    cross_section: float | None = None
    blackbody_dpp: float = 0.0

    def __post_init__(self) -> None:
        _require(self.pressure >= 0, f"gas pressure must be >= 0, got {self.pressure}")
        _require(self.temperature > 0,
                 f"gas temperature must be > 0, got {self.temperature}")
        _require(self.molecule_mass > 0,
                 f"gas molecule mass must be > 0, got {self.molecule_mass}")
        if self.cross_section is not None:
            _require(self.cross_section > 0,
                     f"cross section must be > 0, got {self.cross_section}")
        _require(self.blackbody_dpp >= 0,
                 f"blackbody D_pp must be >= 0, got {self.blackbody_dpp}")

    def effective_cross_section(self, particle: ParticleSpec) -> float:
        """Collision cross-section, defaulting to the geometric pi R^2."""
        if self.cross_section is not None:
            return self.cross_section
        return math.pi * particle.radius**2


@dataclass(frozen=True)
class CollapseParams:
    """Collapse-model parameters.

    lambda_csl [1/s] (localization rate; exactly 0 disables the channel),
    r_c [m] (localization length), m0 [kg] (reference mass), and r0_dp [m]
    (gravitational spread used by the gravitational-collapse rate).
    """

    lambda_csl: float = 1e-21
    r_c: float = 100e-9
    m0: float = 1.66e-27
    r0_dp: float = 1e-10

    def __post_init__(self) -> None:
        _require(self.lambda_csl >= 0,
                 f"lambda_csl must be >= 0, got {self.lambda_csl}")
        _require(self.r_c > 0, f"r_c must be > 0, got {self.r_c}")
        _require(self.m0 > 0, f"m0 must be > 0, got {self.m0}")
        _require(self.r0_dp > 0, f"r0_dp must be > 0, got {self.r0_dp}")


@dataclass(frozen=True)
class DerivedScales:
    """Secondary scales fixed by the particle and trap."""

    mass: float
    x_zpf: float
    k_optical: float
    lamb_dicke: float

    def __post_init__(self) -> None:
        _require(self.mass > 0, "derived mass must be > 0")
        _require(self.x_zpf > 0, "x_zpf must be > 0")
        _require(self.k_optical > 0, "optical wavenumber must be > 0")
        _require(self.lamb_dicke > 0, "Lamb-Dicke parameter must be > 0")


def geometric_mass(particle: ParticleSpec) -> float:
    """Sphere mass (4/3) pi R^3 rho [kg]."""
    return (4.0 / 3.0) * math.pi * particle.radius**3 * particle.density


def effective_mass(particle: ParticleSpec) -> float:
    """Explicit mass override when present, geometric mass otherwise."""
    if particle.mass is not None:
        return particle.mass
    return geometric_mass(particle)


def mass_discrepancy(particle: ParticleSpec) -> float:
    """Relative deviation |m_explicit - m_geometric| / m_geometric.

    Zero when no explicit mass is configured.
    """
    if particle.mass is None:
        return 0.0
    m_geo = geometric_mass(particle)
    return abs(particle.mass - m_geo) / m_geo


def derive_scales(particle: ParticleSpec, trap: TrapSpec) -> DerivedScales:
    """Compute x_zpf = sqrt(hbar / (2 m Omega)), the optical wavenumber
    k = 2 pi / lambda_laser, and the Lamb-Dicke parameter eta = k x_zpf."""
    mass = effective_mass(particle)
    x_zpf = math.sqrt(HBAR / (2.0 * mass * trap.angular_frequency))
    k_optical = 2.0 * math.pi / trap.laser_wavelength
    return DerivedScales(
        mass=mass,
        x_zpf=x_zpf,
        k_optical=k_optical,
        lamb_dicke=k_optical * x_zpf,
    )
