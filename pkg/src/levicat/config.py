"""Configuration files: JSON in, validated SI records out.

A config has sections ``particle``, ``trap``, ``gas``, ``collapse``,
``inference``, ``output``; every field is optional and falls back to the
bundled reference scenario's value.  Numeric values are SI; strings of the
form ``"<number> <unit>"`` are converted once, here, and nowhere else.

Accepted units by dimension:

* length: m, mm, um, nm
* mass: kg, g, amu
* pressure: Pa, mbar
* angular frequency: rad/s, Hz / kHz / MHz (multiplied by 2 pi)
* plain rate: 1/s, Hz (no 2 pi)
* power: W, mW, uW
* density: kg/m3, g/cm3
* temperature: K

Unknown keys and unknown units are rejected loudly - silent typos in a
physics config are how wrong plots get published.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Any, Mapping

from .constants import AMU
from .errors import ConfigurationError, MassOverrideWarning
from .inference import PriorSpec, RateGeometry
from .params import (CollapseParams, DerivedScales, GasSpec, ParticleSpec,
                     TrapSpec, derive_scales, effective_mass, geometric_mass,
                     mass_discrepancy)
from .rates import DiffusionBudget, diffusion_budget

__all__ = ["InferenceConfig", "OutputConfig", "Config", "load_config",
           "demo_config"]

_TWO_PI = 2.0 * math.pi

_LENGTH = {"m": 1.0, "mm": 1e-3, "um": 1e-6, "nm": 1e-9}
_MASS = {"kg": 1.0, "g": 1e-3, "amu": AMU}
_PRESSURE = {"pa": 1.0, "mbar": 100.0}
_ANGULAR = {"rad/s": 1.0, "hz": _TWO_PI, "khz": _TWO_PI * 1e3, "mhz": _TWO_PI * 1e6}
_RATE = {"1/s": 1.0, "hz": 1.0}
_POWER = {"w": 1.0, "mw": 1e-3, "uw": 1e-6}
_DENSITY = {"kg/m3": 1.0, "g/cm3": 1e3}
_TEMPERATURE = {"k": 1.0}
_BARE = {}  # dimensionless or SI-only fields


def _convert(value: Any, units: Mapping[str, float], where: str) -> float:
    if isinstance(value, bool):
        raise ConfigurationError(f"{where}: expected a number, got a boolean")
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, str):
        parts = value.split()
        if len(parts) != 2:
            raise ConfigurationError(
                f"{where}: expected '<number> <unit>', got {value!r}")
        try:
            magnitude = float(parts[0])
        except ValueError as exc:
            raise ConfigurationError(f"{where}: bad number in {value!r}") from exc
        unit = parts[1].lower()
        if unit not in units:
            raise ConfigurationError(
                f"{where}: unit {parts[1]!r} not accepted "
                f"(known: {sorted(units) or 'SI numbers only'})")
        return magnitude * units[unit]
    raise ConfigurationError(f"{where}: expected number or string, got {type(value).__name__}")


# (units, default) per field; None defaults mean "derive later".
_SCHEMA: dict[str, dict[str, tuple[Mapping[str, float], Any]]] = {
    "particle": {
        "radius": (_LENGTH, 50e-9),
        "density": (_DENSITY, 2200.0),
        "mass": (_MASS, None),
        "internal_temperature": (_TEMPERATURE, 20.0),
    },
    "trap": {
        "angular_frequency": (_ANGULAR, _TWO_PI * 1e5),
        "laser_wavelength": (_LENGTH, 1064e-9),
        "laser_power": (_POWER, 5e-3),
        "scattering_rate": (_RATE, 0.0),
    },
    "gas": {
        "pressure": (_PRESSURE, 1e-13),
        "temperature": (_TEMPERATURE, 5.0),
        "molecule_mass": (_MASS, 4.65e-26),
        "cross_section": (_BARE, None),
        "blackbody_dpp": (_BARE, 0.0),
    },
    "collapse": {
        "lambda_csl": (_BARE, 1e-21),
        "r_c": (_LENGTH, 100e-9),
        "m0": (_MASS, 1.66e-27),
        "r0_dp": (_LENGTH, 1e-10),
    },
}

_INFERENCE_DEFAULTS: dict[str, Any] = {
    "lambda_log_range": (-18.0, -6.0),
    "dpp_center": None,
    "dpp_sigma": None,
    "n_points": 30,
    "noise_fraction": 0.05,
    "chains": 4,
    "samples": 20000,
    "burn": None,
    "seed": 0,
}

_OUTPUT_DEFAULTS: dict[str, Any] = {"directory": "."}

# Explicit mass further than this (relative) from the geometric value earns a
# warning record.
_MASS_WARN_THRESHOLD = 1e-3


@dataclass(frozen=True)
class InferenceConfig:
    lambda_log_range: tuple[float, float]
    dpp_center: float | None
    dpp_sigma: float | None
    n_points: int
    noise_fraction: float
    chains: int
    samples: int
    burn: int | None
    seed: int

    def __post_init__(self) -> None:
        lo, hi = self.lambda_log_range
        if not lo < hi:
            raise ConfigurationError("inference.lambda_log_range needs lo < hi")
        if self.n_points < 1 or self.chains < 2 or self.samples < 10:
            raise ConfigurationError("inference sizes out of range")
        if self.noise_fraction <= 0:
            raise ConfigurationError("inference.noise_fraction must be > 0")


@dataclass(frozen=True)
class OutputConfig:
    directory: str


@dataclass(frozen=True)
class Config:
    """Validated bundle of all sections plus attached warning records."""

    particle: ParticleSpec
    trap: TrapSpec
    gas: GasSpec
    collapse: CollapseParams
    inference: InferenceConfig
    output: OutputConfig
    warnings: tuple[str, ...]

    @property
    def mass(self) -> float:
        return effective_mass(self.particle)

    def scales(self) -> DerivedScales:
        return derive_scales(self.particle, self.trap)

    def budget(self) -> DiffusionBudget:
        return diffusion_budget(self.particle, self.trap, self.gas, self.mass)

    def geometry(self) -> RateGeometry:
        return RateGeometry.from_collapse(self.collapse, self.mass,
                                          self.particle.radius)

    def dpp_prior_center(self) -> float:
        if self.inference.dpp_center is not None:
            return self.inference.dpp_center
        return self.budget().total

    def prior(self) -> PriorSpec:
        center = self.dpp_prior_center()
        sigma = self.inference.dpp_sigma
        if sigma is None:
            if center <= 0:
                raise ConfigurationError(
                    "cannot infer a D_pp prior width from a zero center; "
                    "set inference.dpp_sigma")
            sigma = 0.1 * center
        return PriorSpec(lambda_log_range=self.inference.lambda_log_range,
                         dpp_center=center, dpp_sigma=sigma)

    def resolved(self) -> dict[str, Any]:
        """Plain-SI dictionary of everything, for manifests and headers."""
        scales = self.scales()
        return {
            "particle": {
                "radius": self.particle.radius,
                "density": self.particle.density,
                "mass": self.particle.mass,
                "internal_temperature": self.particle.internal_temperature,
            },
            "trap": {
                "angular_frequency": self.trap.angular_frequency,
                "laser_wavelength": self.trap.laser_wavelength,
                "laser_power": self.trap.laser_power,
                "scattering_rate": self.trap.scattering_rate,
            },
            "gas": {
                "pressure": self.gas.pressure,
                "temperature": self.gas.temperature,
                "molecule_mass": self.gas.molecule_mass,
                "cross_section": self.gas.cross_section,
                "blackbody_dpp": self.gas.blackbody_dpp,
            },
            "collapse": {
                "lambda_csl": self.collapse.lambda_csl,
                "r_c": self.collapse.r_c,
                "m0": self.collapse.m0,
                "r0_dp": self.collapse.r0_dp,
            },
            "inference": {
                "lambda_log_range": list(self.inference.lambda_log_range),
                "dpp_center": self.inference.dpp_center,
                "dpp_sigma": self.inference.dpp_sigma,
                "n_points": self.inference.n_points,
                "noise_fraction": self.inference.noise_fraction,
                "chains": self.inference.chains,
                "samples": self.inference.samples,
                "burn": self.inference.burn,
                "seed": self.inference.seed,
            },
            "output": {"directory": self.output.directory},
            "derived": {
                "effective_mass": self.mass,
                "geometric_mass": geometric_mass(self.particle),
                "x_zpf": scales.x_zpf,
                "lamb_dicke": scales.lamb_dicke,
            },
            "warnings": list(self.warnings),
        }


def _section(raw: Mapping[str, Any], name: str) -> dict[str, float | None]:
    schema = _SCHEMA[name]
    given = raw.get(name, {})
    if not isinstance(given, Mapping):
        raise ConfigurationError(f"section {name!r} must be an object")
    unknown = set(given) - set(schema)
    if unknown:
        raise ConfigurationError(
            f"unknown keys in section {name!r}: {sorted(unknown)}")
    out: dict[str, float | None] = {}
    for key, (units, default) in schema.items():
        if key in given and given[key] is not None:
            out[key] = _convert(given[key], units, f"{name}.{key}")
        else:
            out[key] = default
    return out


def _inference_section(raw: Mapping[str, Any]) -> InferenceConfig:
    given = raw.get("inference", {})
    if not isinstance(given, Mapping):
        raise ConfigurationError("section 'inference' must be an object")
    unknown = set(given) - set(_INFERENCE_DEFAULTS)
    if unknown:
        raise ConfigurationError(
            f"unknown keys in section 'inference': {sorted(unknown)}")
    merged = {**_INFERENCE_DEFAULTS, **given}
    rng = merged["lambda_log_range"]
    if not (isinstance(rng, (list, tuple)) and len(rng) == 2):
        raise ConfigurationError("inference.lambda_log_range must be [lo, hi]")
    return InferenceConfig(
        lambda_log_range=(float(rng[0]), float(rng[1])),
        dpp_center=None if merged["dpp_center"] is None else float(merged["dpp_center"]),
        dpp_sigma=None if merged["dpp_sigma"] is None else float(merged["dpp_sigma"]),
        n_points=int(merged["n_points"]),
        noise_fraction=float(merged["noise_fraction"]),
        chains=int(merged["chains"]),
        samples=int(merged["samples"]),
        burn=None if merged["burn"] is None else int(merged["burn"]),
        seed=int(merged["seed"]),
    )


def _output_section(raw: Mapping[str, Any]) -> OutputConfig:
    given = raw.get("output", {})
    if not isinstance(given, Mapping):
        raise ConfigurationError("section 'output' must be an object")
    unknown = set(given) - set(_OUTPUT_DEFAULTS)
    if unknown:
        raise ConfigurationError(
            f"unknown keys in section 'output': {sorted(unknown)}")
    return OutputConfig(directory=str(given.get("directory", ".")))


def load_config(source: str | Path | Mapping[str, Any] | None = None) -> Config:
    """Parse and validate a config; None loads the bundled demo scenario."""
    if source is None:
        return demo_config()
    if isinstance(source, Mapping):
        raw: Mapping[str, Any] = source
    else:
        path = Path(source)
        if not path.exists():
            raise ConfigurationError(f"config file not found: {path}")
        try:
            raw = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise ConfigurationError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(raw, Mapping):
        raise ConfigurationError("config root must be a JSON object")
    known = {"particle", "trap", "gas", "collapse", "inference", "output"}
    unknown = set(raw) - known
    if unknown:
        raise ConfigurationError(f"unknown config sections: {sorted(unknown)}")

    particle = ParticleSpec(**_section(raw, "particle"))
    trap = TrapSpec(**_section(raw, "trap"))
    gas = GasSpec(**_section(raw, "gas"))
    collapse = CollapseParams(**_section(raw, "collapse"))
    inference = _inference_section(raw)
    output = _output_section(raw)

    notes: list[str] = []
    deviation = mass_discrepancy(particle)
    if deviation > _MASS_WARN_THRESHOLD:
        note = (f"explicit mass {particle.mass:.6g} kg overrides the geometric "
                f"value {geometric_mass(particle):.6g} kg "
                f"(ratio {particle.mass / geometric_mass(particle):.3g})")
        notes.append(note)
        warnings.warn(note, MassOverrideWarning, stacklevel=2)

    return Config(particle=particle, trap=trap, gas=gas, collapse=collapse,
                  inference=inference, output=output, warnings=tuple(notes))


def demo_config() -> Config:
    """The bundled reference scenario."""
    with resources.files("levicat.data").joinpath("demo.json").open() as fh:
        raw = json.load(fh)
    return load_config(raw)
