"""Open-system evolution of the motional mode.

Two complementary engines:

* a truncated-Fock master-equation integrator (free rotation, position
  localization as a double commutator in x, and thermal contact), and
* an exact position-basis localization kernel for pure dephasing-by-distance.

The Fock engine works with dimensionless operators (X = a + a^dagger) and SI
time; the only place x_zpf enters is the conversion of a momentum-diffusion
constant into the localization rate density Lambda = D_pp x_zpf^2 / hbar^2
[1/s] multiplying [X, [X, rho]].

Numerical policy: fixed-step RK4 with a stability guard dt * (fastest rate)
< 0.1, Hermitian symmetrization every step, and *no* trace renormalization -
trace drift is a measured integrity diagnostic, so repairing it would defeat
the measurement.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .constants import HBAR
from .errors import ConfigurationError, NumericalError
from .operators import coherent_amplitudes, position_quadrature
from .states import DensityMatrix, ThermalizationSpec

__all__ = [
    "EvolutionResult",
    "localization_rate",
    "dpp_for_localization_rate",
    "evolve_lindblad",
    "apply_localization_kernel",
]

_STABILITY_LIMIT = 0.1
_POSITIVITY_ABORT = -1e-6


def localization_rate(d_pp: float, x_zpf: float) -> float:
    """Rate density Lambda = D_pp x_zpf^2 / hbar^2 [1/s] for [X, [X, rho]]."""
    return d_pp * x_zpf**2 / HBAR**2


def dpp_for_localization_rate(lam: float, x_zpf: float) -> float:
    """Momentum-diffusion constant producing a given Lambda (inverse of above)."""
    return lam * HBAR**2 / x_zpf**2


@dataclass
class EvolutionResult:
    """Recorded trajectory of a master-equation run."""

    times: np.ndarray
    traces: np.ndarray
    purities: np.ndarray
    mean_occupations: np.ndarray
    top_populations: np.ndarray
    coherences: np.ndarray | None
    rho_final: DensityMatrix

    @property
    def trace_drift_rate(self) -> float:
        """|trace - 1| accumulated per simulated second."""
        duration = float(self.times[-1]) if self.times[-1] > 0 else 1.0
        return abs(float(self.traces[-1]) - 1.0) / duration


def _thermal_terms(rho: np.ndarray, gamma_m: float, n_th: float,
                   sqrt_n: np.ndarray, n_diag: np.ndarray) -> np.ndarray:
    """gamma (n+1) D[a] rho + gamma n D[a^dagger] rho via index shifts."""
    dim = rho.shape[0]
    out = np.zeros_like(rho)
    down = gamma_m * (n_th + 1.0)
    up = gamma_m * n_th
    if down:
        sandwich = np.zeros_like(rho)
        sandwich[: dim - 1, : dim - 1] = (
            np.outer(sqrt_n, sqrt_n) * rho[1:, 1:])
        out += down * (sandwich - 0.5 * (n_diag[:, None] + n_diag[None, :]) * rho)
    if up:
        sandwich = np.zeros_like(rho)
        sandwich[1:, 1:] = np.outer(sqrt_n, sqrt_n) * rho[: dim - 1, : dim - 1]
        out += up * (sandwich
                     - 0.5 * ((n_diag[:, None] + 1.0) + (n_diag[None, :] + 1.0)) * rho)
    return out


def evolve_lindblad(rho0: DensityMatrix, omega: float, d_pp: float,
                    therm: ThermalizationSpec, x_zpf: float, dt: float,
                    steps: int, record_every: int = 1,
                    coherence_alpha: complex | None = None,
                    check_every: int = 10) -> EvolutionResult:
    """Integrate d rho/dt = -i omega [n, rho] - Lambda [X, [X, rho]] + thermal.

    rho0 must be Fock-basis.  Records trace, purity, mean occupation, top-level
    population, and (optionally) the cross-branch coherence |<a|rho|-a>| for
    coherence_alpha, every record_every steps.

    Raises ConfigurationError when dt violates the stability guard and
    NumericalError if positivity decays beyond tolerance or values go
    non-finite mid-run.
    """
    if rho0.basis != "fock":
        raise ConfigurationError("evolve_lindblad needs a Fock-basis state")
    if omega < 0 or d_pp < 0:
        raise ConfigurationError("omega and d_pp must be >= 0")
    if dt <= 0 or steps < 1:
        raise ConfigurationError("need dt > 0 and steps >= 1")
    if x_zpf <= 0 and d_pp > 0:
        raise ConfigurationError("x_zpf must be > 0 when d_pp > 0")

    dim = rho0.dim
    lam = localization_rate(d_pp, x_zpf) if d_pp > 0 else 0.0
    fastest = dim * (omega + 4.0 * lam
                     + therm.gamma_m * (2.0 * therm.n_th + 1.0))
    if fastest > 0 and dt * fastest >= _STABILITY_LIMIT:
        raise ConfigurationError(
            f"dt = {dt:.3e} too coarse for rate scale {fastest:.3e}/s; "
            f"use dt < {_STABILITY_LIMIT / fastest:.3e}")

    n_diag = np.arange(dim, dtype=float)
    sqrt_n = np.sqrt(n_diag[1:])
    # Elementwise commutator with the diagonal Hamiltonian: -i omega (n_i - n_j).
    phase = -1j * omega * (n_diag[:, None] - n_diag[None, :])
    if lam:
        x_op = position_quadrature(dim)

    def rhs(rho: np.ndarray) -> np.ndarray:
        out = phase * rho
        if lam:
            # [X, [X, rho]] = X^2 rho - 2 X rho X + rho X^2; rho stays
            # Hermitian through every RK4 stage, so rho X^2 = (X^2 rho)^dagger.
            x_rho = x_op @ rho
            x2_rho = x_op @ x_rho
            out -= lam * (x2_rho + x2_rho.conj().T - 2.0 * (x_rho @ x_op))
        if therm.gamma_m > 0:
            out += _thermal_terms(rho, therm.gamma_m, therm.n_th, sqrt_n, n_diag)
        return out

    if coherence_alpha is not None:
        coh_plus = coherent_amplitudes(coherence_alpha, dim).conj()
        coh_minus = coherent_amplitudes(-coherence_alpha, dim)

    n_records = steps // record_every + 1
    times = np.empty(n_records)
    traces = np.empty(n_records)
    purities = np.empty(n_records)
    occupations = np.empty(n_records)
    tops = np.empty(n_records)
    coherences = np.empty(n_records) if coherence_alpha is not None else None

    rho = rho0.matrix.copy()

    def record(slot: int, t: float) -> None:
        times[slot] = t
        traces[slot] = float(np.real(np.trace(rho)))
        purities[slot] = float(np.real(np.sum(rho * rho.conj())))
        occupations[slot] = float(np.real(np.sum(n_diag * np.diag(rho))))
        tops[slot] = float(np.real(rho[-1, -1]))
        if coherences is not None:
            coherences[slot] = float(abs(coh_plus @ rho @ coh_minus))

    record(0, 0.0)
    slot = 1
    for step in range(1, steps + 1):
        k1 = rhs(rho)
        k2 = rhs(rho + 0.5 * dt * k1)
        k3 = rhs(rho + 0.5 * dt * k2)
        k4 = rhs(rho + dt * k3)
        rho += (dt / 6.0) * (k1 + 2.0 * (k2 + k3) + k4)
        rho = 0.5 * (rho + rho.conj().T)

        if step % check_every == 0 or step == steps:
            if not np.all(np.isfinite(rho)):
                raise NumericalError(
                    f"non-finite density matrix at step {step} (t = {step * dt:.3e} s)")
            min_eig = float(np.linalg.eigvalsh(rho)[0])
            if min_eig < _POSITIVITY_ABORT:
                raise NumericalError(
                    f"positivity lost at step {step} (t = {step * dt:.3e} s): "
                    f"min eigenvalue {min_eig:.3e}, trace "
                    f"{float(np.real(np.trace(rho))):.12f}")
        if step % record_every == 0:
            record(slot, step * dt)
            slot += 1

    rho_final = DensityMatrix(matrix=rho, basis="fock")
    return EvolutionResult(
        times=times[:slot], traces=traces[:slot], purities=purities[:slot],
        mean_occupations=occupations[:slot], top_populations=tops[:slot],
        coherences=None if coherences is None else coherences[:slot],
        rho_final=rho_final)


def apply_localization_kernel(rho: DensityMatrix,
                              rate_fn: Callable[[np.ndarray], np.ndarray],
                              duration: float) -> DensityMatrix:
    """Exact pure-localization evolution in the position basis.

    Each off-diagonal element picks up exp(-(Gamma(|x - x'|) - Gamma(0)) t).
    Subtracting Gamma(0) keeps the diagonal exactly invariant for rate models
    (such as the finite-size collapse rate) whose value at zero separation is
    nonzero bookkeeping rather than physical decay.
    """
    if rho.basis != "position":
        raise ConfigurationError("localization kernel needs a position-basis state")
    if duration < 0:
        raise ConfigurationError("duration must be >= 0")
    assert rho.grid is not None
    x = rho.grid.x
    distance = np.abs(x[:, None] - x[None, :])
    rates = np.asarray(rate_fn(distance), dtype=float)
    rate_zero = float(np.asarray(rate_fn(np.zeros(1)), dtype=float)[0])
    decay = np.exp(-(rates - rate_zero) * duration)
    return DensityMatrix(matrix=rho.matrix * decay, basis="position", grid=rho.grid)
