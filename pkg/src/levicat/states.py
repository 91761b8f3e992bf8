"""Quantum state containers and basis conversion for the motional mode.

The mode is held either in a truncated Fock basis or on a uniform position
grid; conversions between the two are explicit.  Internally everything is
dimensionless - positions in units of x_zpf - with SI values appearing only
on the grid axes.  With the position operator x = x_zpf (a + a^dagger), a
coherent state |alpha| (real alpha) is a Gaussian of width x_zpf centred at
2 alpha x_zpf.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError

__all__ = [
    "FockState",
    "DensityMatrix",
    "PositionGrid",
    "ThermalizationSpec",
    "default_position_grid",
    "hermite_functions",
    "coherent_wavefunction",
    "fock_to_position",
    "coherence_between",
]

_NORM_TOL = 1e-10
_LEAK_TOL = 1e-8
_HERM_TOL = 1e-10
_TRACE_TOL = 1e-8
_EIG_TOL = 1e-8


@dataclass(frozen=True)
class FockState:
    """Pure state as amplitudes over Fock levels 0..dim-1.

    Normalized within 1e-10 on construction; the top-level population must be
    below 1e-8 so that truncation artifacts stay invisible downstream.
    """

    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        amps = np.ascontiguousarray(self.amplitudes, dtype=complex)
        if amps.ndim != 1 or amps.size < 2:
            raise ConfigurationError("amplitudes must be a 1-D vector, dim >= 2")
        norm = float(np.sum(np.abs(amps) ** 2))
        if abs(norm - 1.0) > _NORM_TOL:
            raise ConfigurationError(
                f"state not normalized: |norm - 1| = {abs(norm - 1.0):.3e}")
        leak = float(np.abs(amps[-1]) ** 2)
        if leak >= _LEAK_TOL:
            raise ConfigurationError(
                f"truncation leakage {leak:.3e} at the top Fock level; "
                "increase the dimension")
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self) -> int:
        return int(self.amplitudes.size)

    def density_matrix(self) -> "DensityMatrix":
        rho = np.outer(self.amplitudes, self.amplitudes.conj())
        return DensityMatrix(matrix=rho, basis="fock")


@dataclass(frozen=True)
class PositionGrid:
    """Uniform, symmetric position grid: n_points samples on [-extent, extent] [m]."""

    extent: float
    n_points: int

    def __post_init__(self) -> None:
        if self.extent <= 0:
            raise ConfigurationError("grid extent must be > 0")
        if self.n_points < 8:
            raise ConfigurationError("grid needs at least 8 points")

    @property
    def x(self) -> np.ndarray:
        return np.linspace(-self.extent, self.extent, self.n_points)

    @property
    def dx(self) -> float:
        return 2.0 * self.extent / (self.n_points - 1)


def default_position_grid(separation: float, x_zpf: float,
                          n_points: int = 256) -> PositionGrid:
    """Grid spanning +-(separation/2 + 6 x_zpf): the wavepacket centres plus
    a six-sigma Gaussian margin."""
    if separation < 0 or x_zpf <= 0:
        raise ConfigurationError("separation must be >= 0 and x_zpf > 0")
    return PositionGrid(extent=separation / 2.0 + 6.0 * x_zpf, n_points=n_points)


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, unit-trace, positive (within tolerance) density matrix.

    basis is "fock" (dimensionless matrix over Fock levels) or "position"
    (kernel values rho(x_i, x_j) [1/m] on a PositionGrid, trace measured
    with the dx weight).
    """

    matrix: np.ndarray
    basis: str = "fock"
    grid: PositionGrid | None = None

    def __post_init__(self) -> None:
        mat = np.ascontiguousarray(self.matrix, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ConfigurationError("density matrix must be square")
        if self.basis not in ("fock", "position"):
            raise ConfigurationError(f"unknown basis {self.basis!r}")
        if self.basis == "position":
            if self.grid is None:
                raise ConfigurationError("position basis requires a grid")
            if self.grid.n_points != mat.shape[0]:
                raise ConfigurationError("matrix size does not match grid")
        elif self.grid is not None:
            raise ConfigurationError("fock basis does not take a grid")
        herm = float(np.max(np.abs(mat - mat.conj().T)))
        if herm > _HERM_TOL:
            raise ConfigurationError(f"matrix not Hermitian: defect {herm:.3e}")
        tr = self.trace_of(mat)
        if abs(tr - 1.0) > _TRACE_TOL:
            raise ConfigurationError(f"trace deviates from 1 by {abs(tr - 1.0):.3e}")
        min_eig = float(np.linalg.eigvalsh(mat)[0]) * self._weight()
        if min_eig < -_EIG_TOL:
            raise ConfigurationError(f"matrix not positive: min eigenvalue {min_eig:.3e}")
        object.__setattr__(self, "matrix", mat)

    def _weight(self) -> float:
        return self.grid.dx if self.basis == "position" else 1.0

    def trace_of(self, mat: np.ndarray) -> float:
        return float(np.real(np.trace(mat))) * self._weight()

    @property
    def dim(self) -> int:
        return int(self.matrix.shape[0])

    def trace(self) -> float:
        return self.trace_of(self.matrix)

    def purity(self) -> float:
        """Tr rho^2 (with the quadrature weight in the position basis)."""
        return float(np.sum(np.abs(self.matrix) ** 2)) * self._weight() ** 2

    def mean_occupation(self) -> float:
        if self.basis != "fock":
            raise ConfigurationError("mean occupation is defined in the Fock basis")
        n = np.arange(self.dim)
        return float(np.real(np.sum(n * np.diag(self.matrix))))


@dataclass(frozen=True)
class ThermalizationSpec:
    """Mechanical damping gamma_m [1/s] towards occupation n_th."""

    gamma_m: float = 0.0
    n_th: float = 0.0

    def __post_init__(self) -> None:
        if self.gamma_m < 0:
            raise ConfigurationError("gamma_m must be >= 0")
        if self.n_th < 0:
            raise ConfigurationError("n_th must be >= 0")


def hermite_functions(dim: int, xi: np.ndarray) -> np.ndarray:
    """Harmonic-oscillator eigenfunctions psi_n(xi) for n < dim.

    xi is position in units of x_zpf; the ground state is the unit-variance
    Gaussian (2 pi)^(-1/4) exp(-xi^2 / 4) and higher levels follow the ladder
    recurrence psi_{n+1} = (xi psi_n - sqrt(n) psi_{n-1}) / sqrt(n+1).
    Returns an array of shape (dim, len(xi)) normalized so that
    sum |psi_n|^2 dxi = 1 on a sufficiently wide grid.
    """
    xi = np.asarray(xi, dtype=float)
    psi = np.zeros((dim, xi.size))
    psi[0] = (2.0 * math.pi) ** -0.25 * np.exp(-(xi**2) / 4.0)
    if dim > 1:
        psi[1] = xi * psi[0]
    for n in range(1, dim - 1):
        psi[n + 1] = (xi * psi[n] - math.sqrt(n) * psi[n - 1]) / math.sqrt(n + 1)
    return psi


def coherent_wavefunction(alpha: complex, grid: PositionGrid,
                          x_zpf: float) -> np.ndarray:
    """Position-space wavefunction of |alpha> [units 1/sqrt(m)].

    Gaussian of width x_zpf centred at 2 Re(alpha) x_zpf carrying momentum
    phase Im(alpha) xi, with the global phase fixed to match the displacement
    operator acting on the ground state.
    """
    xi = grid.x / x_zpf
    re, im = float(np.real(alpha)), float(np.imag(alpha))
    psi_xi = (2.0 * math.pi) ** -0.25 * np.exp(
        -((xi - 2.0 * re) ** 2) / 4.0 + 1j * im * xi - 1j * im * re)
    return psi_xi / math.sqrt(x_zpf)


def fock_to_position(rho: DensityMatrix, grid: PositionGrid,
                     x_zpf: float) -> DensityMatrix:
    """Convert a Fock-basis density matrix to position-kernel values on a grid."""
    if rho.basis != "fock":
        raise ConfigurationError("input must be in the Fock basis")
    psi = hermite_functions(rho.dim, grid.x / x_zpf) / math.sqrt(x_zpf)
    kernel = psi.T @ rho.matrix @ psi.conj()
    kernel = 0.5 * (kernel + kernel.conj().T)
    return DensityMatrix(matrix=kernel, basis="position", grid=grid)


def coherence_between(rho: DensityMatrix, alpha: complex,
                      x_zpf: float | None = None) -> float:
    """|<alpha| rho |-alpha>|: the surviving cat cross-branch amplitude."""
    if rho.basis == "fock":
        from .operators import coherent_amplitudes  # local import avoids a cycle

        plus = coherent_amplitudes(alpha, rho.dim)
        minus = coherent_amplitudes(-alpha, rho.dim)
        return float(abs(plus.conj() @ rho.matrix @ minus))
    assert rho.grid is not None
    if x_zpf is None:
        raise ConfigurationError("position-basis coherence needs x_zpf")
    plus = coherent_wavefunction(alpha, rho.grid, x_zpf)
    minus = coherent_wavefunction(-alpha, rho.grid, x_zpf)
    value = plus.conj() @ rho.matrix @ minus * rho.grid.dx**2
    return float(abs(value))
