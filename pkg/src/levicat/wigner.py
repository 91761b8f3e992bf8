"""Discretized Wigner function of a Fock-basis state.

Uses the iterative ladder construction: basis functions W_{|m><n|}(alpha) are
generated row by row from the seed W_{|0><0|}(alpha) = (2/pi) exp(-2|alpha|^2)
and contracted with the density matrix, exploiting Hermitian symmetry to fold
the lower triangle into a factor of two.  Cost is O(dim^2) per grid, with no
special functions involved.

Conventions: alpha = x/(2 x_zpf) + i p x_zpf / hbar, so the SI-axis density
is W(x, p) = W~(alpha) / (2 hbar) with the dimensionless W~ normalized to
integral one over the alpha plane.  Then int W dx dp = 1 and
2 pi hbar int W^2 dx dp = Tr rho^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import HBAR
from .errors import ConfigurationError
from .states import DensityMatrix

__all__ = ["WignerGrid", "wigner_function", "purity_from_wigner"]


@dataclass(frozen=True)
class WignerGrid:
    """W sampled on the outer product of SI axes x [m] and p [kg m/s]:
    values[i, j] = W(x[i], p[j]) [1/(J s)]."""

    x: np.ndarray
    p: np.ndarray
    values: np.ndarray

    def __post_init__(self) -> None:
        if self.values.shape != (self.x.size, self.p.size):
            raise ConfigurationError("Wigner array shape does not match axes")

    @property
    def dx(self) -> float:
        return float(self.x[1] - self.x[0])

    @property
    def dp(self) -> float:
        return float(self.p[1] - self.p[0])

    def normalization(self) -> float:
        """integral W dx dp (should be 1 up to grid truncation)."""
        return float(np.sum(self.values)) * self.dx * self.dp


def _ladder_wigner(rho: np.ndarray, alpha_grid: np.ndarray) -> np.ndarray:
    """Dimensionless W~(alpha) for a Hermitian rho, by ladder recursion."""
    dim = rho.shape[0]
    row_prev = np.empty((dim,) + alpha_grid.shape, dtype=complex)
    row_curr = np.empty_like(row_prev)

    row_prev[0] = (2.0 / math.pi) * np.exp(-2.0 * np.abs(alpha_grid) ** 2)
    w = np.real(rho[0, 0]) * np.real(row_prev[0])
    for n in range(1, dim):
        row_prev[n] = (2.0 * alpha_grid * row_prev[n - 1]) / math.sqrt(n)
        w = w + 2.0 * np.real(rho[0, n] * row_prev[n])

    for m in range(1, dim):
        row_curr[m] = (2.0 * np.conj(alpha_grid) * row_prev[m]
                       - math.sqrt(m) * row_prev[m - 1]) / math.sqrt(m)
        w = w + np.real(rho[m, m] * row_curr[m])
        for n in range(m + 1, dim):
            row_curr[n] = (2.0 * alpha_grid * row_curr[n - 1]
                           - math.sqrt(m) * row_prev[n - 1]) / math.sqrt(n)
            w = w + 2.0 * np.real(rho[m, n] * row_curr[n])
        row_prev, row_curr = row_curr, row_prev
    return w


def wigner_function(rho: DensityMatrix, x_zpf: float,
                    extent_xi: float | None = None,
                    extent_eta: float | None = None,
                    n_x: int = 201, n_p: int = 201) -> WignerGrid:
    """Evaluate W on a symmetric grid.

    Extents are given in natural units: xi = x / x_zpf and eta = p x_zpf /
    hbar.  Defaults cover the state's position spread plus a six-sigma margin
    on both axes.  Raises when the momentum step cannot resolve the
    interference fringes implied by the state's position spread (fringe
    wavelength under two grid steps).
    """
    if rho.basis != "fock":
        raise ConfigurationError("wigner_function needs a Fock-basis state")
    if x_zpf <= 0:
        raise ConfigurationError("x_zpf must be > 0")
    x_spread = 2.0 * math.sqrt(_second_moment(rho))
    if extent_xi is None:
        extent_xi = x_spread + 6.0
    if extent_eta is None:
        extent_eta = 0.5 * x_spread + 3.0
    xi = np.linspace(-extent_xi, extent_xi, n_x)
    eta = np.linspace(-extent_eta, extent_eta, n_p)
    d_eta = eta[1] - eta[0]
    # Cross-branch interference oscillates in eta with period 2 pi / spread.
    if x_spread > 0 and d_eta > math.pi / x_spread:
        raise ConfigurationError(
            f"momentum grid step {d_eta:.3g} cannot resolve fringes of period "
            f"{2 * math.pi / x_spread:.3g}; increase n_p or shrink extent_eta")

    alpha_grid = 0.5 * xi[:, None] + 1j * eta[None, :]
    w_dimless = _ladder_wigner(rho.matrix, alpha_grid)
    return WignerGrid(x=xi * x_zpf, p=eta * HBAR / x_zpf,
                      values=w_dimless / (2.0 * HBAR))


def _second_moment(rho: DensityMatrix) -> float:
    """<X^2> for X = a + a^dagger, from the Fock matrix alone."""
    mat = rho.matrix
    n = np.arange(rho.dim)
    value = float(np.real(np.sum((2 * n + 1) * np.diag(mat))))
    two_up = np.diagonal(mat, offset=2)
    if two_up.size:
        k = np.arange(two_up.size)
        weights = np.sqrt((k + 1.0) * (k + 2.0))
        value += 2.0 * float(np.real(np.sum(weights * two_up)))
    return value


def purity_from_wigner(grid: WignerGrid) -> float:
    """Phase-space purity 2 pi hbar int W^2 dx dp."""
    return 2.0 * math.pi * HBAR * float(np.sum(grid.values**2)) * grid.dx * grid.dp
