import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from levicat import (ConfigurationError, DensityMatrix, WignerGrid,
                     coherent_state, default_position_grid, fock_to_position,
                     prepare_cat, purity_from_wigner, wigner_function)
from levicat.constants import HBAR
from levicat.states import coherent_wavefunction

from oracles import wigner_displaced_parity

X_ZPF = 2.896897880891785e-12


def test_vacuum_wigner_is_analytic_gaussian():
    rho = prepare_cat(0.0, dim=8).density_matrix()
    grid = wigner_function(rho, X_ZPF)
    xi = grid.x[:, None] / X_ZPF
    eta = grid.p[None, :] * X_ZPF / HBAR
    expected = np.exp(-0.5 * xi**2 - 2.0 * eta**2) / (math.pi * HBAR)
    assert_allclose(grid.values, expected, rtol=1e-12,
                    atol=1e-12 * np.max(expected))


def test_normalization():
    vacuum = wigner_function(prepare_cat(0.0, dim=8).density_matrix(), X_ZPF)
    assert_allclose(vacuum.normalization(), 1.0, rtol=1e-6)
    cat = wigner_function(prepare_cat(1.5).density_matrix(), X_ZPF)
    assert_allclose(cat.normalization(), 1.0, rtol=1e-4)


def test_ladder_recursion_matches_displaced_parity(rng):
    # random mixed state, checked against the D(-a) rho D(a) parity trace
    dim = 8
    raw = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho_mat = raw @ raw.conj().T
    rho_mat /= np.real(np.trace(rho_mat))
    rho = DensityMatrix(matrix=rho_mat)
    grid = wigner_function(rho, X_ZPF, extent_xi=3.0, extent_eta=2.0,
                           n_x=21, n_p=33)
    alpha = (0.5 * grid.x[:, None] / X_ZPF
             + 1j * grid.p[None, :] * X_ZPF / HBAR)
    # embed rho in a much larger space so the oracle's matrix-exponential
    # displacement is not itself truncation-limited at these alpha
    padded = np.zeros((48, 48), dtype=complex)
    padded[:dim, :dim] = rho_mat
    expected = wigner_displaced_parity(padded, alpha) / (2.0 * HBAR)
    assert_allclose(grid.values, expected, rtol=1e-10,
                    atol=1e-12 * np.max(np.abs(expected)))


def test_coherent_position_marginal():
    alpha = 1.2
    rho = coherent_state(alpha).density_matrix()
    grid = wigner_function(rho, X_ZPF)
    marginal = grid.values.sum(axis=1) * grid.dp
    xi = grid.x / X_ZPF
    expected = (np.exp(-0.5 * (xi - 2.0 * alpha) ** 2)
                / (math.sqrt(2.0 * math.pi) * X_ZPF))
    assert_allclose(marginal, expected, rtol=1e-6,
                    atol=1e-9 * np.max(expected))


def test_cat_fringes_are_negative_somewhere():
    grid = wigner_function(prepare_cat(1.5).density_matrix(), X_ZPF)
    assert np.min(grid.values) < -0.05 * np.max(grid.values)


def test_purity_identity():
    pure = prepare_cat(1.5).density_matrix()
    grid = wigner_function(pure, X_ZPF)
    assert_allclose(purity_from_wigner(grid), 1.0, rtol=1e-3)
    # equal classical mixture of the two branches
    plus = coherent_state(1.5, dim=36).density_matrix().matrix
    minus = coherent_state(-1.5, dim=36).density_matrix().matrix
    mixed = DensityMatrix(matrix=0.5 * (plus + minus))
    grid_mixed = wigner_function(mixed, X_ZPF)
    assert_allclose(purity_from_wigner(grid_mixed), mixed.purity(), rtol=1e-3)


def test_fringe_resolution_guard():
    rho = prepare_cat(2.0).density_matrix()
    with pytest.raises(ConfigurationError, match="fringes"):
        wigner_function(rho, X_ZPF, extent_eta=3.0, n_p=9)


def test_input_validation():
    rho = prepare_cat(1.0).density_matrix()
    with pytest.raises(ConfigurationError):
        wigner_function(rho, 0.0)
    grid = default_position_grid(4.0 * X_ZPF, X_ZPF, n_points=32)
    rho_pos = fock_to_position(rho, grid, X_ZPF)
    with pytest.raises(ConfigurationError):
        wigner_function(rho_pos, X_ZPF)
    with pytest.raises(ConfigurationError):
        WignerGrid(x=np.zeros(3), p=np.zeros(4), values=np.zeros((4, 3)))
