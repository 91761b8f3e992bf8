import math
import warnings

import numpy as np
import pytest
from numpy.testing import assert_allclose

from levicat import (ConfigurationError, DensityMatrix, FockState,
                     LambDickeWarning, PositionGrid, ThermalizationSpec,
                     TruncationError, cat_from_gate, cat_norm_factor,
                     cat_separation, coherence_between,
                     conditional_displacement_gate, coherent_state,
                     default_position_grid, displacement, fock_to_position,
                     prepare_cat)
from levicat.operators import (coherent_amplitudes, create, default_dim,
                               destroy, number_operator, position_quadrature,
                               required_dim)
from levicat.states import coherent_wavefunction, hermite_functions

from oracles import coherent_overlap, oscillator_eigenfunction

X_ZPF = 2.896897880891785e-12


def test_ladder_operators():
    dim = 6
    a, adag = destroy(dim), create(dim)
    comm = a @ adag - adag @ a
    # [a, a^dagger] = 1 except in the truncated top corner
    assert_allclose(comm[:-1, :-1], np.eye(dim - 1), atol=1e-14)
    assert_allclose(adag @ a, number_operator(dim), atol=1e-14)
    assert_allclose(position_quadrature(dim), a + adag, atol=0.0)


def test_dimension_guards():
    assert required_dim(2.0) == 36
    assert default_dim(0.0) == 32
    assert default_dim(3.0) == 56
    with pytest.raises(TruncationError):
        coherent_state(2.0, dim=20)
    with pytest.raises(TruncationError):
        displacement(3.0, 40)


def test_fock_state_validation():
    good = np.zeros(8, dtype=complex)
    good[0] = 1.0
    assert FockState(amplitudes=good).dim == 8
    with pytest.raises(ConfigurationError):
        FockState(amplitudes=good * 0.9)  # not normalized
    top_heavy = np.zeros(8, dtype=complex)
    top_heavy[-1] = 1.0
    with pytest.raises(ConfigurationError):
        FockState(amplitudes=top_heavy)  # truncation leakage
    with pytest.raises(ConfigurationError):
        FockState(amplitudes=np.array([1.0 + 0j]))


def test_coherent_state_occupation_and_overlaps():
    for alpha in (0.5, 1.0, 2.0, 1.0 + 0.5j):
        state = coherent_state(alpha)
        rho = state.density_matrix()
        assert_allclose(rho.mean_occupation(), abs(alpha) ** 2, rtol=1e-10)
    a, b = 1.2, 0.5 + 0.3j
    overlap = coherent_amplitudes(a, 40).conj() @ coherent_amplitudes(b, 40)
    assert_allclose(overlap, coherent_overlap(a, b), rtol=1e-12)


def test_displacement_unitary_and_generates_coherent_states():
    dim = 40
    alpha = 1.3 - 0.4j
    d = displacement(alpha, dim)
    assert_allclose(d @ d.conj().T, np.eye(dim), atol=1e-12)
    vacuum = np.zeros(dim, dtype=complex)
    vacuum[0] = 1.0
    assert_allclose(d @ vacuum, coherent_amplitudes(alpha, dim), atol=1e-10)


def test_cat_occupies_even_levels_only():
    alpha = 1.5
    cat = prepare_cat(alpha)
    assert np.all(cat.amplitudes[1::2] == 0.0)
    assert abs(cat.amplitudes[0]) > 0


def test_cat_mean_occupation():
    # even superposition of +-alpha has <n> = alpha^2 tanh(alpha^2)
    for alpha in (0.5, 1.0, 2.0):
        cat = prepare_cat(alpha)
        rho = cat.density_matrix()
        expected = alpha**2 * math.tanh(alpha**2)
        assert_allclose(rho.mean_occupation(), expected, rtol=1e-10)


def test_cat_norm_factor_matches_overlap():
    for alpha in (0.3, 1.0, 2.5):
        # || |a> + |-a> ||^2 = 2 (1 + <a|-a>)
        expected = 2.0 * (1.0 + coherent_overlap(alpha, -alpha).real)
        assert_allclose(cat_norm_factor(alpha), expected, rtol=1e-13)


def test_cat_of_zero_is_ground_state():
    cat = prepare_cat(0.0)
    assert cat.amplitudes[0] == 1.0
    assert np.all(cat.amplitudes[1:] == 0.0)


def test_cat_separation_uses_real_part():
    assert_allclose(cat_separation(2.0, X_ZPF), 8.0 * X_ZPF, rtol=1e-13)
    assert_allclose(cat_separation(-1.5, X_ZPF), 6.0 * X_ZPF, rtol=1e-13)
    assert cat_separation(2.0j, X_ZPF) == 0.0


def test_gate_construction():
    eta, theta = 1.7106904324829832e-05, 2.0 / 1.7106904324829832e-05
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        gate = conditional_displacement_gate(eta, theta)
    assert gate.alpha == 1j * 2.0
    assert_allclose(gate.normal_ordering_factor, math.exp(-2.0), rtol=1e-13)
    assert_allclose(gate.branch_ground, gate.branch_excited.conj().T, atol=0.0)
    eye = np.eye(gate.dim)
    assert_allclose(gate.branch_excited @ gate.branch_excited.conj().T, eye,
                    atol=1e-12)


def test_gate_warns_outside_lamb_dicke_regime():
    with pytest.warns(LambDickeWarning):
        conditional_displacement_gate(0.3, 1.0)


def test_gate_prepares_even_cat():
    eta = 1e-4
    theta = 1.5 / eta
    gate = conditional_displacement_gate(eta, theta)
    state, probability = cat_from_gate(gate)
    reference = prepare_cat(1.5j, dim=gate.dim)
    fidelity = abs(state.amplitudes.conj() @ reference.amplitudes)
    assert_allclose(fidelity, 1.0, rtol=1e-10)
    assert_allclose(probability, cat_norm_factor(1.5j) / 4.0, rtol=1e-10)


def test_density_matrix_validation():
    with pytest.raises(ConfigurationError):
        DensityMatrix(matrix=np.ones((2, 3)))
    with pytest.raises(ConfigurationError):
        DensityMatrix(matrix=np.array([[0.5, 0.1], [0.2, 0.5]]))
    with pytest.raises(ConfigurationError):
        DensityMatrix(matrix=0.6 * np.eye(2))
    with pytest.raises(ConfigurationError):
        DensityMatrix(matrix=np.diag([1.5, -0.5]))
    with pytest.raises(ConfigurationError):
        DensityMatrix(matrix=np.eye(2) / 2.0, basis="momentum")
    with pytest.raises(ConfigurationError):
        DensityMatrix(matrix=np.eye(2) / 2.0, basis="position")  # no grid
    grid = PositionGrid(extent=1e-9, n_points=16)
    with pytest.raises(ConfigurationError):
        DensityMatrix(matrix=np.eye(2) / 2.0, basis="fock", grid=grid)
    mixed = DensityMatrix(matrix=np.diag([0.75, 0.25]))
    assert_allclose(mixed.purity(), 0.625, rtol=1e-13)
    assert_allclose(mixed.mean_occupation(), 0.25, rtol=1e-13)


def test_position_grid():
    grid = PositionGrid(extent=2e-9, n_points=101)
    assert grid.x[0] == -2e-9
    assert grid.x[-1] == 2e-9
    assert_allclose(grid.dx, 4e-9 / 100, rtol=1e-13)
    with pytest.raises(ConfigurationError):
        PositionGrid(extent=0.0, n_points=64)
    with pytest.raises(ConfigurationError):
        PositionGrid(extent=1e-9, n_points=4)
    auto = default_position_grid(4.0 * X_ZPF, X_ZPF)
    assert_allclose(auto.extent, 2.0 * X_ZPF + 6.0 * X_ZPF, rtol=1e-13)
    assert auto.n_points == 256
    with pytest.raises(ConfigurationError):
        default_position_grid(-1e-9, X_ZPF)


def test_thermalization_spec_validation():
    assert ThermalizationSpec().gamma_m == 0.0
    with pytest.raises(ConfigurationError):
        ThermalizationSpec(gamma_m=-1.0)
    with pytest.raises(ConfigurationError):
        ThermalizationSpec(gamma_m=1.0, n_th=-0.5)


def test_hermite_functions_match_explicit_polynomials():
    xi = np.linspace(-8.0, 8.0, 321)
    psi = hermite_functions(9, xi)
    for n in range(9):
        assert_allclose(psi[n], oscillator_eigenfunction(n, xi), atol=1e-12)


def test_hermite_functions_orthonormal():
    xi = np.linspace(-20.0, 20.0, 2001)
    dxi = xi[1] - xi[0]
    psi = hermite_functions(10, xi)
    gram = psi @ psi.T * dxi
    assert_allclose(gram, np.eye(10), atol=1e-7)


def test_coherent_wavefunction_matches_fock_expansion():
    # the analytic Gaussian must agree with sum_n c_n psi_n including phase
    alpha = 0.8 + 0.6j
    grid = default_position_grid(4.0 * abs(alpha) * X_ZPF, X_ZPF)
    dim = 48
    amps = coherent_amplitudes(alpha, dim)
    psi_n = hermite_functions(dim, grid.x / X_ZPF) / math.sqrt(X_ZPF)
    expanded = amps @ psi_n
    analytic = coherent_wavefunction(alpha, grid, X_ZPF)
    assert_allclose(analytic, expanded, atol=1e-8 * np.max(np.abs(analytic)))


def test_fock_to_position_preserves_trace_and_purity():
    cat = prepare_cat(1.5)
    rho_fock = cat.density_matrix()
    grid = default_position_grid(cat_separation(1.5, X_ZPF), X_ZPF)
    rho_pos = fock_to_position(rho_fock, grid, X_ZPF)
    assert rho_pos.basis == "position"
    assert_allclose(rho_pos.trace(), 1.0, rtol=5e-3)
    assert_allclose(rho_pos.purity(), 1.0, rtol=5e-3)
    with pytest.raises(ConfigurationError):
        fock_to_position(rho_pos, grid, X_ZPF)


def test_coherence_between_agrees_across_bases():
    alpha = 1.5
    cat = prepare_cat(alpha)
    rho_fock = cat.density_matrix()
    fock_value = coherence_between(rho_fock, alpha)
    # pure cat: |<a|rho|-a>| = |<a|cat><cat|-a>| = N/4 e^(-2 a^2) style overlap
    plus = coherent_amplitudes(alpha, cat.dim)
    expected = abs((plus.conj() @ cat.amplitudes)
                   * (cat.amplitudes.conj() @ coherent_amplitudes(-alpha, cat.dim)))
    assert_allclose(fock_value, expected, rtol=1e-12)
    grid = default_position_grid(cat_separation(alpha, X_ZPF), X_ZPF)
    rho_pos = fock_to_position(rho_fock, grid, X_ZPF)
    pos_value = coherence_between(rho_pos, alpha, X_ZPF)
    assert_allclose(pos_value, fock_value, rtol=5e-3)
    with pytest.raises(ConfigurationError):
        coherence_between(rho_pos, alpha)  # needs x_zpf in position basis
