"""Fock-space operators, displacement, and cat-state preparation.

Matrices are dense complex arrays over a truncated Fock space of `dim`
levels.  Displacements demand dim >= 4 |beta|^2 + 20 so the displaced state
fits the truncation with a comfortable tail margin.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .errors import LambDickeWarning, TruncationError
from .states import FockState

__all__ = [
    "destroy",
    "create",
    "number_operator",
    "position_quadrature",
    "default_dim",
    "required_dim",
    "coherent_amplitudes",
    "coherent_state",
    "displacement",
    "prepare_cat",
    "cat_norm_factor",
    "cat_separation",
    "ConditionalDisplacementGate",
    "conditional_displacement_gate",
    "cat_from_gate",
]

# Lamb-Dicke expansion strain threshold: eta sqrt(<n> + 1) beyond this is
# reported (not fatal) because the linearized gate model degrades.
LAMB_DICKE_LIMIT = 0.3


def destroy(dim: int) -> np.ndarray:
    """Annihilation operator a."""
    return np.diag(np.sqrt(np.arange(1.0, dim)), k=1).astype(complex)


def create(dim: int) -> np.ndarray:
    return destroy(dim).conj().T


def number_operator(dim: int) -> np.ndarray:
    return np.diag(np.arange(dim)).astype(complex)


def position_quadrature(dim: int) -> np.ndarray:
    """Dimensionless position X = a + a^dagger (x = x_zpf X)."""
    a = destroy(dim)
    return a + a.conj().T


def required_dim(alpha: complex) -> int:
    """Truncation needed to hold a displacement of size |alpha|."""
    return int(math.ceil(4.0 * abs(alpha) ** 2 + 20.0))


def default_dim(alpha: complex) -> int:
    """Default truncation for cat work: max(4 |alpha|^2 + 20, 32)."""
    return max(required_dim(alpha), 32)


def _check_dim(alpha: complex, dim: int) -> None:
    need = required_dim(alpha)
    if dim < need:
        raise TruncationError(
            f"dim = {dim} cannot hold a displacement of |alpha| = {abs(alpha):.3g}; "
            f"use dim >= {need}")


def coherent_amplitudes(alpha: complex, dim: int) -> np.ndarray:
    """Exact truncated coherent-state amplitudes e^(-|a|^2/2) a^n / sqrt(n!).

    Not renormalized: the missing tail is the truncation error, which callers
    relying on exact overlaps want to see rather than have hidden.
    """
    amps = np.empty(dim, dtype=complex)
    amps[0] = math.exp(-0.5 * abs(alpha) ** 2)
    for n in range(1, dim):
        amps[n] = amps[n - 1] * alpha / math.sqrt(n)
    return amps


def coherent_state(alpha: complex, dim: int | None = None) -> FockState:
    if dim is None:
        dim = default_dim(alpha)
    _check_dim(alpha, dim)
    amps = coherent_amplitudes(alpha, dim)
    return FockState(amplitudes=amps / np.linalg.norm(amps))


def displacement(alpha: complex, dim: int) -> np.ndarray:
    """Displacement matrix D(alpha) = expm(alpha a^dagger - alpha* a).

    Unitary within the truncation away from the top levels; the truncation
    guard keeps the displaced vacuum comfortably inside the space.
    """
    _check_dim(alpha, dim)
    a = destroy(dim)
    return expm(alpha * a.conj().T - np.conj(alpha) * a)


def cat_norm_factor(alpha: complex) -> float:
    """Normalization N = 2 (1 + e^(-2 |alpha|^2)) of |alpha> + |-alpha>."""
    return 2.0 * (1.0 + math.exp(-2.0 * abs(alpha) ** 2))


def cat_separation(alpha: complex, x_zpf: float) -> float:
    """Physical distance between the wavepacket centres of prepare_cat(alpha).

    With x = x_zpf (a + a^dagger), the branches |+-alpha> sit at
    +-2 Re(alpha) x_zpf, so the centre-to-centre distance is 4 |Re alpha| x_zpf.
    """
    return 4.0 * abs(np.real(alpha)) * x_zpf


def prepare_cat(alpha: complex, dim: int | None = None) -> FockState:
    """Even cat (|alpha> + |-alpha>) / sqrt(N): only even Fock levels occupied.

    alpha = 0 degenerates to the ground state.
    """
    if dim is None:
        dim = default_dim(alpha)
    if alpha == 0:
        amps = np.zeros(dim, dtype=complex)
        amps[0] = 1.0
        return FockState(amplitudes=amps)
    _check_dim(alpha, dim)
    amps = coherent_amplitudes(alpha, dim) + coherent_amplitudes(-alpha, dim)
    return FockState(amplitudes=amps / np.linalg.norm(amps))


@dataclass(frozen=True)
class ConditionalDisplacementGate:
    """Spin-dependent kick: D(+i eta theta) on |e>, D(-i eta theta) on |g>.

    The branch operators are exactly unitary; normal_ordering_factor records
    the e^(-(eta theta)^2 / 2) prefactor that appears when the gate is written
    in normal-ordered form, so bookkeeping against that form stays auditable.
    """

    eta: float
    theta: float
    dim: int
    branch_excited: np.ndarray
    branch_ground: np.ndarray
    normal_ordering_factor: float

    @property
    def alpha(self) -> complex:
        """Coherent amplitude i eta theta imparted to the |e> branch."""
        return 1j * self.eta * self.theta


def conditional_displacement_gate(eta: float, theta: float,
                                  dim: int | None = None) -> ConditionalDisplacementGate:
    """Build the conditional displacement for Lamb-Dicke parameter eta and
    pulse area theta; the cat size produced is |alpha| = eta theta.

    Warns (LambDickeWarning) when eta sqrt(<n> + 1) of the displaced branch
    exceeds the expansion threshold.
    """
    kick = eta * theta
    if dim is None:
        dim = default_dim(kick)
    strain = eta * math.sqrt(kick**2 + 1.0)
    if strain >= LAMB_DICKE_LIMIT:
        warnings.warn(
            f"Lamb-Dicke strain eta sqrt(<n>+1) = {strain:.3f} >= "
            f"{LAMB_DICKE_LIMIT}; the linearized gate model is unreliable",
            LambDickeWarning, stacklevel=2)
    d_plus = displacement(1j * kick, dim)
    return ConditionalDisplacementGate(
        eta=eta,
        theta=theta,
        dim=dim,
        branch_excited=d_plus,
        branch_ground=d_plus.conj().T,  # D(-i eta theta) = D(i eta theta)^dagger
        normal_ordering_factor=math.exp(-0.5 * kick**2),
    )


def cat_from_gate(gate: ConditionalDisplacementGate) -> tuple[FockState, float]:
    """Run the interferometric sequence and post-select the even cat.

    The two-level system starts in (|g> + |e>)/sqrt(2) with the motion in the
    ground state; after the conditional kick, a second Hadamard, and detection
    of |g>, the motional state collapses to (|+alpha> + |-alpha>)/sqrt(N) with
    alpha = i eta theta.  Returns the state and the detection probability
    N / 4.
    """
    dim = gate.dim
    vacuum = np.zeros(dim, dtype=complex)
    vacuum[0] = 1.0
    # TLS amplitudes after the first Hadamard: (|g> + |e>)/sqrt(2).
    branch_g = gate.branch_ground @ vacuum / math.sqrt(2.0)
    branch_e = gate.branch_excited @ vacuum / math.sqrt(2.0)
    # Second Hadamard: |g> -> (|g>+|e>)/sqrt(2), |e> -> (|g>-|e>)/sqrt(2);
    # detecting |g> keeps the symmetric combination.
    unnormalized = (branch_g + branch_e) / math.sqrt(2.0)
    probability = float(np.sum(np.abs(unnormalized) ** 2))
    state = FockState(amplitudes=unnormalized / math.sqrt(probability))
    return state, probability
