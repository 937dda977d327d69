"""Analytic mode basis of the uniform chain and collective decay rates.

The nearest-neighbor hopping matrix is Toeplitz, so its eigenbasis is known in
closed form: plane waves on a ring (periodic boundary) and sine modes on an
open chain. The same basis diagonalizes the uniform-decay evolution matrix,
and congruence with the dissipative kernel yields the collective decay rates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "ModeBasis",
    "CollectiveSpectrum",
    "mode_basis",
    "dispersion",
    "collective_rates",
    "superradiant_fraction",
    "to_collective",
    "from_collective",
]


@dataclass(frozen=True)
class ModeBasis:
    """Closed-form eigenbasis of the uniform nearest-neighbor chain.

    Attributes
    ----------
    S : int
    boundary : str
        ``"open"`` or ``"periodic"``.
    theta : float
        Mode angle increment: 2*pi/S (periodic), pi/(S+1) (open).
    V : ndarray
        S x S matrix of eigenvectors, column k. Site index j runs 1..S over
        rows. Periodic: V[j-1, k] = exp(-1j*j*k*theta)/sqrt(S), k = 0..S-1,
        inverse is the conjugate transpose. Open: V[j-1, k-1] =
        sqrt(2/(S+1))*sin(theta*j*k), k = 1..S, real orthogonal involution.
    k_index : ndarray
        The k label of each column (0..S-1 periodic, 1..S open).
    """

    S: int
    boundary: str
    theta: float
    V: np.ndarray
    k_index: np.ndarray


@dataclass(frozen=True)
class CollectiveSpectrum:
    """Energies and decay rates of the collective modes, in bare-rate units."""

    energies: np.ndarray
    rates: np.ndarray


def mode_basis(S, boundary="open") -> ModeBasis:
    """Build the closed-form mode basis for a chain of S sites."""
    if S < 2:
        raise ValueError("S must be >= 2")
    j = np.arange(1, S + 1)
    if boundary == "periodic":
        theta = 2.0 * math.pi / S
        k = np.arange(S)
        V = np.exp(-1j * theta * np.outer(j, k)) / math.sqrt(S)
    elif boundary == "open":
        theta = math.pi / (S + 1)
        k = np.arange(1, S + 1)
        V = math.sqrt(2.0 / (S + 1)) * np.sin(theta * np.outer(j, k))
    else:
        raise ValueError("boundary must be 'open' or 'periodic'")
    return ModeBasis(S=S, boundary=boundary, theta=theta, V=V, k_index=k)


def _inverse(basis: ModeBasis) -> np.ndarray:
    # periodic: V^-1 = V dagger (rows are 1-based sites, columns 0-based
    # modes, so the array is not symmetric); open: V is its own inverse
    if basis.boundary == "periodic":
        return np.conj(basis.V).T
    return basis.V


def dispersion(basis: ModeBasis, omega=0.0, Omega=1.0) -> np.ndarray:
    """Collective-mode energies omega + 2*Omega*cos(k*theta)."""
    return omega + 2.0 * Omega * np.cos(basis.k_index * basis.theta)


def collective_rates(basis: ModeBasis, gamma: np.ndarray) -> np.ndarray:
    """Decay rate of each collective mode.

    Congruence of the dissipative matrix with the mode basis,
    Gamma_k = sum_{j j'} conj(V_{jk}) gamma_{jj'} V_{j'k}. Real output; the
    imaginary residual (roundoff only, gamma is symmetric) is discarded.
    """
    gamma = np.asarray(gamma)
    if gamma.shape != (basis.S, basis.S):
        raise ValueError("gamma matrix dimension mismatch")
    rates = np.einsum("jk,jl,lk->k", np.conj(basis.V), gamma, basis.V)
    return rates.real


def superradiant_fraction(rates, gamma=1.0) -> float:
    """Fraction of modes decaying strictly faster than the bare rate.

    Ties count as not superradiant; a 1e-12 relative guard keeps congruence
    roundoff from promoting exact ties, so independent decay gives 0.
    """
    rates = np.asarray(rates)
    return float(np.count_nonzero(rates > gamma * (1.0 + 1e-12))) / rates.size


def to_collective(basis: ModeBasis, beta: np.ndarray) -> np.ndarray:
    """Site amplitudes -> collective amplitudes, beta_tilde = V^-1 beta."""
    beta = np.asarray(beta)
    if beta.shape[-1] != basis.S:
        raise ValueError("amplitude vector dimension mismatch")
    return beta @ _inverse(basis).T


def from_collective(basis: ModeBasis, beta_tilde: np.ndarray) -> np.ndarray:
    """Collective amplitudes -> site amplitudes, beta = V beta_tilde."""
    beta_tilde = np.asarray(beta_tilde)
    if beta_tilde.shape[-1] != basis.S:
        raise ValueError("amplitude vector dimension mismatch")
    return beta_tilde @ basis.V.T
