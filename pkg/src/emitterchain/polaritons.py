"""Polaritons of a photon mode coupled to a hopping chain of emitters.

Closed forms for the two bright polaritons of the single-excitation
Tavis-Cummings problem with nearest-neighbor hopping, for uniform and for
alternating-sign couplings, plus a self-contained Jacobi eigensolver that
serves as the numeric cross-check on the closed forms.

Energies in the two coupling patterns:

- uniform ("symmetric"):      omega + Omega +- sqrt(g^2 N + Omega^2)
- alternating ("asymmetric"): omega - Omega +- sqrt(g^2 N + Omega^2)

The photon weight of either branch is g sqrt(N) / sqrt((E - omega)^2 + g^2 N)
with E the branch energy; the matter weight rides on the uniform or the
alternating collective mode accordingly. The remaining N - 1 collective
modes carry no photon weight.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "PolaritonSolution",
    "polariton_solution",
    "matched_detuning",
    "numeric_eigensystem",
    "jacobi_eigh",
]

_SYMMETRIES = ("symmetric", "asymmetric")


@dataclass(frozen=True)
class PolaritonSolution:
    """Bright-branch closed forms for one coupling symmetry.

    Attributes
    ----------
    symmetry : str
        ``symmetric`` (uniform couplings) or ``asymmetric`` (alternating).
    energy_upper, energy_lower : float
        Bright polariton energies.
    photon_upper, photon_lower : float
        Photon amplitude of each branch, in (0, 1).
    matter_upper, matter_lower : ndarray
        Per-emitter matter coefficients; alternating sign pattern in the
        asymmetric case.
    dark_count : int
        Number of collective modes with zero photon weight, N - 1.
    """

    symmetry: str
    energy_upper: float
    energy_lower: float
    photon_upper: float
    photon_lower: float
    matter_upper: np.ndarray
    matter_lower: np.ndarray
    dark_count: int


def _branch_vectors(energy, omega, g, N, signs):
    detune = energy - omega
    norm = math.sqrt(detune**2 + g * g * N)
    photon = g * math.sqrt(N) / norm
    matter = signs * (detune / (math.sqrt(N) * norm))
    return photon, matter


def polariton_solution(g, N, Omega, omega=0.0, symmetry="symmetric") -> PolaritonSolution:
    """Closed-form bright polaritons of the N-emitter, one-photon problem.

    Parameters
    ----------
    g : float
        Per-emitter photon coupling magnitude, positive.
    N : int
        Emitters in the cavity, at least 2. The asymmetric branch selection
        collapses onto a single collective mode only for even N, so odd N is
        rejected for ``symmetry="asymmetric"``.
    Omega : float
        Nearest-neighbor hopping between the emitters.
    omega : float
        Bare emitter frequency.
    symmetry : str
        Coupling pattern, ``symmetric`` or ``asymmetric``.
    """
    if N < 2:
        raise ValueError("need at least two emitters")
    if g <= 0:
        raise ValueError("coupling g must be positive")
    if symmetry not in _SYMMETRIES:
        raise ValueError(f"unknown symmetry {symmetry!r}")
    if symmetry == "asymmetric" and N % 2:
        raise ValueError("alternating couplings need an even emitter count")
    shift = Omega if symmetry == "symmetric" else -Omega
    half_split = math.sqrt(g * g * N + Omega * Omega)
    upper = omega + shift + half_split
    lower = omega + shift - half_split
    signs = np.ones(N) if symmetry == "symmetric" else (-1.0) ** np.arange(1, N + 1)
    ph_u, mat_u = _branch_vectors(upper, omega, g, N, signs)
    ph_l, mat_l = _branch_vectors(lower, omega, g, N, signs)
    return PolaritonSolution(
        symmetry=symmetry,
        energy_upper=upper,
        energy_lower=lower,
        photon_upper=ph_u,
        photon_lower=ph_l,
        matter_upper=mat_u,
        matter_lower=mat_l,
        dark_count=N - 1,
    )


def matched_detuning(g, N, Omega, symmetry="asymmetric", branch="upper") -> float:
    """Detuning that parks a drive on one bright polariton, energy - omega."""
    if branch not in ("upper", "lower"):
        raise ValueError(f"unknown branch {branch!r}")
    sol = polariton_solution(g, N, Omega, omega=0.0, symmetry=symmetry)
    return sol.energy_upper if branch == "upper" else sol.energy_lower


def jacobi_eigh(matrix, tol=1e-12, max_sweeps=60):
    """Eigendecomposition of a real symmetric matrix by cyclic Jacobi sweeps.

    Returns eigenvalues (ascending) and the matching orthonormal column
    eigenvectors. Iterates until the off-diagonal Frobenius norm falls below
    ``tol`` times the matrix norm.

    Kept dependency-free on purpose: this routine is the in-house oracle the
    closed forms are checked against.
    """
    a = np.array(matrix, dtype=float)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("matrix must be square")
    if np.abs(a - a.T).max() > 1e-10 * max(1.0, np.abs(a).max()):
        raise ValueError("matrix must be symmetric")
    a = 0.5 * (a + a.T)
    v = np.eye(n)
    scale = np.linalg.norm(a)
    if scale == 0.0:
        return np.zeros(n), v
    # rotating entries already below threshold only churns mass around
    # degenerate clusters; skipping them guarantees the off-diagonal norm
    # ends below tol * scale once a sweep performs no rotation
    threshold = tol * scale / n
    for _ in range(max_sweeps):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= threshold:
                    continue
                rotated = True
                # standard stable rotation angle from the local 2x2 block
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(1.0, theta))
                c = 1.0 / math.hypot(1.0, t)
                s = t * c
                rot_p = c * a[:, p] - s * a[:, q]
                rot_q = s * a[:, p] + c * a[:, q]
                a[:, p], a[:, q] = rot_p, rot_q
                rot_p = c * a[p, :] - s * a[q, :]
                rot_q = s * a[p, :] + c * a[q, :]
                a[p, :], a[q, :] = rot_p, rot_q
                a[p, q] = a[q, p] = 0.0
                rot_p = c * v[:, p] - s * v[:, q]
                rot_q = s * v[:, p] + c * v[:, q]
                v[:, p], v[:, q] = rot_p, rot_q
        if not rotated:
            break
    else:
        raise RuntimeError("Jacobi sweep limit reached without convergence")
    order = np.argsort(np.diag(a), kind="stable")
    return np.diag(a)[order].copy(), v[:, order]


def build_closed_hamiltonian(
    g, N, Omega, omega=0.0, omega_c=0.0, symmetry="symmetric", boundary="periodic"
):
    """Real symmetric (N+1) x (N+1) single-excitation Hamiltonian.

    Emitters occupy the first N rows with nearest-neighbor hopping ``Omega``;
    the photon mode is the last row, coupled to each emitter with ``+g`` or
    alternating ``+-g`` depending on ``symmetry``. The closed-form polariton
    energies are exact for ``boundary="periodic"``, where the uniform and
    alternating collective modes are exact hopping eigenvectors; an open
    segment shifts them by an end-bond defect of order ``Omega / N``.
    """
    if symmetry not in _SYMMETRIES:
        raise ValueError(f"unknown symmetry {symmetry!r}")
    if boundary not in ("open", "periodic"):
        raise ValueError(f"unknown boundary {boundary!r}")
    if N < 2:
        raise ValueError("need at least two emitters")
    h = np.zeros((N + 1, N + 1))
    h[np.arange(N), np.arange(N)] = omega
    h[N, N] = omega_c
    idx = np.arange(N - 1)
    h[idx, idx + 1] = Omega
    h[idx + 1, idx] = Omega
    if boundary == "periodic":
        # N = 2 rings traverse the same bond twice; the += keeps the uniform
        # mode an exact eigenvector with energy omega + 2 Omega for every N
        h[0, N - 1] += Omega
        h[N - 1, 0] += Omega
    signs = np.ones(N) if symmetry == "symmetric" else (-1.0) ** np.arange(1, N + 1)
    h[:N, N] = g * signs
    h[N, :N] = g * signs
    return h


def numeric_eigensystem(hamiltonian):
    """All eigenpairs of a closed (loss-free) single-excitation Hamiltonian.

    Parameters
    ----------
    hamiltonian : ndarray
        Real symmetric (N+1) x (N+1) array, photon mode in the last row, as
        produced by `build_closed_hamiltonian`. Non-symmetric input is
        rejected.

    Returns
    -------
    energies : ndarray
        Ascending eigenvalues.
    vectors : ndarray
        Orthonormal eigenvectors in matching columns; the last component of
        a column is the photon amplitude of that eigenstate.
    """
    return jacobi_eigh(hamiltonian)


def photon_fractions(vectors) -> np.ndarray:
    """Squared photon weight of each eigenvector column."""
    return np.asarray(vectors)[-1, :] ** 2
