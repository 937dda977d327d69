"""Evolution generators and propagation for the single-excitation models.

Two pictures of the same physics:

- coupled-dipole amplitudes beta (plus one cavity amplitude when present),
  evolving under ``d beta/dt = -M beta`` with the non-Hermitian generator M;
- the single-excitation density matrix (ground population, excited-manifold
  block over sites and photon, optional ground-excited coherence row),
  evolving under the effective Hamiltonian Z with M = i Z.

The generator is time independent, so the default propagation is by dense
matrix exponential computed once per step size; a fixed-step RK4 integrator
is kept as a cross-validation oracle, and a closed-form spectral propagator
covers the uniform Toeplitz chain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .greens import EmitterGeometry, build_coupling_matrices
from .spectral import mode_basis, dispersion

__all__ = [
    "CavityConfig",
    "ChainConfig",
    "AmplitudeState",
    "ExcitationDensity",
    "build_amplitude_generator",
    "propagate_amplitudes",
    "propagate_density",
    "transmission",
]


@dataclass(frozen=True)
class CavityConfig:
    """Single-mode cavity coupled to the central block of the chain.

    ``couplings`` is the vector g_j over the N intracavity sites (a scalar is
    broadcast). The chain splits as [M-site in island | N intracavity sites |
    M-site out island].
    """

    M: int
    N: int
    couplings: np.ndarray
    omega_c: float = 0.0
    kappa: float = 0.0

    def __post_init__(self):
        if self.M <= 0 or self.N <= 0:
            raise ValueError("island and intracavity sizes must be positive")
        g = np.atleast_1d(np.asarray(self.couplings, dtype=float))
        if g.size == 1:
            g = np.full(self.N, g[0])
        if g.shape != (self.N,):
            raise ValueError("couplings must be scalar or length-N vector")
        if self.kappa < 0:
            raise ValueError("kappa must be nonnegative")
        object.__setattr__(self, "couplings", g)


@dataclass(frozen=True)
class ChainConfig:
    """Single source of truth for one run.

    Parameters
    ----------
    geometry : EmitterGeometry
    Omega : float or ndarray
        Nearest-neighbor hopping, in units of the bare decay rate. A vector
        gives per-bond hoppings: length S-1 (open) or S (periodic, last entry
        is the corner bond).
    omega : float
        Base frequency in the rotating frame (all runs default to 0).
    detunings : ndarray or None
        Per-site diagonal shifts delta_j, length S.
    gamma : float
        Bare single-emitter decay rate (the unit of all rates).
    decay_model : str
        ``"independent"`` or ``"collective"``.
    cavity : CavityConfig or None
    """

    geometry: EmitterGeometry
    Omega: float | np.ndarray = 0.0
    omega: float = 0.0
    detunings: np.ndarray | None = None
    gamma: float = 1.0
    decay_model: str = "independent"
    cavity: CavityConfig | None = None

    def __post_init__(self):
        S = self.geometry.S
        if self.decay_model not in ("independent", "collective"):
            raise ValueError("decay_model must be 'independent' or 'collective'")
        if self.gamma < 0:
            raise ValueError("gamma must be nonnegative")
        Om = np.asarray(self.Omega, dtype=float)
        if Om.ndim == 0:
            pass
        else:
            nb = S if self.geometry.boundary == "periodic" else S - 1
            if Om.shape != (nb,):
                raise ValueError(f"per-bond Omega must have length {nb}")
            object.__setattr__(self, "Omega", Om)
        if self.detunings is not None:
            d = np.asarray(self.detunings, dtype=float)
            if d.shape != (S,):
                raise ValueError("detunings must have length S")
            object.__setattr__(self, "detunings", d)
        if self.cavity is not None and S != self.cavity.N + 2 * self.cavity.M:
            raise ValueError("cavity requires S = N + 2*M")

    @property
    def n_amplitudes(self) -> int:
        return self.geometry.S + (1 if self.cavity is not None else 0)

    def site_frequencies(self) -> np.ndarray:
        freqs = np.full(self.geometry.S, float(self.omega))
        if self.detunings is not None:
            freqs = freqs + self.detunings
        return freqs

    def bond_hoppings(self) -> np.ndarray:
        S = self.geometry.S
        nb = S if self.geometry.boundary == "periodic" else S - 1
        Om = np.asarray(self.Omega, dtype=float)
        if Om.ndim == 0:
            return np.full(nb, float(Om))
        return Om

    def decay_matrix(self) -> np.ndarray:
        if self.decay_model == "independent":
            return self.gamma * np.eye(self.geometry.S)
        return build_coupling_matrices(
            self.geometry, truncation="full", decay_model="collective",
            gamma=self.gamma,
        ).gamma


@dataclass
class AmplitudeState:
    """Coupled-dipole amplitudes at one time.

    ``beta`` holds the S site amplitudes, followed by the cavity amplitude
    when the run has one.
    """

    beta: np.ndarray
    t: float

    def site_populations(self, S=None):
        sites = self.beta if S is None else self.beta[:S]
        return np.abs(sites) ** 2

    def norm(self) -> float:
        return float(np.sum(np.abs(self.beta) ** 2))


@dataclass
class ExcitationDensity:
    """Single-excitation density matrix split into its conserved blocks.

    ``rho_E`` is the excited-manifold block over the S sites (plus photon when
    the run has a cavity); ``rho_GG`` the ground population; ``rho_G`` the
    optional ground-excited coherence row (entries <G|rho|j>).
    """

    rho_E: np.ndarray
    rho_GG: float = 0.0
    rho_G: np.ndarray | None = None
    t: float = 0.0

    def __post_init__(self):
        rho = np.asarray(self.rho_E, dtype=complex)
        if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
            raise ValueError("rho_E must be a square matrix")
        herm = np.abs(rho - rho.conj().T).max()
        if herm > 1e-10:
            raise ValueError(f"rho_E not Hermitian within 1e-10 (residual {herm:.2e})")
        diag = np.diag(rho).real
        if diag.min() < -1e-12:
            raise ValueError("rho_E has a negative population beyond tolerance")
        self.rho_E = rho
        if self.rho_G is not None:
            self.rho_G = np.asarray(self.rho_G, dtype=complex)

    @classmethod
    def from_pure(cls, beta, ground_amplitude=None, t=0.0):
        """Density matrix of the pure state c_G|G> + sum_j beta_j |j>.

        When ``ground_amplitude`` is omitted it is fixed by normalization
        (requires total excited weight <= 1).
        """
        beta = np.asarray(beta, dtype=complex)
        pop = float(np.sum(np.abs(beta) ** 2))
        if ground_amplitude is None:
            if pop > 1.0 + 1e-12:
                raise ValueError("excited population exceeds 1")
            ground_amplitude = math.sqrt(max(0.0, 1.0 - pop))
        cg = complex(ground_amplitude)
        return cls(
            rho_E=np.outer(beta, beta.conj()),
            rho_GG=abs(cg) ** 2,
            rho_G=cg * beta.conj(),
            t=t,
        )

    def populations(self) -> np.ndarray:
        """Site/photon populations; tiny negatives in [-1e-12, 0) are clamped
        to 0 at readout only, the stored state is untouched."""
        diag = np.diag(self.rho_E).real.copy()
        mask = (diag < 0) & (diag >= -1e-12)
        diag[mask] = 0.0
        return diag

    def total(self) -> float:
        return self.rho_GG + float(np.trace(self.rho_E).real)


def build_amplitude_generator(config: ChainConfig) -> np.ndarray:
    """Generator M of the amplitude equation of motion d beta/dt = -M beta.

    M = i H + Gamma/2: the Hermitian part carries site frequencies, bond
    hoppings, and the cavity row/column; the dissipative part is the decay
    matrix extended by kappa on the photon diagonal (no emitter-photon cross
    dissipation).
    """
    S = config.geometry.S
    n = config.n_amplitudes
    H = np.zeros((n, n))
    H[np.arange(S), np.arange(S)] = config.site_frequencies()
    bonds = config.bond_hoppings()
    for b, Om in enumerate(bonds):
        i, j = b, (b + 1) % S
        H[i, j] += Om
        H[j, i] += Om
    Gamma = np.zeros((n, n))
    Gamma[:S, :S] = config.decay_matrix()
    if config.cavity is not None:
        cav = config.cavity
        ph = S
        H[ph, ph] = cav.omega_c
        for loc, j in enumerate(range(cav.M, cav.M + cav.N)):
            H[j, ph] = cav.couplings[loc]
            H[ph, j] = cav.couplings[loc]
        Gamma[ph, ph] = cav.kappa
    return 1j * H + 0.5 * Gamma


def _rk4_step_count(generator, dt):
    scale = np.abs(generator).max()
    h = 1e-3 / scale if scale > 0 else dt
    return max(1, int(math.ceil(dt / h)))


def _spectral_guard(config: ChainConfig):
    if config.cavity is not None:
        raise ValueError("spectral propagation does not support a cavity mode")
    if config.decay_model != "independent":
        raise ValueError("spectral propagation requires uniform (independent) decay")
    if config.detunings is not None and np.ptp(config.detunings) != 0:
        raise ValueError("spectral propagation requires uniform site frequencies")
    if np.asarray(config.Omega).ndim != 0:
        bonds = config.bond_hoppings()
        if np.ptp(bonds) != 0:
            raise ValueError("spectral propagation requires uniform hopping")


def propagate_amplitudes(generator, beta0, times, method="expm"):
    """Propagate coupled-dipole amplitudes over the given time grid.

    Parameters
    ----------
    generator : ndarray or ChainConfig
        The matrix M (``expm``/``rk4``), or a ChainConfig, from which M is
        built. The ``spectral`` method requires the ChainConfig form and a
        uniform chain (no disorder, independent decay, no cavity).
    beta0 : ndarray
        Initial amplitudes at ``times[0]``.
    times : array_like
        Increasing output times.
    method : str
        ``"expm"`` (default), ``"rk4"``, or ``"spectral"``.

    Returns
    -------
    list of AmplitudeState
    """
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size == 0 or np.any(np.diff(times) <= 0):
        raise ValueError("times must be a nonempty strictly increasing 1D grid")
    config = None
    if isinstance(generator, ChainConfig):
        config = generator
        generator = None if method == "spectral" else build_amplitude_generator(config)
    beta0 = np.asarray(beta0, dtype=complex)

    if method == "spectral":
        if config is None:
            raise ValueError("spectral propagation needs a ChainConfig")
        _spectral_guard(config)
        S = config.geometry.S
        if beta0.shape != (S,):
            raise ValueError("beta0 dimension mismatch")
        basis = mode_basis(S, config.geometry.boundary)
        freqs = config.site_frequencies()
        Om = config.bond_hoppings()[0] if np.asarray(config.Omega).ndim else float(config.Omega)
        lam = 1j * dispersion(basis, freqs[0], Om) + 0.5 * config.gamma
        Vinv = np.conj(basis.V).T if config.geometry.boundary == "periodic" else basis.V
        bt0 = Vinv @ beta0
        out = []
        for t in times:
            bt = np.exp(-lam * (t - times[0])) * bt0
            out.append(AmplitudeState(beta=basis.V @ bt, t=float(t)))
        return out

    if beta0.shape != (generator.shape[0],):
        raise ValueError("beta0 dimension mismatch")
    if method == "expm":
        props = {}
        beta = beta0.copy()
        out = [AmplitudeState(beta=beta.copy(), t=float(times[0]))]
        for t0, t1 in zip(times[:-1], times[1:]):
            dt = float(t1 - t0)
            U = props.get(dt)
            if U is None:
                U = expm(-generator * dt)
                props[dt] = U
            beta = U @ beta
            out.append(AmplitudeState(beta=beta.copy(), t=float(t1)))
        return out
    if method == "rk4":
        beta = beta0.copy()
        out = [AmplitudeState(beta=beta.copy(), t=float(times[0]))]
        for t0, t1 in zip(times[:-1], times[1:]):
            dt = float(t1 - t0)
            n = _rk4_step_count(generator, dt)
            h = dt / n
            for _ in range(n):
                k1 = -(generator @ beta)
                k2 = -(generator @ (beta + 0.5 * h * k1))
                k3 = -(generator @ (beta + 0.5 * h * k2))
                k4 = -(generator @ (beta + h * k3))
                beta = beta + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
            out.append(AmplitudeState(beta=beta.copy(), t=float(t1)))
        return out
    raise ValueError(f"unknown method {method!r}")


def _density_generators(config: ChainConfig):
    # Z with M = iZ, and the dissipative matrix feeding the ground state
    M = build_amplitude_generator(config)
    Z = -1j * M
    n = config.n_amplitudes
    S = config.geometry.S
    Gamma = np.zeros((n, n))
    Gamma[:S, :S] = config.decay_matrix()
    if config.cavity is not None:
        Gamma[S, S] = config.cavity.kappa
    return Z, Gamma


def propagate_density(config: ChainConfig, rho0: ExcitationDensity, times,
                      method="expm"):
    """Propagate the single-excitation density matrix.

    The excited block evolves as ``rho_E' = -i (Z rho_E - rho_E Z^dagger)``;
    every lost excitation lands in the ground population, integrated with the
    same stepper. The optional coherence row evolves alongside.

    Returns a list of ExcitationDensity.
    """
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size == 0 or np.any(np.diff(times) <= 0):
        raise ValueError("times must be a nonempty strictly increasing 1D grid")
    n = config.n_amplitudes
    if rho0.rho_E.shape != (n, n):
        raise ValueError(f"rho_E must be {n}x{n} for this config")
    Z, Gamma = _density_generators(config)

    rho = rho0.rho_E.copy()
    gg = float(rho0.rho_GG)
    row = None if rho0.rho_G is None else rho0.rho_G.copy()
    out = [ExcitationDensity(rho_E=rho.copy(), rho_GG=gg,
                             rho_G=None if row is None else row.copy(),
                             t=float(times[0]))]
    if method == "expm":
        props = {}
        for t0, t1 in zip(times[:-1], times[1:]):
            dt = float(t1 - t0)
            U = props.get(dt)
            if U is None:
                U = expm(-1j * Z * dt)
                props[dt] = U
            new = U @ rho @ U.conj().T
            # exact bookkeeping: everything that left the excited manifold
            # entered the ground state
            gg += float(np.trace(rho).real - np.trace(new).real)
            rho = 0.5 * (new + new.conj().T)
            if row is not None:
                row = np.conj(U) @ row
            out.append(ExcitationDensity(rho_E=rho.copy(), rho_GG=gg,
                                         rho_G=None if row is None else row.copy(),
                                         t=float(t1)))
        return out
    if method == "rk4":
        Zc = np.conj(Z)
        for t0, t1 in zip(times[:-1], times[1:]):
            dt = float(t1 - t0)
            nstep = _rk4_step_count(Z, dt)
            h = dt / nstep

            def deriv(r, g, c):
                dr = -1j * (Z @ r - r @ Z.conj().T)
                dg = float(np.einsum("ij,ji->", Gamma, r).real)
                dc = None if c is None else 1j * (Zc @ c)
                return dr, dg, dc

            for _ in range(nstep):
                k1 = deriv(rho, gg, row)
                k2 = deriv(rho + 0.5 * h * k1[0], gg + 0.5 * h * k1[1],
                           None if row is None else row + 0.5 * h * k1[2])
                k3 = deriv(rho + 0.5 * h * k2[0], gg + 0.5 * h * k2[1],
                           None if row is None else row + 0.5 * h * k2[2])
                k4 = deriv(rho + h * k3[0], gg + h * k3[1],
                           None if row is None else row + h * k3[2])
                rho = rho + (h / 6.0) * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0])
                gg = gg + (h / 6.0) * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])
                if row is not None:
                    row = row + (h / 6.0) * (k1[2] + 2 * k2[2] + 2 * k3[2] + k4[2])
            rho = 0.5 * (rho + rho.conj().T)
            out.append(ExcitationDensity(rho_E=rho.copy(), rho_GG=gg,
                                         rho_G=None if row is None else row.copy(),
                                         t=float(t1)))
        return out
    raise ValueError(f"unknown method {method!r}")


def transmission(trajectory, config: ChainConfig) -> np.ndarray:
    """Population on the out-coupling island over a trajectory.

    Accepts either amplitude or density trajectories; requires a cavity
    config with a nonempty out island.
    """
    if config.cavity is None or config.cavity.M <= 0:
        raise ValueError("transmission needs a cavity config with M > 0")
    S = config.geometry.S
    start = config.cavity.M + config.cavity.N
    vals = []
    for state in trajectory:
        if isinstance(state, AmplitudeState):
            vals.append(float(np.sum(np.abs(state.beta[start:S]) ** 2)))
        else:
            vals.append(float(np.sum(state.populations()[start:S])))
    return np.asarray(vals)
