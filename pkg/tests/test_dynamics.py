import math

import numpy as np
import pytest

from emitterchain.dynamics import (
    AmplitudeState,
    CavityConfig,
    ChainConfig,
    ExcitationDensity,
    build_amplitude_generator,
    propagate_amplitudes,
    propagate_density,
    transmission,
)
from emitterchain.greens import EmitterGeometry


def uniform_chain(S, Omega=0.0, gamma=1.0, boundary="open", decay="independent",
                  a=0.08, detunings=None, cavity=None):
    return ChainConfig(
        geometry=EmitterGeometry(S=S, lattice_constant=a, boundary=boundary),
        Omega=Omega, gamma=gamma, decay_model=decay, detunings=detunings,
        cavity=cavity,
    )


def test_generator_three_site_explicit():
    cfg = uniform_chain(3, Omega=0.4, gamma=1.0)
    cfg = ChainConfig(geometry=cfg.geometry, Omega=0.4, omega=0.7, gamma=1.0)
    M = build_amplitude_generator(cfg)
    want = np.array(
        [
            [0.7j + 0.5, 0.4j, 0],
            [0.4j, 0.7j + 0.5, 0.4j],
            [0, 0.4j, 0.7j + 0.5],
        ]
    )
    assert np.abs(M - want).max() < 1e-15


def test_generator_periodic_corner():
    cfg = uniform_chain(5, Omega=0.2, boundary="periodic")
    M = build_amplitude_generator(cfg)
    assert M[0, 4] == pytest.approx(0.2j)
    assert M[4, 0] == pytest.approx(0.2j)


def test_generator_cavity_alternating_row():
    N, Mi = 6, 2
    g = 3.0 * (-1.0) ** np.arange(1, N + 1)
    cav = CavityConfig(M=Mi, N=N, couplings=g, omega_c=0.5, kappa=0.2)
    cfg = uniform_chain(N + 2 * Mi, Omega=1.0, cavity=cav)
    M = build_amplitude_generator(cfg)
    ph = N + 2 * Mi
    assert M.shape == (ph + 1, ph + 1)
    row = M[ph, Mi:Mi + N]
    assert np.abs(row - 1j * g).max() < 1e-15
    assert M[ph, ph] == pytest.approx(0.5j + 0.1)
    # islands do not couple to the photon
    assert np.abs(M[ph, :Mi]).max() == 0.0
    assert np.abs(M[ph, Mi + N:ph]).max() == 0.0


def test_free_phase_evolution():
    cfg = ChainConfig(
        geometry=EmitterGeometry(S=4, lattice_constant=0.1), Omega=0.0,
        omega=1.3, gamma=0.0,
    )
    beta0 = np.array([0.1, 0.2j, -0.3, 0.05 + 0.02j])
    times = np.linspace(0.0, 2.0, 9)
    for method in ("expm", "rk4"):
        traj = propagate_amplitudes(cfg, beta0, times, method=method)
        for st in traj:
            want = beta0 * np.exp(-1j * 1.3 * st.t)
            assert np.abs(st.beta - want).max() < 1e-9


def test_uniform_decay_norm():
    cfg = uniform_chain(110, Omega=5.0, gamma=1.0)
    beta0 = np.zeros(110, complex)
    beta0[55] = 0.1
    times = np.linspace(0.0, 3.0, 13)
    traj = propagate_amplitudes(cfg, beta0, times)
    for st in traj:
        assert st.norm() == pytest.approx(0.01 * math.exp(-st.t), rel=1e-8)


def test_three_method_agreement():
    rng = np.random.default_rng(3)
    for boundary in ("open", "periodic"):
        cfg = uniform_chain(40, Omega=0.3, gamma=1.0, boundary=boundary)
        beta0 = rng.normal(size=40) + 1j * rng.normal(size=40)
        beta0 *= 0.1 / np.linalg.norm(beta0)
        times = np.linspace(0.0, 3.0, 7)
        trajs = {
            m: propagate_amplitudes(cfg, beta0, times, method=m)
            for m in ("expm", "rk4", "spectral")
        }
        for m in ("rk4", "spectral"):
            for a, b in zip(trajs["expm"], trajs[m]):
                assert np.abs(a.beta - b.beta).max() < 1e-8, (boundary, m)


def test_spectral_guard():
    beta0 = np.zeros(10, complex)
    times = [0.0, 1.0]
    cfg = uniform_chain(10, Omega=1.0, decay="collective")
    with pytest.raises(ValueError):
        propagate_amplitudes(cfg, beta0, times, method="spectral")
    cfg = uniform_chain(10, Omega=1.0, detunings=np.linspace(0, 1, 10))
    with pytest.raises(ValueError):
        propagate_amplitudes(cfg, beta0, times, method="spectral")
    cav = CavityConfig(M=2, N=6, couplings=1.0)
    cfg = uniform_chain(10, Omega=1.0, cavity=cav)
    with pytest.raises(ValueError):
        propagate_amplitudes(cfg, np.zeros(11, complex), times, method="spectral")
    # constant detunings are uniform, so allowed
    cfg = uniform_chain(10, Omega=1.0, detunings=np.full(10, 0.3))
    propagate_amplitudes(cfg, beta0, times, method="spectral")


def test_expm_rk4_disordered_collective():
    rng = np.random.default_rng(5)
    cfg = uniform_chain(
        20, Omega=5.2974869797666207, gamma=1.0, decay="collective",
        detunings=rng.uniform(-1, 1, 20),
    )
    beta0 = rng.normal(size=20) + 1j * rng.normal(size=20)
    beta0 *= 0.1 / np.linalg.norm(beta0)
    times = np.linspace(0.0, 5.0, 6)
    te = propagate_amplitudes(cfg, beta0, times, method="expm")
    tr = propagate_amplitudes(cfg, beta0, times, method="rk4")
    for a, b in zip(te, tr):
        assert np.abs(np.abs(a.beta) ** 2 - np.abs(b.beta) ** 2).max() < 1e-6


def test_density_pure_state_equivalence():
    rng = np.random.default_rng(9)
    cfg = uniform_chain(12, Omega=2.0, gamma=1.0, decay="collective")
    beta0 = rng.normal(size=12) + 1j * rng.normal(size=12)
    beta0 *= 0.3 / np.linalg.norm(beta0)
    times = np.linspace(0.0, 2.0, 9)
    amp = propagate_amplitudes(cfg, beta0, times)
    rho0 = ExcitationDensity.from_pure(beta0)
    dens = propagate_density(cfg, rho0, times)
    for a, d in zip(amp, dens):
        assert np.abs(d.populations() - a.site_populations()).max() < 1e-10
        outer = np.outer(a.beta, a.beta.conj())
        assert np.abs(d.rho_E - outer).max() < 1e-10


def test_density_ground_state_stationary():
    cfg = uniform_chain(6, Omega=1.0, gamma=1.0, decay="collective")
    rho0 = ExcitationDensity(rho_E=np.zeros((6, 6), complex), rho_GG=1.0)
    dens = propagate_density(cfg, rho0, np.linspace(0, 2, 5))
    for d in dens:
        assert d.rho_GG == pytest.approx(1.0, abs=1e-14)
        assert np.abs(d.rho_E).max() < 1e-14


def test_density_trace_conservation_and_decay_law():
    rng = np.random.default_rng(21)
    beta0 = rng.normal(size=8) + 1j * rng.normal(size=8)
    beta0 *= 0.5 / np.linalg.norm(beta0)
    times = np.linspace(0.0, 4.0, 11)
    for decay in ("independent", "collective"):
        cfg = uniform_chain(8, Omega=1.0, gamma=1.0, decay=decay)
        rho0 = ExcitationDensity.from_pure(beta0)
        for method in ("expm", "rk4"):
            dens = propagate_density(cfg, rho0, times, method=method)
            for d in dens:
                assert d.total() == pytest.approx(1.0, abs=1e-8)
                if decay == "independent":
                    want = 0.25 * math.exp(-d.t)
                    assert np.trace(d.rho_E).real == pytest.approx(want, abs=1e-8)


def test_density_ground_feed_rate_matches_dissipator():
    # discrete check of the ground-feed law: the rho_GG increment over a
    # step equals the time integral of tr(Gamma rho_E)
    cfg = uniform_chain(10, Omega=1.0, gamma=1.0, decay="collective")
    rng = np.random.default_rng(2)
    beta0 = rng.normal(size=10) + 1j * rng.normal(size=10)
    beta0 *= 0.6 / np.linalg.norm(beta0)
    rho0 = ExcitationDensity.from_pure(beta0)
    times = np.linspace(0.0, 1.0, 101)
    dens = propagate_density(cfg, rho0, times)
    Gamma = cfg.decay_matrix()
    feed = [float(np.einsum("ij,ji->", Gamma, d.rho_E).real) for d in dens]
    h = times[1] - times[0]
    for k in range(len(times) - 1):
        dgg = dens[k + 1].rho_GG - dens[k].rho_GG
        trapz = 0.5 * h * (feed[k] + feed[k + 1])
        assert dgg == pytest.approx(trapz, abs=2e-5)


def test_density_coherence_row_follows_pure_state():
    cfg = uniform_chain(7, Omega=0.8, gamma=1.0)
    rng = np.random.default_rng(17)
    beta0 = rng.normal(size=7) + 1j * rng.normal(size=7)
    beta0 *= 0.4 / np.linalg.norm(beta0)
    rho0 = ExcitationDensity.from_pure(beta0)
    cg = math.sqrt(1 - 0.16)
    times = np.linspace(0.0, 2.0, 5)
    amp = propagate_amplitudes(cfg, beta0, times)
    for method in ("expm", "rk4"):
        dens = propagate_density(cfg, rho0, times, method=method)
        for a, d in zip(amp, dens):
            want = cg * np.conj(a.beta)
            assert np.abs(d.rho_G - want).max() < 1e-8


def test_norm_monotone_collective():
    cfg = uniform_chain(30, Omega=5.0, gamma=1.0, decay="collective")
    rng = np.random.default_rng(8)
    beta0 = rng.normal(size=30) + 1j * rng.normal(size=30)
    beta0 *= 0.1 / np.linalg.norm(beta0)
    traj = propagate_amplitudes(cfg, beta0, np.linspace(0, 5, 51))
    norms = [st.norm() for st in traj]
    assert all(b <= a + 1e-12 for a, b in zip(norms, norms[1:]))


def test_density_validation():
    bad = np.array([[0.5, 0.1], [0.3, 0.5]], dtype=complex)
    with pytest.raises(ValueError):
        ExcitationDensity(rho_E=bad)
    neg = np.diag([-1e-9, 1.0]).astype(complex)
    with pytest.raises(ValueError):
        ExcitationDensity(rho_E=neg)


def test_population_clamp_at_readout_only():
    rho = np.diag([-5e-13, 0.3]).astype(complex)
    d = ExcitationDensity(rho_E=rho)
    pops = d.populations()
    assert pops[0] == 0.0
    assert d.rho_E[0, 0].real == -5e-13


def test_cavity_closed_system_conserves_norm():
    cav = CavityConfig(M=3, N=4, couplings=2.0, omega_c=0.0, kappa=0.0)
    cfg = ChainConfig(
        geometry=EmitterGeometry(S=10, lattice_constant=0.08), Omega=1.0,
        gamma=0.0, cavity=cav,
    )
    beta0 = np.zeros(11, complex)
    beta0[0] = 0.1
    traj = propagate_amplitudes(cfg, beta0, np.linspace(0, 10, 21))
    for st in traj:
        assert st.norm() == pytest.approx(0.01, abs=1e-10)
    T = transmission(traj, cfg)
    assert T[0] == 0.0
    assert np.all(T >= 0) and np.all(T <= 1)


def test_cavity_kappa_loss_routed_to_ground():
    cav = CavityConfig(M=1, N=2, couplings=1.5, kappa=0.8)
    cfg = ChainConfig(
        geometry=EmitterGeometry(S=4, lattice_constant=0.1), Omega=0.5,
        gamma=0.3, cavity=cav,
    )
    beta0 = np.zeros(5, complex)
    beta0[1] = 0.6
    rho0 = ExcitationDensity.from_pure(beta0)
    for method in ("expm", "rk4"):
        dens = propagate_density(cfg, rho0, np.linspace(0, 3, 7), method=method)
        for d in dens:
            assert d.total() == pytest.approx(1.0, abs=1e-8)
        assert dens[-1].rho_GG > dens[0].rho_GG


def test_transmission_requires_cavity():
    cfg = uniform_chain(5, Omega=1.0)
    traj = propagate_amplitudes(cfg, np.zeros(5, complex), [0.0, 1.0])
    with pytest.raises(ValueError):
        transmission(traj, cfg)


def test_input_validation():
    cfg = uniform_chain(4, Omega=1.0)
    M = build_amplitude_generator(cfg)
    with pytest.raises(ValueError):
        propagate_amplitudes(M, np.zeros(3, complex), [0.0, 1.0])
    with pytest.raises(ValueError):
        propagate_amplitudes(M, np.zeros(4, complex), [0.0, 1.0, 0.5])
    with pytest.raises(ValueError):
        propagate_amplitudes(M, np.zeros(4, complex), [0.0, 1.0], method="verlet")
    with pytest.raises(ValueError):
        ChainConfig(geometry=EmitterGeometry(S=4, lattice_constant=0.1),
                    Omega=np.ones(7))
    with pytest.raises(ValueError):
        ChainConfig(geometry=EmitterGeometry(S=4, lattice_constant=0.1),
                    detunings=np.zeros(3))
    with pytest.raises(ValueError):
        ChainConfig(
            geometry=EmitterGeometry(S=9, lattice_constant=0.1),
            cavity=CavityConfig(M=2, N=6, couplings=1.0),
        )


def test_per_bond_hopping_vector():
    bonds = np.array([1.0, 10.0, 10.0, 1.0])
    cfg = ChainConfig(geometry=EmitterGeometry(S=5, lattice_constant=0.1),
                      Omega=bonds)
    M = build_amplitude_generator(cfg)
    off = np.diag(M, 1)
    assert np.abs(off - 1j * bonds).max() < 1e-15
