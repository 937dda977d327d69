import math
import warnings

import numpy as np
import pytest

from emitterchain.dynamics import ChainConfig, propagate_amplitudes
from emitterchain.greens import EmitterGeometry, dipole_shift
from emitterchain.spectral import mode_basis
from emitterchain.wavepacket import (
    WavepacketSpec,
    analytic_evolution,
    centroid_and_width,
    collective_occupancy,
    drive_initialize,
    gaussian_profile,
)

OMEGA_008 = 5.2974869797666207  # coherent kernel at spacing 0.08, perpendicular dipole


def no_warn_profile(spec, S):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return gaussian_profile(spec, S)


def test_profile_normalization_and_peak():
    spec = WavepacketSpec(j0=55.0, w=5.0, q0=math.pi / 2)
    f = gaussian_profile(spec, 110)
    assert f @ f == pytest.approx(1.0, abs=1e-8)
    assert f[54] == pytest.approx((2 * math.pi) ** (-0.25) / math.sqrt(5.0), rel=1e-12)
    # narrow packet still normalized to the stated tolerance
    spec = WavepacketSpec(j0=50.0, w=2.0, q0=0.0)
    f = gaussian_profile(spec, 100)
    assert f @ f == pytest.approx(1.0, abs=1e-6)


def test_edge_proximity_warns():
    with pytest.warns(UserWarning):
        gaussian_profile(WavepacketSpec(j0=20.0, w=5.0, q0=0.0), 110)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        gaussian_profile(WavepacketSpec(j0=40.0, w=5.0, q0=0.0), 110)


def test_drive_resonant():
    spec = WavepacketSpec(j0=55.0, w=5.0, q0=math.pi / 2)
    st = drive_initialize(spec, None, 110)
    f = no_warn_profile(spec, 110)
    j = np.arange(1, 111)
    want = 2j * 0.05 * f * np.exp(-1j * spec.q0 * j)
    assert np.abs(st.beta - want).max() < 1e-15
    assert st.norm() == pytest.approx(0.01, rel=1e-6)


def test_drive_detuning_filter():
    spec = WavepacketSpec(j0=55.0, w=5.0, q0=0.0)
    det = np.zeros(110)
    det[10] = 2 * math.pi / spec.T_pulse  # sinc zero: Delta T = 2 pi
    det[20] = math.pi / spec.T_pulse      # sinc(pi/2) = 2/pi
    st = drive_initialize(spec, det, 110)
    assert abs(st.beta[10]) < 1e-15
    f = no_warn_profile(spec, 110)
    assert abs(st.beta[20]) == pytest.approx(0.1 * f[20] * 2 / math.pi, rel=1e-10)


def test_weak_excitation_guard():
    spec = WavepacketSpec(j0=55.0, w=5.0, q0=0.0, eta0=2.0, T_pulse=0.1)
    with pytest.raises(ValueError):
        drive_initialize(spec, None, 110)


def test_fast_pulse_guard():
    spec = WavepacketSpec(j0=55.0, w=5.0, q0=0.0)
    with pytest.raises(ValueError):
        drive_initialize(spec, None, 110, Omega=20.0)
    drive_initialize(spec, None, 110, Omega=5.0)


def test_analytic_evolution_closed_forms():
    spec = WavepacketSpec(j0=55.0, w=5.0, q0=math.pi / 2)
    f = no_warn_profile(spec, 110)
    p0 = analytic_evolution(spec, Omega=1.0, gamma=0.0, t=0.0, S=110)
    assert np.abs(p0 - 0.01 * f**2).max() < 1e-12
    assert p0.max() == pytest.approx(0.01 / (math.sqrt(2 * math.pi) * 5.0), rel=1e-10)
    # shape-preserving drift at q0 = pi/2
    p = analytic_evolution(spec, Omega=1.0, gamma=0.0, t=10.0, S=110)
    cen, wid = centroid_and_width(p)
    assert cen == pytest.approx(55.0 + 20.0, rel=1e-6)
    assert wid == pytest.approx(wid_of(p0), rel=1e-6)
    # pure diffusion at q0 = 0
    spec0 = WavepacketSpec(j0=55.0, w=5.0, q0=0.0)
    p = analytic_evolution(spec0, Omega=1.0, gamma=0.0, t=30.0, S=110)
    cen, wid = centroid_and_width(p)
    assert cen == pytest.approx(55.0, abs=1e-6)
    want_w = 5.0 * math.sqrt(1 + (30.0 / 25.0) ** 2)
    assert wid == pytest.approx(want_w, rel=1e-3)
    # decay scales the whole distribution
    pg = analytic_evolution(spec0, Omega=1.0, gamma=0.7, t=2.0, S=110)
    p = analytic_evolution(spec0, Omega=1.0, gamma=0.0, t=2.0, S=110)
    assert np.abs(pg - p * math.exp(-1.4)).max() < 1e-15


def wid_of(p):
    return centroid_and_width(p)[1]


def pbc_chain(S, Omega, gamma=0.0, decay="independent"):
    return ChainConfig(
        geometry=EmitterGeometry(S=S, lattice_constant=0.08, boundary="periodic"),
        Omega=Omega, gamma=gamma, decay_model=decay,
    )


@pytest.mark.parametrize("q0", [0.0, math.pi / 4, math.pi / 2, math.pi])
def test_strict_analytic_invariant(q0):
    # L_inf(numeric - closed form) <= 1% of peak for Omega t <= 30.
    # The second-order analytics carry a finite-width group-velocity deficit
    # (factor e^{-1/(8 w^2)}) and a cubic-dispersion skew that exceed the
    # bound for the moving packets at w = 5; the run is exact, the closed
    # form is the approximation. Kept at the stated tolerance on purpose.
    spec = WavepacketSpec(j0=55.0, w=5.0, q0=q0)
    st = drive_initialize(spec, None, 110)
    cfg = pbc_chain(110, Omega=1.0)
    times = np.arange(0.0, 31.0, 1.0)
    traj = propagate_amplitudes(cfg, st.beta, times)
    worst = 0.0
    for state in traj:
        ana = analytic_evolution(spec, 1.0, 0.0, state.t, 110, boundary="periodic")
        err = np.abs(state.site_populations() - ana).max() / ana.max()
        worst = max(worst, err)
    assert worst <= 0.01, (
        f"q0={q0:.4f}: L_inf/peak = {worst:.4f} exceeds 0.01; the "
        "second-order closed form lags the exact packet (finite-width "
        "group-velocity correction ~0.5% plus cubic-dispersion skew)"
    )


def test_independent_decay_factorization():
    spec = WavepacketSpec(j0=30.0, w=3.0, q0=math.pi / 2)
    st = drive_initialize(spec, None, 60)
    times = np.linspace(0.0, 3.0, 7)
    base = propagate_amplitudes(pbc_chain(60, 2.0, 0.0), st.beta, times)
    dec = propagate_amplitudes(pbc_chain(60, 2.0, 0.8), st.beta, times)
    for a, b in zip(base, dec):
        want = a.site_populations() * math.exp(-0.8 * b.t)
        assert np.abs(b.site_populations() - want).max() < 1e-10


def test_mirror_symmetry():
    # q0 -> 2 pi - q0 reflects the motion about the launch site
    S = 110
    t = [0.0, 10.0]
    right = WavepacketSpec(j0=55.0, w=5.0, q0=math.pi / 3)
    left = WavepacketSpec(j0=55.0, w=5.0, q0=2 * math.pi - math.pi / 3)
    pr = propagate_amplitudes(pbc_chain(S, 1.0), drive_initialize(right, None, S).beta, t)[-1]
    pl = propagate_amplitudes(pbc_chain(S, 1.0), drive_initialize(left, None, S).beta, t)[-1]
    j = np.arange(1, S + 1)
    mirror = ((2 * 55 - j - 1) % S)  # 0-based index of the reflected site
    assert np.abs(pl.site_populations() - pr.site_populations()[mirror]).max() < 1e-10


def test_subradiant_protection_ordering():
    # survival at t = 1/gamma: subradiant pi packet > independent decay >
    # superradiant 0 packet, the latter by more than a factor 10
    S = 110
    geom = EmitterGeometry(S=S, lattice_constant=0.08)
    times = [0.0, 1.0]
    surv = {}
    for q0 in (0.0, math.pi):
        spec = WavepacketSpec(j0=55.0, w=5.0, q0=q0)
        cfg = ChainConfig(geometry=geom, Omega=0.0, gamma=1.0, decay_model="collective")
        traj = propagate_amplitudes(cfg, drive_initialize(spec, None, S).beta, times)
        surv[q0] = traj[-1].norm() / traj[0].norm()
    indep = math.exp(-1.0)
    assert surv[math.pi] > indep > surv[0.0]
    assert surv[0.0] < 0.1 * surv[math.pi]


def test_collective_occupancy_periodic():
    spec = WavepacketSpec(j0=55.0, w=5.0, q0=math.pi / 2)
    basis = mode_basis(110, "periodic")
    fit = collective_occupancy(spec, basis)
    assert fit.valid
    assert fit.k0 == pytest.approx(27.5, rel=0.02)
    assert fit.width == pytest.approx(110 / (4 * math.pi * 5.0), rel=0.02)
    assert fit.occupancies.sum() == pytest.approx(0.01, rel=1e-6)


def test_collective_occupancy_open():
    spec = WavepacketSpec(j0=50.0, w=5.0, q0=math.pi / 2)
    basis = mode_basis(100, "open")
    fit = collective_occupancy(spec, basis)
    theta = math.pi / 101
    assert fit.valid
    # dominant lobe sits at half the band, k0 ~ S/2
    assert fit.k0 == pytest.approx(math.pi / 2 / theta, rel=0.02)
    assert fit.width == pytest.approx(1.0 / (2 * theta * 5.0), rel=0.02)


def test_collective_occupancy_open_mirrored_ramp():
    # leftward packets fold onto the same sine lobe from the other side
    spec = WavepacketSpec(j0=50.0, w=5.0, q0=2 * math.pi - math.pi / 2)
    basis = mode_basis(100, "open")
    fit = collective_occupancy(spec, basis)
    theta = math.pi / 101
    assert fit.valid
    assert fit.k0 == pytest.approx(math.pi / 2 / theta, rel=0.02)


def test_occupancy_validity_flags():
    basis = mode_basis(110, "open")
    assert not collective_occupancy(WavepacketSpec(j0=55.0, w=5.0, q0=math.pi), basis).valid
    assert not collective_occupancy(WavepacketSpec(j0=55.0, w=5.0, q0=0.02), basis).valid
    assert not collective_occupancy(WavepacketSpec(j0=55.0, w=40.0, q0=math.pi / 2), basis).valid
    pbc = mode_basis(110, "periodic")
    assert collective_occupancy(WavepacketSpec(j0=55.0, w=5.0, q0=math.pi), pbc).valid


def test_centroid_and_width():
    spec = WavepacketSpec(j0=47.3, w=4.0, q0=0.0)
    p = 0.01 * no_warn_profile(spec, 120) ** 2
    cen, wid = centroid_and_width(p)
    assert cen == pytest.approx(47.3, rel=1e-3)
    assert wid == pytest.approx(4.0, rel=1e-3)
    p = np.zeros(10)
    p[6] = 0.5
    assert centroid_and_width(p) == (7.0, 0.0)
    with pytest.raises(ValueError):
        centroid_and_width(np.zeros(5))
    with pytest.raises(ValueError):
        centroid_and_width(np.array([0.1, -0.2, 0.3]))


def test_population_heatmap_matches_closed_form_globally():
    # independent-decay launch at the kernel hopping: closed form within 1%
    # of the global peak across the whole run
    spec = WavepacketSpec(j0=28.0, w=5.0, q0=math.pi / 2)
    S = 110
    cfg = ChainConfig(
        geometry=EmitterGeometry(S=S, lattice_constant=0.08),
        Omega=OMEGA_008, gamma=1.0, decay_model="independent",
    )
    st = drive_initialize(spec, None, S)
    times = np.linspace(0.0, 2.0, 101)
    traj = propagate_amplitudes(cfg, st.beta, times)
    gpeak = traj[0].site_populations().max()
    worst = 0.0
    for state in traj:
        ana = analytic_evolution(spec, OMEGA_008, 1.0, state.t, S)
        worst = max(worst, np.abs(state.site_populations() - ana).max() / gpeak)
    assert worst < 0.01, worst


def test_collective_centroid_drift():
    # group velocity survives collective decay at q0 = pi/2
    spec = WavepacketSpec(j0=28.0, w=5.0, q0=math.pi / 2)
    S = 110
    cfg = ChainConfig(
        geometry=EmitterGeometry(S=S, lattice_constant=0.08),
        Omega=OMEGA_008, gamma=1.0, decay_model="collective",
    )
    st = drive_initialize(spec, None, S)
    traj = propagate_amplitudes(cfg, st.beta, [0.0, 1.0])
    cen, _ = centroid_and_width(traj[-1].site_populations())
    assert cen - 28.0 == pytest.approx(2 * OMEGA_008, rel=0.02)
