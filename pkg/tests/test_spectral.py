import math

import numpy as np
import pytest

from emitterchain.greens import EmitterGeometry, build_coupling_matrices
from emitterchain.spectral import (
    collective_rates,
    dispersion,
    from_collective,
    mode_basis,
    superradiant_fraction,
    to_collective,
)


def test_open_basis_orthogonal_involution():
    b = mode_basis(4, "open")
    assert np.abs(b.V.imag).max() == 0 if np.iscomplexobj(b.V) else True
    assert np.abs(b.V @ b.V.T - np.eye(4)).max() < 1e-12
    # the sine basis is its own inverse
    assert np.abs(b.V @ b.V - np.eye(4)).max() < 1e-12


def test_periodic_basis_uniform_modulus_and_inverse():
    b = mode_basis(4, "periodic")
    assert np.abs(np.abs(b.V) ** 2 - 0.25).max() < 1e-14
    assert np.abs(b.V @ np.conj(b.V).T - np.eye(4)).max() < 1e-12


def test_open_basis_diagonalizes_uniform_evolution_matrix():
    # M from the amplitude equation of motion with uniform decay:
    # diagonal i*omega + gamma/2, off-diagonal i*Omega nearest neighbor
    S, omega, Omega, gamma = 100, 0.3, 0.07, 1.0
    M = np.diag(np.full(S, 1j * omega + gamma / 2)) + 1j * Omega * (
        np.diag(np.ones(S - 1), 1) + np.diag(np.ones(S - 1), -1)
    )
    b = mode_basis(S, "open")
    L = b.V.T @ M @ b.V
    off = L - np.diag(np.diag(L))
    assert np.abs(off).max() < 1e-10
    want = 1j * dispersion(b, omega, Omega) + gamma / 2
    assert np.abs(np.diag(L) - want).max() < 1e-10


def test_periodic_basis_diagonalizes_ring_evolution_matrix():
    S, Omega = 24, 0.5
    M = 1j * Omega * (np.diag(np.ones(S - 1), 1) + np.diag(np.ones(S - 1), -1))
    M[0, S - 1] += 1j * Omega
    M[S - 1, 0] += 1j * Omega
    b = mode_basis(S, "periodic")
    L = np.conj(b.V).T @ M @ b.V
    off = L - np.diag(np.diag(L))
    assert np.abs(off).max() < 1e-10
    assert np.abs(np.diag(L) - 1j * dispersion(b, 0.0, Omega)).max() < 1e-10


def test_dispersion_endpoints():
    b = mode_basis(8, "periodic")
    E = dispersion(b, omega=0.2, Omega=0.05)
    assert E[0] == pytest.approx(0.2 + 0.1, rel=1e-14)
    # open chain, S=100, Omega=0.07: band approaches (-0.14, 0.14)
    b = mode_basis(100, "open")
    E = dispersion(b, omega=0.0, Omega=0.07)
    assert E.max() == pytest.approx(0.14, abs=1e-3)
    assert E.min() == pytest.approx(-0.14, abs=1e-3)
    assert E.max() < 0.14
    # exact band center at cos(k theta) = 0
    b = mode_basis(101, "open")
    E = dispersion(b, omega=0.4, Omega=0.07)
    assert E[50] == pytest.approx(0.4, abs=1e-15)


def test_collective_rates_independent_decay():
    for boundary in ("open", "periodic"):
        b = mode_basis(12, boundary)
        rates = collective_rates(b, 0.7 * np.eye(12))
        assert np.abs(rates - 0.7).max() < 1e-12
        assert superradiant_fraction(rates, 0.7) == 0.0


def test_collective_rates_two_site_hand_oracle():
    g12 = 0.42
    gamma = np.array([[1.0, g12], [g12, 1.0]])
    b = mode_basis(2, "open")
    rates = collective_rates(b, gamma)
    assert sorted(rates) == pytest.approx(sorted([1.0 + g12, 1.0 - g12]), rel=1e-12)


def test_trace_identity():
    for boundary in ("open", "periodic"):
        geom = EmitterGeometry(S=110, lattice_constant=0.08, boundary=boundary)
        mats = build_coupling_matrices(geom, decay_model="collective")
        b = mode_basis(110, boundary)
        rates = collective_rates(b, mats.gamma)
        assert np.sum(rates) == pytest.approx(110.0, rel=1e-9)


def test_subradiant_majority_at_small_spacing():
    geom = EmitterGeometry(S=110, lattice_constant=0.08)
    mats = build_coupling_matrices(geom, decay_model="collective")
    b = mode_basis(110, "open")
    rates = collective_rates(b, mats.gamma)
    assert rates.max() > 5.0
    assert np.count_nonzero(rates < 1.0) > 55
    assert superradiant_fraction(rates, 1.0) <= 0.20


def test_superradiant_fraction_monotone_in_spacing():
    fracs = []
    for a in (0.05, 0.08, 0.15, 0.25):
        geom = EmitterGeometry(S=110, lattice_constant=a)
        mats = build_coupling_matrices(geom, decay_model="collective")
        b = mode_basis(110, "open")
        fracs.append(superradiant_fraction(collective_rates(b, mats.gamma), 1.0))
    assert all(f2 >= f1 for f1, f2 in zip(fracs, fracs[1:])), fracs


def test_transform_round_trip():
    rng = np.random.default_rng(11)
    for boundary in ("open", "periodic"):
        for S in (2, 17, 200):
            b = mode_basis(S, boundary)
            beta = rng.normal(size=S) + 1j * rng.normal(size=S)
            back = from_collective(b, to_collective(b, beta))
            assert np.abs(back - beta).max() < 1e-12


def test_transform_unit_vectors():
    for boundary in ("open", "periodic"):
        b = mode_basis(9, boundary)
        k0 = 4
        bt = to_collective(b, b.V[:, k0])
        want = np.zeros(9)
        want[k0] = 1.0
        assert np.abs(bt - want).max() < 1e-12


def test_single_site_occupancies():
    S = 40
    b = mode_basis(S, "open")
    beta = np.zeros(S)
    j = 12
    beta[j] = 1.0
    occ = np.abs(to_collective(b, beta)) ** 2
    assert np.abs(occ - b.V[j, :] ** 2).max() < 1e-14
    assert occ.mean() == pytest.approx(1.0 / S, rel=1e-12)
    # periodic plane waves give exactly 1/S each
    b = mode_basis(S, "periodic")
    occ = np.abs(to_collective(b, beta.astype(complex))) ** 2
    assert np.abs(occ - 1.0 / S).max() < 1e-12


def test_dimension_mismatch_errors():
    b = mode_basis(5, "open")
    with pytest.raises(ValueError):
        to_collective(b, np.zeros(4))
    with pytest.raises(ValueError):
        from_collective(b, np.zeros(6))
    with pytest.raises(ValueError):
        collective_rates(b, np.eye(4))
