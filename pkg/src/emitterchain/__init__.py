"""Excitation transport on 1D emitter chains with collective decay and cavity coupling.

Library layout:

- ``greens``: vacuum-mediated coupling kernels and chain coupling matrices
- ``spectral``: analytic Toeplitz mode basis, dispersion, collective decay rates
- ``dynamics``: evolution generators and propagation (amplitudes and density matrix)
- ``wavepacket``: Gaussian packet initialization and closed-form evolution
- ``entanglement``: two-site reduced states and concurrence transport
- ``polaritons``: cavity polariton closed forms and a Jacobi eigensolver oracle
- ``scenarios``: config-driven figure pipelines, disorder ensembles, CSV/JSON export
"""

__version__ = "0.1.0"

from .greens import (
    EmitterGeometry,
    CouplingMatrices,
    dipole_shift,
    mutual_decay,
    build_coupling_matrices,
)
from .spectral import (
    ModeBasis,
    mode_basis,
    dispersion,
    collective_rates,
    superradiant_fraction,
    to_collective,
    from_collective,
)
from .dynamics import (
    CavityConfig,
    ChainConfig,
    AmplitudeState,
    ExcitationDensity,
    build_amplitude_generator,
    propagate_amplitudes,
    propagate_density,
    transmission,
)
from .wavepacket import (
    WavepacketSpec,
    OccupancyFit,
    gaussian_profile,
    drive_initialize,
    analytic_evolution,
    collective_occupancy,
    centroid_and_width,
)
from .entanglement import (
    PureExcitationState,
    TwoSiteReducedDensity,
    DomainSpec,
    ConcurrenceSeries,
    entangled_pair_state,
    reduced_two_site,
    concurrence,
    pairwise_concurrence,
    average_concurrence,
)
from .polaritons import (
    PolaritonSolution,
    polariton_solution,
    matched_detuning,
    build_closed_hamiltonian,
    numeric_eigensystem,
    photon_fractions,
)
from .scenarios import (
    FIGURES,
    SCENARIO_KINDS,
    ConfigError,
    DisorderSpec,
    EnsembleResult,
    ScenarioResult,
    load_config,
    validate_config,
    config_hash,
    run_scenario,
    disorder_ensemble,
    free_space_vs_cavity,
)
