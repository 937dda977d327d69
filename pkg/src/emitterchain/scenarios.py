"""Config-driven scenario runs: validation, ensembles, persistence.

A scenario is a YAML document naming one run kind (a generic operation such
as ``evolve`` or ``spectrum``, or one of the eight pinned figure pipelines)
plus the physical parameters. Runs are deterministic given the config and
seed: realization streams are counter-based, ensemble reductions use exact
summation, and the CSV/JSON writers emit byte-stable output with no
timestamps.

Every CSV gets a JSON sidecar carrying the full config echo, a SHA-256 hash
of the canonical config encoding, the seed, the method, the package version,
and any warnings raised while preparing the run.
"""

from __future__ import annotations

import csv
import hashlib
import json
import math
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import yaml
from jsonschema import Draft202012Validator

from . import __version__
from .dynamics import CavityConfig, ChainConfig, propagate_amplitudes, transmission
from .entanglement import DomainSpec, average_concurrence, entangled_pair_state, pairwise_concurrence
from .greens import EmitterGeometry, build_coupling_matrices
from .polaritons import (
    build_closed_hamiltonian,
    matched_detuning,
    numeric_eigensystem,
    photon_fractions,
    polariton_solution,
)
from .spectral import collective_rates, dispersion, mode_basis, superradiant_fraction
from .wavepacket import (
    WavepacketSpec,
    analytic_evolution,
    centroid_and_width,
    collective_occupancy,
    drive_initialize,
)

__all__ = [
    "FIGURES",
    "SCENARIO_KINDS",
    "ConfigError",
    "DisorderSpec",
    "EnsembleResult",
    "ScenarioResult",
    "load_config",
    "validate_config",
    "config_hash",
    "run_scenario",
    "disorder_ensemble",
    "free_space_vs_cavity",
]

FIGURES = ("fig3a", "fig3b", "fig3c", "fig3d", "fig4a", "fig4b", "fig4c", "fig4d")
SCENARIO_KINDS = (
    "couplings",
    "spectrum",
    "evolve",
    "wavepacket",
    "concurrence",
    "polaritons",
    "transmission",
) + FIGURES

_HALF_PI = math.pi / 2


class ConfigError(ValueError):
    """Raised on schema or cross-field config violations.

    ``messages`` holds one field-level entry per violation.
    """

    def __init__(self, messages):
        if isinstance(messages, str):
            messages = [messages]
        self.messages = list(messages)
        super().__init__("\n".join(self.messages))


_NUM = {"type": "number"}
_POS = {"type": "number", "exclusiveMinimum": 0}

_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "additionalProperties": False,
    "required": ["scenario", "seed"],
    "properties": {
        "scenario": {"enum": list(SCENARIO_KINDS)},
        "seed": {"type": "integer", "minimum": 0, "maximum": 2**64 - 1},
        "method": {"enum": ["expm", "rk4", "spectral"]},
        "output_dir": {"type": "string", "minLength": 1},
        "chain": {
            "type": "object",
            "additionalProperties": False,
            "required": ["sites", "spacing", "gamma", "decay_model"],
            "properties": {
                "sites": {"type": "integer", "minimum": 2},
                "spacing": _POS,
                "dipole_angle": {"type": "number", "minimum": 0, "maximum": _HALF_PI},
                "boundary": {"enum": ["open", "periodic"]},
                "gamma": {"type": "number", "minimum": 0},
                "omega": _NUM,
                "hopping": _NUM,
                "decay_model": {"enum": ["independent", "collective"]},
                "truncation": {"enum": ["full", "nearest_neighbor"]},
            },
        },
        "cavity": {
            "type": "object",
            "additionalProperties": False,
            "required": ["islands", "intracavity", "coupling"],
            "properties": {
                "islands": {"type": "integer", "minimum": 1},
                "intracavity": {"type": "integer", "minimum": 2},
                "coupling": {"type": "number", "minimum": 0},
                "pattern": {"enum": ["symmetric", "asymmetric"]},
                "intracavity_hopping": _NUM,
                "photon_frequency": _NUM,
                "photon_loss": {"type": "number", "minimum": 0},
                "boundary": {"enum": ["open", "periodic"]},
            },
        },
        "packet": {
            "type": "object",
            "additionalProperties": False,
            "required": ["center", "width"],
            "properties": {
                "center": _NUM,
                "width": _POS,
                "quasimomentum": {"type": "number", "minimum": 0, "exclusiveMaximum": 2 * math.pi},
                "drive_strength": _POS,
                "drive_duration": _POS,
            },
        },
        "pair": {
            "type": "object",
            "additionalProperties": False,
            "required": ["center", "separation", "width", "quasimomentum"],
            "properties": {
                "center": _NUM,
                "separation": _POS,
                "width": _POS,
                "quasimomentum": {"type": "number", "minimum": 0, "exclusiveMaximum": 2 * math.pi},
                "normalization": {"enum": ["five_w", "pair_count"]},
                "domain_mode": {"enum": ["tracked", "fixed"]},
                "pairwise_dump": {"type": "boolean"},
            },
        },
        "times": {
            "type": "object",
            "additionalProperties": False,
            "required": ["start", "stop", "step"],
            "properties": {
                "start": {"type": "number", "minimum": 0},
                "stop": _POS,
                "step": _POS,
            },
        },
        "detuning": {
            "type": "object",
            "additionalProperties": False,
            "required": ["mode"],
            "properties": {
                "mode": {"enum": ["none", "matched", "matched_numeric", "caption", "explicit"]},
                "branch": {"enum": ["upper", "lower"]},
                "value": _NUM,
            },
        },
        "disorder": {
            "type": "object",
            "additionalProperties": False,
            "required": ["distribution", "width", "realizations"],
            "properties": {
                "distribution": {"enum": ["uniform", "gaussian"]},
                "width": {"type": "number", "minimum": 0},
                "realizations": {"type": "integer", "minimum": 1},
                "sites": {"enum": ["intracavity", "all"]},
            },
        },
        "spacings": {"type": "array", "items": _POS, "minItems": 1},
    },
}

_VALIDATOR = Draft202012Validator(_SCHEMA)

# sections each scenario kind must provide beyond the schema's own rules
_NEEDS = {
    "couplings": ("chain",),
    "spectrum": ("chain",),
    "evolve": ("chain", "packet", "times"),
    "wavepacket": ("chain", "packet", "times"),
    "concurrence": ("chain", "pair", "times"),
    "polaritons": ("cavity",),
    "transmission": ("chain", "cavity", "packet", "times"),
    "fig3a": ("chain",),
    "fig3b": ("chain", "spacings"),
    "fig3c": ("chain", "packet", "times"),
    "fig3d": ("chain", "packet", "times"),
    "fig4a": ("chain", "cavity", "packet", "times", "detuning"),
    "fig4b": ("cavity", "disorder"),
    "fig4c": ("chain", "cavity", "packet", "times", "detuning", "disorder"),
    "fig4d": ("chain", "cavity", "packet", "times", "detuning"),
}


def load_config(path):
    """Parse a YAML scenario file and validate it."""
    with open(path, "r", encoding="utf-8") as fh:
        cfg = yaml.safe_load(fh)
    if not isinstance(cfg, dict):
        raise ConfigError(f"{path}: top level must be a mapping")
    validate_config(cfg)
    return cfg


def validate_config(cfg):
    """Schema validation with one message per violating field."""
    errors = []
    for err in sorted(_VALIDATOR.iter_errors(cfg), key=lambda e: list(e.absolute_path)):
        where = "/".join(str(p) for p in err.absolute_path) or "<root>"
        errors.append(f"{where}: {err.message}")
    if errors:
        raise ConfigError(errors)
    kind = cfg["scenario"]
    missing = [sec for sec in _NEEDS.get(kind, ()) if sec not in cfg]
    if missing:
        raise ConfigError([f"<root>: scenario {kind!r} requires section(s) {', '.join(missing)}"])
    if kind in ("evolve", "wavepacket", "transmission", "fig3d", "fig4a", "fig4c", "fig4d"):
        if "quasimomentum" not in cfg["packet"]:
            raise ConfigError([f"packet: scenario {kind!r} requires packet/quasimomentum"])
    if "cavity" in cfg and "chain" in cfg:
        S = cfg["chain"]["sites"]
        M, N = cfg["cavity"]["islands"], cfg["cavity"]["intracavity"]
        if S != N + 2 * M:
            raise ConfigError(
                [f"cavity: sites ({S}) must equal intracavity + 2 islands ({N + 2 * M})"]
            )
    det = cfg.get("detuning", {})
    if det.get("mode") == "explicit" and "value" not in det:
        raise ConfigError(["detuning: mode 'explicit' requires detuning/value"])


def config_hash(cfg) -> str:
    """SHA-256 of the canonical JSON encoding of a config mapping."""
    encoded = json.dumps(cfg, sort_keys=True, separators=(",", ":")).encode("utf-8")
    return hashlib.sha256(encoded).hexdigest()


@dataclass(frozen=True)
class DisorderSpec:
    """Zero-mean diagonal disorder drawn per realization.

    ``uniform`` draws from [-W/2, W/2], ``gaussian`` from a normal with
    standard deviation W. Realization ``r`` derives its stream from the
    counter-based pair (seed, r), so ensembles are order-independent and
    safely parallelizable.
    """

    distribution: str = "uniform"
    width: float = 0.0
    realizations: int = 1
    seed: int = 0
    sites: str = "intracavity"

    def __post_init__(self):
        if self.distribution not in ("uniform", "gaussian"):
            raise ValueError(f"unknown distribution {self.distribution!r}")
        if self.width < 0:
            raise ValueError("disorder width must be nonnegative")
        if self.realizations < 1:
            raise ValueError("need at least one realization")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 bits")
        if self.sites not in ("intracavity", "all"):
            raise ValueError(f"unknown disorder site selection {self.sites!r}")

    @classmethod
    def from_config(cls, cfg):
        d = cfg["disorder"]
        return cls(
            distribution=d["distribution"],
            width=float(d["width"]),
            realizations=int(d["realizations"]),
            seed=int(cfg["seed"]),
            sites=d.get("sites", "intracavity"),
        )

    def realization(self, index: int, n: int) -> np.ndarray:
        rng = np.random.Generator(np.random.Philox(np.random.SeedSequence((self.seed, index))))
        if self.distribution == "uniform":
            return rng.uniform(-0.5 * self.width, 0.5 * self.width, n)
        return rng.normal(0.0, self.width, n)


@dataclass(frozen=True)
class EnsembleResult:
    times: np.ndarray
    mean: np.ndarray
    stderr: np.ndarray
    realizations: np.ndarray


@dataclass
class ScenarioResult:
    """Tables produced by one scenario run, plus provenance for the sidecars."""

    scenario: str
    config: dict
    tables: dict = field(default_factory=dict)
    notes: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)

    def add_table(self, name, columns, rows):
        self.tables[name] = {"columns": list(columns), "rows": [tuple(r) for r in rows]}

    def write(self, output_dir=None):
        """Write every table as CSV + JSON sidecar; returns the paths."""
        out = Path(output_dir or self.config.get("output_dir") or f"data/{self.scenario}")
        out.mkdir(parents=True, exist_ok=True)
        digest = config_hash(self.config)
        paths = []
        for name in sorted(self.tables):
            base = self.scenario if name == "main" else f"{self.scenario}_{name}"
            csv_path = out / f"{base}.csv"
            table = self.tables[name]
            with open(csv_path, "w", encoding="utf-8", newline="") as fh:
                writer = csv.writer(fh, lineterminator="\r\n")
                writer.writerow(table["columns"])
                for row in table["rows"]:
                    writer.writerow([_fmt(v) for v in row])
            sidecar = {
                "scenario": self.scenario,
                "table": name,
                "columns": table["columns"],
                "config": self.config,
                "config_hash": digest,
                "seed": self.config.get("seed"),
                "method": self.config.get("method", "expm"),
                "version": __version__,
                "notes": self.notes,
                "warnings": sorted(set(self.warnings)),
            }
            json_path = out / f"{base}.json"
            with open(json_path, "w", encoding="utf-8") as fh:
                json.dump(sidecar, fh, sort_keys=True, indent=2)
                fh.write("\n")
            paths.extend([csv_path, json_path])
        return paths


def _fmt(value):
    if isinstance(value, (np.floating, float)):
        return repr(float(value))
    if isinstance(value, (np.integer, int)):
        return str(int(value))
    return str(value)


def _resolve_times(cfg):
    t = cfg["times"]
    start, stop, step = float(t["start"]), float(t["stop"]), float(t["step"])
    if stop <= start:
        raise ConfigError(["times: stop must exceed start"])
    n = int(round((stop - start) / step))
    if abs(start + n * step - stop) > 1e-9 * max(1.0, stop):
        raise ConfigError(["times: step must divide the window"])
    return start + step * np.arange(n + 1)


def _geometry(cfg):
    ch = cfg["chain"]
    return EmitterGeometry(
        S=int(ch["sites"]),
        lattice_constant=float(ch["spacing"]),
        dipole_angle=float(ch.get("dipole_angle", _HALF_PI)),
        boundary=ch.get("boundary", "open"),
    )


def _packet_spec(cfg, q0=None):
    p = cfg["packet"]
    if q0 is None:
        q0 = float(p["quasimomentum"])
    return WavepacketSpec(
        j0=float(p["center"]),
        w=float(p["width"]),
        q0=q0,
        eta0=float(p.get("drive_strength", 0.5)),
        T_pulse=float(p.get("drive_duration", 0.1)),
    )


def _resolve_detuning(cfg):
    """Island frequency offset per the configured matching mode."""
    det = cfg.get("detuning")
    if det is None or det["mode"] == "none":
        return 0.0
    if det["mode"] == "explicit":
        return float(det["value"])
    cav = cfg["cavity"]
    g = float(cav["coupling"])
    N = int(cav["intracavity"])
    pattern = cav.get("pattern", "asymmetric")
    branch = det.get("branch", "upper")
    intra = float(cav.get("intracavity_hopping", cfg["chain"].get("hopping", 0.0)))
    if det["mode"] == "matched":
        return matched_detuning(g, N, intra, pattern, branch)
    if det["mode"] == "caption":
        # closed ring form evaluated at the island hopping, the published
        # operating-point convention
        return matched_detuning(g, N, float(cfg["chain"].get("hopping", 0.0)), pattern, branch)
    # matched_numeric: eigenvalue of the embedded open segment, which sits an
    # end-bond defect away from the ring closed form
    h = build_closed_hamiltonian(g, N, intra, symmetry=pattern, boundary="open")
    vals, _ = numeric_eigensystem(h)
    return float(vals[-1] if branch == "upper" else vals[0])


def _cavity_chain(cfg, *, pattern=None, decay_model=None, extra_detunings=None, island_offset=None):
    """ChainConfig for the island-cavity-island layout."""
    ch, cav = cfg["chain"], cfg["cavity"]
    S = int(ch["sites"])
    M, N = int(cav["islands"]), int(cav["intracavity"])
    hop = float(ch.get("hopping", 0.0))
    intra = float(cav.get("intracavity_hopping", hop))
    bonds = np.full(S - 1 if ch.get("boundary", "open") == "open" else S, hop)
    bonds[M : M + N - 1] = intra
    det = np.zeros(S)
    offset = _resolve_detuning(cfg) if island_offset is None else island_offset
    det[:M] += offset
    det[M + N :] += offset
    if extra_detunings is not None:
        sel = np.asarray(extra_detunings, dtype=float)
        if sel.size == N:
            det[M : M + N] += sel
        elif sel.size == S:
            det += sel
        else:
            raise ValueError("extra detunings must cover the intracavity block or all sites")
    pat = pattern or cav.get("pattern", "asymmetric")
    signs = np.ones(N) if pat == "symmetric" else (-1.0) ** np.arange(1, N + 1)
    cavity = CavityConfig(
        M=M,
        N=N,
        couplings=float(cav["coupling"]) * signs,
        omega_c=float(cav.get("photon_frequency", 0.0)),
        kappa=float(cav.get("photon_loss", 0.0)),
    )
    return ChainConfig(
        geometry=_geometry(cfg),
        Omega=bonds,
        omega=float(ch.get("omega", 0.0)),
        detunings=det,
        gamma=float(ch["gamma"]),
        decay_model=decay_model or ch["decay_model"],
        cavity=cavity,
    )


def _free_chain(cfg, *, decay_model=None, extra_detunings=None):
    """Uniform chain with the island hopping everywhere and no cavity."""
    ch = cfg["chain"]
    S = int(ch["sites"])
    det = None
    if extra_detunings is not None:
        det = np.zeros(S)
        sel = np.asarray(extra_detunings, dtype=float)
        if "cavity" in cfg and sel.size == int(cfg["cavity"]["intracavity"]):
            M = int(cfg["cavity"]["islands"])
            det[M : M + sel.size] += sel
        elif sel.size == S:
            det += sel
        else:
            raise ValueError("extra detunings must cover the intracavity block or all sites")
    return ChainConfig(
        geometry=_geometry(cfg),
        Omega=float(ch.get("hopping", 0.0)),
        omega=float(ch.get("omega", 0.0)),
        detunings=det,
        gamma=float(ch["gamma"]),
        decay_model=decay_model or ch["decay_model"],
        cavity=None,
    )


def _launch(config: ChainConfig, spec: WavepacketSpec, record):
    """Drive-initialized packet padded to the full amplitude dimension."""
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        state = drive_initialize(spec, None, config.geometry.S)
    record.extend(str(w.message) for w in caught)
    beta = np.zeros(config.n_amplitudes, dtype=complex)
    beta[: config.geometry.S] = state.beta
    return beta


def _trajectory_table(result, name, traj, config, include_T=True):
    S = config.geometry.S
    columns = ["t"] + [f"site_{j}" for j in range(1, S + 1)]
    has_photon = config.cavity is not None
    if has_photon:
        columns.append("photon")
    T = None
    if has_photon and include_T:
        columns.append("T")
        T = transmission(traj, config)
    rows = []
    for k, state in enumerate(traj):
        pops = np.abs(state.beta) ** 2
        row = [state.t] + [float(p) for p in pops[:S]]
        if has_photon:
            row.append(float(pops[S]))
        if T is not None:
            row.append(float(T[k]))
        rows.append(row)
    result.add_table(name, columns, rows)
    return T


def _spectrum_rows(geom, hopping, omega, gamma, decay_model, truncation="full"):
    matrices = build_coupling_matrices(geom, truncation=truncation, decay_model=decay_model, gamma=gamma)
    basis = mode_basis(geom.S, geom.boundary)
    energies = dispersion(basis, omega, hopping)
    rates = collective_rates(basis, matrices.gamma)
    return basis, [
        (int(k), float(e), float(r))
        for k, e, r in zip(basis.k_index, energies, rates)
    ], rates


def run_scenario(config, output_dir=None, write=True):
    """Run one validated scenario; optionally persist CSV + JSON outputs.

    ``config`` is a mapping or a path to a YAML file. Returns the
    `ScenarioResult`; when ``write`` is true the tables are also written
    under ``output_dir`` (fallback: config ``output_dir``, then
    ``data/<scenario>``).
    """
    if not isinstance(config, dict):
        config = load_config(config)
    else:
        validate_config(config)
    runner = _RUNNERS[config["scenario"]]
    result = runner(config)
    if write:
        result.write(output_dir)
    return result


def disorder_ensemble(config, spec: DisorderSpec | None = None) -> EnsembleResult:
    """Ensemble-averaged cavity transmission under diagonal disorder.

    Each realization adds its own zero-mean detuning draw and propagates the
    configured packet; the reduction uses exact summation, so the mean is
    independent of realization order.
    """
    if not isinstance(config, dict):
        config = load_config(config)
    else:
        validate_config(config)
    if "cavity" not in config:
        raise ConfigError(["<root>: disorder_ensemble needs a cavity section"])
    if spec is None:
        if "disorder" not in config:
            raise ConfigError(["<root>: disorder_ensemble needs a disorder section or an explicit spec"])
        spec = DisorderSpec.from_config(config)
    times = _resolve_times(config)
    spec_pk = _packet_spec(config)
    method = config.get("method", "expm")
    n_sites = int(config["cavity"]["intracavity"]) if spec.sites == "intracavity" else int(config["chain"]["sites"])
    curves = []
    scratch = []
    for r in range(spec.realizations):
        draw = spec.realization(r, n_sites)
        chain = _cavity_chain(config, extra_detunings=draw)
        traj = propagate_amplitudes(chain, _launch(chain, spec_pk, scratch), times, method=method)
        curves.append(transmission(traj, chain))
    return _reduce_ensemble(times, curves)


def _reduce_ensemble(times, curves):
    R = len(curves)
    stack = np.asarray(curves)
    mean = np.array([math.fsum(stack[:, i]) / R for i in range(stack.shape[1])])
    if R > 1:
        var = np.array(
            [math.fsum((stack[:, i] - mean[i]) ** 2) / (R - 1) for i in range(stack.shape[1])]
        )
        stderr = np.sqrt(var / R)
    else:
        stderr = np.zeros_like(mean)
    return EnsembleResult(times=times, mean=mean, stderr=stderr, realizations=stack)


def free_space_vs_cavity(config):
    """Paired clean runs: cavity-mediated vs uniform free-space transport.

    Returns two `ScenarioResult` objects on the same time grid; the free run
    reports the population on the same out-island site window.
    """
    if not isinstance(config, dict):
        config = load_config(config)
    else:
        validate_config(config)
    times = _resolve_times(config)
    spec = _packet_spec(config)
    method = config.get("method", "expm")
    M, N = int(config["cavity"]["islands"]), int(config["cavity"]["intracavity"])

    cavity_res = ScenarioResult(scenario="transmission", config=config)
    chain = _cavity_chain(config)
    traj = propagate_amplitudes(chain, _launch(chain, spec, cavity_res.warnings), times, method=method)
    T = _trajectory_table(cavity_res, "trajectory", traj, chain)
    cavity_res.add_table("transmission", ["t", "T"], list(zip(times, T)))

    free_res = ScenarioResult(scenario="free_space", config=config)
    free = _free_chain(config)
    ftraj = propagate_amplitudes(free, _launch(free, spec, free_res.warnings), times, method=method)
    _trajectory_table(free_res, "trajectory", ftraj, free)
    fT = [_out_island_population(state, M, N) for state in ftraj]
    free_res.add_table("transmission", ["t", "T"], list(zip(times, fT)))
    return cavity_res, free_res


def _out_island_population(state, M, N):
    return float(np.sum(np.abs(state.beta[M + N :]) ** 2))


# ---------------------------------------------------------------- scenarios


def _run_couplings(cfg):
    result = ScenarioResult(scenario=cfg["scenario"], config=cfg)
    ch = cfg["chain"]
    geom = _geometry(cfg)
    matrices = build_coupling_matrices(
        geom,
        truncation=ch.get("truncation", "full"),
        decay_model=ch["decay_model"],
        gamma=float(ch["gamma"]),
    )
    rows = []
    for i in range(geom.S):
        for j in range(i, geom.S):
            rows.append((i + 1, j + 1, float(matrices.omega[i, j]), float(matrices.gamma[i, j])))
    result.add_table("main", ["i", "j", "omega_ij", "gamma_ij"], rows)
    return result


def _run_spectrum(cfg):
    result = ScenarioResult(scenario=cfg["scenario"], config=cfg)
    ch = cfg["chain"]
    geom = _geometry(cfg)
    _, rows, rates = _spectrum_rows(
        geom,
        float(ch.get("hopping", 0.0)),
        float(ch.get("omega", 0.0)),
        float(ch["gamma"]),
        ch["decay_model"],
        ch.get("truncation", "full"),
    )
    result.add_table("main", ["k", "energy", "rate"], rows)
    result.notes["superradiant_fraction"] = superradiant_fraction(rates, float(ch["gamma"]))
    return result


def _chain_with_optional_cavity(cfg, result):
    if "cavity" in cfg:
        return _cavity_chain(cfg)
    ch = cfg["chain"]
    return ChainConfig(
        geometry=_geometry(cfg),
        Omega=float(ch.get("hopping", 0.0)),
        omega=float(ch.get("omega", 0.0)),
        gamma=float(ch["gamma"]),
        decay_model=ch["decay_model"],
    )


def _run_evolve(cfg):
    result = ScenarioResult(scenario=cfg["scenario"], config=cfg)
    chain = _chain_with_optional_cavity(cfg, result)
    times = _resolve_times(cfg)
    beta0 = _launch(chain, _packet_spec(cfg), result.warnings)
    traj = propagate_amplitudes(chain, beta0, times, method=cfg.get("method", "expm"))
    _trajectory_table(result, "main", traj, chain)
    return result


def _run_wavepacket(cfg):
    result = ScenarioResult(scenario=cfg["scenario"], config=cfg)
    ch = cfg["chain"]
    chain = _free_chain(cfg)
    spec = _packet_spec(cfg)
    times = _resolve_times(cfg)
    beta0 = _launch(chain, spec, result.warnings)
    traj = propagate_amplitudes(chain, beta0, times, method=cfg.get("method", "expm"))
    _trajectory_table(result, "numeric", traj, chain)
    S = chain.geometry.S
    hop = float(ch.get("hopping", 0.0))
    columns = ["t"] + [f"site_{j}" for j in range(1, S + 1)]
    rows = []
    for t in times:
        pops = analytic_evolution(spec, hop, float(ch["gamma"]), float(t), S, chain.geometry.boundary)
        rows.append([float(t)] + [float(p) for p in pops])
    result.add_table("analytic", columns, rows)
    basis = mode_basis(S, chain.geometry.boundary)
    fit = collective_occupancy(spec, basis)
    result.add_table(
        "occupancy",
        ["k", "occupancy"],
        [(int(k), float(o)) for k, o in zip(basis.k_index, fit.occupancies)],
    )
    cen, wid = centroid_and_width(np.abs(traj[-1].beta[:S]) ** 2)
    result.notes.update(
        {
            "mode_center": fit.k0,
            "mode_width": fit.width,
            "fit_valid": bool(fit.valid),
            "final_centroid": cen,
            "final_width": wid,
        }
    )
    return result


def _run_concurrence(cfg):
    result = ScenarioResult(scenario=cfg["scenario"], config=cfg)
    pr = cfg["pair"]
    chain = _free_chain(cfg)
    S = chain.geometry.S
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        state = entangled_pair_state(
            j0=float(pr["center"]),
            d0=float(pr["separation"]),
            w=float(pr["width"]),
            q0=float(pr["quasimomentum"]),
            S=S,
        )
    result.warnings.extend(str(w.message) for w in caught)
    times = _resolve_times(cfg)
    traj = propagate_amplitudes(chain, state.amplitudes, times, method=cfg.get("method", "expm"))
    spec = DomainSpec(
        center_left=float(pr["center"]),
        center_right=float(pr["center"]) + float(pr["separation"]),
        width=float(pr["width"]),
        mode=pr.get("domain_mode", "tracked"),
        normalization=pr.get("normalization", "five_w"),
    )
    series = average_concurrence(traj, spec)
    result.add_table("main", ["t", "C_av"], list(zip(series.times, series.c_av)))
    if pr.get("pairwise_dump", False):
        rows = []
        for state_t, (d1, d2) in zip(traj, series.domains):
            for j, jp, c in pairwise_concurrence(state_t, d1, d2):
                rows.append((float(state_t.t), int(j), int(jp), float(c)))
        result.add_table("pairs", ["t", "j", "jprime", "C"], rows)
    result.notes["tracked_widths"] = [float(w) for w in series.widths]
    return result


def _run_polaritons(cfg):
    result = ScenarioResult(scenario=cfg["scenario"], config=cfg)
    cav = cfg["cavity"]
    g = float(cav["coupling"])
    N = int(cav["intracavity"])
    pattern = cav.get("pattern", "asymmetric")
    intra = float(cav.get("intracavity_hopping", 0.0))
    h = build_closed_hamiltonian(
        g,
        N,
        intra,
        omega=0.0,
        omega_c=float(cav.get("photon_frequency", 0.0)),
        symmetry=pattern,
        boundary=cav.get("boundary", "periodic"),
    )
    vals, vecs = numeric_eigensystem(h)
    fractions = photon_fractions(vecs)
    result.add_table(
        "main",
        ["n", "eigenvalue", "photon_fraction"],
        [(n + 1, float(v), float(fr)) for n, (v, fr) in enumerate(zip(vals, fractions))],
    )
    try:
        sol = polariton_solution(g, N, intra, omega=0.0, symmetry=pattern)
        result.notes.update(
            {
                "closed_energy_upper": sol.energy_upper,
                "closed_energy_lower": sol.energy_lower,
                "closed_photon_upper": sol.photon_upper**2,
                "closed_photon_lower": sol.photon_lower**2,
                "dark_count": sol.dark_count,
            }
        )
    except ValueError as exc:
        result.notes["closed_form"] = f"unavailable: {exc}"
    return result


def _run_transmission(cfg):
    result = ScenarioResult(scenario=cfg["scenario"], config=cfg)
    chain = _cavity_chain(cfg)
    times = _resolve_times(cfg)
    beta0 = _launch(chain, _packet_spec(cfg), result.warnings)
    traj = propagate_amplitudes(chain, beta0, times, method=cfg.get("method", "expm"))
    T = _trajectory_table(result, "trajectory", traj, chain)
    result.add_table("main", ["t", "T"], list(zip(times, T)))
    result.notes["island_offset"] = _resolve_detuning(cfg)
    return result


def _run_fig3a(cfg):
    return _run_spectrum(cfg)


def _run_fig3b(cfg):
    result = _run_spectrum(cfg)
    ch = cfg["chain"]
    rows = []
    for a in cfg["spacings"]:
        geom = EmitterGeometry(
            S=int(ch["sites"]),
            lattice_constant=float(a),
            dipole_angle=float(ch.get("dipole_angle", _HALF_PI)),
            boundary=ch.get("boundary", "open"),
        )
        _, _, rates = _spectrum_rows(
            geom,
            float(ch.get("hopping", 0.0)),
            float(ch.get("omega", 0.0)),
            float(ch["gamma"]),
            ch["decay_model"],
        )
        rows.append((float(a), float(superradiant_fraction(rates, float(ch["gamma"])))))
    result.add_table("inset", ["spacing", "fraction"], rows)
    return result


def _run_fig3c(cfg):
    result = ScenarioResult(scenario=cfg["scenario"], config=cfg)
    times = _resolve_times(cfg)
    summary = []
    for decay_model in ("independent", "collective"):
        for tag, q0 in (("q0-0", 0.0), ("q0-pi", math.pi)):
            chain = _free_chain(cfg, decay_model=decay_model)
            spec = _packet_spec(cfg, q0=q0)
            beta0 = _launch(chain, spec, result.warnings)
            traj = propagate_amplitudes(chain, beta0, times, method=cfg.get("method", "expm"))
            _trajectory_table(result, f"{tag}_{decay_model}", traj, chain)
            survival = traj[-1].norm() / traj[0].norm()
            summary.append((f"{tag}_{decay_model}", float(q0), decay_model, float(survival)))
    result.add_table("survival", ["case", "q0", "decay_model", "survival_fraction"], summary)
    return result


def _run_fig3d(cfg):
    result = ScenarioResult(scenario=cfg["scenario"], config=cfg)
    times = _resolve_times(cfg)
    spec = _packet_spec(cfg)
    for decay_model in ("independent", "collective"):
        chain = _free_chain(cfg, decay_model=decay_model)
        beta0 = _launch(chain, spec, result.warnings)
        traj = propagate_amplitudes(chain, beta0, times, method=cfg.get("method", "expm"))
        _trajectory_table(result, decay_model, traj, chain)
    return result


def _run_fig4a(cfg):
    result = ScenarioResult(scenario=cfg["scenario"], config=cfg)
    times = _resolve_times(cfg)
    spec = _packet_spec(cfg)
    curves = {}
    for pattern in ("asymmetric", "symmetric"):
        sub = dict(cfg, cavity=dict(cfg["cavity"], pattern=pattern))
        chain = _cavity_chain(sub, pattern=pattern)
        beta0 = _launch(chain, spec, result.warnings)
        traj = propagate_amplitudes(chain, beta0, times, method=cfg.get("method", "expm"))
        curves[pattern] = transmission(traj, chain)
        _trajectory_table(result, pattern, traj, chain)
        result.notes[f"island_offset_{pattern}"] = _resolve_detuning(sub)
        result.notes[f"peak_T_{pattern}"] = float(curves[pattern].max())
    result.add_table(
        "transmission",
        ["t", "asymmetric", "symmetric"],
        list(zip(times, curves["asymmetric"], curves["symmetric"])),
    )
    return result


def _run_fig4b(cfg):
    result = ScenarioResult(scenario=cfg["scenario"], config=cfg)
    cav = cfg["cavity"]
    g = float(cav["coupling"])
    N = int(cav["intracavity"])
    pattern = cav.get("pattern", "asymmetric")
    intra = float(cav.get("intracavity_hopping", 0.0))
    spec = DisorderSpec.from_config(cfg)
    h = build_closed_hamiltonian(g, N, intra, symmetry=pattern, boundary=cav.get("boundary", "open"))
    for name, matrix in (("clean", h), ("disordered", _disordered_block(h, spec, N))):
        vals, vecs = numeric_eigensystem(matrix)
        fractions = photon_fractions(vecs)
        result.add_table(
            name,
            ["n", "eigenvalue", "photon_fraction"],
            [(n + 1, float(v), float(fr)) for n, (v, fr) in enumerate(zip(vals, fractions))],
        )
    sol = polariton_solution(g, N, intra, omega=0.0, symmetry=pattern)
    result.notes.update(
        {"ring_energy_upper": sol.energy_upper, "ring_energy_lower": sol.energy_lower}
    )
    return result


def _disordered_block(h, spec, N):
    noisy = h.copy()
    noisy[np.arange(N), np.arange(N)] += spec.realization(0, N)
    return noisy


def _run_fig4c(cfg):
    result = ScenarioResult(scenario=cfg["scenario"], config=cfg)
    times = _resolve_times(cfg)
    spec_pk = _packet_spec(cfg)
    method = cfg.get("method", "expm")
    spec = DisorderSpec.from_config(cfg)
    M, N = int(cfg["cavity"]["islands"]), int(cfg["cavity"]["intracavity"])
    n_sites = N if spec.sites == "intracavity" else int(cfg["chain"]["sites"])

    cavity_chain = _cavity_chain(cfg)
    cav_traj = propagate_amplitudes(
        cavity_chain, _launch(cavity_chain, spec_pk, result.warnings), times, method=method
    )
    clean_cavity = transmission(cav_traj, cavity_chain)
    free_chain = _free_chain(cfg)
    free_traj = propagate_amplitudes(
        free_chain, _launch(free_chain, spec_pk, result.warnings), times, method=method
    )
    clean_free = np.array([_out_island_population(s, M, N) for s in free_traj])

    cav_curves, free_curves = [], []
    scratch = []
    for r in range(spec.realizations):
        draw = spec.realization(r, n_sites)
        chain = _cavity_chain(cfg, extra_detunings=draw)
        traj = propagate_amplitudes(chain, _launch(chain, spec_pk, scratch), times, method=method)
        cav_curves.append(transmission(traj, chain))
        fchain = _free_chain(cfg, extra_detunings=draw)
        ftraj = propagate_amplitudes(fchain, _launch(fchain, spec_pk, scratch), times, method=method)
        free_curves.append(np.array([_out_island_population(s, M, N) for s in ftraj]))
    cav_ens = _reduce_ensemble(times, cav_curves)
    free_ens = _reduce_ensemble(times, free_curves)

    result.add_table("cavity_clean", ["t", "T"], list(zip(times, clean_cavity)))
    result.add_table("free_clean", ["t", "T"], list(zip(times, clean_free)))
    result.add_table(
        "cavity_disordered",
        ["t", "T_mean", "T_stderr"],
        list(zip(times, cav_ens.mean, cav_ens.stderr)),
    )
    result.add_table(
        "free_disordered",
        ["t", "T_mean", "T_stderr"],
        list(zip(times, free_ens.mean, free_ens.stderr)),
    )
    real_cols = ["t"] + [f"r{r + 1:04d}" for r in range(spec.realizations)]
    result.add_table(
        "cavity_realizations", real_cols, np.column_stack([times, cav_ens.realizations.T])
    )
    result.add_table(
        "free_realizations", real_cols, np.column_stack([times, free_ens.realizations.T])
    )
    k_star = int(np.argmax(clean_cavity))
    result.notes.update(
        {
            "island_offset": _resolve_detuning(cfg),
            "peak_time": float(times[k_star]),
            "clean_cavity_peak": float(clean_cavity[k_star]),
            "disordered_cavity_at_peak": float(cav_ens.mean[k_star]),
            "clean_free_at_peak": float(clean_free[k_star]),
            "disordered_free_at_peak": float(free_ens.mean[k_star]),
        }
    )
    return result


def _run_fig4d(cfg):
    result = ScenarioResult(scenario=cfg["scenario"], config=cfg)
    times = _resolve_times(cfg)
    spec = _packet_spec(cfg)
    for decay_model in ("independent", "collective"):
        chain = _cavity_chain(cfg, decay_model=decay_model)
        beta0 = _launch(chain, spec, result.warnings)
        traj = propagate_amplitudes(chain, beta0, times, method=cfg.get("method", "expm"))
        _trajectory_table(result, decay_model, traj, chain)
    result.notes["island_offset"] = _resolve_detuning(cfg)
    return result


_RUNNERS = {
    "couplings": _run_couplings,
    "spectrum": _run_spectrum,
    "evolve": _run_evolve,
    "wavepacket": _run_wavepacket,
    "concurrence": _run_concurrence,
    "polaritons": _run_polaritons,
    "transmission": _run_transmission,
    "fig3a": _run_fig3a,
    "fig3b": _run_fig3b,
    "fig3c": _run_fig3c,
    "fig3d": _run_fig3d,
    "fig4a": _run_fig4a,
    "fig4b": _run_fig4b,
    "fig4c": _run_fig4c,
    "fig4d": _run_fig4d,
}
