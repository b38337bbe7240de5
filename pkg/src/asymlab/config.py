"""Experiment configuration: schema validation, capability envelope, hashing.

Configs are JSON objects validated against the shipped draft-07 schema
(unknown keys are errors), then checked against the capability envelope of
the chosen computational path before anything runs.  ``config_hash`` gives
the short provenance token echoed on every CSV row.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from importlib import resources

import jsonschema
import numpy as np

from . import closedforms, states
from .circuits import BrickworkCircuit, apply_circuit, load_circuit
from .errors import ConfigError, ResourceError
from .lattice import LatticeGeometry

EXPERIMENTS = (
    "u1-asymmetry",
    "su2-asymmetry",
    "dicke-sweep",
    "kink-sweep",
    "product-sweep",
    "circuit-clustering",
    "bound-suite",
)

SWEEP_EXPERIMENTS = ("dicke-sweep", "kink-sweep", "product-sweep")
STATE_EXPERIMENTS = ("u1-asymmetry", "su2-asymmetry", "circuit-clustering")

# closed-form sweep envelopes; every limit is named in the raised error
DICKE_HALF_SWEEP_MAX = 2_000_000
DICKE_GENERAL_SWEEP_MAX = 2_048
KINK_SWEEP_MAX = 10_000_000
PRODUCT_SWEEP_MAX = 20_000

_schema_cache: dict | None = None


def schema() -> dict:
    global _schema_cache
    if _schema_cache is None:
        text = (
            resources.files("asymlab").joinpath("schema/config.schema.json").read_text()
        )
        _schema_cache = json.loads(text)
    return _schema_cache


def canonical_json(data) -> str:
    return json.dumps(data, sort_keys=True, separators=(",", ":"))


def config_hash(data) -> str:
    return hashlib.sha256(canonical_json(data).encode()).hexdigest()[:12]


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    geometry: LatticeGeometry | None
    state_spec: dict | None
    sweep: tuple[int, ...] | None
    seed: int
    samples: float
    output: str
    log_base: str
    clustering_range: int | None
    tolerance: float
    raw: dict
    hash: str


_DEFAULT_SPECS = {
    "dicke-sweep": {"kind": "dicke", "ratio": 0.5},
    "kink-sweep": {"kind": "kink"},
    "product-sweep": {"kind": "bernoulli", "x": 0.5},
}

_SWEEP_KINDS = {
    "dicke-sweep": "dicke",
    "kink-sweep": "kink",
    "product-sweep": "bernoulli",
}


def _check_schema(data: dict):
    validator = jsonschema.Draft7Validator(schema())
    errors = sorted(validator.iter_errors(data), key=lambda e: list(e.absolute_path))
    if errors:
        first = errors[0]
        where = "/".join(str(p) for p in first.absolute_path) or "<root>"
        raise ConfigError(f"config invalid at {where}: {first.message}")


def _check_sweep_envelope(experiment: str, state_spec: dict, sweep) -> None:
    if experiment == "kink-sweep":
        cap = KINK_SWEEP_MAX
        name = "KINK_SWEEP_MAX"
    elif experiment == "product-sweep":
        cap = PRODUCT_SWEEP_MAX
        name = "PRODUCT_SWEEP_MAX"
    elif state_spec.get("ratio") == 0.5 and "k" not in state_spec:
        cap = DICKE_HALF_SWEEP_MAX
        name = "DICKE_HALF_SWEEP_MAX"
    else:
        cap = DICKE_GENERAL_SWEEP_MAX
        name = "DICKE_GENERAL_SWEEP_MAX"
    worst = max(sweep)
    if worst > cap:
        raise ResourceError(
            f"sweep value {worst} exceeds {name} = {cap} for {experiment}"
        )
    if experiment == "dicke-sweep":
        for n in sweep:
            k = state_spec.get("k")
            if k is None:
                k_eff = state_spec.get("ratio", 0.5) * n
                if abs(k_eff - round(k_eff)) > 1e-12:
                    raise ConfigError(
                        f"dicke ratio {state_spec.get('ratio', 0.5)} gives "
                        f"non-integer excitation count at N = {n}"
                    )
            elif not 0 <= k <= n:
                raise ConfigError(f"dicke k = {k} outside [0, {n}]")


def validate_config(data: dict) -> ExperimentConfig:
    """Schema check, semantic check, capability envelope; returns the config."""
    if not isinstance(data, dict):
        raise ConfigError(f"config must be a JSON object, got {type(data).__name__}")
    _check_schema(data)
    experiment = data["experiment"]

    geometry = None
    if "geometry" in data:
        geometry = LatticeGeometry(
            data["geometry"]["dimension"], data["geometry"]["linear_size"]
        )

    state_spec = data.get("state_spec")
    if state_spec is None and experiment in _DEFAULT_SPECS:
        state_spec = dict(_DEFAULT_SPECS[experiment])

    sweep = tuple(int(n) for n in data.get("sweep", ())) or None

    cfg = ExperimentConfig(
        experiment=experiment,
        geometry=geometry,
        state_spec=state_spec,
        sweep=sweep,
        seed=int(data.get("seed", 0)),
        samples=float(data.get("samples", 1.0)),
        output=data.get("output", "."),
        log_base=data.get("log_base", "e"),
        clustering_range=data.get("clustering_range"),
        tolerance=float(data.get("tolerance", 1e-10)),
        raw=data,
        hash=config_hash(data),
    )

    if experiment in SWEEP_EXPERIMENTS:
        if cfg.sweep is None:
            raise ConfigError(f"{experiment} requires a 'sweep' list of N values")
        wanted = _SWEEP_KINDS[experiment]
        if cfg.state_spec.get("kind") != wanted:
            raise ConfigError(
                f"{experiment} needs a state_spec of kind '{wanted}', "
                f"got '{cfg.state_spec.get('kind')}'"
            )
        _check_sweep_envelope(experiment, cfg.state_spec, cfg.sweep)

    if experiment in STATE_EXPERIMENTS:
        if cfg.geometry is None:
            raise ConfigError(f"{experiment} requires 'geometry'")
        if cfg.state_spec is None:
            raise ConfigError(f"{experiment} requires 'state_spec'")
        n = cfg.geometry.n_sites
        cap = states.statevector_cap()
        if n > cap:
            raise ResourceError(
                f"{n} sites exceed the statevector cap of {cap} qubits "
                "(override with ASYMLAB_MAX_QUBITS)"
            )
        if experiment == "su2-asymmetry":
            if n % 2:
                raise ConfigError("su2-asymmetry needs an even number of sites")
            dcap = states.density_matrix_cap()
            if n > dcap:
                raise ResourceError(
                    f"{n} sites exceed the density-matrix cap of {dcap} qubits "
                    "needed for the spin-sector basis (override with ASYMLAB_MAX_QUBITS)"
                )
        if experiment == "circuit-clustering":
            if cfg.state_spec.get("kind") != "circuit":
                raise ConfigError(
                    "circuit-clustering requires a state_spec of kind 'circuit'"
                )
    if experiment != "circuit-clustering" and cfg.state_spec is not None:
        if cfg.state_spec.get("kind") == "circuit" and experiment not in (
            "u1-asymmetry",
            "su2-asymmetry",
        ):
            raise ConfigError(f"circuit state_spec is not valid for {experiment}")

    if cfg.clustering_range is not None and cfg.geometry is None:
        raise ConfigError("clustering_range requires 'geometry'")
    return cfg


def load_config(path) -> ExperimentConfig:
    try:
        with open(path) as handle:
            data = json.load(handle)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    return validate_config(data)


def _product_from_amplitudes(amplitudes, n: int) -> states.StateVector:
    if len(amplitudes) != n:
        raise ConfigError(
            f"product state lists {len(amplitudes)} sites, geometry has {n}"
        )
    locals_ = []
    for pair in amplitudes:
        vec = np.array([complex(re, im) for re, im in pair])
        norm = np.linalg.norm(vec)
        if norm < 1e-12:
            raise ConfigError("product state has a zero local vector")
        locals_.append(vec / norm)
    return states.product_state(locals_)


def _bernoulli_vector(x, n: int) -> np.ndarray:
    if isinstance(x, (int, float)):
        return np.full(n, float(x))
    arr = np.asarray(x, dtype=float)
    if arr.size != n:
        raise ConfigError(f"bernoulli x lists {arr.size} sites, geometry has {n}")
    return arr


def _load_vector(path, n: int) -> states.StateVector:
    """Read a full statevector from .npy (complex vector) or .json [[re, im], ...]."""
    try:
        if str(path).endswith(".npy"):
            vec = np.asarray(np.load(path), dtype=complex)
        else:
            with open(path) as handle:
                data = json.load(handle)
            pairs = data["amplitudes"] if isinstance(data, dict) else data
            vec = np.array([complex(re, im) for re, im in pairs])
    except OSError as exc:
        raise ConfigError(f"cannot read state file {path}: {exc}") from exc
    except (KeyError, TypeError, ValueError, json.JSONDecodeError) as exc:
        raise ConfigError(f"state file {path} is malformed: {exc}") from exc
    if vec.ndim != 1 or vec.size != 2**n:
        raise ConfigError(
            f"state file {path} holds {vec.size} amplitudes, need {2**n} for {n} sites"
        )
    norm = np.linalg.norm(vec)
    if norm < 1e-12:
        raise ConfigError(f"state file {path} holds a zero vector")
    return states.StateVector(n, vec / norm)


def build_state(spec: dict, n: int, seed: int, geometry: LatticeGeometry | None = None):
    """Materialize a state_spec on n sites; returns (state, circuit-or-None)."""
    kind = spec.get("kind")
    if kind == "product":
        return _product_from_amplitudes(spec["amplitudes"], n), None
    if kind == "bernoulli":
        return closedforms.product_charge_state(_bernoulli_vector(spec["x"], n)), None
    if kind == "dicke":
        if "k" in spec:
            k = int(spec["k"])
        else:
            ratio = float(spec.get("ratio", 0.5))
            k_eff = ratio * n
            if abs(k_eff - round(k_eff)) > 1e-12:
                raise ConfigError(f"dicke ratio {ratio} gives non-integer k at N = {n}")
            k = int(round(k_eff))
        if not 0 <= k <= n:
            raise ConfigError(f"dicke k = {k} outside [0, {n}]")
        return closedforms.dicke_state(n, k, axis="x"), None
    if kind == "kink":
        return closedforms.kink_state(n), None
    if kind == "ghz":
        return states.ghz_state(n), None
    if kind == "random":
        rng = np.random.default_rng([int(spec.get("seed", seed)), n])
        if "rank" in spec:
            return states.random_density_matrix(n, rng, rank=int(spec["rank"])), None
        return states.random_state(n, rng), None
    if kind == "vector":
        return _load_vector(spec["path"], n), None
    if kind == "circuit":
        try:
            circuit = load_circuit(spec["path"])
        except OSError as exc:
            raise ConfigError(f"cannot read circuit {spec['path']}: {exc}") from exc
        if circuit.n_qubits != n:
            raise ConfigError(
                f"circuit acts on {circuit.n_qubits} qubits, geometry has {n} sites"
            )
        inner = spec.get("input")
        if inner is None:
            base = states.zero_state(n)
        else:
            base, nested = build_state(inner, n, seed, geometry)
            if nested is not None:
                raise ConfigError("circuit input cannot itself be a circuit")
        return apply_circuit(base, circuit), circuit
    raise ConfigError(f"unknown state_spec kind {kind!r}")


def circuit_depth_range(circuit: BrickworkCircuit) -> int:
    """Default claimed clustering range for a circuit state: twice its depth."""
    return 2 * circuit.depth


__all__ = [
    "EXPERIMENTS",
    "ExperimentConfig",
    "build_state",
    "canonical_json",
    "circuit_depth_range",
    "config_hash",
    "load_config",
    "schema",
    "validate_config",
]
