import json
import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from asymlab.circuits import random_brickwork, save_circuit
from asymlab.config import (
    build_state,
    circuit_depth_range,
    config_hash,
    load_config,
    validate_config,
)
from asymlab.errors import ConfigError, ResourceError
from asymlab.lattice import LatticeGeometry
from asymlab.states import DensityMatrix, StateVector, ghz_state
from asymlab.u1 import charge_distribution


def _sweep_cfg(**overrides):
    data = {"experiment": "dicke-sweep", "sweep": [100, 1000]}
    data.update(overrides)
    return data


def test_minimal_sweep_config_validates_with_defaults():
    cfg = validate_config(_sweep_cfg())
    assert cfg.experiment == "dicke-sweep"
    assert cfg.seed == 0
    assert cfg.samples == 1.0
    assert cfg.log_base == "e"
    assert cfg.state_spec == {"kind": "dicke", "ratio": 0.5}
    assert len(cfg.hash) == 12


def test_unknown_keys_are_rejected():
    with pytest.raises(ConfigError):
        validate_config(_sweep_cfg(bogus=True))
    with pytest.raises(ConfigError):
        validate_config(
            {
                "experiment": "u1-asymmetry",
                "geometry": {"dimension": 1, "linear_size": 4, "extra": 2},
                "state_spec": {"kind": "ghz"},
            }
        )


def test_unknown_experiment_rejected():
    with pytest.raises(ConfigError):
        validate_config({"experiment": "time-travel"})


def test_config_hash_is_order_insensitive_and_content_sensitive():
    a = config_hash({"experiment": "kink-sweep", "sweep": [10, 20]})
    b = config_hash({"sweep": [10, 20], "experiment": "kink-sweep"})
    c = config_hash({"experiment": "kink-sweep", "sweep": [10, 21]})
    assert a == b
    assert a != c


def test_sweep_requires_matching_state_kind():
    with pytest.raises(ConfigError):
        validate_config(_sweep_cfg(state_spec={"kind": "kink"}))


def test_dicke_sweep_rejects_non_integer_filling():
    with pytest.raises(ConfigError):
        validate_config(
            {
                "experiment": "dicke-sweep",
                "sweep": [100, 101],
                "state_spec": {"kind": "dicke", "ratio": 0.5},
            }
        )


def test_sweep_envelope_caps_are_enforced():
    with pytest.raises(ResourceError):
        validate_config({"experiment": "kink-sweep", "sweep": [20_000_000]})
    with pytest.raises(ResourceError):
        validate_config({"experiment": "product-sweep", "sweep": [50_000]})


def test_state_experiment_requires_geometry():
    with pytest.raises(ConfigError):
        validate_config({"experiment": "u1-asymmetry", "state_spec": {"kind": "ghz"}})


def test_statevector_cap_yields_resource_error():
    with pytest.raises(ResourceError):
        validate_config(
            {
                "experiment": "u1-asymmetry",
                "geometry": {"dimension": 1, "linear_size": 30},
                "state_spec": {"kind": "ghz"},
            }
        )


def test_su2_requires_even_sites():
    with pytest.raises(ConfigError):
        validate_config(
            {
                "experiment": "su2-asymmetry",
                "geometry": {"dimension": 1, "linear_size": 5},
                "state_spec": {"kind": "ghz"},
            }
        )


def test_load_config_round_trip(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(_sweep_cfg(seed=7)))
    cfg = load_config(path)
    assert cfg.seed == 7
    with pytest.raises(ConfigError):
        load_config(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ConfigError):
        load_config(bad)


def test_build_state_product_amplitudes():
    spec = {
        "kind": "product",
        "amplitudes": [[[1.0, 0.0], [0.0, 0.0]], [[0.6, 0.0], [0.8, 0.0]]],
    }
    state, circ = build_state(spec, 2, 0)
    assert circ is None
    assert isinstance(state, StateVector)
    assert_allclose(state.amplitudes, [0.6, 0.8, 0.0, 0.0], atol=1e-12)
    with pytest.raises(ConfigError):
        build_state(spec, 3, 0)


def test_build_state_bernoulli_scalar_and_vector():
    state, _ = build_state({"kind": "bernoulli", "x": 1.0}, 3, 0)
    assert_allclose(state.probabilities()[0], 1.0)
    state, _ = build_state({"kind": "bernoulli", "x": [1.0, 0.0, 1.0]}, 3, 0)
    assert_allclose(charge_distribution(state).probs[2], 1.0)
    with pytest.raises(ConfigError):
        build_state({"kind": "bernoulli", "x": [0.5, 0.5]}, 3, 0)


def test_build_state_named_states():
    ghz, _ = build_state({"kind": "ghz"}, 4, 0)
    assert_allclose(ghz.amplitudes, ghz_state(4).amplitudes, atol=0)
    kink, _ = build_state({"kind": "kink"}, 4, 0)
    assert_allclose(charge_distribution(kink).probs, [0.0, 0.25, 0.25, 0.25, 0.25])
    dicke, _ = build_state({"kind": "dicke", "ratio": 0.5}, 4, 0)
    assert_allclose(charge_distribution(dicke).probs[1::2], [0.0, 0.0], atol=1e-14)
    # ratio must give an integer excitation count: 0.4 * 6 = 2.4
    with pytest.raises(ConfigError):
        build_state({"kind": "dicke", "ratio": 0.4}, 6, 0)


def test_build_state_random_is_seeded_and_rank_aware():
    a, _ = build_state({"kind": "random"}, 3, 11)
    b, _ = build_state({"kind": "random"}, 3, 11)
    assert np.array_equal(a.amplitudes, b.amplitudes)
    c, _ = build_state({"kind": "random", "seed": 12}, 3, 11)
    assert not np.array_equal(a.amplitudes, c.amplitudes)
    rho, _ = build_state({"kind": "random", "rank": 2}, 2, 0)
    assert isinstance(rho, DensityMatrix)
    assert np.sum(np.linalg.eigvalsh(rho.matrix) > 1e-10) == 2


def test_build_state_vector_file(tmp_path):
    vec = np.zeros(8, dtype=complex)
    vec[3] = 1.0
    npy = tmp_path / "state.npy"
    np.save(npy, vec)
    state, _ = build_state({"kind": "vector", "path": str(npy)}, 3, 0)
    assert_allclose(state.probabilities()[3], 1.0)

    js = tmp_path / "state.json"
    js.write_text(json.dumps({"amplitudes": [[1.0, 0.0], [0.0, 1.0]]}))
    state, _ = build_state({"kind": "vector", "path": str(js)}, 1, 0)
    assert_allclose(state.probabilities(), [0.5, 0.5], atol=1e-12)

    with pytest.raises(ConfigError):
        build_state({"kind": "vector", "path": str(npy)}, 2, 0)
    with pytest.raises(ConfigError):
        build_state({"kind": "vector", "path": str(tmp_path / "nope.npy")}, 3, 0)


def test_build_state_circuit_applies_to_input(tmp_path):
    rng = np.random.default_rng(5)
    geo = LatticeGeometry(1, 4)
    circ = random_brickwork(geo, 2, rng)
    path = tmp_path / "circ.json"
    save_circuit(circ, path)
    spec = {"kind": "circuit", "path": str(path)}
    state, loaded = build_state(spec, 4, 0, geometry=geo)
    assert loaded is not None
    assert loaded.depth == 2
    assert circuit_depth_range(loaded) == 4
    # wrong system size is a config error
    with pytest.raises(ConfigError):
        build_state(spec, 6, 0, geometry=LatticeGeometry(1, 6))
    # nested circuits are rejected
    bad = {"kind": "circuit", "path": str(path), "input": {"kind": "circuit", "path": str(path)}}
    with pytest.raises(ConfigError):
        build_state(bad, 4, 0, geometry=geo)


def test_circuit_clustering_config_requires_circuit_kind():
    with pytest.raises(ConfigError):
        validate_config(
            {
                "experiment": "circuit-clustering",
                "geometry": {"dimension": 1, "linear_size": 4},
                "state_spec": {"kind": "ghz"},
            }
        )


def test_circuit_kind_rejected_for_sweeps(tmp_path):
    with pytest.raises(ConfigError):
        validate_config(
            {
                "experiment": "dicke-sweep",
                "sweep": [100],
                "state_spec": {"kind": "circuit", "path": "x.json"},
            }
        )


def test_clustering_range_requires_geometry():
    with pytest.raises(ConfigError):
        validate_config(_sweep_cfg(clustering_range=2))
