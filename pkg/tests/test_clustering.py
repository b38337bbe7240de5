import numpy as np
import pytest
from numpy.testing import assert_allclose

from asymlab.circuits import (
    BrickworkCircuit,
    Gate,
    random_brickwork,
    swap_gate,
)
from asymlab.clustering import (
    connected_correlator,
    operator_spreading_range,
    variance_bound_check,
    verify_cluster_property,
)
from asymlab.errors import ResourceError, ValidationError
from asymlab.lattice import LatticeGeometry, lightcone_range
from asymlab.states import PAULI, ghz_state, plus_state, product_state, random_state
from asymlab.u1 import charge_distribution


def _random_product(n, rng):
    locals_ = []
    for _ in range(n):
        v = rng.normal(size=2) + 1j * rng.normal(size=2)
        locals_.append(v / np.linalg.norm(v))
    return product_state(locals_)


def test_connected_correlator_of_product_state_vanishes():
    rng = np.random.default_rng(0)
    psi = _random_product(5, rng)
    for i in range(5):
        for j in range(i + 1, 5):
            for a in "xyz":
                for b in "xyz":
                    c = connected_correlator(psi, i, j, PAULI[a], PAULI[b])
                    assert abs(c) < 1e-12


def test_connected_correlator_of_ghz():
    psi = ghz_state(4)
    zz = connected_correlator(psi, 0, 3, PAULI["z"], PAULI["z"])
    # <ZZ> = 1, <Z> = 0, so the connected part is 1
    assert_allclose(zz, 1.0, atol=1e-12)
    zx = connected_correlator(psi, 0, 3, PAULI["z"], PAULI["x"])
    assert abs(zx) < 1e-12


def test_verify_cluster_property_on_product_state():
    rng = np.random.default_rng(1)
    geo = LatticeGeometry(1, 6)
    rep = verify_cluster_property(_random_product(6, rng), geo, 0)
    assert rep.passed
    assert rep.effective_range == 0
    assert rep.max_violation < 1e-12


def test_verify_cluster_property_flags_ghz():
    geo = LatticeGeometry(1, 8)
    rep = verify_cluster_property(ghz_state(8), geo, 0)
    assert not rep.passed
    assert rep.effective_range == geo.diameter
    assert rep.max_violation > 0.9


def test_circuit_state_clusters_within_twice_the_depth():
    rng = np.random.default_rng(2)
    for geo, depth in ((LatticeGeometry(1, 8), 1), (LatticeGeometry(1, 10), 2), (LatticeGeometry(2, 3), 2)):
        circ = random_brickwork(geo, depth, rng)
        from asymlab.circuits import apply_circuit

        psi = apply_circuit(_random_product(geo.n_sites, rng), circ)
        rep = verify_cluster_property(psi, geo, 2 * lightcone_range(depth), tol=1e-9)
        assert rep.passed, rep.max_violation


def test_cluster_report_distance_profile_is_sorted_and_complete():
    geo = LatticeGeometry(1, 6)
    rep = verify_cluster_property(plus_state(6), geo, 0)
    dists = [d for d, _ in rep.distance_profile]
    assert dists == sorted(set(dists))
    assert max(dists) == geo.diameter
    assert len(rep.pair_table) == 6 * 5 // 2


def test_verify_cluster_property_validation():
    geo = LatticeGeometry(1, 5)
    with pytest.raises(ValidationError):
        verify_cluster_property(plus_state(6), geo, 0)
    with pytest.raises(ValidationError):
        verify_cluster_property(plus_state(5), geo, -1)


def test_operator_spreading_identity_and_swap():
    geo = LatticeGeometry(1, 4)
    ident = BrickworkCircuit(4, ())
    assert operator_spreading_range(ident, geo) == 0
    sw = BrickworkCircuit(
        4, ((Gate((0, 1), swap_gate()), Gate((2, 3), swap_gate())),)
    )
    assert operator_spreading_range(sw, geo) == 1


def test_operator_spreading_bounded_by_lightcone():
    rng = np.random.default_rng(3)
    for depth in (1, 2, 3):
        geo = LatticeGeometry(1, 8)
        circ = random_brickwork(geo, depth, rng)
        assert operator_spreading_range(circ, geo) <= lightcone_range(depth)


def test_operator_spreading_rejects_large_systems(monkeypatch):
    monkeypatch.setenv("ASYMLAB_MAX_QUBITS", "6")
    geo = LatticeGeometry(1, 8)
    circ = BrickworkCircuit(8, ())
    with pytest.raises(ResourceError):
        operator_spreading_range(circ, geo)


def test_variance_bound_check_on_plus_state():
    geo = LatticeGeometry(1, 10)
    chk = variance_bound_check(plus_state(10), geo, 0)
    assert_allclose(chk.variance, 2.5, atol=1e-12)
    assert chk.bound == 2.0 * 1 * 10
    assert chk.passed and chk.margin > 0


def test_variance_bound_check_flags_ghz_at_zero_range():
    n = 10
    geo = LatticeGeometry(1, n)
    chk = variance_bound_check(ghz_state(n), geo, 0)
    assert_allclose(chk.variance, n * n / 4.0, atol=1e-10)
    assert not chk.passed
    # saturated neighborhood clears the same state
    assert variance_bound_check(ghz_state(n), geo, geo.diameter).passed


def test_variance_matches_charge_distribution():
    rng = np.random.default_rng(4)
    psi = random_state(5, rng)
    geo = LatticeGeometry(1, 5)
    chk = variance_bound_check(psi, geo, 1)
    assert_allclose(chk.variance, charge_distribution(psi).variance, atol=1e-12)
