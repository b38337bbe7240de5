"""Brickwork circuits of two-site gates and local Kraus channels.

Gates act on explicit site tuples; a two-site gate matrix is indexed with the
first listed site as the more significant bit, so rows/columns run over
(00, 01, 10, 11).  Statevector updates gather the four amplitude strides of a
gate with precomputed bit masks and apply one 4xM matrix product.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError
from .lattice import LatticeGeometry, distance
from .states import DensityMatrix, State, StateVector, apply_site_matrix

UNITARITY_TOL = 1e-12
COMPLETENESS_TOL = 1e-10


def _is_unitary(mat: np.ndarray, tol: float = UNITARITY_TOL) -> bool:
    d = mat.shape[0]
    return float(np.max(np.abs(mat.conj().T @ mat - np.eye(d)))) <= tol


@dataclass(frozen=True)
class Gate:
    """A 1- or 2-site unitary with the sites it acts on."""

    sites: tuple[int, ...]
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        sites = tuple(int(s) for s in self.sites)
        object.__setattr__(self, "sites", sites)
        mat = np.array(self.matrix, dtype=complex)
        if len(sites) not in (1, 2) or len(set(sites)) != len(sites):
            raise ValidationError(f"gate sites must be 1 or 2 distinct indices, got {sites}")
        d = 2 ** len(sites)
        if mat.shape != (d, d):
            raise ValidationError(f"gate on {len(sites)} site(s) needs a {d}x{d} matrix")
        if not _is_unitary(mat):
            raise ValidationError("gate matrix is not unitary within 1e-12")
        mat.flags.writeable = False
        object.__setattr__(self, "matrix", mat)


@dataclass(frozen=True)
class BrickworkCircuit:
    """Layered circuit; gates within one layer act on disjoint sites."""

    n_qubits: int
    layers: tuple[tuple[Gate, ...], ...]

    def __post_init__(self):
        layers = tuple(tuple(layer) for layer in self.layers)
        object.__setattr__(self, "layers", layers)
        for layer in layers:
            seen: set[int] = set()
            for gate in layer:
                for s in gate.sites:
                    if not 0 <= s < self.n_qubits:
                        raise ValidationError(f"gate site {s} outside [0, {self.n_qubits})")
                    if s in seen:
                        raise ValidationError(f"site {s} used twice within one layer")
                    seen.add(s)

    @property
    def depth(self) -> int:
        return len(self.layers)

    def assert_nearest_neighbor(self, geometry: LatticeGeometry):
        """Require every two-site gate to couple lattice neighbors."""
        if geometry.n_sites != self.n_qubits:
            raise ValidationError(
                f"geometry has {geometry.n_sites} sites, circuit has {self.n_qubits}"
            )
        for layer in self.layers:
            for gate in layer:
                if len(gate.sites) == 2 and distance(geometry, *gate.sites) != 1:
                    raise ValidationError(f"gate sites {gate.sites} are not nearest neighbors")


def _two_site_indices(n_qubits: int, a: int, b: int):
    pa, pb = n_qubits - 1 - a, n_qubits - 1 - b
    idx = np.arange(2**n_qubits)
    base = idx[((idx >> pa) & 1 == 0) & ((idx >> pb) & 1 == 0)]
    return base, base | (1 << pb), base | (1 << pa), base | (1 << pa) | (1 << pb)


def _apply_matrix(arr: np.ndarray, matrix: np.ndarray, sites: tuple[int, ...], n: int) -> np.ndarray:
    """Left-multiply a local operator into axis 0 of an amplitude array."""
    if len(sites) == 1:
        return apply_site_matrix(arr, matrix, sites[0], n)
    rows = _two_site_indices(n, *sites)
    stacked = np.stack([arr[r] for r in rows])
    new = np.tensordot(matrix, stacked, axes=(1, 0))
    out = np.array(arr)
    for r, vals in zip(rows, new):
        out[r] = vals
    return out


def _sandwich(mat: np.ndarray, op: np.ndarray, sites: tuple[int, ...], n: int) -> np.ndarray:
    """Return op mat op^dagger for a local operator acting on the given sites."""
    left = _apply_matrix(mat, op, sites, n)
    return _apply_matrix(left.conj().T, op, sites, n).conj().T


def apply_circuit(state: State, circuit: BrickworkCircuit) -> State:
    """Apply every layer in order; returns the same kind of state."""
    if state.n_qubits != circuit.n_qubits:
        raise ValidationError(
            f"state has {state.n_qubits} qubits, circuit has {circuit.n_qubits}"
        )
    n = state.n_qubits
    if isinstance(state, StateVector):
        amps = np.array(state.amplitudes)
        for layer in circuit.layers:
            for gate in layer:
                amps = _apply_matrix(amps, gate.matrix, gate.sites, n)
        return StateVector(n, amps)
    mat = np.array(state.matrix)
    for layer in circuit.layers:
        for gate in layer:
            mat = _sandwich(mat, gate.matrix, gate.sites, n)
    return DensityMatrix(n, mat)


def heisenberg_conjugate(operator: np.ndarray, circuit: BrickworkCircuit) -> np.ndarray:
    """Return U^dagger A U for the full circuit unitary U and a dense operator A."""
    n = circuit.n_qubits
    d = 2**n
    if operator.shape != (d, d):
        raise ValidationError(f"operator must be {d}x{d}, got {operator.shape}")
    out = np.array(operator, dtype=complex)
    for layer in reversed(circuit.layers):
        for gate in layer:
            out = _sandwich(out, gate.matrix.conj().T, gate.sites, n)
    return out


@dataclass(frozen=True)
class KrausChannel:
    """Completely positive trace-preserving map on a fixed site tuple."""

    support: tuple[int, ...]
    operators: tuple[np.ndarray, ...]

    def __post_init__(self):
        support = tuple(int(s) for s in self.support)
        object.__setattr__(self, "support", support)
        if len(support) not in (1, 2) or len(set(support)) != len(support):
            raise ValidationError(f"channel support must be 1 or 2 distinct sites, got {support}")
        d = 2 ** len(support)
        ops = tuple(np.array(op, dtype=complex) for op in self.operators)
        if not ops:
            raise ValidationError("channel needs at least one Kraus operator")
        for op in ops:
            if op.shape != (d, d):
                raise ValidationError(f"Kraus operator shape {op.shape}, expected {(d, d)}")
            op.flags.writeable = False
        total = sum(op.conj().T @ op for op in ops)
        dev = float(np.max(np.abs(total - np.eye(d))))
        if dev > COMPLETENESS_TOL:
            raise ValidationError(f"Kraus completeness violated by {dev:.3e}")
        object.__setattr__(self, "operators", ops)


def apply_channel(state: DensityMatrix, channel: KrausChannel) -> DensityMatrix:
    """Apply sum_k A_k rho A_k^dagger on the channel's support."""
    if isinstance(state, StateVector):
        state = state.to_density_matrix()
    n = state.n_qubits
    for s in channel.support:
        if not 0 <= s < n:
            raise ValidationError(f"channel site {s} outside [0, {n})")
    out = np.zeros_like(state.matrix)
    for op in channel.operators:
        out = out + _sandwich(state.matrix, op, channel.support, n)
    return DensityMatrix(n, out)


def hadamard_gate() -> np.ndarray:
    return np.array([[1.0, 1.0], [1.0, -1.0]], dtype=complex) / np.sqrt(2.0)


def cnot_gate() -> np.ndarray:
    """CNOT with the first listed site as control."""
    return np.array(
        [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
    )


def swap_gate() -> np.ndarray:
    return np.array(
        [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex
    )


def haar_unitary(dim: int, rng) -> np.ndarray:
    """Haar-distributed unitary via QR of a complex Ginibre matrix."""
    rng = np.random.default_rng(rng)
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(z)
    diag = np.diag(r)
    return q * (diag / np.abs(diag))


def charge_conserving_gate(rng) -> np.ndarray:
    """Random two-site gate commuting with the total charge.

    Phases on the equal-bit basis states plus a Haar 2x2 block on {01, 10}.
    """
    rng = np.random.default_rng(rng)
    phases = np.exp(1j * rng.uniform(0.0, 2.0 * np.pi, size=2))
    block = haar_unitary(2, rng)
    gate = np.zeros((4, 4), dtype=complex)
    gate[0, 0] = phases[0]
    gate[3, 3] = phases[1]
    gate[1:3, 1:3] = block
    return gate


def charge_conserving_unitary(n_qubits: int, rng) -> np.ndarray:
    """Dense random unitary block-diagonal in the charge sectors."""
    from .states import bit_weights

    rng = np.random.default_rng(rng)
    d = 2**n_qubits
    weights = bit_weights(n_qubits)
    out = np.zeros((d, d), dtype=complex)
    for w in range(n_qubits + 1):
        sector = np.flatnonzero(weights == w)
        block = haar_unitary(sector.size, rng)
        out[np.ix_(sector, sector)] = block
    return out


def depolarizing_channel(site: int, p: float) -> KrausChannel:
    """Single-site depolarizing channel with error weight p split over X, Y, Z."""
    from .states import PAULI_X, PAULI_Y, PAULI_Z

    if not 0.0 <= p <= 1.0:
        raise ValidationError(f"p must lie in [0, 1], got {p}")
    eye = np.eye(2, dtype=complex)
    ops = [np.sqrt(1.0 - p) * eye]
    ops += [np.sqrt(p / 3.0) * m for m in (PAULI_X, PAULI_Y, PAULI_Z)]
    return KrausChannel((site,), tuple(ops))


def phase_flip_channel(site: int, p: float) -> KrausChannel:
    """Single-site channel applying Z with probability p."""
    from .states import PAULI_Z

    if not 0.0 <= p <= 1.0:
        raise ValidationError(f"p must lie in [0, 1], got {p}")
    eye = np.eye(2, dtype=complex)
    return KrausChannel((site,), (np.sqrt(1.0 - p) * eye, np.sqrt(p) * PAULI_Z))


def full_dephasing_channel(site: int) -> KrausChannel:
    """Projective z-basis dephasing of one site."""
    p0 = np.diag([1.0 + 0.0j, 0.0])
    p1 = np.diag([0.0j, 1.0])
    return KrausChannel((site,), (p0, p1))


def random_diagonal_phase_channel(n_qubits: int, site: int, p: float, rng) -> KrausChannel:
    """Mix of identity and a random diagonal phase unitary on one site.

    Diagonal operators preserve every charge sector, so this is a symmetric
    channel for the charge twirl.
    """
    rng = np.random.default_rng(rng)
    if not 0.0 <= p <= 1.0:
        raise ValidationError(f"p must lie in [0, 1], got {p}")
    eye = np.eye(2, dtype=complex)
    diag = np.diag(np.exp(1j * rng.uniform(0.0, 2.0 * np.pi, size=2)))
    return KrausChannel((site,), (np.sqrt(1.0 - p) * eye, np.sqrt(p) * diag))


def _axis_pairs(geometry: LatticeGeometry, axis: int, offset: int) -> list[tuple[int, int]]:
    """Disjoint nearest-neighbor pairs along one axis at the given parity offset."""
    m = geometry.linear_size
    pairs: list[tuple[int, int]] = []
    used: set[int] = set()
    for site in range(geometry.n_sites):
        coords = list(geometry.coordinates(site))
        if coords[axis] % 2 != offset % 2:
            continue
        partner = list(coords)
        partner[axis] = (coords[axis] + 1) % m
        j = geometry.site_index(partner)
        if site == j or site in used or j in used:
            continue
        used.update((site, j))
        pairs.append((site, j))
    return pairs


def brickwork_layer_pairs(geometry: LatticeGeometry, layer_index: int) -> list[tuple[int, int]]:
    """Pair pattern of a brickwork layer: axes and parities alternate with depth."""
    axis = (layer_index // 2) % geometry.dimension
    offset = layer_index % 2
    return _axis_pairs(geometry, axis, offset)


def random_brickwork(geometry: LatticeGeometry, depth: int, rng) -> BrickworkCircuit:
    """Depth-``depth`` brickwork of Haar-random nearest-neighbor gates."""
    rng = np.random.default_rng(rng)
    layers = []
    for t in range(depth):
        pairs = brickwork_layer_pairs(geometry, t)
        layers.append(tuple(Gate(p, haar_unitary(4, rng)) for p in pairs))
    return BrickworkCircuit(geometry.n_sites, tuple(layers))


def random_charge_conserving_brickwork(geometry: LatticeGeometry, depth: int, rng) -> BrickworkCircuit:
    """Brickwork whose every gate commutes with the total charge."""
    rng = np.random.default_rng(rng)
    layers = []
    for t in range(depth):
        pairs = brickwork_layer_pairs(geometry, t)
        layers.append(tuple(Gate(p, charge_conserving_gate(rng)) for p in pairs))
    return BrickworkCircuit(geometry.n_sites, tuple(layers))


def _complex_to_pairs(mat: np.ndarray) -> list[list[float]]:
    return [[float(z.real), float(z.imag)] for z in mat.reshape(-1)]


def _pairs_to_matrix(pairs, n_sites_on_gate: int) -> np.ndarray:
    d = 2**n_sites_on_gate
    flat = np.array([complex(re, im) for re, im in pairs])
    if flat.size != d * d:
        raise ValidationError(f"expected {d * d} complex entries, got {flat.size}")
    return flat.reshape(d, d)


def circuit_to_dict(circuit: BrickworkCircuit) -> dict:
    return {
        "n_qubits": circuit.n_qubits,
        "depth": circuit.depth,
        "layers": [
            [
                {"sites": list(g.sites), "unitary": _complex_to_pairs(g.matrix)}
                for g in layer
            ]
            for layer in circuit.layers
        ],
    }


def circuit_from_dict(data: dict) -> BrickworkCircuit:
    try:
        layers_raw = data["layers"]
        depth = data["depth"]
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"circuit JSON missing key: {exc}") from exc
    if depth != len(layers_raw):
        raise ValidationError(f"depth field {depth} != number of layers {len(layers_raw)}")
    layers = []
    max_site = -1
    for layer_raw in layers_raw:
        gates = []
        for g in layer_raw:
            sites = tuple(int(s) for s in g["sites"])
            matrix = _pairs_to_matrix(g["unitary"], len(sites))
            gates.append(Gate(sites, matrix))
            max_site = max(max_site, *sites)
        layers.append(tuple(gates))
    n_qubits = int(data.get("n_qubits", max_site + 1))
    return BrickworkCircuit(n_qubits, tuple(layers))


def save_circuit(circuit: BrickworkCircuit, path):
    with open(path, "w") as fh:
        json.dump(circuit_to_dict(circuit), fh, indent=1)


def load_circuit(path) -> BrickworkCircuit:
    with open(path) as fh:
        return circuit_from_dict(json.load(fh))


def channel_to_dict(channel: KrausChannel) -> dict:
    return {
        "support": list(channel.support),
        "operators": [_complex_to_pairs(op) for op in channel.operators],
    }


def channel_from_dict(data: dict) -> KrausChannel:
    try:
        support = tuple(int(s) for s in data["support"])
        ops = tuple(_pairs_to_matrix(op, len(support)) for op in data["operators"])
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"channel JSON missing key: {exc}") from exc
    return KrausChannel(support, ops)
