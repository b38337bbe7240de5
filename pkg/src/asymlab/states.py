"""Exact pure and mixed states of N qubits.

Basis convention: the flat amplitude index encodes site 0 as the most
significant bit, so basis index ``i`` assigns bit ``(i >> (N-1-j)) & 1`` to
site ``j``.  Equivalently ``product_state`` is a plain Kronecker product in
site order.  States are immutable from the caller's point of view; every
operation returns a new object.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ResourceError, ValidationError

DEFAULT_STATEVECTOR_QUBITS = 24
DEFAULT_DENSITY_QUBITS = 12

NORM_TOL = 1e-12
HERMITICITY_TOL = 1e-10
TRACE_TOL = 1e-10
EIGENVALUE_FLOOR = -1e-10
PROBABILITY_FLOOR = 1e-14

PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
PAULI_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
PAULI = {"x": PAULI_X, "y": PAULI_Y, "z": PAULI_Z}


def statevector_cap() -> int:
    """Largest N admitted on the statevector path (env ASYMLAB_MAX_QUBITS overrides)."""
    env = os.environ.get("ASYMLAB_MAX_QUBITS")
    return int(env) if env else DEFAULT_STATEVECTOR_QUBITS


def density_matrix_cap() -> int:
    """Largest N admitted on the density-matrix path (env ASYMLAB_MAX_QUBITS overrides)."""
    env = os.environ.get("ASYMLAB_MAX_QUBITS")
    return int(env) if env else DEFAULT_DENSITY_QUBITS


def _check_cap(n_qubits: int, cap: int, name: str):
    if n_qubits > cap:
        raise ResourceError(f"N={n_qubits} exceeds the {name} cap of {cap} qubits")


def _infer_n_qubits(dim: int) -> int:
    n = int(dim).bit_length() - 1
    if dim <= 0 or 2**n != dim:
        raise ValidationError(f"dimension {dim} is not a power of two")
    return n


@dataclass
class StateVector:
    """Normalized pure state of ``n_qubits`` qubits."""

    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex)
        if amps.ndim != 1 or amps.size != 2**self.n_qubits:
            raise ValidationError(
                f"expected {2**self.n_qubits} amplitudes, got shape {amps.shape}"
            )
        _check_cap(self.n_qubits, statevector_cap(), "statevector")
        norm = float(np.sum(np.abs(amps) ** 2))
        if abs(norm - 1.0) > NORM_TOL * max(1.0, norm):
            raise ValidationError(f"statevector norm^2 = {norm!r}, not 1 within {NORM_TOL}")
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self) -> int:
        return 2**self.n_qubits

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def to_density_matrix(self) -> "DensityMatrix":
        a = self.amplitudes
        return DensityMatrix(self.n_qubits, np.outer(a, a.conj()))


@dataclass
class DensityMatrix:
    """Hermitian, unit-trace operator on ``n_qubits`` qubits."""

    n_qubits: int
    matrix: np.ndarray

    def __post_init__(self):
        mat = np.array(self.matrix, dtype=complex)
        d = 2**self.n_qubits
        if mat.shape != (d, d):
            raise ValidationError(f"expected a {d}x{d} matrix, got shape {mat.shape}")
        _check_cap(self.n_qubits, density_matrix_cap(), "density-matrix")
        herm = float(np.max(np.abs(mat - mat.conj().T))) if d else 0.0
        if herm > HERMITICITY_TOL:
            raise ValidationError(f"matrix deviates from Hermitian by {herm:.3e}")
        tr = complex(np.trace(mat))
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValidationError(f"trace = {tr!r}, not 1 within {TRACE_TOL}")
        mat.flags.writeable = False
        object.__setattr__(self, "matrix", mat)

    @property
    def dim(self) -> int:
        return 2**self.n_qubits

    def purity(self) -> float:
        # tr(rho^2) = sum |rho_ij|^2 for Hermitian rho
        return float(np.sum(np.abs(self.matrix) ** 2))

    def diagonal(self) -> np.ndarray:
        return np.real(np.diag(self.matrix)).copy()


State = StateVector | DensityMatrix


def _local_is_pure(local: np.ndarray) -> bool:
    return local.ndim == 1


def product_state(locals_: list) -> State:
    """Tensor product of single-qubit states, site 0 first.

    Each entry is either a normalized 2-vector (pure) or a 2x2 density matrix.
    A single mixed factor promotes the result to a DensityMatrix.
    """
    if not locals_:
        raise ValidationError("product_state needs at least one site")
    factors = [np.asarray(f, dtype=complex) for f in locals_]
    n = len(factors)
    for f in factors:
        if f.shape not in ((2,), (2, 2)):
            raise ValidationError(f"local factor has shape {f.shape}, expected (2,) or (2,2)")
    if all(_local_is_pure(f) for f in factors):
        _check_cap(n, statevector_cap(), "statevector")
        amps = np.array([1.0 + 0.0j])
        for f in factors:
            amps = np.kron(amps, f)
        return StateVector(n, amps)
    _check_cap(n, density_matrix_cap(), "density-matrix")
    mat = np.array([[1.0 + 0.0j]])
    for f in factors:
        rho = f if not _local_is_pure(f) else np.outer(f, f.conj())
        mat = np.kron(mat, rho)
    return DensityMatrix(n, mat)


def basis_state(n_qubits: int, bits) -> StateVector:
    """Computational basis state from a bit sequence, site 0 first."""
    bits = list(bits)
    if len(bits) != n_qubits or any(b not in (0, 1) for b in bits):
        raise ValidationError("bits must be a length-N sequence of 0/1")
    _check_cap(n_qubits, statevector_cap(), "statevector")
    idx = 0
    for b in bits:
        idx = idx * 2 + b
    amps = np.zeros(2**n_qubits, dtype=complex)
    amps[idx] = 1.0
    return StateVector(n_qubits, amps)


def zero_state(n_qubits: int) -> StateVector:
    return basis_state(n_qubits, [0] * n_qubits)


def plus_state(n_qubits: int) -> StateVector:
    v = np.array([1.0, 1.0]) / np.sqrt(2.0)
    return product_state([v] * n_qubits)


def ghz_state(n_qubits: int) -> StateVector:
    _check_cap(n_qubits, statevector_cap(), "statevector")
    amps = np.zeros(2**n_qubits, dtype=complex)
    amps[0] = amps[-1] = 1.0 / np.sqrt(2.0)
    return StateVector(n_qubits, amps)


def random_state(n_qubits: int, rng) -> StateVector:
    """Haar-random pure state from a seeded ``numpy.random.Generator``."""
    rng = np.random.default_rng(rng)
    _check_cap(n_qubits, statevector_cap(), "statevector")
    d = 2**n_qubits
    amps = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    amps /= np.linalg.norm(amps)
    return StateVector(n_qubits, amps)


def random_density_matrix(n_qubits: int, rng, rank: int | None = None) -> DensityMatrix:
    """Random mixed state: normalized Wishart matrix of the given rank."""
    rng = np.random.default_rng(rng)
    _check_cap(n_qubits, density_matrix_cap(), "density-matrix")
    d = 2**n_qubits
    r = d if rank is None else rank
    if not 1 <= r <= d:
        raise ValidationError(f"rank must lie in [1, {d}], got {rank}")
    a = rng.standard_normal((d, r)) + 1j * rng.standard_normal((d, r))
    mat = a @ a.conj().T
    mat /= np.real(np.trace(mat))
    return DensityMatrix(n_qubits, mat)


@lru_cache(maxsize=32)
def bit_weights(n_qubits: int) -> np.ndarray:
    """Number of 1-bits of every basis index, shape (2**n_qubits,), read-only."""
    w = np.zeros(2**n_qubits, dtype=np.int64)
    for j in range(n_qubits):
        w += (np.arange(2**n_qubits) >> j) & 1
    w.flags.writeable = False
    return w


def entropy_of_probabilities(probs: np.ndarray) -> float:
    """Shannon entropy in nats; entries below PROBABILITY_FLOOR contribute 0."""
    p = np.asarray(probs, dtype=float)
    p = p[p >= PROBABILITY_FLOOR]
    if p.size == 0:
        return 0.0
    return float(-np.sum(p * np.log(p)))


def von_neumann_entropy(state: State) -> float:
    """Entropy -Tr[rho ln rho] in nats.

    Eigenvalues in [EIGENVALUE_FLOOR, 0) are clamped to 0; anything below the
    floor raises ValidationError.
    """
    if isinstance(state, StateVector):
        return 0.0
    evals = np.linalg.eigvalsh(state.matrix)
    low = float(evals.min(initial=0.0))
    if low < EIGENVALUE_FLOOR:
        raise ValidationError(f"density matrix has eigenvalue {low:.3e} below {EIGENVALUE_FLOOR}")
    return entropy_of_probabilities(np.clip(evals, 0.0, None))


def _reshape_site_axis(arr: np.ndarray, site: int, n_qubits: int) -> np.ndarray:
    """View with the site's bit isolated: shape (left, 2, right * trailing)."""
    return arr.reshape(2**site, 2, -1)


def apply_site_matrix(arr: np.ndarray, op: np.ndarray, site: int, n_qubits: int) -> np.ndarray:
    """Apply a 2x2 matrix to one site of an amplitude array.

    ``arr`` has leading axis of length 2**n_qubits; extra trailing axes ride
    along, which lets the same primitive transform density-matrix rows.
    """
    if not 0 <= site < n_qubits:
        raise ValidationError(f"site {site} outside [0, {n_qubits})")
    trailing = arr.shape[1:]
    view = _reshape_site_axis(arr, site, n_qubits)
    out = np.einsum("rc,acb->arb", op, view)
    return out.reshape((2**n_qubits,) + trailing)


def apply_pauli(arr: np.ndarray, site: int, axis: str, n_qubits: int) -> np.ndarray:
    """Apply a single Pauli to one site; ``axis`` is 'x', 'y' or 'z'."""
    if axis not in PAULI:
        raise ValidationError(f"unknown Pauli axis {axis!r}")
    return apply_site_matrix(arr, PAULI[axis], site, n_qubits)


def expectation(state: State, terms) -> complex:
    """Expectation value of a weighted sum of Pauli strings.

    ``terms`` is an iterable of ``(coeff, {site: axis})`` with axis in
    {'x','y','z'}; an empty dict is the identity string.
    """
    total = 0.0 + 0.0j
    n = state.n_qubits
    if isinstance(state, StateVector):
        psi = state.amplitudes
        for coeff, sites in terms:
            phi = np.array(psi)
            for site, axis in sites.items():
                phi = apply_pauli(phi, site, axis, n)
            total += coeff * np.vdot(psi, phi)
        return complex(total)
    for coeff, sites in terms:
        work = np.array(state.matrix)
        for site, axis in sites.items():
            work = apply_pauli(work, site, axis, n)
        total += coeff * np.trace(work)
    return complex(total)


def reduced_density_matrix(state: State, sites) -> np.ndarray:
    """Reduced density matrix on ``sites`` (kept in the given order)."""
    sites = list(sites)
    n = state.n_qubits
    if len(set(sites)) != len(sites):
        raise ValidationError(f"sites must be distinct, got {sites}")
    for s in sites:
        if not 0 <= s < n:
            raise ValidationError(f"site {s} outside [0, {n})")
    rest = [s for s in range(n) if s not in sites]
    k = len(sites)
    if isinstance(state, StateVector):
        tensor = state.amplitudes.reshape((2,) * n)
        t = np.transpose(tensor, sites + rest).reshape(2**k, -1)
        return t @ t.conj().T
    tensor = state.matrix.reshape((2,) * (2 * n))
    perm = sites + rest + [n + s for s in sites] + [n + r for r in rest]
    t = np.transpose(tensor, perm).reshape(2**k, 2 ** (n - k), 2**k, 2 ** (n - k))
    return np.einsum("irjr->ij", t)
