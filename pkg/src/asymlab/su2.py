"""Collective-spin sectors, the full-rotation twirl and its bounds.

The Schur basis is built by coupling one site at a time with Clebsch-Gordan
coefficients (Condon-Shortley signs), giving a real orthogonal change of basis
that block-diagonalizes every u^{(x) N}.  Columns are grouped by total spin s
in decreasing order; within a sector the coupling path (multiplicity) index is
the outer label and m runs from +s down to -s inside each path.  Only even N
is supported so all spins are integers.
"""
from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss

from .errors import PreconditionError, ValidationError
from .lattice import LatticeGeometry, neighborhood_cardinality
from .states import (
    DensityMatrix,
    State,
    StateVector,
    _check_cap,
    apply_pauli,
    apply_site_matrix,
    bit_weights,
    density_matrix_cap,
    entropy_of_probabilities,
    von_neumann_entropy,
)

TRANSVERSE_TOL = 1e-9
CASIMIR_PRECONDITION_TOL = 1e-6
C_LAMBDA_PREFACTOR = 1.5


def multiplicity(n_qubits: int, s: int) -> int:
    """Number of spin-s irreducible blocks in the N-qubit rotation action."""
    if n_qubits % 2 != 0:
        raise ValidationError(f"only even N is supported, got {n_qubits}")
    if not 0 <= s <= n_qubits // 2:
        raise ValidationError(f"spin {s} outside [0, {n_qubits // 2}]")
    k = n_qubits // 2 - s
    lower = math.comb(n_qubits, k - 1) if k >= 1 else 0
    return math.comb(n_qubits, k) - lower


@dataclass(frozen=True)
class SchurBasis:
    """Orthogonal basis adapted to the total-spin decomposition.

    ``matrix`` columns are the basis vectors in the computational basis;
    ``labels[c] = (s, m, alpha)`` names column c.  ``sectors`` lists
    (s, start_column, multiplicity) with s decreasing; within a sector the
    column index is start + alpha * (2s + 1) + (s - m).
    """

    n_qubits: int
    matrix: np.ndarray
    labels: tuple[tuple[int, int, int], ...]
    sectors: tuple[tuple[int, int, int], ...]

    def column_of(self, s: int, m: int, alpha: int) -> int:
        for sec_s, start, mult in self.sectors:
            if sec_s == s:
                if not (abs(m) <= s and 0 <= alpha < mult):
                    raise ValidationError(f"no column labeled (s={s}, m={m}, alpha={alpha})")
                return start + alpha * (2 * s + 1) + (s - m)
        raise ValidationError(f"no spin-{s} sector for N={self.n_qubits}")


def _lift(block: np.ndarray, bit: int) -> np.ndarray:
    """Tensor a new trailing site in |bit> onto every column."""
    rows, cols = block.shape
    out = np.zeros((2 * rows, cols))
    out[bit::2] = block
    return out


def build_schur_basis(n_qubits: int) -> SchurBasis:
    """Construct the full 2^N x 2^N spin-adapted basis (even N only)."""
    if n_qubits % 2 != 0 or n_qubits < 2:
        raise ValidationError(f"only even N >= 2 is supported, got {n_qubits}")
    _check_cap(n_qubits, density_matrix_cap(), "density-matrix")
    blocks: list[tuple[int, np.ndarray]] = [(1, np.eye(2))]
    for _ in range(1, n_qubits):
        nxt: list[tuple[int, np.ndarray]] = []
        for two_j, block in blocks:
            up0 = _lift(block, 0)
            up1 = _lift(block, 1)
            width = two_j + 2
            child_up = np.zeros((up0.shape[0], width))
            for c in range(width):
                if c <= two_j:
                    child_up[:, c] += np.sqrt((two_j + 1 - c) / (two_j + 1)) * up0[:, c]
                if c >= 1:
                    child_up[:, c] += np.sqrt(c / (two_j + 1)) * up1[:, c - 1]
            nxt.append((two_j + 1, child_up))
            if two_j >= 1:
                child_dn = np.zeros((up0.shape[0], two_j))
                for c in range(two_j):
                    child_dn[:, c] = (
                        -np.sqrt((c + 1) / (two_j + 1)) * up0[:, c + 1]
                        + np.sqrt((two_j - c) / (two_j + 1)) * up1[:, c]
                    )
                nxt.append((two_j - 1, child_dn))
        blocks = nxt

    by_two_j: dict[int, list[np.ndarray]] = {}
    for two_j, block in blocks:
        by_two_j.setdefault(two_j, []).append(block)

    dim = 2**n_qubits
    matrix = np.empty((dim, dim))
    labels: list[tuple[int, int, int]] = []
    sectors: list[tuple[int, int, int]] = []
    col = 0
    for two_j in sorted(by_two_j, reverse=True):
        if two_j % 2 != 0:
            raise ValidationError(f"half-integer sector {two_j}/2 appeared for even N")
        s = two_j // 2
        paths = by_two_j[two_j]
        if len(paths) != multiplicity(n_qubits, s):
            raise ValidationError(
                f"sector s={s} has {len(paths)} paths, expected {multiplicity(n_qubits, s)}"
            )
        sectors.append((s, col, len(paths)))
        for alpha, block in enumerate(paths):
            for m_col in range(two_j + 1):
                matrix[:, col] = block[:, m_col]
                labels.append((s, s - m_col, alpha))
                col += 1
    if col != dim:
        raise ValidationError(f"assembled {col} columns, expected {dim}")
    matrix.flags.writeable = False
    return SchurBasis(n_qubits, matrix, tuple(labels), tuple(sectors))


def save_schur_basis(basis: SchurBasis, directory):
    """Cache the basis as a .npy matrix plus a JSON label sidecar, keyed by N."""
    os.makedirs(directory, exist_ok=True)
    stem = os.path.join(directory, f"schur_n{basis.n_qubits}")
    np.save(stem + ".npy", basis.matrix)
    with open(stem + ".json", "w") as fh:
        json.dump(
            {
                "n_qubits": basis.n_qubits,
                "labels": [list(l) for l in basis.labels],
                "sectors": [list(sec) for sec in basis.sectors],
            },
            fh,
        )


def load_schur_basis(directory, n_qubits: int) -> SchurBasis:
    stem = os.path.join(directory, f"schur_n{n_qubits}")
    matrix = np.load(stem + ".npy")
    with open(stem + ".json") as fh:
        meta = json.load(fh)
    if meta["n_qubits"] != n_qubits or matrix.shape != (2**n_qubits, 2**n_qubits):
        raise ValidationError(f"cached basis at {stem} does not match N={n_qubits}")
    matrix.flags.writeable = False
    return SchurBasis(
        n_qubits,
        matrix,
        tuple(tuple(l) for l in meta["labels"]),
        tuple(tuple(sec) for sec in meta["sectors"]),
    )


@dataclass(frozen=True)
class SectorTable:
    """Joint weights p_{s,m} of total spin and its z projection.

    Row index runs over s = 0..N/2; column index is m + N/2 for m = -N/2..N/2.
    Entries with |m| > s are identically zero.
    """

    n_qubits: int
    p_sm: np.ndarray
    multiplicities: np.ndarray

    @property
    def spins(self) -> np.ndarray:
        return np.arange(self.n_qubits // 2 + 1)

    @property
    def p_s(self) -> np.ndarray:
        return self.p_sm.sum(axis=1)

    def p_m(self) -> np.ndarray:
        """Marginal of m; equals the charge distribution shifted by N/2."""
        return self.p_sm.sum(axis=0)


def _schur_coefficients(state: StateVector, basis: SchurBasis) -> np.ndarray:
    return basis.matrix.T @ state.amplitudes


def _check_basis(state: State, basis: SchurBasis):
    if state.n_qubits != basis.n_qubits:
        raise ValidationError(
            f"state has {state.n_qubits} qubits, basis has {basis.n_qubits}"
        )


def sector_distribution(state: State, basis: SchurBasis) -> SectorTable:
    """Measured weights of every (s, m) pair for a pure or mixed state."""
    _check_basis(state, basis)
    n = basis.n_qubits
    half = n // 2
    if isinstance(state, StateVector):
        weights = np.abs(_schur_coefficients(state, basis)) ** 2
    else:
        rot = basis.matrix.T @ state.matrix @ basis.matrix
        weights = np.real(np.diag(rot))
    p_sm = np.zeros((half + 1, n + 1))
    for col, (s, m, _alpha) in enumerate(basis.labels):
        p_sm[s, m + half] += weights[col]
    p_sm = np.clip(p_sm, 0.0, None)
    total = float(p_sm.sum())
    if abs(total - 1.0) > 1e-10:
        raise ValidationError(f"sector weights sum to {total!r}, not 1 within 1e-10")
    mults = np.array([multiplicity(n, s) for s in range(half + 1)])
    return SectorTable(n, p_sm, mults)


def su2_twirl(state: State, basis: SchurBasis) -> DensityMatrix:
    """Average over all global single-qubit rotations u^{(x) N}.

    In the Schur basis this zeroes inter-sector blocks and replaces each
    sector block by delta_{m m'} times the m-averaged multiplicity block.
    """
    _check_basis(state, basis)
    if isinstance(state, StateVector):
        state = state.to_density_matrix()
    rot = basis.matrix.T @ state.matrix @ basis.matrix
    out = np.zeros_like(rot)
    for s, start, mult in basis.sectors:
        width = 2 * s + 1
        size = mult * width
        block = rot[start : start + size, start : start + size]
        r = block.reshape(mult, width, mult, width)
        avg = np.einsum("ambm->ab", r) / width
        out[start : start + size, start : start + size] = np.einsum(
            "ab,mn->ambn", avg, np.eye(width)
        ).reshape(size, size)
    back = basis.matrix @ out @ basis.matrix.T
    return DensityMatrix(state.n_qubits, back)


def su2_shannon_rhs(table: SectorTable) -> float:
    """Sector bound sum_s p_s ln(2s+1) + H({p_{s,m}}) on the twirl entropy gain."""
    dims = 2.0 * table.spins + 1.0
    return float(np.sum(table.p_s * np.log(dims))) + entropy_of_probabilities(
        table.p_sm.reshape(-1)
    )


def su2_support_bound(n_qubits: int) -> float:
    """State-independent cap ln(sum_s (2s+1) min(n_s, 2s+1)) on the twirl entropy gain."""
    if n_qubits % 2 != 0:
        raise ValidationError(f"only even N is supported, got {n_qubits}")
    total = 0
    for s in range(n_qubits // 2 + 1):
        dim = 2 * s + 1
        total += dim * min(multiplicity(n_qubits, s), dim)
    return float(np.log(total))


@dataclass(frozen=True)
class Su2AsymmetryReport:
    """Rotation asymmetry of one state with its two upper bounds (nats)."""

    n_sites: int
    delta_s: float
    bound_sector_entropy: float
    bound_support_dim: float

    def margins(self) -> dict:
        return {
            "sector_entropy": self.bound_sector_entropy - self.delta_s,
            "support_dim": self.bound_support_dim - self.delta_s,
        }

    def to_dict(self) -> dict:
        return {
            "n_sites": self.n_sites,
            "delta_s": self.delta_s,
            "bounds": {
                "sector_entropy": self.bound_sector_entropy,
                "support_dim": self.bound_support_dim,
            },
            "margins": self.margins(),
        }


def su2_asymmetry(state: State, basis: SchurBasis) -> Su2AsymmetryReport:
    """Asymmetry Delta S = S(twirl(rho)) - S(rho) for the full rotation group.

    Pure states avoid any 2^N x 2^N density matrix: per sector the twirled
    spectrum is p_s / (2s+1) times the squared singular values of the
    (multiplicity x m) coefficient block.
    """
    _check_basis(state, basis)
    if isinstance(state, StateVector):
        coeffs = _schur_coefficients(state, basis)
        delta = 0.0
        for s, start, mult in basis.sectors:
            width = 2 * s + 1
            block = coeffs[start : start + mult * width].reshape(mult, width)
            if float(np.sum(np.abs(block) ** 2)) < 1e-14:
                continue
            sing_sq = np.linalg.svd(block, compute_uv=False) ** 2
            lam = sing_sq[sing_sq > 1e-18]
            # width copies of lam/width each: entropy = sum lam (ln width - ln lam)
            delta += float(np.sum(lam * (np.log(width) - np.log(lam))))
    else:
        delta = von_neumann_entropy(su2_twirl(state, basis)) - von_neumann_entropy(state)
    table = sector_distribution(state, basis)
    report = Su2AsymmetryReport(
        n_sites=state.n_qubits,
        delta_s=delta,
        bound_sector_entropy=su2_shannon_rhs(table),
        bound_support_dim=su2_support_bound(state.n_qubits),
    )
    if report.delta_s < -1e-9:
        raise ValidationError(f"asymmetry {report.delta_s!r} is negative beyond tolerance")
    return report


def _euler_unitary(alpha: float, beta: float, gamma: float) -> np.ndarray:
    """Single-qubit rotation exp(-i a Sz) exp(-i b Sy) exp(-i c Sz) with spin-1/2 generators."""
    za = np.diag(np.exp([-0.5j * alpha, 0.5j * alpha]))
    zc = np.diag(np.exp([-0.5j * gamma, 0.5j * gamma]))
    cb, sb = np.cos(beta / 2.0), np.sin(beta / 2.0)
    ry = np.array([[cb, -sb], [sb, cb]], dtype=complex)
    return za @ ry @ zc


def _apply_global_rotation(mat: np.ndarray, u: np.ndarray, n: int) -> np.ndarray:
    out = mat
    for site in range(n):
        out = apply_site_matrix(out, u, site, n)
    out = out.conj().T
    for site in range(n):
        out = apply_site_matrix(out, u, site, n)
    return out.conj().T


def su2_twirl_haar(state: State, tol: float = 1e-8, max_refinements: int = 6) -> DensityMatrix:
    """Rotation twirl by direct Haar quadrature over Euler angles (oracle path).

    Uniform grids in alpha and gamma, Gauss-Legendre in cos(beta); the grid is
    refined until two successive quadratures agree within ``tol``.
    """
    if isinstance(state, StateVector):
        state = state.to_density_matrix()
    n = state.n_qubits
    previous = None
    k = 2 * n + 2
    n_beta = n + 2
    for _ in range(max_refinements):
        alphas = 2.0 * np.pi * np.arange(k) / k
        gammas = alphas
        nodes, gl_weights = leggauss(n_beta)
        betas = np.arccos(nodes)
        acc = np.zeros_like(state.matrix)
        for beta, w in zip(betas, gl_weights):
            for alpha in alphas:
                for gamma in gammas:
                    u = _euler_unitary(alpha, beta, gamma)
                    acc += (w / 2.0 / k / k) * _apply_global_rotation(state.matrix, u, n)
        if previous is not None and float(np.max(np.abs(acc - previous))) <= tol:
            return DensityMatrix(n, acc)
        previous = acc
        k *= 2
        n_beta *= 2
    raise ValidationError(f"Haar quadrature did not converge to {tol} after {max_refinements} refinements")


def spin_moments(state: State) -> dict:
    """First and second moments of the collective spin S = sum_j sigma_j / 2."""
    n = state.n_qubits
    if isinstance(state, StateVector):
        psi = state.amplitudes
        m_values = (n - 2.0 * bit_weights(n)) / 2.0
        out = {
            "sz": float(np.sum(state.probabilities() * m_values)),
            "sz2": float(np.sum(state.probabilities() * m_values**2)),
        }
        for axis in ("x", "y"):
            phi = np.zeros_like(psi)
            for site in range(n):
                phi += apply_pauli(psi, site, axis, n)
            phi /= 2.0
            out[f"s{axis}"] = float(np.real(np.vdot(psi, phi)))
            out[f"s{axis}2"] = float(np.real(np.vdot(phi, phi)))
    else:
        out = {}
        for axis in ("x", "y", "z"):
            collect = np.zeros_like(state.matrix)
            for site in range(n):
                collect += apply_pauli(state.matrix, site, axis, n)
            collect /= 2.0
            out[f"s{axis}"] = float(np.real(np.trace(collect)))
            second = np.zeros_like(state.matrix)
            for site in range(n):
                second += apply_pauli(collect, site, axis, n)
            second /= 2.0
            out[f"s{axis}2"] = float(np.real(np.trace(second)))
    out["s2"] = out["sx2"] + out["sy2"] + out["sz2"]
    return out


def zero_transverse_rotation(state: State):
    """Rotate so the mean collective spin points along +z.

    Returns (rotated_state, u) where u is the single-site unitary applied to
    every qubit.  A state with vanishing mean spin is returned unchanged with
    u = identity.
    """
    moments = spin_moments(state)
    v = np.array([moments["sx"], moments["sy"], moments["sz"]])
    norm = float(np.linalg.norm(v))
    if norm < 1e-12:
        return state, np.eye(2, dtype=complex)
    vhat = v / norm
    axis = np.cross(vhat, [0.0, 0.0, 1.0])
    axis_norm = float(np.linalg.norm(axis))
    if axis_norm < 1e-12:
        if vhat[2] > 0.0:
            return state, np.eye(2, dtype=complex)
        axis, angle = np.array([1.0, 0.0, 0.0]), np.pi
    else:
        axis = axis / axis_norm
        angle = float(np.arccos(np.clip(vhat[2], -1.0, 1.0)))
    from .states import PAULI_X, PAULI_Y, PAULI_Z

    gen = axis[0] * PAULI_X + axis[1] * PAULI_Y + axis[2] * PAULI_Z
    u = np.cos(angle / 2.0) * np.eye(2) - 1j * np.sin(angle / 2.0) * gen
    n = state.n_qubits
    if isinstance(state, StateVector):
        amps = np.array(state.amplitudes)
        for site in range(n):
            amps = apply_site_matrix(amps, u, site, n)
        rotated: State = StateVector(n, amps)
    else:
        mat = _apply_global_rotation(state.matrix, u, n)
        rotated = DensityMatrix(n, mat)
    check = spin_moments(rotated)
    if max(abs(check["sx"]), abs(check["sy"])) > TRANSVERSE_TOL or check["sz"] < -TRANSVERSE_TOL:
        raise ValidationError("gauge rotation failed to null the transverse spin")
    return rotated, u


@dataclass(frozen=True)
class CasimirReport:
    """Clustering constraint <S^2> - <Sz^2> <= c(Lambda) N and its precursor."""

    n_sites: int
    clustering_range: int
    c_lambda: float
    bound: float
    lhs: float
    precursor_lhs: float

    @property
    def passed(self) -> bool:
        return self.lhs <= self.bound + 1e-9

    @property
    def precursor_passed(self) -> bool:
        return self.precursor_lhs <= self.bound + 1e-9

    def margins(self) -> dict:
        return {
            "main": self.bound - self.lhs,
            "precursor": self.bound - self.precursor_lhs,
        }

    def to_dict(self) -> dict:
        return {
            "n_sites": self.n_sites,
            "clustering_range": self.clustering_range,
            "c_lambda": self.c_lambda,
            "bound": self.bound,
            "lhs": self.lhs,
            "precursor_lhs": self.precursor_lhs,
            "passed": self.passed,
            "precursor_passed": self.precursor_passed,
            "margins": self.margins(),
        }


def casimir_constraint_check(
    state: State, geometry: LatticeGeometry, clustering_range: int
) -> CasimirReport:
    """Check the collective-spin second-moment caps for a clustering state.

    Precondition: the transverse mean spin must already be gauged away
    (|<Sx>|, |<Sy>| <= 1e-6), e.g. via zero_transverse_rotation.  The main
    inequality is <S^2> - <Sz^2> <= c N; the precursor replaces <Sz^2> by the
    squared mean spin |<S>|^2 and is the stronger statement that actually
    requires clustering.
    """
    if geometry.n_sites != state.n_qubits:
        raise ValidationError(
            f"geometry has {geometry.n_sites} sites, state has {state.n_qubits}"
        )
    moments = spin_moments(state)
    if max(abs(moments["sx"]), abs(moments["sy"])) > CASIMIR_PRECONDITION_TOL:
        raise PreconditionError(
            "transverse mean spin exceeds 1e-6; apply zero_transverse_rotation first"
        )
    z_lambda = neighborhood_cardinality(geometry, clustering_range)
    c_lambda = C_LAMBDA_PREFACTOR * z_lambda
    bound = c_lambda * geometry.n_sites
    lhs = moments["s2"] - moments["sz2"]
    mean_sq = moments["sx"] ** 2 + moments["sy"] ** 2 + moments["sz"] ** 2
    precursor = moments["s2"] - mean_sq
    return CasimirReport(
        n_sites=state.n_qubits,
        clustering_range=clustering_range,
        c_lambda=c_lambda,
        bound=bound,
        lhs=lhs,
        precursor_lhs=precursor,
    )
