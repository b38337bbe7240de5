"""Charge statistics, charge twirl and the asymmetry monotone.

The conserved charge is Q = sum_j (sigma^z_j + 1)/2 with sigma^z |0> = +|0>,
so a basis state's charge counts its |0> sites and runs over 0..N.  Entropies
are natural logarithms throughout.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .lattice import LatticeGeometry, neighborhood_cardinality
from .states import (
    DensityMatrix,
    State,
    StateVector,
    bit_weights,
    entropy_of_probabilities,
    von_neumann_entropy,
)

NEGATIVE_PROBABILITY_TOL = -1e-12
SUM_TOL = 1e-10


@dataclass(frozen=True)
class ChargeDistribution:
    """Probabilities of the charge values 0..N plus cached first two moments."""

    probs: np.ndarray
    mean: float
    variance: float

    @classmethod
    def from_probs(cls, probs) -> "ChargeDistribution":
        p = np.array(probs, dtype=float)
        if p.ndim != 1 or p.size < 1:
            raise ValidationError("charge probabilities must form a non-empty 1-d array")
        low = float(p.min())
        if low < NEGATIVE_PROBABILITY_TOL:
            raise ValidationError(f"charge probability {low:.3e} below {NEGATIVE_PROBABILITY_TOL}")
        p = np.clip(p, 0.0, None)
        total = float(p.sum())
        if abs(total - 1.0) > SUM_TOL:
            raise ValidationError(f"charge probabilities sum to {total!r}, not 1 within {SUM_TOL}")
        q = np.arange(p.size, dtype=float)
        mean = float(p @ q)
        variance = float(p @ (q - mean) ** 2)
        p.flags.writeable = False
        return cls(p, mean, variance)

    @property
    def n_charges(self) -> int:
        return self.probs.size

    @property
    def max_charge(self) -> int:
        return self.probs.size - 1


def charge_values(n_qubits: int) -> np.ndarray:
    """Charge of every basis index: the number of 0-bits."""
    return n_qubits - bit_weights(n_qubits)


def charge_distribution(state: State) -> ChargeDistribution:
    """Measured distribution of the total charge of a state."""
    q = charge_values(state.n_qubits)
    if isinstance(state, StateVector):
        weights = state.probabilities()
    else:
        weights = state.diagonal()
    probs = np.bincount(q, weights=weights, minlength=state.n_qubits + 1)
    return ChargeDistribution.from_probs(probs)


def shannon_entropy(dist) -> float:
    """Shannon entropy in nats of a ChargeDistribution or raw probability array."""
    probs = dist.probs if isinstance(dist, ChargeDistribution) else dist
    return entropy_of_probabilities(probs)


def flat_distribution(n_values: int) -> ChargeDistribution:
    """Uniform distribution over charges 0..n_values-1; entropy ln(n_values)."""
    if n_values < 1:
        raise ValidationError(f"need at least one charge value, got {n_values}")
    return ChargeDistribution.from_probs(np.full(n_values, 1.0 / n_values))


def u1_twirl(state: State) -> DensityMatrix:
    """Dephase across charge sectors: keep only blocks with equal row/column charge."""
    if isinstance(state, StateVector):
        state = state.to_density_matrix()
    q = charge_values(state.n_qubits)
    mask = q[:, None] == q[None, :]
    return DensityMatrix(state.n_qubits, np.where(mask, state.matrix, 0.0))


def generating_function(source, alpha: float) -> complex:
    """Characteristic function <e^{i alpha Q}> of a state or charge distribution."""
    dist = source if isinstance(source, ChargeDistribution) else charge_distribution(source)
    q = np.arange(dist.n_charges)
    return complex(np.sum(dist.probs * np.exp(1j * alpha * q)))


def distribution_from_generating_function(values: np.ndarray, n_charges: int) -> ChargeDistribution:
    """Invert G(alpha_k) sampled at alpha_k = 2 pi k / n_charges by inverse DFT."""
    values = np.asarray(values, dtype=complex)
    if values.size != n_charges:
        raise ValidationError(f"need {n_charges} samples, got {values.size}")
    q = np.arange(n_charges)
    alphas = 2.0 * np.pi * q / n_charges
    kernel = np.exp(-1j * np.outer(q, alphas))
    probs = np.real(kernel @ values) / n_charges
    return ChargeDistribution.from_probs(probs)


def massey_bound(variance: float) -> float:
    """Entropy bound (1/2) ln(2 pi e (variance + 1/12)) for integer-valued variables."""
    if variance <= 0.0:
        raise ValidationError(f"variance must be positive, got {variance}")
    return 0.5 * float(np.log(2.0 * np.pi * np.e * (variance + 1.0 / 12.0)))


def clustering_variance_bound(geometry: LatticeGeometry, radius: int) -> float:
    """Charge-variance cap 2 z_Lambda N for states clustering at range ``radius``."""
    return 2.0 * neighborhood_cardinality(geometry, radius) * geometry.n_sites


@dataclass(frozen=True)
class AsymmetryReport:
    """Asymmetry of one state with every applicable bound and its margin.

    ``delta_s`` and ``shannon`` are in nats.  ``bound_massey`` caps the charge
    Shannon entropy (hence also delta_s); the other bounds cap delta_s
    directly.  Margins are bound minus the quantity they cap; ``None`` marks a
    bound that does not apply (zero charge variance, or no clustering range
    supplied).
    """

    n_sites: int
    delta_s: float
    shannon: float
    variance: float
    bound_log_n_plus_1: float
    bound_massey: float | None
    bound_clustering: float | None
    clustering_range: int | None

    def margins(self) -> dict:
        out = {"log_n_plus_1": self.bound_log_n_plus_1 - self.delta_s}
        out["massey"] = None if self.bound_massey is None else self.bound_massey - self.shannon
        out["clustering"] = (
            None if self.bound_clustering is None else self.bound_clustering - self.delta_s
        )
        return out

    def to_dict(self) -> dict:
        return {
            "n_sites": self.n_sites,
            "delta_s": self.delta_s,
            "shannon": self.shannon,
            "variance": self.variance,
            "clustering_range": self.clustering_range,
            "bounds": {
                "log_n_plus_1": self.bound_log_n_plus_1,
                "massey": self.bound_massey,
                "clustering": self.bound_clustering,
            },
            "margins": self.margins(),
        }


def _build_report(
    n_sites: int,
    delta_s: float,
    dist: ChargeDistribution,
    geometry: LatticeGeometry | None,
    clustering_range: int | None,
) -> AsymmetryReport:
    shannon = shannon_entropy(dist)
    if delta_s < -1e-9:
        raise ValidationError(f"asymmetry {delta_s!r} is negative beyond tolerance")
    if delta_s > shannon + 1e-9:
        raise ValidationError(
            f"asymmetry {delta_s!r} exceeds the charge entropy {shannon!r} beyond tolerance"
        )
    massey = massey_bound(dist.variance) if dist.variance > 0.0 else None
    bound_cluster = None
    if clustering_range is not None:
        if geometry is None:
            raise ValidationError("clustering_range needs a lattice geometry")
        if geometry.n_sites != n_sites:
            raise ValidationError(
                f"geometry has {geometry.n_sites} sites, state has {n_sites}"
            )
        sigma_cap = clustering_variance_bound(geometry, clustering_range)
        bound_cluster = massey_bound(sigma_cap)
    return AsymmetryReport(
        n_sites=n_sites,
        delta_s=float(delta_s),
        shannon=float(shannon),
        variance=float(dist.variance),
        bound_log_n_plus_1=float(np.log(n_sites + 1)),
        bound_massey=massey,
        bound_clustering=bound_cluster,
        clustering_range=clustering_range,
    )


def u1_asymmetry(
    state: State,
    geometry: LatticeGeometry | None = None,
    clustering_range: int | None = None,
) -> AsymmetryReport:
    """Charge asymmetry Delta S = S(twirl(rho)) - S(rho) with its bounds.

    Pure states use the exact identity Delta S = H(p_q); mixed states go
    through the dephased density matrix and two eigendecompositions.
    """
    dist = charge_distribution(state)
    if isinstance(state, StateVector):
        delta_s = shannon_entropy(dist)
    else:
        delta_s = von_neumann_entropy(u1_twirl(state)) - von_neumann_entropy(state)
    return _build_report(state.n_qubits, delta_s, dist, geometry, clustering_range)


def report_from_distribution(
    dist: ChargeDistribution,
    n_sites: int,
    geometry: LatticeGeometry | None = None,
    clustering_range: int | None = None,
) -> AsymmetryReport:
    """Report for a pure state known only through its charge distribution.

    For pure states the asymmetry equals the charge Shannon entropy, so
    closed-form distributions feed the same report machinery without a
    statevector.
    """
    return _build_report(n_sites, shannon_entropy(dist), dist, geometry, clustering_range)
