"""Closed-form charge distributions and large-N scaling helpers.

Everything here avoids statevectors, so sweeps can run far beyond the
simulation caps.  Binomial coefficients use exact integers up to n = 20 and
log-gamma beyond; oscillatory Krawtchouk values come from a three-term
recurrence, with the alternating sum kept only as an exact-rational oracle.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np
from scipy.integrate import quad
from scipy.special import gammaln

from .errors import ValidationError
from .states import StateVector, _check_cap, bit_weights, statevector_cap
from .u1 import ChargeDistribution

EXACT_BINOMIAL_LIMIT = 20


def log_binomial(n: int, k) -> np.ndarray | float:
    """ln C(n, k) via log-gamma; k may be an array."""
    k = np.asarray(k, dtype=float)
    out = gammaln(n + 1.0) - gammaln(k + 1.0) - gammaln(n - k + 1.0)
    return out if out.ndim else float(out)


def binomial(n: int, k: int) -> float:
    """C(n, k) as a float, exact below EXACT_BINOMIAL_LIMIT."""
    if not 0 <= k <= n:
        return 0.0
    if n <= EXACT_BINOMIAL_LIMIT:
        return float(math.comb(n, k))
    return float(np.exp(log_binomial(n, k)))


def _check_kraw_args(i: int, k: int, n: int):
    if n < 0 or not 0 <= i <= n or not 0 <= k <= n:
        raise ValidationError(f"need 0 <= i,k <= n, got i={i}, k={k}, n={n}")


def krawtchouk(i: int, k: int, n: int) -> float:
    """Symmetric Krawtchouk polynomial K_i(k; 1/2, n), K_0 = 1.

    Evaluated by the degree recurrence
    (n - d) K_{d+1}(x) = (n - 2x) K_d(x) - d K_{d-1}(x),
    run over the smaller of (i, k); the polynomial is symmetric in i and k.
    """
    _check_kraw_args(i, k, n)
    d_max, x = (i, k) if i <= k else (k, i)
    prev, cur = 1.0, 1.0
    for d in range(d_max):
        if d == 0:
            nxt = (n - 2.0 * x) / n
        else:
            nxt = ((n - 2.0 * x) * cur - d * prev) / (n - d)
        prev, cur = cur, nxt
    return cur


def krawtchouk_exact(i: int, k: int, n: int) -> Fraction:
    """Alternating-sum definition with exact rational arithmetic (oracle)."""
    _check_kraw_args(i, k, n)
    total = Fraction(0)
    for j in range(0, min(i, k) + 1):
        total += Fraction((-1) ** j * math.comb(n - k, i - j) * math.comb(k, j))
    return total / math.comb(n, i)


def dicke_state(n: int, k: int, axis: str = "z") -> StateVector:
    """Uniform superposition of the weight-k basis states (k sites in |1>).

    ``axis='x'`` returns the Hadamard-rotated state H^{(x) n} |D_k^z>.
    """
    if not 0 <= k <= n:
        raise ValidationError(f"excitation number k={k} outside [0, {n}]")
    _check_cap(n, statevector_cap(), "statevector")
    amps = np.zeros(2**n, dtype=complex)
    support = np.flatnonzero(bit_weights(n) == k)
    amps[support] = 1.0 / np.sqrt(support.size)
    state = StateVector(n, amps)
    if axis == "z":
        return state
    if axis != "x":
        raise ValidationError(f"axis must be 'z' or 'x', got {axis!r}")
    from .circuits import BrickworkCircuit, Gate, apply_circuit, hadamard_gate

    layer = tuple(Gate((j,), hadamard_gate()) for j in range(n))
    return apply_circuit(state, BrickworkCircuit(n, (layer,)))


def dicke_x_coefficients(n: int, k: int) -> np.ndarray:
    """Coefficients of H^{(x) n}|D_k^z> in the z Dicke basis, index i = 0..n.

    c_i = 2^{-n/2} sqrt(C(n,i) C(n,k)) K_i(k; 1/2, n), assembled in log space.
    """
    if not 0 <= k <= n:
        raise ValidationError(f"excitation number k={k} outside [0, {n}]")
    out = np.empty(n + 1)
    log_ck = log_binomial(n, k)
    for i in range(n + 1):
        kr = krawtchouk(i, k, n)
        log_mag = -0.5 * n * np.log(2.0) + 0.5 * (log_binomial(n, i) + log_ck)
        out[i] = np.sign(kr) * np.exp(log_mag + np.log(abs(kr))) if kr != 0.0 else 0.0
    return out


def dicke_x_distribution(n: int, k: int) -> ChargeDistribution:
    """Charge distribution of the x-basis Dicke state with k excitations.

    The coefficient index i counts |1> sites, so charge q = n - i.
    """
    coeffs = dicke_x_coefficients(n, k)
    probs = coeffs[::-1] ** 2
    return ChargeDistribution.from_probs(probs)


def dicke_half_charge_prob(m: int, q) -> np.ndarray | float:
    """Charge probabilities of the half-filled x Dicke state on N = 2m sites.

    Odd charges carry zero weight; for even q,
    p = 2^{-2m} C(2m, m) C(2m, q)^{-1} C(m, q/2)^2.
    """
    if m < 1:
        raise ValidationError(f"need m >= 1, got {m}")
    q = np.asarray(q)
    if np.any((q < 0) | (q > 2 * m)):
        raise ValidationError(f"charges must lie in [0, {2 * m}]")
    even = q % 2 == 0
    half = np.where(even, q // 2, 0)
    log_p = (
        -2.0 * m * np.log(2.0)
        + log_binomial(2 * m, m)
        - log_binomial(2 * m, q)
        + 2.0 * log_binomial(m, half)
    )
    out = np.where(even, np.exp(log_p), 0.0)
    return out if out.ndim else float(out)


def dicke_half_distribution(m: int) -> ChargeDistribution:
    """Full charge distribution of the half-filled x Dicke state, q = 0..2m."""
    q = np.arange(2 * m + 1)
    probs = dicke_half_charge_prob(m, q)
    # exactly normalized in exact arithmetic; log-gamma rounding drifts the
    # float sum past 1e-10 around m ~ 2e5, so rescale before validation
    return ChargeDistribution.from_probs(probs / probs.sum())


def kink_state(n: int) -> StateVector:
    """Uniform superposition of the n domain walls |0^j 1^(n-j)>, j = 1..n."""
    if n < 1:
        raise ValidationError(f"need n >= 1, got {n}")
    _check_cap(n, statevector_cap(), "statevector")
    amps = np.zeros(2**n, dtype=complex)
    for j in range(1, n + 1):
        amps[2 ** (n - j) - 1] = 1.0 / np.sqrt(n)
    return StateVector(n, amps)


def kink_distribution(n: int) -> ChargeDistribution:
    """Charge distribution of the kink state: flat 1/n on q = 1..n, zero at q = 0."""
    if n < 1:
        raise ValidationError(f"need n >= 1, got {n}")
    probs = np.full(n + 1, 1.0 / n)
    probs[0] = 0.0
    return ChargeDistribution.from_probs(probs)


def poisson_binomial(x) -> ChargeDistribution:
    """Distribution of a sum of independent Bernoulli(x_j) charges.

    Direct O(N^2) convolution; feasible to N ~ 10^4.
    """
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.size < 1:
        raise ValidationError("x must be a non-empty 1-d array")
    if np.any((x < 0.0) | (x > 1.0)):
        raise ValidationError("Bernoulli means must lie in [0, 1]")
    probs = np.array([1.0])
    for xj in x:
        nxt = np.zeros(probs.size + 1)
        nxt[:-1] = probs * (1.0 - xj)
        nxt[1:] += probs * xj
        probs = nxt
    return ChargeDistribution.from_probs(probs)


def product_charge_state(x) -> StateVector:
    """Product state with local charge means x_j: sqrt(x)|0> + sqrt(1-x)|1>."""
    from .states import product_state

    x = np.asarray(x, dtype=float)
    locals_ = [np.array([np.sqrt(xj), np.sqrt(1.0 - xj)], dtype=complex) for xj in x]
    return product_state(locals_)


@dataclass(frozen=True)
class ContinuousChargeDensity:
    """Coarse-grained charge density p(u) on u in [0, 1].

    ``descriptor`` is one of 'flat', 'arcsine' or 'custom-table'.  Analytic
    descriptors integrate by adaptive quadrature (the arcsine through the
    u = sin^2 theta substitution that removes its edge singularities); tables
    are histogram densities on a uniform midpoint grid and integrate by cell
    sums.
    """

    descriptor: str
    pdf: Callable[[float], float] | None = None
    grid: np.ndarray | None = None
    values: np.ndarray | None = None

    def _quad_pair(self) -> tuple[float, float]:
        """(integral of p, integral of p ln p) by quadrature."""
        if self.descriptor == "arcsine":
            def mass(theta):
                return 2.0 / np.pi

            def plogp(theta):
                s, c = np.sin(theta), np.cos(theta)
                return (2.0 / np.pi) * np.log(1.0 / (np.pi * s * c))

            total, _ = quad(mass, 0.0, np.pi / 2.0)
            ent, _ = quad(plogp, 0.0, np.pi / 2.0)
            return total, ent
        total, _ = quad(self.pdf, 0.0, 1.0)

        def plogp_u(u):
            p = self.pdf(u)
            return p * np.log(p) if p > 0.0 else 0.0

        ent, _ = quad(plogp_u, 0.0, 1.0)
        return total, ent

    def normalization(self) -> float:
        if self.descriptor == "custom-table":
            cell = 1.0 / self.values.size
            return float(np.sum(self.values) * cell)
        return self._quad_pair()[0]

    def entropy_integral(self) -> float:
        """Integral of p ln p over [0, 1]."""
        if self.descriptor == "custom-table":
            cell = 1.0 / self.values.size
            v = self.values[self.values > 0.0]
            return float(np.sum(v * np.log(v)) * cell)
        return self._quad_pair()[1]


def flat_density() -> ContinuousChargeDensity:
    return ContinuousChargeDensity("flat", pdf=lambda u: 1.0)


def arcsine_density() -> ContinuousChargeDensity:
    return ContinuousChargeDensity(
        "arcsine", pdf=lambda u: 1.0 / (np.pi * np.sqrt(u * (1.0 - u)))
    )


def table_density(values, normalize: bool = True) -> ContinuousChargeDensity:
    """Histogram density from K values on the midpoint grid u_j = (j + 1/2)/K."""
    values = np.array(values, dtype=float)
    if values.ndim != 1 or values.size < 2:
        raise ValidationError("table needs at least two density values")
    if np.any(values < 0.0):
        raise ValidationError("density values must be nonnegative")
    k = values.size
    grid = (np.arange(k) + 0.5) / k
    if normalize:
        total = float(np.sum(values)) / k
        if total <= 0.0:
            raise ValidationError("table has zero total mass")
        values = values / total
    values.flags.writeable = False
    grid.flags.writeable = False
    return ContinuousChargeDensity("custom-table", grid=grid, values=values)


def density_from_distribution(probs) -> ContinuousChargeDensity:
    """Histogram density of measured support probabilities (scaled by the cell count)."""
    probs = np.asarray(probs, dtype=float)
    return table_density(probs * probs.size, normalize=True)


NORMALIZATION_TOL = 1e-8


def continuous_asymmetry_estimate(density: ContinuousChargeDensity, n: int) -> float:
    """Large-N estimate ln(n) - integral of p ln p for a charge density.

    ``n`` is the number of charge values carrying the distribution; the
    density must be normalized within 1e-8.
    """
    if n < 1:
        raise ValidationError(f"need n >= 1, got {n}")
    total = density.normalization()
    if abs(total - 1.0) > NORMALIZATION_TOL:
        raise ValidationError(f"density integrates to {total!r}, not 1 within {NORMALIZATION_TOL}")
    return float(np.log(n) - density.entropy_integral())


@dataclass(frozen=True)
class FitResult:
    slope: float
    intercept: float
    max_residual: float
    n_points: int
    correction: float | None = None


def asymptotic_fit(points, correction_power: float | None = None) -> FitResult:
    """Least-squares fit value ~ slope * ln(N) + intercept over (N, value) pairs.

    ``correction_power`` adds a known-order finite-size regressor c * N^(-power)
    to the model; the fitted c lands in ``FitResult.correction``.  Sweeps whose
    exact values carry a subleading power-law tail (the half-filled Dicke
    series decays like N^(-1/2) toward its asymptote) need it to read off the
    asymptotic slope from a finite window.
    """
    pts = [(float(n), float(v)) for n, v in points]
    if len(pts) < 3:
        raise ValidationError(f"need at least 3 points, got {len(pts)}")
    ns = np.array([p[0] for p in pts])
    vals = np.array([p[1] for p in pts])
    if np.any(ns <= 0.0):
        raise ValidationError("N values must be positive")
    logs = np.log(ns)
    if np.ptp(logs) < 1e-9:
        raise ValidationError("N values are degenerate; cannot fit a slope")
    if correction_power is None:
        slope, intercept = np.polyfit(logs, vals, 1)
        residuals = vals - (slope * logs + intercept)
        correction = None
    else:
        if len(pts) < 4:
            raise ValidationError("corrected fit needs at least 4 points")
        design = np.stack([logs, np.ones_like(logs), ns ** (-correction_power)], axis=1)
        coef, *_ = np.linalg.lstsq(design, vals, rcond=None)
        slope, intercept, correction = coef
        residuals = vals - design @ coef
    return FitResult(
        float(slope),
        float(intercept),
        float(np.max(np.abs(residuals))),
        len(pts),
        None if correction is None else float(correction),
    )
