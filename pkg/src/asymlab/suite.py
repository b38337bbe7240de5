"""Named verification batteries: inequality checks and worked-example oracles.

``bound_suite`` exercises every structural invariant the package promises
(twirl algebra, entropy bounds, clustering and lightcone certificates) on
seeded random inputs; ``oracle_suite`` re-derives worked examples through
independent routes.  Both return a list of CheckResult so callers can render
a check -> margin matrix; a check passes iff margin >= 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import circuits, closedforms, clustering, lattice, states, su2, u1
from .errors import ValidationError
from .states import DensityMatrix, StateVector, apply_site_matrix


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    margin: float
    detail: str = ""

    def __post_init__(self):
        # numpy scalars sneak in from comparisons; keep plain JSON-able types
        object.__setattr__(self, "passed", bool(self.passed))
        object.__setattr__(self, "margin", float(self.margin))

    def line(self) -> str:
        status = "pass" if self.passed else "FAIL"
        return f"{status}  {self.name:<34s} margin={self.margin:+.3e}  {self.detail}"


def all_passed(results) -> bool:
    return all(r.passed for r in results)


def _count(base: int, scale: float) -> int:
    return max(1, int(round(base * scale)))


def _rotate_state(state, site_unitary: np.ndarray):
    """Apply the same single-qubit unitary to every site."""
    n = state.n_qubits
    if isinstance(state, StateVector):
        arr = state.amplitudes
        for k in range(n):
            arr = apply_site_matrix(arr, site_unitary, k, n)
        return StateVector(n, arr)
    mat = state.matrix
    for k in range(n):
        mat = apply_site_matrix(mat, site_unitary, k, n)
    mat = mat.conj().T
    for k in range(n):
        mat = apply_site_matrix(mat, site_unitary, k, n)
    return DensityMatrix(n, mat.conj().T)


def _random_product_input(n: int, rng) -> StateVector:
    locals_ = []
    for _ in range(n):
        v = rng.normal(size=2) + 1j * rng.normal(size=2)
        locals_.append(v / np.linalg.norm(v))
    return states.product_state(locals_)


def _chain_geometries():
    """The (geometry, depth) grid used by circuit-based checks."""
    grid = []
    for m in (8, 10, 12, 14):
        grid.append(lattice.LatticeGeometry(1, m))
    grid.append(lattice.LatticeGeometry(2, 3))
    return grid


class _SuiteRunner:
    def __init__(self, seed: int, samples: float):
        self.seed = int(seed)
        self.samples = float(samples)
        self._schur_cache: dict[int, su2.SchurBasis] = {}

    def rng(self, salt: int) -> np.random.Generator:
        return np.random.default_rng([self.seed, salt])

    def basis(self, n: int) -> su2.SchurBasis:
        if n not in self._schur_cache:
            self._schur_cache[n] = su2.build_schur_basis(n)
        return self._schur_cache[n]

    # ---------------- lattice ----------------

    def ball_translation_invariance(self) -> CheckResult:
        worst = 0
        scanned = 0
        for d in (1, 2):
            for m in range(2, 7):
                geo = lattice.LatticeGeometry(d, m)
                for radius in range(geo.diameter + 1):
                    counts = {
                        lattice.ball(geo, x, radius).size for x in range(geo.n_sites)
                    }
                    ref = lattice.neighborhood_cardinality(geo, radius)
                    worst = max(worst, max(abs(c - ref) for c in counts))
                    scanned += 1
        return CheckResult(
            "ball-translation-invariance",
            worst == 0,
            0.5 - worst,
            f"{scanned} (geometry, radius) pairs",
        )

    def ball_growth_saturation(self) -> CheckResult:
        violations = 0
        for d in (1, 2):
            for m in range(2, 7):
                geo = lattice.LatticeGeometry(d, m)
                sizes = [
                    lattice.neighborhood_cardinality(geo, r)
                    for r in range(geo.diameter + 2)
                ]
                if any(b < a for a, b in zip(sizes, sizes[1:])):
                    violations += 1
                if sizes[geo.diameter] != geo.n_sites:
                    violations += 1
        return CheckResult(
            "ball-growth-saturation", violations == 0, 0.5 - violations, "d=1,2 m=2..6"
        )

    # ---------------- circuits and entropy ----------------

    def spreading_within_lightcone(self) -> CheckResult:
        rng = self.rng(3)
        margin = math.inf
        tested = 0
        for geo in (lattice.LatticeGeometry(1, 8), lattice.LatticeGeometry(2, 3)):
            for depth in (1, 2, 3):
                for _ in range(_count(3, self.samples)):
                    circ = circuits.random_brickwork(geo, depth, rng)
                    spread = clustering.operator_spreading_range(circ, geo)
                    margin = min(margin, lattice.lightcone_range(depth) - spread + 0.5)
                    tested += 1
        return CheckResult(
            "spreading-within-lightcone", margin >= 0, margin, f"{tested} circuits"
        )

    def circuit_trace_purity(self) -> CheckResult:
        rng = self.rng(4)
        tol = 1e-10
        worst = 0.0
        for n, m in ((4, 4), (6, 6)):
            geo = lattice.LatticeGeometry(1, m)
            for _ in range(_count(5, self.samples)):
                rho = states.random_density_matrix(n, rng, rank=3)
                out = circuits.apply_circuit(rho, circuits.random_brickwork(geo, 3, rng))
                worst = max(worst, abs(np.trace(out.matrix).real - 1.0))
                worst = max(worst, abs(out.purity() - rho.purity()))
        return CheckResult(
            "circuit-trace-purity", worst <= tol, tol - worst, "depth-3 brickwork, n=4,6"
        )

    def channel_trace_preserving(self) -> CheckResult:
        rng = self.rng(5)
        tol = 1e-10
        worst = 0.0
        for n in (2, 3):
            rho = states.random_density_matrix(n, rng)
            chans = [
                circuits.depolarizing_channel(0, 0.3),
                circuits.phase_flip_channel(n - 1, 0.25),
                circuits.full_dephasing_channel(0),
                circuits.random_diagonal_phase_channel(n, 1, 0.4, rng),
            ]
            for ch in chans:
                out = circuits.apply_channel(rho, ch)
                worst = max(worst, abs(np.trace(out.matrix).real - 1.0))
        return CheckResult(
            "channel-trace-preserving", worst <= tol, tol - worst, "4 channel families"
        )

    def entropy_unitary_invariance(self) -> CheckResult:
        rng = self.rng(6)
        tol = 1e-9
        worst = 0.0
        for n in (2, 4, 6):
            for _ in range(_count(5, self.samples)):
                rho = states.random_density_matrix(n, rng, rank=min(4, 2**n))
                s0 = states.von_neumann_entropy(rho)
                umat = circuits.haar_unitary(2**n, rng)
                rot = DensityMatrix(n, umat @ rho.matrix @ umat.conj().T)
                worst = max(worst, abs(states.von_neumann_entropy(rot) - s0))
        return CheckResult(
            "entropy-unitary-invariance", worst <= tol, tol - worst, "haar conjugation"
        )

    def measurement_entropy_monotone(self) -> CheckResult:
        """Averaged post-selection entropy never exceeds the prior entropy."""
        rng = self.rng(7)
        tol = 1e-9
        margin = math.inf
        for n in (2, 3, 4, 5):
            qvals = u1.charge_values(n)
            for _ in range(_count(10, self.samples)):
                rho = states.random_density_matrix(n, rng)
                s0 = states.von_neumann_entropy(rho)
                avg = 0.0
                for q in range(n + 1):
                    mask = qvals == q
                    block = rho.matrix[np.ix_(mask, mask)]
                    p = float(np.trace(block).real)
                    if p < 1e-14:
                        continue
                    w = np.linalg.eigvalsh(block / p)
                    w = w[w > 1e-14]
                    avg += p * float(-(w * np.log(w)).sum())
                margin = min(margin, s0 - avg + tol)
        return CheckResult(
            "measurement-entropy-monotone", margin >= 0, margin, "sector projections"
        )

    # ---------------- abelian asymmetry ----------------

    def pure_state_saturation(self) -> CheckResult:
        """Dense-twirl asymmetry equals the charge entropy on pure states."""
        rng = self.rng(8)
        tol = 1e-9
        worst = 0.0
        draws = _count(200, self.samples)
        for k in range(draws):
            n = 2 + k % 5
            psi = states.random_state(n, rng)
            h = u1.shannon_entropy(u1.charge_distribution(psi))
            dense = states.von_neumann_entropy(u1.u1_twirl(psi.to_density_matrix()))
            worst = max(worst, abs(dense - h))
        return CheckResult(
            "pure-state-saturation", worst <= tol, tol - worst, f"{draws} states, n<=6"
        )

    def asymmetry_log_cap(self) -> CheckResult:
        rng = self.rng(9)
        tol = 1e-9
        margin = math.inf
        for k in range(_count(40, self.samples)):
            n = 2 + k % 4
            state = (
                states.random_state(n, rng)
                if k % 2
                else states.random_density_matrix(n, rng)
            )
            rep = u1.u1_asymmetry(state)
            margin = min(margin, math.log(n + 1) - rep.delta_s + tol)
        return CheckResult(
            "asymmetry-log-cap", margin >= 0, margin, "random pure and mixed states"
        )

    def massey_strict(self) -> CheckResult:
        rng = self.rng(10)
        margin = math.inf
        for k in range(_count(40, self.samples)):
            n = 2 + k % 5
            state = (
                states.random_state(n, rng)
                if k % 2
                else states.random_density_matrix(n, rng)
            )
            dist = u1.charge_distribution(state)
            if dist.variance <= 0.0:
                continue
            margin = min(margin, u1.massey_bound(dist.variance) - u1.shannon_entropy(dist))
        for n in (4, 10, 16):
            dist = u1.flat_distribution(n + 1)
            margin = min(margin, u1.massey_bound(dist.variance) - u1.shannon_entropy(dist))
        return CheckResult(
            "massey-strict", margin > 0, margin, "entropy strictly below variance cap"
        )

    def circuit_bound_chain(self, seeds: int | None = None) -> CheckResult:
        """Clustering range, variance cap and asymmetry cap for circuit outputs."""
        rng = self.rng(11)
        tol = 1e-9
        margin = math.inf
        grid = _chain_geometries()
        total = seeds if seeds is not None else _count(50, self.samples)
        for k in range(total):
            geo = grid[k % len(grid)]
            depth = 1 + k % 3
            circ = circuits.random_brickwork(geo, depth, rng)
            psi = circuits.apply_circuit(_random_product_input(geo.n_sites, rng), circ)
            lam = 2 * lattice.lightcone_range(depth)
            cluster = clustering.verify_cluster_property(psi, geo, lam, tol=tol)
            margin = min(margin, tol - cluster.max_violation)
            var = clustering.variance_bound_check(psi, geo, lam)
            margin = min(margin, var.margin + tol)
            rep = u1.u1_asymmetry(psi, geo, clustering_range=lam)
            margins = rep.margins()
            margin = min(margin, margins["massey"])
            margin = min(margin, margins["clustering"] + tol)
        return CheckResult(
            "circuit-bound-chain",
            margin >= 0,
            margin,
            f"{total} brickwork circuits, 1d and 2d, depth<=3",
        )

    def charge_twirl_idempotent(self) -> CheckResult:
        rng = self.rng(12)
        tol = 1e-12
        worst = 0.0
        for n in (2, 3, 4, 5):
            rho = states.random_density_matrix(n, rng)
            once = u1.u1_twirl(rho)
            twice = u1.u1_twirl(once)
            worst = max(worst, float(np.abs(twice.matrix - once.matrix).max()))
        return CheckResult("charge-twirl-idempotent", worst <= tol, tol - worst, "n=2..5")

    def charge_fixed_point_iff(self) -> CheckResult:
        """Zero asymmetry exactly on twirl-fixed states, positive otherwise."""
        rng = self.rng(13)
        margin = math.inf
        for n in (2, 3, 4):
            for _ in range(_count(10, self.samples)):
                rho = states.random_density_matrix(n, rng)
                sym = u1.u1_twirl(rho)
                margin = min(margin, 1e-10 - u1.u1_asymmetry(sym).delta_s)
                moved = float(np.abs(u1.u1_twirl(rho).matrix - rho.matrix).max())
                if moved > 1e-6:
                    margin = min(margin, u1.u1_asymmetry(rho).delta_s - 1e-10)
        return CheckResult(
            "charge-fixed-point-iff", margin >= 0, margin, "both implications"
        )

    def symmetric_channel_monotone(self) -> CheckResult:
        rng = self.rng(14)
        tol = 1e-9
        margin = math.inf
        count = _count(20, self.samples)
        for k in range(count):
            n = 2 + k % 4
            rho = states.random_density_matrix(n, rng)
            before = u1.u1_asymmetry(rho).delta_s
            umat = circuits.charge_conserving_unitary(n, rng)
            rotated = DensityMatrix(n, umat @ rho.matrix @ umat.conj().T)
            margin = min(margin, before - u1.u1_asymmetry(rotated).delta_s + tol)
            for chan in (
                circuits.random_diagonal_phase_channel(n, k % n, 0.5, rng),
                circuits.full_dephasing_channel((k + 1) % n),
            ):
                out = circuits.apply_channel(rho, chan)
                margin = min(margin, before - u1.u1_asymmetry(out).delta_s + tol)
        return CheckResult(
            "symmetric-channel-monotone",
            margin >= 0,
            margin,
            f"{count} states, conserving unitaries and dephasing",
        )

    # ---------------- rotation-group asymmetry ----------------

    def schur_unitarity(self) -> CheckResult:
        tol = 1e-10
        worst = 0.0
        for n in (2, 4, 6, 8, 10, 12):
            umat = self.basis(n).matrix
            gram = umat.conj().T @ umat
            worst = max(worst, float(np.abs(gram - np.eye(gram.shape[0])).max()))
        return CheckResult("schur-unitarity", worst <= tol, tol - worst, "n=2..12")

    def sector_dimension_identity(self) -> CheckResult:
        violations = 0
        for n in range(2, 13, 2):
            total = sum(
                (2 * s + 1) * su2.multiplicity(n, s) for s in range(n // 2 + 1)
            )
            if total != 2**n:
                violations += 1
        return CheckResult(
            "sector-dimension-identity",
            violations == 0,
            0.5 - violations,
            "sum (2s+1) n_s = 2^n, n=2..12",
        )

    def rotation_twirl_idempotent(self) -> CheckResult:
        rng = self.rng(17)
        tol = 1e-10
        worst = 0.0
        for n in (2, 4, 6):
            basis = self.basis(n)
            for state in (
                states.random_state(n, rng).to_density_matrix(),
                states.random_density_matrix(n, rng),
            ):
                once = su2.su2_twirl(state, basis)
                twice = su2.su2_twirl(once, basis)
                worst = max(worst, float(np.abs(twice.matrix - once.matrix).max()))
        return CheckResult("rotation-twirl-idempotent", worst <= tol, tol - worst, "n=2,4,6")

    def rotation_twirl_covariance(self) -> CheckResult:
        rng = self.rng(18)
        tol = 1e-8
        worst = 0.0
        for n in (2, 4):
            basis = self.basis(n)
            for _ in range(_count(5, self.samples)):
                rho = states.random_density_matrix(n, rng)
                umat = circuits.haar_unitary(2, rng)
                left = su2.su2_twirl(_rotate_state(rho, umat), basis)
                right = _rotate_state(su2.su2_twirl(rho, basis), umat)
                worst = max(worst, float(np.abs(left.matrix - right.matrix).max()))
        return CheckResult(
            "rotation-twirl-covariance", worst <= tol, tol - worst, "global rotations"
        )

    def sector_entropy_bound(self) -> CheckResult:
        rng = self.rng(19)
        tol = 1e-9
        margin = math.inf
        tested = 0
        for n in (2, 4, 6):
            basis = self.basis(n)
            trial_states = [
                states.random_state(n, rng),
                states.random_density_matrix(n, rng),
                closedforms.dicke_state(n, n // 2, axis="x"),
            ]
            geo = lattice.LatticeGeometry(1, n)
            circ = circuits.random_brickwork(geo, 2, rng)
            trial_states.append(
                circuits.apply_circuit(_random_product_input(n, rng), circ)
            )
            for state in trial_states:
                rep = su2.su2_asymmetry(state, basis)
                margin = min(margin, rep.bound_sector_entropy - rep.delta_s + tol)
                margin = min(margin, rep.bound_support_dim - rep.delta_s + tol)
                tested += 1
        return CheckResult(
            "sector-entropy-bound",
            margin >= 0,
            margin,
            f"{tested} states: random, mixed, dicke, circuit",
        )

    def twirl_quadrature_match(self) -> CheckResult:
        rng = self.rng(20)
        tol = 1e-6
        worst = 0.0
        for n in (2, 4):
            basis = self.basis(n)
            for state in (
                states.random_state(n, rng).to_density_matrix(),
                states.random_density_matrix(n, rng),
            ):
                exact = su2.su2_twirl(state, basis)
                quad = su2.su2_twirl_haar(state)
                worst = max(worst, float(np.abs(exact.matrix - quad.matrix).max()))
        return CheckResult(
            "twirl-quadrature-match", worst <= tol, tol - worst, "group-average quadrature"
        )

    def rotation_fixed_point_iff(self) -> CheckResult:
        rng = self.rng(21)
        margin = math.inf
        for n in (2, 4):
            basis = self.basis(n)
            for _ in range(_count(5, self.samples)):
                rho = states.random_density_matrix(n, rng)
                sym = su2.su2_twirl(rho, basis)
                margin = min(margin, 1e-10 - su2.su2_asymmetry(sym, basis).delta_s)
                moved = float(np.abs(su2.su2_twirl(rho, basis).matrix - rho.matrix).max())
                if moved > 1e-6:
                    margin = min(margin, su2.su2_asymmetry(rho, basis).delta_s - 1e-10)
        return CheckResult(
            "rotation-fixed-point-iff", margin >= 0, margin, "both implications"
        )

    def collective_moment_cap(self, seeds: int | None = None) -> CheckResult:
        """Second-moment caps for gauged circuit states, main and precursor."""
        rng = self.rng(22)
        tol = 1e-9
        margin = math.inf
        total = seeds if seeds is not None else _count(100, self.samples)
        sizes = (4, 6, 8)
        for k in range(total):
            n = sizes[k % len(sizes)]
            geo = lattice.LatticeGeometry(1, n)
            depth = 1 + k % 2
            circ = circuits.random_brickwork(geo, depth, rng)
            psi = circuits.apply_circuit(_random_product_input(n, rng), circ)
            gauged, _ = su2.zero_transverse_rotation(psi)
            moments = su2.spin_moments(gauged)
            margin = min(
                margin, 1e-9 - max(abs(moments["sx"]), abs(moments["sy"]))
            )
            rep = su2.casimir_constraint_check(
                gauged, geo, 2 * lattice.lightcone_range(depth)
            )
            margin = min(margin, rep.bound - rep.lhs + tol)
            margin = min(margin, rep.bound - rep.precursor_lhs + tol)
        return CheckResult(
            "collective-moment-cap",
            margin >= 0,
            margin,
            f"{total} gauged circuit states, n=4..8",
        )

    def global_rotation_invariance(self) -> CheckResult:
        rng = self.rng(23)
        tol = 1e-9
        worst = 0.0
        for n in (2, 4):
            basis = self.basis(n)
            for _ in range(_count(5, self.samples)):
                rho = states.random_density_matrix(n, rng)
                base = su2.su2_asymmetry(rho, basis).delta_s
                umat = circuits.haar_unitary(2, rng)
                rotated = su2.su2_asymmetry(_rotate_state(rho, umat), basis).delta_s
                worst = max(worst, abs(rotated - base))
        return CheckResult(
            "global-rotation-invariance", worst <= tol, tol - worst, "asymmetry is gauge-blind"
        )

    # ---------------- closed forms ----------------

    def krawtchouk_recurrence_accuracy(self) -> CheckResult:
        n = 30
        tol = 1e-9
        worst = 0.0
        for i in range(n + 1):
            for k in range(n + 1):
                exact = closedforms.krawtchouk_exact(i, k, n)
                approx = closedforms.krawtchouk(i, k, n)
                if exact == 0:
                    worst = max(worst, abs(approx))
                else:
                    ref = float(Fraction(exact))
                    worst = max(worst, abs(approx - ref) / abs(ref))
        return CheckResult(
            "krawtchouk-recurrence-accuracy", worst <= tol, tol - worst, "all i,k at n=30"
        )

    def closed_form_vs_statevector(self) -> CheckResult:
        tol = 1e-10
        worst = 0.0
        for n in range(2, 15, 2):
            exact = closedforms.dicke_half_distribution(n // 2).probs
            brute = u1.charge_distribution(closedforms.dicke_state(n, n // 2, axis="x"))
            worst = max(worst, float(np.abs(exact - brute.probs).max()))
        for n, k in ((9, 3), (11, 4)):
            exact = closedforms.dicke_x_distribution(n, k).probs
            brute = u1.charge_distribution(closedforms.dicke_state(n, k, axis="x"))
            worst = max(worst, float(np.abs(exact - brute.probs).max()))
        for n in range(2, 15):
            exact = closedforms.kink_distribution(n).probs
            brute = u1.charge_distribution(closedforms.kink_state(n))
            worst = max(worst, float(np.abs(exact - brute.probs).max()))
        return CheckResult(
            "closed-form-vs-statevector", worst <= tol, tol - worst, "dicke and kink, n<=14"
        )

    def bernoulli_entropy_maximum(self, draws: int | None = None) -> CheckResult:
        """The homogeneous 1/2 profile maximizes the sum entropy."""
        rng = self.rng(26)
        n = 8
        ref = u1.shannon_entropy(closedforms.poisson_binomial(np.full(n, 0.5)))
        total = draws if draws is not None else _count(10000, self.samples)
        margin = math.inf
        for _ in range(total):
            x = rng.random(n)
            margin = min(margin, ref - u1.shannon_entropy(closedforms.poisson_binomial(x)))
        return CheckResult(
            "bernoulli-entropy-maximum", margin >= 0, margin, f"{total} perturbations, n=8"
        )

    def gaussian_tail_accuracy(self) -> CheckResult:
        n = 1000
        dist = closedforms.poisson_binomial(np.full(n, 0.5))
        sigma = math.sqrt(n / 4.0)
        q = np.arange(n + 1)
        normal = np.exp(-((q - n / 2.0) ** 2) / (2 * sigma**2)) / (
            sigma * math.sqrt(2 * math.pi)
        )
        sup = float(np.abs(dist.probs - normal).max())
        tol = 0.02 / sigma
        return CheckResult(
            "gaussian-tail-accuracy", sup <= tol, tol - sup, f"sup-error {sup:.2e} at n=1000"
        )

    # ---------------- clustering ----------------

    def product_state_clustering(self) -> CheckResult:
        rng = self.rng(28)
        tol = 1e-12
        worst = 0.0
        for n in (4, 6, 8):
            geo = lattice.LatticeGeometry(1, n)
            psi = _random_product_input(n, rng)
            rep = clustering.verify_cluster_property(psi, geo, 0, tol=tol)
            worst = max(worst, rep.max_violation)
            if rep.effective_range != 0:
                worst = max(worst, 1.0)
        return CheckResult(
            "product-state-clustering", worst <= tol, tol - worst, "range 0 for products"
        )

    def range_vs_spreading(self) -> CheckResult:
        """Correlations reach at most twice the measured operator spread."""
        rng = self.rng(29)
        margin = math.inf
        tested = 0
        for geo in (lattice.LatticeGeometry(1, 8), lattice.LatticeGeometry(2, 3)):
            for depth in (1, 2, 3):
                for _ in range(_count(3, self.samples)):
                    circ = circuits.random_brickwork(geo, depth, rng)
                    spread = clustering.operator_spreading_range(circ, geo)
                    psi = circuits.apply_circuit(
                        _random_product_input(geo.n_sites, rng), circ
                    )
                    rep = clustering.verify_cluster_property(psi, geo, 2 * spread, 1e-9)
                    margin = min(margin, 2 * spread - rep.effective_range + 0.5)
                    tested += 1
        return CheckResult(
            "range-vs-spreading", margin >= 0, margin, f"{tested} circuits"
        )

    def correlator_norm_cap(self) -> CheckResult:
        rng = self.rng(30)
        tol = 1e-9
        margin = math.inf
        for n in (3, 4, 5):
            state = (
                states.random_state(n, rng)
                if n % 2
                else states.random_density_matrix(n, rng)
            )
            for _ in range(_count(5, self.samples)):
                ops = []
                for _ in range(2):
                    h = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
                    h = h + h.conj().T
                    ops.append(h / np.linalg.norm(h, 2))
                val = clustering.connected_correlator(state, 0, n - 1, ops[0], ops[1])
                margin = min(margin, 2.0 - abs(val) + tol)
        return CheckResult(
            "correlator-norm-cap", margin >= 0, margin, "unit-norm observables"
        )

    def negative_controls_flagged(self) -> CheckResult:
        """Long-range states must be detected; the variance cap must fail for ghz."""
        failures = 0
        details = []
        n = 10
        geo = lattice.LatticeGeometry(1, n)
        ghz_rep = clustering.verify_cluster_property(states.ghz_state(n), geo, 0, 1e-10)
        if ghz_rep.effective_range != geo.diameter:
            failures += 1
        kink_rep = clustering.verify_cluster_property(closedforms.kink_state(n), geo, 0, 1e-10)
        if kink_rep.effective_range != geo.diameter:
            failures += 1
        dicke_geo = lattice.LatticeGeometry(1, 8)
        dicke_rep = clustering.verify_cluster_property(
            closedforms.dicke_state(8, 4, axis="x"), dicke_geo, 0, 1e-10
        )
        if dicke_rep.effective_range != dicke_geo.diameter:
            failures += 1
        var = clustering.variance_bound_check(states.ghz_state(n), geo, 0)
        if var.passed:
            failures += 1
        details.append(f"ghz variance excess {var.variance - var.bound:+.1f}")
        return CheckResult(
            "negative-controls-flagged", failures == 0, 0.5 - failures, "; ".join(details)
        )


_BOUND_CHECKS = (
    "ball_translation_invariance",
    "ball_growth_saturation",
    "spreading_within_lightcone",
    "circuit_trace_purity",
    "channel_trace_preserving",
    "entropy_unitary_invariance",
    "measurement_entropy_monotone",
    "pure_state_saturation",
    "asymmetry_log_cap",
    "massey_strict",
    "circuit_bound_chain",
    "charge_twirl_idempotent",
    "charge_fixed_point_iff",
    "symmetric_channel_monotone",
    "schur_unitarity",
    "sector_dimension_identity",
    "rotation_twirl_idempotent",
    "rotation_twirl_covariance",
    "sector_entropy_bound",
    "twirl_quadrature_match",
    "rotation_fixed_point_iff",
    "collective_moment_cap",
    "global_rotation_invariance",
    "krawtchouk_recurrence_accuracy",
    "closed_form_vs_statevector",
    "bernoulli_entropy_maximum",
    "gaussian_tail_accuracy",
    "product_state_clustering",
    "range_vs_spreading",
    "correlator_norm_cap",
    "negative_controls_flagged",
)


def bound_suite(seed: int = 0, samples: float = 1.0, names=None) -> list[CheckResult]:
    """Run the inequality battery; ``samples`` scales every random draw count."""
    runner = _SuiteRunner(seed, samples)
    wanted = None if names is None else {n.replace("-", "_") for n in names}
    results = []
    for attr in _BOUND_CHECKS:
        if wanted is not None and attr not in wanted:
            continue
        results.append(getattr(runner, attr)())
    if wanted is not None and len(results) < len(wanted):
        known = {c for c in _BOUND_CHECKS}
        missing = sorted(wanted - known)
        raise ValidationError(f"unknown check names: {missing}")
    return results


# ---------------- worked-example oracles ----------------


def _oracle_kink(rng) -> CheckResult:
    worst = 0.0
    for n in (4, 10):
        dist = closedforms.kink_distribution(n)
        brute = u1.charge_distribution(closedforms.kink_state(n))
        worst = max(worst, float(np.abs(dist.probs - brute.probs).max()))
        worst = max(worst, abs(u1.shannon_entropy(dist) - math.log(n)))
    expected = np.array([0.0, 0.25, 0.25, 0.25, 0.25])
    worst = max(worst, float(np.abs(closedforms.kink_distribution(4).probs - expected).max()))
    n = 12
    state = closedforms.kink_state(n)
    for alpha in np.linspace(0.1, 2 * math.pi - 0.1, 50):
        measured = u1.generating_function(state, alpha)
        formula = (
            np.exp(1j * alpha)
            * (np.exp(1j * alpha * n) - 1.0)
            / (n * (np.exp(1j * alpha) - 1.0))
        )
        worst = max(worst, abs(measured - formula))
    tol = 1e-12
    return CheckResult("kink-worked-examples", worst <= tol, tol - worst, "n=4,10,12")


def _oracle_dicke_coefficients(rng) -> CheckResult:
    expected = np.array([math.sqrt(3.0 / 8.0), math.sqrt(1.0 / 8.0),
                         -math.sqrt(1.0 / 8.0), -math.sqrt(3.0 / 8.0)])
    coeffs = closedforms.dicke_x_coefficients(3, 1)
    worst = float(np.abs(coeffs - expected).max())
    tol = 1e-12
    return CheckResult(
        "dicke-expansion-coefficients", worst <= tol, tol - worst, "n=3 k=1 against hand expansion"
    )


def _oracle_dicke_half(rng) -> CheckResult:
    worst = 0.0
    probs = closedforms.dicke_half_distribution(2).probs
    worst = max(worst, float(np.abs(probs - np.array([3 / 8, 0, 1 / 4, 0, 3 / 8])).max()))
    m = 11
    p = closedforms.dicke_half_distribution(m).probs
    worst = max(worst, float(np.abs(p - p[::-1]).max()))
    tol = 1e-12
    half_center = closedforms.dicke_half_charge_prob(500, 500)
    arcsine = 2.0 / (math.pi * 500.0)
    rel = abs(half_center - arcsine) / arcsine
    passed = worst <= tol and rel <= 0.01
    return CheckResult(
        "dicke-half-worked-examples",
        passed,
        min(tol - worst, 0.01 - rel),
        f"center-density relative gap {rel:.4f}",
    )


def _oracle_krawtchouk(rng) -> CheckResult:
    worst = 0.0
    n = 12
    for k in range(n + 1):
        worst = max(worst, abs(closedforms.krawtchouk(0, k, n) - 1.0))
    n = 8
    binom = np.array([closedforms.binomial(n, i) for i in range(n + 1)], dtype=float)
    kk = np.array(
        [[closedforms.krawtchouk(i, k, n) for k in range(n + 1)] for i in range(n + 1)]
    )
    gram = (kk * binom[:, None]).T @ kk
    target = np.diag([2.0**n / closedforms.binomial(n, k) for k in range(n + 1)])
    rel = float(np.abs(gram - target).max() / target.max())
    tol = 1e-9
    worst = max(worst, rel)
    return CheckResult(
        "krawtchouk-worked-examples", worst <= tol, tol - worst, "degree-0 row and orthogonality"
    )


def _oracle_bernoulli_sum(rng) -> CheckResult:
    worst = 0.0
    p3 = closedforms.poisson_binomial([1.0, 1.0, 1.0]).probs
    worst = max(worst, float(np.abs(p3 - np.array([0, 0, 0, 1.0])).max()))
    phalf = closedforms.poisson_binomial([0.5, 0.5]).probs
    worst = max(worst, float(np.abs(phalf - np.array([0.25, 0.5, 0.25])).max()))
    pmix = closedforms.poisson_binomial([0.2, 0.7]).probs
    worst = max(worst, float(np.abs(pmix - np.array([0.24, 0.62, 0.14])).max()))
    x = rng.random(9)
    dp = closedforms.poisson_binomial(x)
    k = x.size + 1
    alphas = 2 * math.pi * np.arange(k) / k
    values = np.array(
        [np.prod(np.exp(1j * a) * x + 1.0 - x) for a in alphas]
    )
    fourier = u1.distribution_from_generating_function(values, x.size + 1)
    fworst = float(np.abs(dp.probs - fourier.probs).max())
    tol = 1e-10
    worst = max(worst, fworst)
    return CheckResult(
        "bernoulli-sum-worked-examples", worst <= tol, tol - worst, "dp vs fourier inversion"
    )


def _oracle_arcsine(rng) -> CheckResult:
    arc = closedforms.arcsine_density()
    worst = abs(arc.normalization() - 1.0)
    exact = -math.log(math.pi / 4.0)
    worst = max(worst, abs(arc.entropy_integral() - exact))
    flat = closedforms.flat_density()
    worst = max(worst, abs(closedforms.continuous_asymmetry_estimate(flat, 100) - math.log(100)))
    tol = 1e-9
    m = 1000
    dist = closedforms.dicke_half_distribution(m)
    table = closedforms.density_from_distribution(dist.probs)
    est = closedforms.continuous_asymmetry_estimate(table, dist.probs.size)
    gap = abs(est - u1.shannon_entropy(dist))
    passed = worst <= tol and gap <= 0.01
    return CheckResult(
        "arcsine-and-table-integrals",
        passed,
        min(tol - worst, 0.01 - gap),
        f"table estimate within {gap:.2e} of the exact entropy",
    )


def _oracle_charge_correlators(rng) -> CheckResult:
    worst = 0.0
    n = 6
    geo = lattice.LatticeGeometry(1, n)
    psi = _random_product_input(n, rng)
    worst = max(worst, abs(clustering.connected_correlator(psi, 0, n - 1)))
    ghz = states.ghz_state(n)
    worst = max(worst, abs(clustering.connected_correlator(ghz, 0, n - 1) - 0.25))
    layer = [circuits.Gate((2 * i, 2 * i + 1), circuits.cnot_gate()) for i in range(2)]
    bell_layer = circuits.BrickworkCircuit(4, (tuple(
        circuits.Gate((2 * i,), circuits.hadamard_gate()) for i in range(2)
    ), tuple(layer)))
    bell = circuits.apply_circuit(states.zero_state(4), bell_layer)
    inside = clustering.connected_correlator(bell, 0, 1)
    across = clustering.connected_correlator(bell, 1, 2)
    worst = max(worst, abs(abs(inside) - 0.25))
    worst = max(worst, abs(across))
    plus = states.plus_state(10)
    var = clustering.variance_bound_check(plus, lattice.LatticeGeometry(1, 10), 0)
    worst = max(worst, abs(var.variance - 2.5))
    if not var.passed:
        worst = max(worst, 1.0)
    kink_var = clustering.variance_bound_check(
        closedforms.kink_state(10), lattice.LatticeGeometry(1, 10), 10
    )
    if not kink_var.passed:
        worst = max(worst, 1.0)
    tol = 1e-12
    del geo
    return CheckResult(
        "charge-correlator-examples", worst <= tol, tol - worst, "product, ghz, bell pairs"
    )


def _oracle_spreading(rng) -> CheckResult:
    worst = 0
    geo = lattice.LatticeGeometry(1, 6)
    identity = circuits.BrickworkCircuit(6, ())
    worst = max(worst, clustering.operator_spreading_range(identity, geo) - 0)
    swap_layer = circuits.BrickworkCircuit(
        6,
        (tuple(circuits.Gate((2 * i, 2 * i + 1), circuits.swap_gate()) for i in range(3)),),
    )
    worst = max(worst, abs(clustering.operator_spreading_range(swap_layer, geo) - 1))
    geo8 = lattice.LatticeGeometry(1, 8)
    circ = circuits.random_brickwork(geo8, 2, rng)
    spread = clustering.operator_spreading_range(circ, geo8)
    if spread > 2:
        worst = max(worst, spread - 2)
    return CheckResult(
        "spreading-examples", worst == 0, 0.5 - worst, "identity, swap layer, depth-2"
    )


def _oracle_polarized(rng) -> CheckResult:
    worst = 0.0
    for n in (2, 4, 6):
        basis = su2.build_schur_basis(n)
        rep = su2.su2_asymmetry(states.zero_state(n), basis)
        worst = max(worst, abs(rep.delta_s - math.log(n + 1)))
        worst = max(worst, abs(rep.bound_sector_entropy - rep.delta_s))
    tol = 1e-12
    return CheckResult(
        "polarized-rotation-asymmetry",
        worst <= tol,
        tol - worst,
        "fully polarized state saturates the sector bound",
    )


def _oracle_charge_eigenstate(rng) -> CheckResult:
    worst = 0.0
    for n, k in ((4, 2), (5, 1)):
        rep = u1.u1_asymmetry(closedforms.dicke_state(n, k, axis="z"))
        worst = max(worst, rep.delta_s)
    tol = 1e-12
    return CheckResult(
        "charge-eigenstate-null-asymmetry", worst <= tol, tol - worst, "z dicke states"
    )


def _oracle_fits(rng) -> CheckResult:
    kink_pts = [(n, u1.shannon_entropy(closedforms.kink_distribution(n)))
                for n in (100, 1000, 10000)]
    fit = closedforms.asymptotic_fit(kink_pts)
    worst = max(abs(fit.slope - 1.0), abs(fit.intercept)) / 1e-6
    ok = worst <= 1.0

    prod_pts = []
    for n in (16, 64, 256, 1024, 4096, 10000):
        dist = closedforms.poisson_binomial(np.full(n, 0.5))
        prod_pts.append((n, u1.shannon_entropy(dist)))
    pfit = closedforms.asymptotic_fit(prod_pts)
    ok = ok and abs(pfit.slope - 0.5) <= 0.01

    dicke_pts = [
        (n, u1.shannon_entropy(closedforms.dicke_half_distribution(n // 2)))
        for n in (100, 1000, 10000, 100000)
    ]
    linear = closedforms.asymptotic_fit(dicke_pts)
    corrected = closedforms.asymptotic_fit(dicke_pts, correction_power=0.5)
    ok = ok and abs(corrected.slope - 1.0) <= 0.01
    margin = 0.01 - abs(corrected.slope - 1.0)
    return CheckResult(
        "scaling-fit-examples",
        ok,
        margin,
        f"slopes: kink {fit.slope:.6f}, product {pfit.slope:.4f}, "
        f"dicke {corrected.slope:.4f} (uncorrected {linear.slope:.4f})",
    )


def _oracle_channel_purity(rng) -> CheckResult:
    bell_circ = circuits.BrickworkCircuit(
        2,
        (
            (circuits.Gate((0,), circuits.hadamard_gate()),),
            (circuits.Gate((0, 1), circuits.cnot_gate()),),
        ),
    )
    bell = circuits.apply_circuit(states.zero_state(2), bell_circ).to_density_matrix()
    p = 0.3
    flipped = circuits.apply_channel(bell, circuits.phase_flip_channel(0, p))
    # two-outcome mixture of orthogonal pure states: purity (1-p)^2 + p^2
    worst = abs(flipped.purity() - ((1 - p) ** 2 + p**2))
    depol = circuits.apply_channel(bell, circuits.depolarizing_channel(0, p))
    lam = 1.0 - 4.0 * p / 3.0
    worst = max(worst, abs(depol.purity() - (1.0 + 3.0 * lam**2) / 4.0))
    tol = 1e-12
    return CheckResult(
        "channel-purity-examples",
        worst <= tol,
        tol - worst,
        f"phase-flip 0.58, depolarizing {(1.0 + 3.0 * lam**2) / 4.0:.2f}",
    )


def _oracle_flat_saturation(rng) -> CheckResult:
    worst = 0.0
    for n in (4, 10, 1000):
        dist = u1.flat_distribution(n + 1)
        worst = max(worst, abs(u1.shannon_entropy(dist) - math.log(n + 1)))
    tol = 1e-12
    return CheckResult(
        "flat-distribution-saturation", worst <= tol, tol - worst, "uniform over n+1 charges"
    )


_ORACLE_CHECKS = (
    _oracle_kink,
    _oracle_dicke_coefficients,
    _oracle_dicke_half,
    _oracle_krawtchouk,
    _oracle_bernoulli_sum,
    _oracle_arcsine,
    _oracle_charge_correlators,
    _oracle_spreading,
    _oracle_polarized,
    _oracle_charge_eigenstate,
    _oracle_fits,
    _oracle_channel_purity,
    _oracle_flat_saturation,
)


def oracle_suite(seed: int = 0) -> list[CheckResult]:
    """Re-derive the worked examples through independent routes."""
    results = []
    for k, fn in enumerate(_ORACLE_CHECKS):
        results.append(fn(np.random.default_rng([seed, 1000 + k])))
    return results
