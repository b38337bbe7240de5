import math
from fractions import Fraction

import numpy as np
import pytest
from numpy.testing import assert_allclose

from asymlab.closedforms import (
    arcsine_density,
    asymptotic_fit,
    binomial,
    continuous_asymmetry_estimate,
    density_from_distribution,
    dicke_half_charge_prob,
    dicke_half_distribution,
    dicke_state,
    dicke_x_coefficients,
    dicke_x_distribution,
    flat_density,
    kink_distribution,
    kink_state,
    krawtchouk,
    krawtchouk_exact,
    log_binomial,
    poisson_binomial,
    product_charge_state,
    table_density,
)
from asymlab.errors import ValidationError
from asymlab.u1 import charge_distribution, shannon_entropy


def test_log_binomial_matches_exact():
    for n in (5, 30, 200):
        for k in (0, 1, n // 2, n):
            assert_allclose(log_binomial(n, k), math.log(math.comb(n, k)), rtol=1e-12)
    assert binomial(10, 3) == 120.0
    assert binomial(10, 11) == 0.0


def test_krawtchouk_base_cases_and_symmetry():
    n = 12
    for k in range(n + 1):
        assert krawtchouk(0, k, n) == 1.0
        # K_1(k) = 1 - 2k/n
        assert_allclose(krawtchouk(1, k, n), 1.0 - 2.0 * k / n, atol=1e-14)
    for i in range(n + 1):
        for k in range(n + 1):
            assert_allclose(krawtchouk(i, k, n), krawtchouk(k, i, n), atol=1e-12)


def test_krawtchouk_recurrence_against_exact_fractions():
    n = 25
    for i in range(n + 1):
        for k in range(n + 1):
            exact = krawtchouk_exact(i, k, n)
            approx = krawtchouk(i, k, n)
            if exact == 0:
                assert abs(approx) < 1e-12
            else:
                assert_allclose(approx, float(Fraction(exact)), rtol=1e-10)


def test_krawtchouk_orthogonality():
    n = 10
    weights = np.array([math.comb(n, k) for k in range(n + 1)], dtype=float)
    for i in range(n + 1):
        for j in range(i, n + 1):
            ip = sum(
                weights[k] * krawtchouk(i, k, n) * krawtchouk(j, k, n)
                for k in range(n + 1)
            )
            expected = 2**n / math.comb(n, i) if i == j else 0.0
            assert_allclose(ip, expected, atol=1e-8 * 2**n)


def test_dicke_state_weights():
    psi = dicke_state(4, 2)
    probs = psi.probabilities()
    support = np.flatnonzero(probs > 0)
    assert support.size == 6
    assert_allclose(probs[support], np.full(6, 1.0 / 6.0))
    with pytest.raises(ValidationError):
        dicke_state(3, 4)


def test_dicke_x_coefficients_match_statevector():
    for n, k in ((3, 1), (6, 3), (9, 4)):
        coeffs = dicke_x_coefficients(n, k)
        psi = dicke_state(n, k, axis="x")
        for i in range(n + 1):
            overlap = np.vdot(dicke_state(n, i).amplitudes, psi.amplitudes)
            assert_allclose(overlap.real, coeffs[i], atol=1e-11)
            assert abs(overlap.imag) < 1e-12


def test_dicke_n3_k1_worked_coefficients():
    got = dicke_x_coefficients(3, 1)
    want = np.array(
        [math.sqrt(3.0 / 8.0), math.sqrt(1.0 / 8.0), -math.sqrt(1.0 / 8.0), -math.sqrt(3.0 / 8.0)]
    )
    assert_allclose(got, want, atol=1e-12)


def test_dicke_half_distribution_closed_form():
    d = dicke_half_distribution(2)
    assert_allclose(d.probs, [3.0 / 8.0, 0.0, 1.0 / 4.0, 0.0, 3.0 / 8.0], atol=1e-14)
    # symmetric under q -> 2m - q
    d = dicke_half_distribution(7)
    assert_allclose(d.probs, d.probs[::-1], atol=1e-14)


def test_dicke_half_matches_statevector():
    for m in (1, 2, 3, 5):
        exact = dicke_half_distribution(m).probs
        brute = charge_distribution(dicke_state(2 * m, m, axis="x")).probs
        assert_allclose(exact, brute, atol=1e-12)


def test_dicke_half_large_m_normalizes():
    d = dicke_half_distribution(200000)
    assert_allclose(d.probs.sum(), 1.0, atol=1e-12)
    # center density approaches the arcsine value 2/(pi N)
    n = 400000
    assert_allclose(d.probs[n // 2] , 2.0 / (math.pi * n) * 2.0, rtol=0.01)


def test_dicke_general_k_distribution_matches_statevector():
    for n, k in ((9, 3), (11, 4)):
        exact = dicke_x_distribution(n, k).probs
        brute = charge_distribution(dicke_state(n, k, axis="x")).probs
        assert_allclose(exact, brute, atol=1e-11)


def test_kink_distribution_flat_over_n_charges():
    for n in (1, 4, 10, 1000):
        d = kink_distribution(n)
        assert d.probs[0] == 0.0
        assert_allclose(d.probs[1:], np.full(n, 1.0 / n), atol=1e-15)
        assert_allclose(shannon_entropy(d), math.log(n), atol=1e-12)


def test_kink_state_matches_distribution():
    for n in (2, 5, 9):
        brute = charge_distribution(kink_state(n)).probs
        assert_allclose(brute, kink_distribution(n).probs, atol=1e-13)


def test_poisson_binomial_homogeneous_is_binomial():
    n = 12
    d = poisson_binomial(np.full(n, 0.5))
    binom = np.array([math.comb(n, k) for k in range(n + 1)]) / 2.0**n
    assert_allclose(d.probs, binom, atol=1e-14)
    assert_allclose(d.variance, n / 4.0)


def test_poisson_binomial_heterogeneous_worked_example():
    d = poisson_binomial([0.2, 0.7])
    assert_allclose(d.probs, [0.8 * 0.3, 0.2 * 0.3 + 0.8 * 0.7, 0.2 * 0.7], atol=1e-15)


def test_product_charge_state_matches_poisson_binomial():
    x = np.array([0.1, 0.5, 0.9, 0.3])
    psi = product_charge_state(x)
    assert_allclose(
        charge_distribution(psi).probs, poisson_binomial(x).probs, atol=1e-13
    )


def test_flat_and_arcsine_density_integrals():
    flat = flat_density()
    assert_allclose(flat.normalization(), 1.0, atol=1e-10)
    assert_allclose(flat.entropy_integral(), 0.0, atol=1e-10)
    arc = arcsine_density()
    assert_allclose(arc.normalization(), 1.0, atol=1e-10)
    # integral p ln p = -ln(pi/4) for the arcsine law
    assert_allclose(arc.entropy_integral(), -math.log(math.pi / 4.0), atol=1e-10)


def test_continuous_asymmetry_estimate():
    n = 1000
    est = continuous_asymmetry_estimate(arcsine_density(), n)
    assert_allclose(est, math.log(n) + math.log(math.pi / 4.0), atol=1e-10)
    with pytest.raises(ValidationError):
        continuous_asymmetry_estimate(table_density([1.0, 3.0], normalize=False), 10)


def test_table_density_estimates_the_dicke_profile():
    m = 500
    probs = dicke_half_distribution(m).probs
    density = density_from_distribution(probs)
    est = continuous_asymmetry_estimate(density, 2 * m + 1)
    exact = shannon_entropy(dicke_half_distribution(m))
    # histogram estimate of the entropy converges at the percent level
    assert abs(est - exact) < 0.02


def test_asymptotic_fit_recovers_exact_line():
    pts = [(10.0**k, 2.0 * math.log(10.0**k) - 1.0) for k in range(1, 5)]
    fit = asymptotic_fit(pts)
    assert_allclose(fit.slope, 2.0, atol=1e-12)
    assert_allclose(fit.intercept, -1.0, atol=1e-12)
    assert fit.max_residual < 1e-12
    assert fit.correction is None


def test_asymptotic_fit_with_correction_term():
    rng = np.random.default_rng(2)
    ns = np.array([100.0, 1000.0, 10000.0, 100000.0, 1000000.0])
    vals = 1.5 * np.log(ns) + 0.25 + 3.0 / np.sqrt(ns)
    fit = asymptotic_fit(list(zip(ns, vals)), correction_power=0.5)
    assert_allclose(fit.slope, 1.5, atol=1e-10)
    assert_allclose(fit.intercept, 0.25, atol=1e-10)
    assert_allclose(fit.correction, 3.0, atol=1e-8)
    # plain fit over the same data misreads the slope
    plain = asymptotic_fit(list(zip(ns, vals)))
    assert abs(plain.slope - 1.5) > 1e-3


def test_asymptotic_fit_validation():
    with pytest.raises(ValidationError):
        asymptotic_fit([(10.0, 1.0), (100.0, 2.0)])
    with pytest.raises(ValidationError):
        asymptotic_fit([(10.0, 1.0), (10.0, 2.0), (10.0, 3.0)])
    with pytest.raises(ValidationError):
        asymptotic_fit([(10.0, 1.0), (20.0, 2.0), (30.0, 3.0)], correction_power=0.5)
