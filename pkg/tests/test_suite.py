import numpy as np
import pytest

from asymlab import suite
from asymlab.errors import ValidationError
from asymlab.suite import CheckResult, all_passed, bound_suite, oracle_suite


def test_check_result_line_format():
    res = CheckResult("demo-check", True, 1.5e-3, "detail text")
    line = res.line()
    assert line.startswith("pass")
    assert "demo-check" in line and "+1.500e-03" in line
    bad = CheckResult("demo-check", False, -2.0)
    assert bad.line().startswith("FAIL")


def test_check_result_coerces_numpy_scalars():
    res = CheckResult("x", np.bool_(True), np.float64(0.25))
    assert isinstance(res.passed, bool)
    assert isinstance(res.margin, float)


def test_name_filter_accepts_hyphens_and_underscores():
    a = bound_suite(names=["massey-strict"])
    b = bound_suite(names=["massey_strict"])
    assert len(a) == len(b) == 1
    assert a[0].name == "massey-strict"
    assert a[0].margin == b[0].margin


def test_unknown_check_name_raises():
    with pytest.raises(ValidationError):
        bound_suite(names=["no-such-check"])


def test_bound_suite_is_deterministic_per_seed():
    names = ["charge-fixed-point-iff", "symmetric-channel-monotone"]
    a = bound_suite(seed=5, samples=0.2, names=names)
    b = bound_suite(seed=5, samples=0.2, names=names)
    assert [r.margin for r in a] == [r.margin for r in b]
    c = bound_suite(seed=6, samples=0.2, names=names)
    assert [r.margin for r in a] != [r.margin for r in c]


def test_bound_suite_passes_across_seeds_reduced():
    names = [
        "circuit-bound-chain",
        "pure-state-saturation",
        "collective-moment-cap",
        "bernoulli-entropy-maximum",
    ]
    for seed in (1, 2, 3):
        results = bound_suite(seed=seed, samples=0.05, names=names)
        assert all_passed(results), [r.line() for r in results if not r.passed]


def test_full_bound_suite_default_samples():
    results = bound_suite(seed=0, samples=1.0)
    assert len(results) == 31
    assert all_passed(results), "\n".join(r.line() for r in results if not r.passed)


def test_oracle_suite_passes_and_is_deterministic():
    a = oracle_suite(seed=0)
    assert all_passed(a)
    b = oracle_suite(seed=0)
    assert [r.margin for r in a] == [r.margin for r in b]
    assert len(a) == 13


def test_mutated_massey_bound_is_caught(monkeypatch):
    original = suite.u1.massey_bound
    monkeypatch.setattr(suite.u1, "massey_bound", lambda v: original(v) - 0.5)
    results = bound_suite(names=["massey-strict"])
    assert not all_passed(results)


def test_mutated_closed_form_is_caught(monkeypatch):
    original = suite.closedforms.dicke_half_distribution

    def skewed(m):
        d = original(m)
        p = np.array(d.probs)
        p[0] += 1e-6
        p /= p.sum()
        from asymlab.u1 import ChargeDistribution

        return ChargeDistribution.from_probs(p)

    monkeypatch.setattr(suite.closedforms, "dicke_half_distribution", skewed)
    results = bound_suite(names=["closed-form-vs-statevector"])
    assert not all_passed(results)


def test_mutated_lightcone_is_caught(monkeypatch):
    # halving the certified spread makes depth-2 circuits look range-1
    monkeypatch.setattr(suite.lattice, "lightcone_range", lambda d: max(0, d - 1))
    results = bound_suite(seed=0, samples=0.2, names=["circuit-bound-chain"])
    assert not all_passed(results)
