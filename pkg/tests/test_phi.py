import itertools
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tricontract.errors import DomainError
from tricontract.phi import (
    MAX,
    SQRTSQ,
    SUM,
    PhiFamily,
    PhiSpec,
    check_phi_axioms,
    continuity_modulus,
    phi_eval,
    phi_eval_array,
    phi_lower_bound_k,
    pnorm,
)

BUILTINS = [SUM, MAX, pnorm(2), pnorm(3), pnorm(7), SQRTSQ]
nonneg = st.floats(min_value=0.0, max_value=1e6, allow_nan=False, allow_infinity=False)


def test_eval_examples():
    assert phi_eval(SUM, 1, 2, 3) == 6
    assert phi_eval(MAX, 3, 4, 2) == 4
    assert phi_eval(SQRTSQ, 3, 3, 0) == pytest.approx(12, abs=1e-9)
    assert phi_eval(pnorm(2), 3, 4, 0) == pytest.approx(5, abs=1e-12)


@pytest.mark.parametrize("bad", [-1.0, math.inf, math.nan])
def test_eval_rejects_bad_arguments(bad):
    with pytest.raises(DomainError):
        phi_eval(SUM, 1.0, bad, 0.0)


def test_pnorm_large_p_does_not_overflow():
    assert phi_eval(pnorm(400), 1e3, 1e3, 0) == pytest.approx(1e3 * 2 ** (1 / 400))


@pytest.mark.parametrize("text,expected", [
    ("sum", SUM), ("max", MAX), ("sqrtsq", SQRTSQ), ("pnorm:2", pnorm(2)), ("pnorm:5", pnorm(5)),
])
def test_parse_roundtrip(text, expected):
    spec = PhiSpec.parse(text)
    assert spec == expected
    assert str(spec) == text


@pytest.mark.parametrize("text", ["pnorm", "pnorm:1", "pnorm:2.5", "sum:3", "median", "pnorm:x"])
def test_parse_rejects(text):
    with pytest.raises(DomainError):
        PhiSpec.parse(text)


def test_pnorm_needs_integer_p():
    with pytest.raises(DomainError):
        PhiSpec(PhiFamily.PNORM, 2.5)
    with pytest.raises(DomainError):
        PhiSpec(PhiFamily.SUM, 2)


@pytest.mark.parametrize("spec", [SUM, MAX, SQRTSQ, pnorm(2)])
def test_lower_bound_constant(spec):
    assert phi_lower_bound_k(spec) == 1


@given(a=nonneg, b=nonneg, c=nonneg)
@settings(max_examples=300)
def test_symmetry(a, b, c):
    for spec in BUILTINS:
        v = phi_eval(spec, a, b, c)
        for perm in itertools.permutations((a, b, c)):
            assert phi_eval(spec, *perm) == pytest.approx(v, rel=1e-12, abs=0)


@given(a=nonneg, b=nonneg, c=nonneg, da=nonneg, db=nonneg, dc=nonneg)
@settings(max_examples=300)
def test_monotone(a, b, c, da, db, dc):
    for spec in BUILTINS:
        lo = phi_eval(spec, a, b, c)
        assert phi_eval(spec, a + da, b + db, c + dc) >= lo * (1 - 1e-12)


@given(a=nonneg, b=nonneg, c=nonneg)
def test_lower_bound_and_zero(a, b, c):
    for spec in BUILTINS:
        v = phi_eval(spec, a, b, c)
        k = phi_lower_bound_k(spec)
        assert k * max(a, b, c) <= v * (1 + 1e-12)
        if max(a, b, c) > 1e-12:
            assert v > 0


def test_zero_at_origin():
    for spec in BUILTINS:
        assert phi_eval(spec, 0, 0, 0) == 0.0


def test_array_matches_scalar():
    import numpy as np

    rng = np.random.default_rng(3)
    a, b, c = rng.uniform(0, 10, size=(3, 200))
    a[:10] = b[:10] = c[:10] = 0.0
    for spec in BUILTINS:
        vec = phi_eval_array(spec, a, b, c)
        ref = [phi_eval(spec, *t) for t in zip(a, b, c)]
        assert np.allclose(vec, ref, rtol=1e-14, atol=0)


@pytest.mark.parametrize("spec", [SUM, MAX, SQRTSQ, pnorm(2)])
def test_axioms_pass_for_builtins(spec):
    report = check_phi_axioms(spec, grid_size=5, random_samples=1000, seed=7)
    assert report.all_ok, report.failures
    assert report.counterexample is None
    assert report.samples_used == 5**3 + 1000


def test_axioms_catch_asymmetric_functional():
    report = check_phi_axioms(lambda a, b, c: a + 2 * b + c, grid_size=5, random_samples=100, seed=7)
    assert not report.symmetric_ok
    u, v = report.counterexample
    assert sorted(u) == sorted(v)
    assert u[0] + 2 * u[1] + u[2] != v[0] + 2 * v[1] + v[2]


def test_axioms_catch_other_failures():
    # decreasing in its arguments
    r = check_phi_axioms(lambda a, b, c: max(0.0, 30.0 - a - b - c), grid_size=3, random_samples=10)
    assert not r.monotone_ok and r.counterexample is not None
    # k = 1 is not a valid lower-bound constant here
    r = check_phi_axioms(lambda a, b, c: (a + b + c) / 6, grid_size=3, random_samples=10)
    assert not r.lower_bound_ok
    # positive at the origin
    r = check_phi_axioms(lambda a, b, c: a + b + c + 1, grid_size=3, random_samples=10)
    assert not r.zero_iff_ok
    # jump discontinuity
    r = check_phi_axioms(lambda a, b, c: a + b + c + (1.0 if a > 5 else 0.0), grid_size=3, random_samples=2000)
    assert not r.continuity_sampled_ok


def test_axiom_check_preconditions():
    with pytest.raises(DomainError):
        check_phi_axioms(SUM, grid_size=1)
    with pytest.raises(DomainError):
        check_phi_axioms(SUM, random_samples=-1)


def test_modulus_sum_closed_form():
    delta = continuity_modulus(SUM, 1, 0.5, 1)
    # phi(2d, 2d, 2d) = 6d for the sum; need 6d < 2
    assert 0 < delta and 6 * delta < 2
    assert delta == pytest.approx(1 / 3, rel=1e-12)


def test_modulus_max_closed_form():
    delta = continuity_modulus(MAX, 1, 0.5, 1)
    assert 0 < delta < 1
    assert delta == pytest.approx(1.0, rel=1e-12)


@pytest.mark.parametrize("spec", [SUM, MAX, SQRTSQ, pnorm(2), pnorm(5)])
def test_modulus_satisfies_inequality_and_is_monotone(spec):
    prev = math.inf
    for eps in [10.0, 1.0, 0.1, 1e-3, 1e-6, 1e-9]:
        delta = continuity_modulus(spec, 1.0, 0.7, eps)
        assert delta > 0
        assert phi_eval(spec, 2 * delta, 2 * delta, 2 * delta) < eps * 1.0 / 0.7
        assert delta <= prev
        prev = delta


def test_modulus_returns_bracket_end_when_target_is_loose():
    assert continuity_modulus(SUM, 1.0, 0.5, 1e6) == 10.0


@pytest.mark.parametrize("alpha,eps,k", [(0.0, 1, 1), (1.0, 1, 1), (0.5, 0, 1), (0.5, 1, 0)])
def test_modulus_domain(alpha, eps, k):
    with pytest.raises(DomainError):
        continuity_modulus(SUM, k, alpha, eps)
