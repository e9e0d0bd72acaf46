import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qwalk.analytic import (
    AnalyticModel,
    analytic_amplitudes,
    analytic_sigma,
    bessel_product_closed_form,
    bessel_product_sum,
    closed_form_moments,
    effective_time,
    effective_time_for_schedule,
    initial_sums,
    predict_regime,
    sigma_coefficients,
)
from qwalk.errors import InconsistentInitialData, NormalizationError
from qwalk.evolution import evolve_to
from qwalk.lattice import moments, probability, symmetric_initial_state
from qwalk.schedules import Constant, Linear, PowerLaw

H = 1 / math.sqrt(2)


def quad_time(alpha, n0, n):
    with mpmath.workdps(30):
        f = lambda x: x ** (-mpmath.mpf(alpha)) / mpmath.sqrt(2)
        return float(mpmath.quad(f, [n0, n]))


def random_model(rng, size=5, k_min=-2, n0=10):
    v = rng.normal(size=(2, size)) + 1j * rng.normal(size=(2, size))
    v /= np.linalg.norm(v)
    return AnalyticModel(n0, k_min, v[0], v[1])


def test_effective_time_examples():
    assert effective_time(0.0, 1, 101) == pytest.approx(70.71067811865475, rel=1e-14)
    assert effective_time(1.0, 10, 1000) == pytest.approx(3.2563470670302937, rel=1e-14)
    assert effective_time(0.5, 7, 7) == 0.0


@pytest.mark.parametrize("alpha", [0.0, 0.1, 0.5, 0.9, 0.999, 1.0, 1.3, 2.0, 4.0])
@pytest.mark.parametrize("n0,n", [(1, 2), (10, 1000), (50, 10**5)])
def test_effective_time_against_quadrature(alpha, n0, n):
    assert effective_time(alpha, n0, n) == pytest.approx(quad_time(alpha, n0, n), rel=1e-12)


def test_effective_time_continuous_across_one():
    at_one = effective_time(1.0, 10, 10**5)
    for a in (1 - 1e-6, 1 + 1e-6):
        assert effective_time(a, 10, 10**5) == pytest.approx(at_one, rel=1e-5)
    assert effective_time(1 - 1e-12, 10, 10**5) == pytest.approx(at_one, rel=1e-10)


def test_effective_time_vectorised_and_monotone():
    n = np.arange(10, 2000)
    t = effective_time(0.7, 10, n)
    assert t.shape == n.shape
    assert np.all(np.diff(t) > 0)


def test_effective_time_rejects_bad_range():
    with pytest.raises(ValueError):
        effective_time(0.3, 10, 5)
    with pytest.raises(ValueError):
        effective_time(0.3, 0, 5)


def test_schedule_effective_time():
    assert effective_time_for_schedule(PowerLaw(0.4), 10, 500) == effective_time(0.4, 10, 500)
    t = effective_time_for_schedule(Constant(math.pi / 3), 1, 11)
    assert t == pytest.approx(5.0, rel=1e-14)
    with pytest.warns(UserWarning, match="slowly varying"):
        effective_time_for_schedule(Linear(0.3), 1, 50)


def test_amplitudes_at_zero_are_the_reference():
    model = AnalyticModel.from_state(symmetric_initial_state(), alpha=0.3)
    state = analytic_amplitudes(model, 0.0)
    assert state.step == 0
    np.testing.assert_array_equal(state.a, model.a0)


@pytest.mark.parametrize("t", [0.5, 3.0, 40.0, 400.0])
def test_amplitudes_preserve_norm(t):
    model = random_model(np.random.default_rng(5))
    assert analytic_amplitudes(model, t).norm() == pytest.approx(1.0, abs=1e-12)


def test_amplitudes_solve_the_continuum_equation():
    # 2 da_k/dt = a_{k+1} - a_{k-1}, checked by a central difference
    model = random_model(np.random.default_rng(9))
    t, h = 6.0, 1e-4
    plus = analytic_amplitudes(model, t + h)
    minus = analytic_amplitudes(model, t - h)
    mid = analytic_amplitudes(model, t)
    da = (plus.a - minus.a) / (2 * h)
    rhs = np.zeros_like(mid.a)
    rhs[1:-1] = (mid.a[2:] - mid.a[:-2]) / 2
    np.testing.assert_allclose(da[1:-1], rhs[1:-1], atol=1e-7)


def test_amplitude_single_site_is_bessel():
    model = AnalyticModel(1, 0, [1.0], [0.0])
    state = analytic_amplitudes(model, 2.0)
    # a_k = J_{-k}(t)
    assert state.amplitude(-1)[0].real == pytest.approx(0.5767248077568734, abs=1e-15)
    assert state.amplitude(1)[0].real == pytest.approx(-0.5767248077568734, abs=1e-15)


@pytest.mark.parametrize("p", [0, 1, 2])
@pytest.mark.parametrize("nu", [-3, -2, -1, 0, 1, 2, 3])
@pytest.mark.parametrize("t", [0.0, 0.5, 1.0, 5.0, 20.0, 100.0])
def test_bessel_product_identities(p, nu, t):
    direct = bessel_product_sum(p, nu, t)
    closed = bessel_product_closed_form(p, nu, t)
    assert direct == pytest.approx(closed, abs=1e-10 * max(1.0, t * t))


def test_bessel_product_p2_sign():
    t = 5.0
    assert bessel_product_sum(2, 1, t) == pytest.approx(t / 2, abs=1e-12)
    assert bessel_product_sum(2, -1, t) == pytest.approx(-t / 2, abs=1e-12)


def test_bessel_product_rejects_p():
    with pytest.raises(ValueError):
        bessel_product_sum(3, 0, 1.0)
    with pytest.raises(ValueError):
        bessel_product_closed_form(3, 0, 1.0)


def test_initial_sums_symmetric_state():
    model = AnalyticModel.from_state(symmetric_initial_state())
    assert initial_sums(model) == (0.0, 0.0, 0.0)
    assert sigma_coefficients(model) == (0.5, 0.0, 0.0)


def test_initial_sums_by_hand():
    model = AnalyticModel(1, 0, [0.6, 0.0], [0.0, 0.8])
    # only b_1 b*_0 = 0, a_1 a*_0 = 0
    assert initial_sums(model) == (0.0, 0.0, 0.0)
    model = AnalyticModel(1, 3, [0.6, 0.8], [0.0, 0.0])
    s1, s2, s3 = initial_sums(model)
    assert s1 == pytest.approx(0.48)
    assert s2 == 0.0
    assert s3 == pytest.approx((2 * 4 - 1) * 0.48)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(0.0, 60.0), st.integers(-20, 20))
def test_closed_form_moments_match_brute_force(seed, t, k_min):
    model = random_model(np.random.default_rng(seed), k_min=k_min)
    closed = closed_form_moments(model, t)
    brute = moments(probability(analytic_amplitudes(model, t)))
    scale = max(1.0, t * t, k_min * k_min)
    assert closed.m1 == pytest.approx(brute.m1, abs=1e-10 * scale)
    assert closed.m2 == pytest.approx(brute.m2, abs=1e-10 * scale)
    coeffs = sigma_coefficients(model)
    assert coeffs.A >= 0
    assert float(coeffs.sigma(t)) == pytest.approx(brute.sigma, abs=1e-6 * max(1.0, t))


def test_inconsistent_data_raises():
    model = AnalyticModel(1, 0, [H, 0.0], [0.0, H])
    model.a0 = np.array([H, 5.0])  # tampered after validation
    with pytest.raises(InconsistentInitialData):
        sigma_coefficients(model)


def test_unnormalised_model_rejected():
    with pytest.raises(NormalizationError):
        AnalyticModel(1, 0, [1.0], [1.0])


def test_analytic_sigma_from_seeded_state():
    sched = PowerLaw(0.3)
    seed = evolve_to(symmetric_initial_state(), sched, 10)
    model = AnalyticModel.from_state(seed, alpha=0.3)
    n = np.array([10, 100, 1000])
    sig = analytic_sigma(model, n)
    assert sig[0] == pytest.approx(moments(probability(seed)).sigma, rel=1e-12)
    assert np.all(np.diff(sig) > 0)
    assert analytic_sigma(model, 1000, schedule=sched) == pytest.approx(sig[2])
    with pytest.raises(ValueError):
        analytic_sigma(AnalyticModel.from_state(seed), 100)


@pytest.mark.parametrize("alpha,regime,exponent,law", [
    (0.0, "ballistic", 1.0, "power"),
    (0.3, "sub-ballistic", 0.7, "power"),
    (0.5, "diffusive", 0.5, "power"),
    (0.8, "sub-diffusive", 0.2, "power"),
    (1.0, "sub-diffusive", 0.0, "log"),
    (2.0, "localized", 0.0, "bounded"),
])
def test_predict_regime(alpha, regime, exponent, law):
    got = predict_regime(alpha)
    assert got.regime == regime and got.law == law
    assert got.exponent == pytest.approx(exponent)


def test_predict_regime_rejects_negative():
    with pytest.raises(ValueError):
        predict_regime(-0.1)
