import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

import oracles
from dqwalk import (
    DEFAULT_HALF_WIDTH,
    LimitLaw,
    bias_coefficient,
    konno_density,
    limit_cdf,
    limit_density,
    limit_moment,
)

A = DEFAULT_HALF_WIDTH


def quad_cdf(x, m):
    """Adaptive-quadrature oracle for the CDF (singular endpoints declared)."""
    val, err = integrate.quad(
        lambda u: konno_density(u, A) * (1 - m * u), -A, x,
        points=[-A], limit=200,
    )
    assert err < 1e-8
    return val


def test_density_peak_value():
    assert abs(konno_density(0.0, A) - 1 / math.pi) < 1e-15


def test_density_midpoint_value():
    expected = math.sqrt(0.5) / (math.pi * 0.75 * 0.5)
    assert abs(konno_density(0.5, A) - expected) < 1e-15
    assert abs(expected - 0.60021) < 5e-6


def test_density_vanishes_outside_support():
    assert konno_density(0.75, A) == 0.0
    assert konno_density(-2.0, A) == 0.0
    assert konno_density(A, A) == 0.0


def test_density_parameter_validation():
    with pytest.raises(ValueError):
        konno_density(0.0, 0.0)
    with pytest.raises(ValueError):
        konno_density(0.0, 1.0)


def test_density_vectorized():
    xs = np.array([-1.0, -0.5, 0.0, 0.5, 1.0])
    vals = konno_density(xs, A)
    assert vals.shape == xs.shape
    assert vals[0] == vals[-1] == 0.0
    assert vals[2] == pytest.approx(1 / math.pi)


def test_bias_coefficient_examples():
    assert bias_coefficient(1.0, 0.0, 0.0) == pytest.approx(1.0, abs=1e-15)
    m = bias_coefficient(1 / math.sqrt(2), 1j / math.sqrt(2), 0.0)
    assert m == pytest.approx(0.0, abs=1e-15)
    m = bias_coefficient(1 / math.sqrt(2), 1 / math.sqrt(2), math.pi)
    assert m == pytest.approx(-1.0, abs=1e-15)


def test_bias_coefficient_requires_normalization():
    with pytest.raises(ValueError):
        bias_coefficient(1.0, 1.0, 0.0)


def test_limit_density_reduces_to_symmetric_law():
    law = LimitLaw(m=0.0)
    xs = np.linspace(-0.7, 0.7, 101)
    np.testing.assert_allclose(limit_density(xs, law), konno_density(xs, A),
                               atol=1e-15)
    assert limit_density(0.0, law) == pytest.approx(1 / math.pi)


def test_limit_density_biased_value():
    law = LimitLaw(m=1.0)
    expected = konno_density(0.5, A) * 0.5
    assert limit_density(0.5, law) == pytest.approx(expected, abs=1e-15)
    assert abs(expected - 0.30011) < 5e-6


@pytest.mark.parametrize("m", [-1.0, -0.5, 0.0, 0.5, 1.0])
def test_density_nonnegative_on_support(m):
    xs = np.linspace(-A + 1e-9, A - 1e-9, 2001)
    assert np.all(limit_density(xs, LimitLaw(m=m)) >= 0.0)


@settings(deadline=None, max_examples=100)
@given(
    st.floats(min_value=-0.999, max_value=0.999),
    st.floats(min_value=-0.7, max_value=0.7),
)
def test_density_mirror_symmetry(m, x):
    f_plus = limit_density(x, LimitLaw(m=m))
    f_minus = limit_density(-x, LimitLaw(m=-m))
    assert abs(f_plus - f_minus) < 1e-14


@pytest.mark.parametrize("m", [-1.0, -0.5, 0.0, 0.5, 1.0])
def test_normalization(m):
    assert abs(limit_moment(0, LimitLaw(m=m)) - 1.0) <= 1e-10


def test_cdf_support_endpoints():
    law = LimitLaw(m=0.3)
    assert limit_cdf(-A, law) == 0.0
    assert limit_cdf(A, law) == 1.0
    assert limit_cdf(-1.0, law) == 0.0
    assert limit_cdf(1.0, law) == 1.0


def test_cdf_symmetric_median():
    assert abs(limit_cdf(0.0, LimitLaw(m=0.0)) - 0.5) < 1e-14


def test_cdf_biased_at_origin():
    # Frozen from two independent oracles (closed form and adaptive
    # quadrature): F(0) = 1/2 - m * int_{-a}^{0} x f_K dx = 3/4 at m = 1.
    law = LimitLaw(m=1.0)
    assert abs(limit_cdf(0.0, law) - 0.75) < 1e-10
    assert abs(oracles.closed_form_cdf(0.0, 1.0) - 0.75) < 1e-15
    assert abs(quad_cdf(0.0, 1.0) - 0.75) < 1e-8


@pytest.mark.parametrize("m", [-1.0, 0.0, 0.7])
def test_cdf_against_oracles(m):
    law = LimitLaw(m=m)
    xs = np.linspace(-0.69, 0.69, 31)
    ours = limit_cdf(xs, law)
    closed = np.array([oracles.closed_form_cdf(float(x), m) for x in xs])
    assert np.max(np.abs(ours - closed)) < 1e-13
    spot = [-0.6, -0.2, 0.33, 0.64]
    for x in spot:
        assert abs(limit_cdf(x, law) - quad_cdf(x, m)) < 1e-8


def test_cdf_monotone():
    law = LimitLaw(m=0.9)
    xs = np.linspace(-A, A, 4001)
    vals = limit_cdf(xs, law)
    assert np.all(np.diff(vals) >= -1e-14)


@pytest.mark.parametrize("m", [0.0, 0.8])
def test_quantile_round_trip(m):
    law = LimitLaw(m=m)
    for u in np.linspace(0.01, 0.99, 21):
        x = law.quantile(float(u))
        assert abs(limit_cdf(x, law) - u) < 1e-8
    assert law.quantile(0.0) == -A
    assert law.quantile(1.0) == A


def test_moment_basics():
    law0 = LimitLaw(m=0.0)
    assert limit_moment(0, law0) == pytest.approx(1.0, abs=1e-12)
    assert limit_moment(1, law0) == pytest.approx(0.0, abs=1e-14)


def test_second_moment_closed_form():
    expected = oracles.closed_form_even_moment(2)
    assert abs(expected - (1 - 1 / math.sqrt(2))) < 1e-15
    for m in (-1.0, -0.3, 0.0, 0.5, 1.0):
        assert abs(limit_moment(2, LimitLaw(m=m)) - expected) <= 1e-10


def test_first_moment_fully_biased():
    got = limit_moment(1, LimitLaw(m=1.0))
    assert abs(got + (1 - 1 / math.sqrt(2))) <= 1e-10


def test_fourth_moment_against_quadrature():
    law = LimitLaw(m=0.4)
    ref, err = integrate.quad(
        lambda u: u**4 * konno_density(u, A) * (1 - law.m * u),
        -A, A, points=[-A, A], limit=300,
    )
    assert abs(limit_moment(4, law) - ref) < max(1e-9, 10 * err)


def test_odd_moments_linear_in_bias():
    base = LimitLaw(m=0.0)
    for r in (1, 3):
        drop = limit_moment(r + 1, base)
        for m in (-1.0, -0.4, 0.2, 1.0):
            got = limit_moment(r, LimitLaw(m=m))
            expected = limit_moment(r, base) - m * drop
            assert abs(got - expected) < 1e-12


def test_even_moments_bias_independent():
    for r in (0, 2, 4):
        ref = limit_moment(r, LimitLaw(m=0.0))
        for m in (-1.0, 0.6):
            assert abs(limit_moment(r, LimitLaw(m=m)) - ref) < 1e-12


def test_law_validation():
    with pytest.raises(ValueError):
        LimitLaw(a=0.0)
    with pytest.raises(ValueError):
        LimitLaw(a=1.2)
    with pytest.raises(ValueError):
        LimitLaw(m=1.5)
    with pytest.raises(ValueError):
        LimitLaw(m=float("nan"))
    with pytest.raises(ValueError):
        LimitLaw().quantile(1.5)
    with pytest.raises(ValueError):
        limit_moment(-1, LimitLaw())
