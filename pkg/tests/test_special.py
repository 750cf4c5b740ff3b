import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eipld import ConvergenceError, DomainError
from eipld.special import (gen_binomial, integrate_positive_halfline, lambert_w_minus1,
                           lambert_w_minus1_log, log_gamma)

# bisection on w * exp(w) = -0.1 over [-10, -1]
W_AT_MINUS_TENTH = -3.577152063957297


def test_w_branch_point_is_minus_one():
    assert lambert_w_minus1(-math.exp(-1.0)) == -1.0


def test_w_bisection_reference():
    assert lambert_w_minus1(-0.1) == pytest.approx(W_AT_MINUS_TENTH, rel=1e-14)


def test_w_round_trip_at_minus_two():
    assert lambert_w_minus1(-2.0 * math.exp(-2.0)) == pytest.approx(-2.0, rel=1e-14)


def test_w_tiny_argument_via_log_form():
    # w + ln(-w) = ln(1e-300)
    w = lambert_w_minus1_log(math.log(1e-300))
    assert w + math.log(-w) == pytest.approx(math.log(1e-300), rel=1e-15)
    assert w == pytest.approx(-697.3227762954601, rel=1e-14)


@pytest.mark.parametrize("x", [-0.5, 0.0, 0.1, math.nan])
def test_w_outside_domain(x):
    with pytest.raises(DomainError):
        lambert_w_minus1(x)


def test_w_clamps_rounding_below_branch_point():
    assert lambert_w_minus1(-math.exp(-1.0) - 1e-17) == -1.0


def test_w_vectorized_and_monotone():
    x = -np.geomspace(math.exp(-1.0), 1e-200, 500)
    w = lambert_w_minus1(x)
    assert w.shape == x.shape
    assert np.all(np.diff(w) < 0)


@settings(max_examples=300, deadline=None)
@given(st.floats(min_value=-math.exp(-1.0), max_value=-1e-300))
def test_w_defining_equation(x):
    w = lambert_w_minus1(x)
    assert w <= -1.0
    # residual in log form is well conditioned everywhere on the branch
    if w < -1.0 + 1e-6:
        assert w + math.log(-w) == pytest.approx(math.log(-x), rel=1e-12, abs=1e-12)


@pytest.mark.parametrize("x, expected", [(1.0, 0.0), (5.0, math.log(24.0)),
                                         (0.5, 0.5723649429247001)])
def test_log_gamma(x, expected):
    assert log_gamma(x) == pytest.approx(expected, abs=1e-14)


def test_log_gamma_rejects_nonpositive():
    with pytest.raises(DomainError):
        log_gamma(0.0)


@pytest.mark.parametrize("a, i, expected", [(2.5, 2, 1.875), (7.3, 0, 1.0), (3, 4, 0.0),
                                            (-0.5, 3, -0.3125)])
def test_gen_binomial(a, i, expected):
    assert gen_binomial(a, i) == pytest.approx(expected, abs=1e-15)


def test_gen_binomial_matches_integer_binomial():
    for n in range(8):
        for i in range(n + 3):
            assert gen_binomial(n, i) == math.comb(n, i)


@pytest.mark.parametrize("f, exact", [
    (lambda x: np.exp(-x), 1.0),
    (lambda x: x * np.exp(-x), 1.0),
    (lambda x: (1.0 / np.hypot(1.0, x)) ** 2, math.pi / 2),
    (lambda x: x ** -0.5 * np.exp(-x), math.sqrt(math.pi)),
])
def test_halfline_quadrature(f, exact):
    res = integrate_positive_halfline(f, tol=1e-12)
    assert abs(res.value - exact) <= 1e-10
    assert res.abs_error_estimate < 1e-9
    assert res.evaluations > 0


def test_halfline_quadrature_reports_failure():
    with pytest.raises(ConvergenceError) as err:
        integrate_positive_halfline(lambda x: 1.0 / x, tol=1e-12, max_intervals=50)
    assert err.value.estimate is not None
