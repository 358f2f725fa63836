import math
import sys

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from seoq.model import (
    ConfigurationError,
    DomainError,
    ModelParameters,
    co2_per_cycle,
    co2_rate,
    cycle_costs,
    derived_coefficients,
    total_cost_approx,
    total_cost_approx_derivative,
    total_cost_exact,
    total_cost_exact_derivative,
)

from conftest import REFERENCE

mpmath.mp.dps = 40


def mp_total_exact(p, cap, Q):
    """High-precision evaluation of the per-cycle sum times D/Q."""
    Q, D = mpmath.mpf(Q), mpmath.mpf(p.D)
    co2 = p.epsilon + p.g * Q**2 / (2 * D) + p.l * Q**2 / (2 * D) * mpmath.exp(p.r * D / Q)
    per_cycle = (
        co2 * p.Ce
        + 2 * mpmath.mpf(p.beta) * p.d / p.v
        + p.gamma0 + p.gamma * Q * (p.theta + p.alpha)
        + p.Cp * cap
        + p.A + p.c * Q + p.h * Q**2 / (2 * D)
        + 2 * p.a + p.b * p.d * Q * (1 + p.alpha)
    )
    return per_cycle * D / Q


# ---- emissions ----

def test_co2_rate_reference(params):
    expected = 2000 + 750 + 7500 * mpmath.exp(mpmath.mpf("0.04"))
    assert co2_rate(params, 500) == pytest.approx(float(expected), rel=1e-14)
    assert co2_rate(params, 500) == pytest.approx(10556.08, abs=0.005)


def test_co2_rate_without_surplus(params):
    assert co2_rate(params.with_values(l=0.0), 500) == pytest.approx(2750, rel=1e-15)


def test_co2_rate_calibration_example():
    p = ModelParameters(**dict(REFERENCE, epsilon=0.0, g=0.0, l=2.0, r=0.01, D=1000.0))
    assert co2_rate(p, 10) == pytest.approx(10 * math.e, rel=1e-15)
    assert co2_rate(p, 10) == pytest.approx(27.1828, abs=5e-5)


def test_co2_per_cycle(params):
    assert co2_per_cycle(params, 500) == pytest.approx(1055.608, abs=5e-4)
    assert co2_per_cycle(params.with_values(l=0.0), 1000) == pytest.approx(500)
    flat = params.with_values(g=0.0, l=0.0)
    for Q in (1.0, 37.5, 2000.0):
        assert co2_per_cycle(flat, Q) == params.epsilon


@pytest.mark.parametrize("Q", [0.0, -1.0, math.nan, math.inf])
def test_rejects_bad_lot(params, Q):
    for fn in (lambda: co2_rate(params, Q), lambda: co2_per_cycle(params, Q),
               lambda: total_cost_exact(params, 600, Q), lambda: total_cost_approx(params, 600, Q)):
        with pytest.raises(DomainError):
            fn()


def test_rejects_bad_capacity(params):
    with pytest.raises(DomainError):
        cycle_costs(params, 0, 100)
    with pytest.raises(DomainError):
        total_cost_exact(params, -5, 100)


# ---- cost components ----

def test_cycle_costs_components(params):
    cb = cycle_costs(params, 600, 486.078)
    assert cb.c2 == pytest.approx(3600)
    assert cb.c4 == pytest.approx(1200)
    assert cb.cycle_length == pytest.approx(486.078 / 5000)
    assert cb.saturation == pytest.approx(486.078 / 600)
    assert cb.c3 == pytest.approx(20 + 5 * 486.078 * 0.2)
    assert cb.c5 == pytest.approx(1000 + 25 * 486.078 + 8 * 486.078**2 / 10000)
    assert cb.c6 == pytest.approx(160 + 4 * 3000 * 486.078 * 1.1)


def test_cycle_costs_no_disposal(params):
    p = params.with_values(gamma=0.0, gamma0=0.0)
    assert all(cycle_costs(p, 600, Q).c3 == 0 for Q in (1, 300, 599.5))


def test_full_container(params):
    assert cycle_costs(params, 600, 600).saturation == 1


def test_breakdown_rate_matches_total(params):
    for Q in (50.0, 300.0, 486.084, 900.0):
        assert cycle_costs(params, 900, Q).rate == pytest.approx(
            total_cost_exact(params, 900, Q), rel=1e-13
        )


# ---- total cost, reference values ----

@pytest.mark.parametrize("cap,Q,expected", [
    (600, 486.084, 66297295.347),
    (300, 300, 66306802.260),
    (900, 600, 66305950.560),
])
def test_total_cost_exact_reference(params, cap, Q, expected):
    assert total_cost_exact(params, cap, Q) == pytest.approx(expected, abs=0.01)


@pytest.mark.parametrize("cap,Q,expected", [
    (600, 486.078, 66297294.492),
    (900, 600, 66305950.000),
])
def test_total_cost_approx_reference(params, cap, Q, expected):
    assert total_cost_approx(params, cap, Q) == pytest.approx(expected, abs=0.01)


def test_total_cost_exact_against_mpmath(params):
    for cap, Q in [(300, 1.5), (600, 486.084), (1800, 1799.0), (900, 20.0)]:
        assert total_cost_exact(params, cap, Q) == pytest.approx(
            float(mp_total_exact(params, cap, Q)), rel=1e-13
        )


def test_approx_equals_exact_without_surplus(params):
    p = params.with_values(l=0.0)
    for Q in (10.0, 333.3, 1500.0):
        assert total_cost_approx(p, 600, Q) == pytest.approx(total_cost_exact(p, 600, Q), rel=1e-15)


# ---- derived coefficients ----

def test_derived_coefficients_reference(params):
    k, h, w = derived_coefficients(params, 600)
    assert k == pytest.approx(7986)
    assert h == pytest.approx(338)
    assert w == pytest.approx(66_133_000)
    assert math.sqrt(2 * 5000 * k / h) == pytest.approx(486.078, abs=5e-4)


def test_derived_coefficients_classical(harris):
    k, h, w = derived_coefficients(harris.with_values(c=25.0), 600)
    assert (k, h, w) == (1000, 8, 25 * 5000)


# ---- parameter validation ----

@pytest.mark.parametrize("changes", [
    dict(alpha=1.5), dict(theta=-0.1), dict(D=0.0), dict(v=0.0), dict(A=-1.0),
    dict(r=-0.1), dict(l=-1.0), dict(g=0.0, h=0.0, l=0.0), dict(Ce=0.0, h=0.0),
    dict(A=math.inf),
])
def test_invalid_parameters(changes):
    with pytest.raises(ConfigurationError):
        ModelParameters(**dict(REFERENCE, **changes))


def test_invalid_parameter_message_names_key():
    with pytest.raises(ConfigurationError, match="^alpha"):
        ModelParameters(**dict(REFERENCE, alpha=1.5))


# ---- properties ----

pos = st.floats(min_value=0.0, max_value=50.0)
param_sets = st.builds(
    lambda **kw: ModelParameters(**dict(REFERENCE, **kw)),
    A=st.floats(1.0, 5000.0), c=pos, h=st.floats(0.1, 20.0), a=pos, b=st.floats(0.0, 5.0),
    d=st.floats(0.0, 5000.0), alpha=st.floats(0.0, 1.0), D=st.floats(10.0, 20000.0),
    beta=pos, v=st.floats(1.0, 100.0), gamma=pos, gamma0=pos, theta=st.floats(0.0, 1.0),
    epsilon=st.floats(0.0, 500.0), g=st.floats(0.0, 10.0), Ce=st.floats(0.0, 20.0),
    Cp=st.floats(0.0, 5.0), r=st.floats(1e-4, 0.02), l=st.floats(0.1, 50.0),
)
lots = st.floats(min_value=1.0, max_value=5000.0)
caps = st.floats(min_value=1.0, max_value=5000.0)


@settings(max_examples=300, deadline=None)
@given(param_sets, caps, lots)
def test_approx_below_exact(p, cap, Q):
    # when the truncated terms are below float resolution the two can differ by an ulp
    exact = total_cost_exact(p, cap, Q)
    assert total_cost_approx(p, cap, Q) <= exact * (1 + 4 * sys.float_info.epsilon)
    x = p.r * p.D / Q
    truncation = p.l * p.Ce * Q / 2 * (math.expm1(x) - x - x * x / 2)
    if truncation > 1e-9 * total_cost_exact(p, cap, Q):
        assert total_cost_approx(p, cap, Q) < total_cost_exact(p, cap, Q)


@settings(max_examples=300, deadline=None)
@given(param_sets, caps, lots)
def test_approx_matches_three_coefficient_form(p, cap, Q):
    k, h, w = derived_coefficients(p, cap)
    assert total_cost_approx(p, cap, Q) == pytest.approx(k * p.D / Q + h * Q / 2 + w, rel=1e-12)


@settings(max_examples=300, deadline=None)
@given(param_sets, lots)
def test_per_cycle_times_frequency_is_rate(p, Q):
    assert co2_per_cycle(p, Q) * (p.D / Q) == pytest.approx(co2_rate(p, Q), rel=1e-13)


def _central_fd(f, Q, step):
    return (f(Q + step) - f(Q - step)) / (2 * step)


@settings(max_examples=200, deadline=None)
@given(param_sets, caps, st.floats(50.0, 5000.0))
def test_approx_derivative_matches_finite_difference(p, cap, Q):
    # mpmath keeps the difference quotient free of cancellation
    mpmath.mp.dps = 50
    k, h, w = derived_coefficients(p, cap)
    f = lambda q: k * p.D / q + h * q / 2 + w
    fd = mpmath.diff(lambda q: k * p.D / q + h * q / 2, mpmath.mpf(Q))
    analytic = total_cost_approx_derivative(p, cap, Q)
    assert analytic == pytest.approx(float(fd), rel=1e-6, abs=1e-9 * f(Q) / Q)


def test_approx_derivative_plain_finite_difference(params):
    for cap, Q in [(600, 300.0), (900, 486.0), (1800, 1200.0)]:
        f = lambda q: total_cost_approx(params, cap, q)
        fd = _central_fd(f, Q, 1e-3)
        assert total_cost_approx_derivative(params, cap, Q) == pytest.approx(fd, rel=1e-6, abs=1e-3)


@settings(max_examples=200, deadline=None)
@given(param_sets, caps, st.floats(50.0, 5000.0))
def test_exact_derivative_matches_mpmath(p, cap, Q):
    mpmath.mp.dps = 50
    fd = mpmath.diff(lambda q: mp_total_exact(p, cap, q), mpmath.mpf(Q))
    assert total_cost_exact_derivative(p, cap, Q) == pytest.approx(float(fd), rel=1e-6, abs=1e-6)


@settings(max_examples=1000, deadline=None)
@given(param_sets, caps, st.floats(5.0, 5000.0))
def test_both_costs_convex(p, cap, Q):
    mpmath.mp.dps = 50
    step = Q * 1e-3
    Qm = mpmath.mpf(Q)

    def exact(q):
        return mp_total_exact(p, cap, q)

    def approx(q):
        k, h, w = derived_coefficients(p, cap)
        return k * p.D / q + h * q / 2 + w

    for f in (exact, approx):
        second = f(Qm + step) - 2 * f(Qm) + f(Qm - step)
        assert second > 0
