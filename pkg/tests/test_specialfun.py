"""Gudermannian and kappa-deformed functions.

Frozen reference values were computed once with 30-digit mpmath quadrature
of the defining integrals, independently of the library.
"""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from loxo import specialfun as sf
from loxo.errors import DomainError
from loxo.numerics import derivative

GD_1 = 0.865769483239658624289601846192  # int_0^1 sech
GD_INV_PI_4 = 0.88137358701954302523260932498  # int_0^{pi/4} sec
LN_PHI_5_K1 = 1.17600520709513510249122216125  # int_1^5 ds / (s u_1(s))
LN_PHI_3_K025 = 1.08505501490408319371169582641  # int_1^3 ds / (s u_0.25(s))


def test_gd_values():
    assert sf.gd(0.0) == 0.0
    assert sf.gd(1.0) == pytest.approx(GD_1, abs=1e-15)
    assert sf.gd_quadrature(1.0) == pytest.approx(GD_1, abs=1e-12)


def test_gd_rejects_non_finite():
    with pytest.raises(DomainError):
        sf.gd(float("nan"))
    with pytest.raises(DomainError):
        sf.gd(np.array([0.0, np.inf]))


@given(st.floats(-30, 30))
def test_gd_odd_and_bounded(x):
    g = sf.gd(x)
    assert abs(g) <= math.pi / 2
    assert sf.gd(-x) == -g


@given(st.floats(-5, 5))
def test_gd_tan_bridge(x):
    assert math.tan(sf.gd(x)) == pytest.approx(math.sinh(x), abs=1e-12)


def test_bridge_identities_on_grid():
    x = np.linspace(-5, 5, 2001)
    g = sf.gd(x)
    assert np.max(np.abs(np.sin(g) - np.tanh(x))) <= 1e-12
    assert np.max(np.abs(np.cos(g) - 1 / np.cosh(x))) <= 1e-12
    assert np.max(np.abs(np.tan(g) - np.sinh(x))) <= 1e-12


def test_gd_inv_values():
    assert sf.gd_inv(0.0) == 0.0
    assert sf.gd_inv(math.pi / 4) == pytest.approx(GD_INV_PI_4, abs=1e-15)
    assert sf.gd_inv(math.pi / 4) == pytest.approx(math.asinh(1.0), abs=1e-15)
    assert sf.gd_inv_quadrature(math.pi / 4) == pytest.approx(GD_INV_PI_4, abs=1e-12)
    assert sf.gd_inv(sf.gd(2.0)) == pytest.approx(2.0, abs=1e-12)


@pytest.mark.parametrize("theta", [math.pi / 2, -math.pi / 2, 2.0, math.pi / 2 - 1e-13])
def test_gd_inv_rejects_poles(theta):
    with pytest.raises(DomainError) as info:
        sf.gd_inv(theta)
    assert info.value.field == "theta"


@given(st.floats(-math.pi / 2 + 0.01, math.pi / 2 - 0.01))
def test_gd_gd_inv_roundtrip(theta):
    assert sf.gd(sf.gd_inv(theta)) == pytest.approx(theta, abs=1e-12)


def test_gd_inv_monotone():
    th = np.linspace(-1.5, 1.5, 301)
    assert np.all(np.diff(sf.gd_inv(th)) > 0)


def test_derivatives():
    assert sf.gd_derivative(0.0) == 1.0
    assert sf.gd_inv_derivative(0.0) == 1.0
    fd = derivative(sf.gd, 0.7, 1e-5)
    assert abs(sf.gd_derivative(0.7) - fd) <= 1e-8
    fd = derivative(sf.gd_inv, 0.7, 1e-5)
    assert abs(sf.gd_inv_derivative(0.7) - fd) <= 1e-8
    with pytest.raises(DomainError):
        sf.gd_inv_derivative(math.pi / 2)


def test_exp_kappa():
    assert sf.exp_kappa(0.0, 0.3) == 1.0
    assert sf.exp_kappa(0.0, 0.0) == 1.0
    assert abs(sf.exp_kappa(0.5, 1e-6) - math.exp(0.5)) <= 1e-6
    assert sf.exp_kappa(0.5, 0.0) == math.exp(0.5)
    assert sf.exp_kappa(2.0, 0.5) == pytest.approx((1 + math.sqrt(2)) ** 2, rel=1e-14)
    assert sf.ln_kappa(sf.exp_kappa(2.0, 0.5), 0.5) == pytest.approx(2.0, abs=1e-13)


def test_exp_kappa_positive_increasing():
    x = np.linspace(-50, 50, 1001)
    for k in (0.0, 0.1, 0.5, 1.0, 2.0):
        y = sf.exp_kappa(x, k)
        assert np.all(y > 0)
        assert np.all(np.diff(y) > 0)


def test_kappa_rejects_negative():
    with pytest.raises(DomainError):
        sf.exp_kappa(1.0, -0.1)
    with pytest.raises(DomainError):
        sf.ln_kappa(1.0, float("nan"))


def test_ln_kappa():
    assert sf.ln_kappa(1.0, 0.7) == 0.0
    assert sf.ln_kappa(math.e, 1.0) == pytest.approx(math.sinh(1.0), abs=1e-15)
    assert sf.ln_kappa(math.e, 1.0) == pytest.approx((math.e - 1 / math.e) / 2, abs=1e-15)
    assert sf.exp_kappa(sf.ln_kappa(3.0, 0.3), 0.3) == pytest.approx(3.0, abs=1e-12)
    assert sf.ln_kappa(2.0, 0.0) == math.log(2.0)
    with pytest.raises(DomainError):
        sf.ln_kappa(0.0, 0.5)


@given(st.floats(1e-3, 1e3), st.sampled_from([0.1, 0.5, 1.0]))
def test_ln_kappa_odd_under_reciprocal(x, k):
    assert sf.ln_kappa(1 / x, k) == pytest.approx(-sf.ln_kappa(x, k), abs=1e-12, rel=1e-12)


@given(st.floats(1e-3, 1e3), st.floats(0.0, 2.0))
def test_u_kappa_closed_forms_agree(x, k):
    u = sf.u_kappa(x, k)
    assert u >= 1.0
    assert u == pytest.approx((x**k + x**-k) / 2, rel=1e-12)


def test_u_kappa_limits_and_derivative_identity():
    assert sf.u_kappa(1.0, 0.9) == 1.0
    assert np.all(sf.u_kappa(np.array([0.1, 2.0, 50.0]), 0.0) == 1.0)
    x, k = 2.0, 0.4
    fd = derivative(lambda s: s * sf.u_kappa(s, k), x, 1e-5)
    assert abs(fd - (sf.u_kappa(x, k) + k * k * sf.ln_kappa(x, k))) <= 1e-7


def test_x_u_kappa_increasing():
    x = np.geomspace(1e-3, 1e3, 2000)
    for k in (0.0, 0.25, 0.5, 1.0):
        assert np.all(np.diff(x * sf.u_kappa(x, k)) > 0)


def test_x_u_kappa_not_monotone_beyond_kappa_one():
    # d/dx[x u_k] = cosh(z) + k sinh(z), z = k ln x, turns negative for k > 1
    x = np.geomspace(1e-3, 1.0, 200)
    assert np.any(np.diff(x * sf.u_kappa(x, 1.5)) < 0)


def test_ln_phi_closed():
    assert sf.ln_phi_closed(1.0, 0.7) == 0.0
    assert abs(sf.ln_phi_closed(2.0, 1e-6) - math.log(2.0)) <= 1e-6
    assert sf.ln_phi_closed(5.0, 1.0) == pytest.approx(math.atan(12 / 5), abs=1e-15)
    assert sf.ln_phi_closed(5.0, 1.0) == pytest.approx(LN_PHI_5_K1, abs=1e-14)
    assert sf.ln_phi_closed(3.0, 0.25) == pytest.approx(LN_PHI_3_K025, abs=1e-14)
    assert np.all(np.diff(sf.ln_phi_closed(np.linspace(0.1, 10, 100), 0.5)) > 0)


def test_ln_phi_quadrature():
    assert sf.ln_phi_quadrature(1.0, 0.3) == 0.0
    q5 = sf.ln_phi_quadrature(5.0, 1.0)
    assert abs(q5 - LN_PHI_5_K1) <= 1e-12
    assert abs(q5 - sf.ln_phi_closed(5.0, 1.0)) <= 1e-10
    assert abs(sf.ln_phi_quadrature(0.2, 1.0) + q5) <= 1e-10
    with pytest.raises(DomainError):
        sf.ln_phi_quadrature(-1.0, 1.0)


@pytest.mark.parametrize("k", [0.25, 1.0])
def test_ln_phi_quadrature_matches_closed_form_on_grid(k):
    for x in np.linspace(0.1, 10.0, 40)[1:-1]:
        assert abs(sf.ln_phi_quadrature(x, k) - sf.ln_phi_closed(x, k)) <= 1e-10


def test_deformed_mercator_y():
    assert sf.deformed_mercator_y(0.0, 3.0) == 0.0
    assert sf.deformed_mercator_y(1.0, 1e8) == pytest.approx(1.0, rel=1e-8)
    R, th = 2.0, 0.5
    assert abs(sf.deformed_mercator_y(R * math.tan(th), R) - R * sf.gd_inv(th)) <= 1e-12
    chi, k = 1.7, 0.5
    assert sf.deformed_mercator_y(chi, 1 / k) == pytest.approx(math.log(sf.exp_kappa(chi, k)), abs=1e-14)
    assert sf.deformed_mercator_y(chi, 1 / k) == pytest.approx(math.asinh(k * chi) / k, abs=1e-14)
    with pytest.raises(DomainError):
        sf.deformed_mercator_y(1.0, 0.0)


def test_vectorized_inputs_return_arrays():
    x = np.array([0.5, 1.0, 2.0])
    assert isinstance(sf.gd(x), np.ndarray)
    assert isinstance(sf.gd(1.0), float)
    np.testing.assert_allclose(sf.ln_phi_closed(x, 0.5), [sf.ln_phi_closed(v, 0.5) for v in x])
