"""Gudermannian family and kappa-deformed exponential/logarithm functions.

All functions accept scalars or numpy arrays and broadcast like ufuncs.
Scalar input gives a Python ``float`` back.

``kappa = 0`` always selects the undeformed limit (exp, ln, 1, identity)
instead of evaluating an expression of the form 0/0.
"""

import math

import numpy as np
from scipy import integrate

from .errors import DomainError, QuadratureError

__all__ = [
    "gd",
    "gd_inv",
    "gd_derivative",
    "gd_inv_derivative",
    "gd_quadrature",
    "gd_inv_quadrature",
    "exp_kappa",
    "ln_kappa",
    "u_kappa",
    "ln_phi_closed",
    "ln_phi_quadrature",
    "deformed_mercator_y",
    "adaptive_quad",
    "POLE_GUARD",
    "QUAD_TOL",
]

#: gd_inv refuses latitudes within this distance of +-pi/2.
POLE_GUARD = 1e-12
#: Absolute tolerance requested from every adaptive quadrature.
QUAD_TOL = 1e-12


def _out(value):
    value = np.asarray(value, dtype=float)
    return float(value) if value.ndim == 0 else value


def _finite(x, name):
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise DomainError(f"{name} must be finite", field=name)
    return x


def _positive(x, name):
    x = _finite(x, name)
    if np.any(x <= 0):
        raise DomainError(f"{name} must be > 0", field=name)
    return x


def _kappa(kappa):
    if not math.isfinite(kappa) or kappa < 0:
        raise DomainError(f"kappa must be a finite number >= 0, got {kappa!r}", field="kappa")
    return float(kappa)


def adaptive_quad(f, a, b, tol=QUAD_TOL, limit=200):
    """Integrate ``f`` over ``[a, b]`` with adaptive Gauss-Kronrod (QUADPACK).

    Raises :class:`QuadratureError` carrying the achieved error estimate if
    neither the absolute ``tol`` nor a relative ``1e-13`` is reached.
    """
    value, abserr = integrate.quad(f, a, b, epsabs=tol, epsrel=1e-13, limit=limit)
    if abserr > max(tol, 1e-13 * abs(value)):
        raise QuadratureError(f"quadrature over [{a}, {b}] did not converge", abserr)
    return value


# -- Gudermannian ---------------------------------------------------------


def gd(x):
    """Gudermannian function, ``arctan(sinh(x))``.

    Odd, increasing, with range (-pi/2, pi/2).
    """
    x = _finite(x, "x")
    with np.errstate(over="ignore"):  # sinh -> inf maps to +-pi/2
        return _out(np.arctan(np.sinh(x)))


def gd_inv(theta):
    """Inverse Gudermannian, ``arsinh(tan(theta))`` for ``|theta| < pi/2``.

    Latitudes within :data:`POLE_GUARD` of the poles raise
    :class:`DomainError`; the Mercator ordinate diverges there.
    """
    theta = _finite(theta, "theta")
    if np.any(np.abs(theta) >= math.pi / 2 - POLE_GUARD):
        raise DomainError("|theta| must be < pi/2 (pole is singular)", field="theta")
    return _out(np.arcsinh(np.tan(theta)))


def gd_derivative(x):
    x = _finite(x, "x")
    return _out(1.0 / np.cosh(x))


def gd_inv_derivative(theta):
    theta = _finite(theta, "theta")
    if np.any(np.abs(theta) >= math.pi / 2 - POLE_GUARD):
        raise DomainError("|theta| must be < pi/2 (pole is singular)", field="theta")
    return _out(1.0 / np.cos(theta))


def gd_quadrature(x, tol=QUAD_TOL):
    """``gd(x)`` from its integral definition, int_0^x ds / cosh(s)."""
    x = float(_finite(x, "x"))
    return adaptive_quad(lambda s: 1.0 / math.cosh(s), 0.0, x, tol=tol)


def gd_inv_quadrature(theta, tol=QUAD_TOL):
    """``gd_inv(theta)`` from int_0^theta ds / cos(s)."""
    theta = float(_finite(theta, "theta"))
    if abs(theta) >= math.pi / 2 - POLE_GUARD:
        raise DomainError("|theta| must be < pi/2 (pole is singular)", field="theta")
    return adaptive_quad(lambda s: 1.0 / math.cos(s), 0.0, theta, tol=tol)


# -- kappa-deformed functions ---------------------------------------------


def exp_kappa(x, kappa):
    """kappa-exponential ``[k x + sqrt(1 + k^2 x^2)]^(1/k)``.

    Evaluated as ``exp(arsinh(k x) / k)``, which is the same number but does
    not cancel catastrophically for large negative ``x``.
    """
    x = _finite(x, "x")
    kappa = _kappa(kappa)
    if kappa == 0.0:
        return _out(np.exp(x))
    return _out(np.exp(np.arcsinh(kappa * x) / kappa))


def ln_kappa(x, kappa):
    """kappa-logarithm ``(x^k - x^-k) / (2k) = sinh(k ln x) / k``."""
    x = _positive(x, "x")
    kappa = _kappa(kappa)
    if kappa == 0.0:
        return _out(np.log(x))
    return _out(np.sinh(kappa * np.log(x)) / kappa)


def u_kappa(x, kappa):
    """``(x^k + x^-k) / 2 = cosh(k ln x)``; identically 1 when ``kappa = 0``."""
    x = _positive(x, "x")
    kappa = _kappa(kappa)
    if kappa == 0.0:
        return _out(np.ones_like(x))
    return _out(np.cosh(kappa * np.log(x)))


def ln_phi_closed(x, kappa):
    """phi-logarithm with ``phi(s) = s u_kappa(s)``, closed form ``gd(k ln x) / k``."""
    x = _positive(x, "x")
    kappa = _kappa(kappa)
    if kappa == 0.0:
        return _out(np.log(x))
    return _out(np.arctan(np.sinh(kappa * np.log(x))) / kappa)


def ln_phi_quadrature(x, kappa, tol=QUAD_TOL):
    """phi-logarithm by adaptive quadrature of ``1 / (s u_kappa(s))`` from 1 to x."""
    x = float(_positive(x, "x"))
    kappa = _kappa(kappa)

    def integrand(s):
        return 1.0 / (s * math.cosh(kappa * math.log(s)))

    return adaptive_quad(integrand, 1.0, x, tol=tol)


def deformed_mercator_y(chi, R):
    """Mercator ordinate as a function of ``chi = R tan(theta)``: ``R arsinh(chi / R)``.

    With ``kappa = 1/R`` this is ``ln(exp_kappa(chi))``; it tends to ``chi``
    as ``R`` grows.
    """
    chi = _finite(chi, "chi")
    if not (math.isfinite(R) and R > 0):
        raise DomainError("R must be > 0", field="R")
    return _out(R * np.arcsinh(chi / R))
