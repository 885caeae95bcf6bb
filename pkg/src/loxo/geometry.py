"""Charts, frames and connection-level tensors on two-dimensional surfaces.

Index conventions
-----------------
Vielbein matrices are stored as ``e[i, mu]`` (frame index first) and their
inverses as ``E[mu, i]`` so that ``E @ e`` is the 2x2 identity.

Connection coefficients are stored as ``Gamma[rho, mu, nu]`` with ``mu`` the
differentiation index::

    Gamma[rho, mu, nu] = E[rho, i] * d_mu e[i, nu]

On the sphere the only nonzero slot is ``Gamma[phi, theta, phi] = -tan(theta)``.
Torsion is ``T[rho, mu, nu] = Gamma[rho, mu, nu] - Gamma[rho, nu, mu]``, which
makes ``T[phi, theta, phi] = -tan(theta)`` on the sphere.
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional

import numpy as np

from . import specialfun as sf
from .errors import DomainError, NumericError
from .numerics import CURVATURE_STEP, FD_REL_STEP, central_partials, fd_steps, jacobian

#: Field evaluations on the sphere stay this far away from the poles.
SPHERE_FIELD_GUARD = 1e-6
#: Course angles closer than this to pi/2 are treated as pi/2.
COURSE_GUARD = 1e-12


class ChartId(Enum):
    SPHERE_GEOGRAPHIC = "sphere"
    MERCATOR_PLANE = "mercator"
    PSEUDOSPHERE = "pseudosphere"
    FLATTENED_PLANE = "flattened"
    GAUSS_NORMALIZED = "gauss"
    GAUSS_PARAMS = "gauss-params"

    @property
    def coordinate_names(self):
        return _COORD_NAMES[self]

    def validate(self, a, b):
        """Raise :class:`DomainError` if ``(a, b)`` is not a point of this chart.

        Longitudes (``phi`` on the sphere and the pseudosphere) are treated
        as unwrapped angles and are only required to be finite.
        """
        names = self.coordinate_names
        for name, value in zip(names, (a, b)):
            if not math.isfinite(value):
                raise DomainError(f"{name} must be finite", field=name)
        if self is ChartId.SPHERE_GEOGRAPHIC and abs(b) >= math.pi / 2:
            raise DomainError("latitude must satisfy |theta| < pi/2", field="theta")
        if self is ChartId.PSEUDOSPHERE and b < 0:
            raise DomainError("pseudosphere requires u >= 0", field="u")
        if self is ChartId.GAUSS_NORMALIZED and b < 1:
            raise DomainError("normalized scale requires sigma~ >= 1", field="sigma_n")
        if self is ChartId.GAUSS_PARAMS and b <= 0:
            raise DomainError("sigma must be > 0", field="sigma")

    def validate_field_point(self, q):
        """Domain check used before evaluating frames and connections.

        Stricter than :meth:`validate` on the sphere, where the frame
        degenerates at the poles.
        """
        a, b = float(q[0]), float(q[1])
        self.validate(a, b)
        if self is ChartId.SPHERE_GEOGRAPHIC and abs(b) > math.pi / 2 - SPHERE_FIELD_GUARD:
            raise DomainError(
                f"|theta| must be <= pi/2 - {SPHERE_FIELD_GUARD:g} for field evaluation",
                field="theta",
            )


_COORD_NAMES = {
    ChartId.SPHERE_GEOGRAPHIC: ("phi", "theta"),
    ChartId.MERCATOR_PLANE: ("x", "y"),
    ChartId.PSEUDOSPHERE: ("phi", "u"),
    ChartId.FLATTENED_PLANE: ("x_f", "y_f"),
    ChartId.GAUSS_NORMALIZED: ("mu_n", "sigma_n"),
    ChartId.GAUSS_PARAMS: ("mu", "sigma"),
}


@dataclass(frozen=True)
class Point2:
    chart: ChartId
    a: float
    b: float

    def __post_init__(self):
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "b", float(self.b))
        self.chart.validate(self.a, self.b)

    @property
    def coords(self):
        return np.array([self.a, self.b])


def _coords(p):
    if isinstance(p, Point2):
        return p.coords
    return np.asarray(p, dtype=float)


@dataclass(frozen=True)
class Vielbein2:
    """Point-dependent frame ``e[i, mu]`` with inverse ``E[mu, i]``.

    ``de``, when given, returns the analytic derivative array
    ``de[mu, i, nu] = d_mu e[i, nu]``; without it every derivative is taken
    by central differences. ``E`` defaults to the matrix inverse of ``e``.
    """

    chart: ChartId
    e: Callable[[np.ndarray], np.ndarray]
    E: Optional[Callable[[np.ndarray], np.ndarray]] = None
    R: float = 1.0
    de: Optional[Callable[[np.ndarray], np.ndarray]] = None
    name: str = "custom"

    def frame(self, p):
        q = _coords(p)
        self.chart.validate_field_point(q)
        return np.asarray(self.e(q), dtype=float)

    def inverse(self, p):
        q = _coords(p)
        self.chart.validate_field_point(q)
        if self.E is None:
            return np.linalg.inv(np.asarray(self.e(q), dtype=float))
        return np.asarray(self.E(q), dtype=float)

    def derivative(self, p, method="auto"):
        """``d_mu e[i, nu]`` stacked as ``[mu, i, nu]``."""
        q = _coords(p)
        self.chart.validate_field_point(q)
        if method == "analytic" or (method == "auto" and self.de is not None):
            if self.de is None:
                raise ValueError(f"vielbein {self.name!r} has no analytic derivative")
            return np.asarray(self.de(q), dtype=float)
        if method not in ("auto", "fd"):
            raise ValueError(f"unknown method {method!r}")
        return central_partials(
            lambda x: self.e(x), q, fd_steps(q, FD_REL_STEP), check=self.chart.validate_field_point
        )


@dataclass(frozen=True)
class MetricField:
    chart: ChartId
    g: Callable[[np.ndarray], np.ndarray]

    def __call__(self, p):
        return np.asarray(self.g(_coords(p)), dtype=float)


@dataclass(frozen=True)
class ConnectionField:
    chart: ChartId
    gamma: Callable[[np.ndarray], np.ndarray]
    label: str = ""

    def __call__(self, p):
        return np.asarray(self.gamma(_coords(p)), dtype=float)


@dataclass(frozen=True)
class TorsionField:
    chart: ChartId
    T: Callable[[np.ndarray], np.ndarray]

    def __call__(self, p):
        return np.asarray(self.T(_coords(p)), dtype=float)


@dataclass(frozen=True)
class CurvatureField:
    chart: ChartId
    riem: Callable[[np.ndarray], np.ndarray]
    step: float = field(default=CURVATURE_STEP)

    def __call__(self, p):
        return np.asarray(self.riem(_coords(p)), dtype=float)


# -- Mercator projection -------------------------------------------------------


def _check_radius(R):
    if not (math.isfinite(R) and R > 0):
        raise DomainError("R must be a positive length", field="R")


def mercator_forward(p, R=1.0, phi0=0.0):
    """Map a geographic point ``(phi, theta)`` to Mercator ``(x, y)``."""
    _check_radius(R)
    if p.chart is not ChartId.SPHERE_GEOGRAPHIC:
        raise DomainError(f"expected a SphereGeographic point, got {p.chart.value}", field="chart")
    return Point2(ChartId.MERCATOR_PLANE, R * (p.a - phi0), R * sf.gd_inv(p.b))


def mercator_inverse(p, R=1.0, phi0=0.0):
    """Map Mercator ``(x, y)`` back to ``(phi, theta)``; theta stays inside (-pi/2, pi/2)."""
    _check_radius(R)
    if p.chart is not ChartId.MERCATOR_PLANE:
        raise DomainError(f"expected a MercatorPlane point, got {p.chart.value}", field="chart")
    theta = sf.gd(p.b / R)
    # arctan(sinh(y)) rounds to pi/2 once y/R exceeds ~37
    if abs(theta) >= math.pi / 2:
        theta = math.copysign(math.nextafter(math.pi / 2, 0.0), theta)
    return Point2(ChartId.SPHERE_GEOGRAPHIC, phi0 + p.a / R, theta)


# -- built-in frames -------------------------------------------------------------


def sphere_vielbein(R=1.0):
    """Frame ``diag(R cos(theta), R)`` on geographic coordinates ``(phi, theta)``."""
    _check_radius(R)

    def e(q):
        return np.array([[R * math.cos(q[1]), 0.0], [0.0, R]])

    def E(q):
        return np.array([[1.0 / (R * math.cos(q[1])), 0.0], [0.0, 1.0 / R]])

    def de(q):
        out = np.zeros((2, 2, 2))
        out[1, 0, 0] = -R * math.sin(q[1])
        return out

    return Vielbein2(ChartId.SPHERE_GEOGRAPHIC, e, E, R, de, name="sphere")


def pseudosphere_vielbein(R=math.sqrt(2.0)):
    """Frame ``diag(R exp(-u/R), 1)`` on pseudosphere coordinates ``(phi, u)``."""
    _check_radius(R)

    def e(q):
        return np.array([[R * math.exp(-q[1] / R), 0.0], [0.0, 1.0]])

    def E(q):
        return np.array([[math.exp(q[1] / R) / R, 0.0], [0.0, 1.0]])

    def de(q):
        out = np.zeros((2, 2, 2))
        out[1, 0, 0] = -math.exp(-q[1] / R)
        return out

    return Vielbein2(ChartId.PSEUDOSPHERE, e, E, R, de, name="pseudosphere")


def metric_from_vielbein(v):
    """Metric ``g = e^T e`` for which the frame is orthonormal."""

    def g(q):
        e = v.frame(q)
        return e.T @ e

    return MetricField(v.chart, g)


# -- connection-level tensors ------------------------------------------------------


def weizenbock_connection(v, method="auto"):
    """Connection ``Gamma[rho, mu, nu] = E[rho, i] d_mu e[i, nu]`` of a frame.

    ``method`` is ``"analytic"`` (built-in frames only), ``"fd"`` (central
    differences) or ``"auto"`` (analytic when available).
    """
    if method == "analytic" and v.de is None:
        raise ValueError(f"vielbein {v.name!r} has no analytic derivative")

    def gamma(q):
        return np.einsum("ri,min->rmn", v.inverse(q), v.derivative(q, method))

    return ConnectionField(v.chart, gamma, label=f"weizenbock[{v.name},{method}]")


def torsion(c):
    """Antisymmetric part ``T[rho, mu, nu] = Gamma[rho, mu, nu] - Gamma[rho, nu, mu]``."""

    def T(q):
        G = c(q)
        return G - G.transpose(0, 2, 1)

    return TorsionField(c.chart, T)


def riemann_curvature(c, p, h=CURVATURE_STEP):
    """Riemann tensor ``R[rho, sigma, mu, nu]`` of a connection at one point.

    ``R = d_mu G[rho,nu,sigma] - d_nu G[rho,mu,sigma]
          + G[rho,mu,g] G[g,nu,sigma] - G[rho,nu,g] G[g,mu,sigma]``

    with the connection derivatives taken by central differences of step ``h``.
    """
    q = _coords(p)
    c.chart.validate_field_point(q)
    G = c(q)
    dG = central_partials(c, q, h, check=c.chart.validate_field_point)  # [a, rho, mu, nu]
    return (
        np.einsum("mrns->rsmn", dG)
        - np.einsum("nrms->rsmn", dG)
        + np.einsum("rmg,gns->rsmn", G, G)
        - np.einsum("rng,gms->rsmn", G, G)
    )


def curvature_field(c, h=CURVATURE_STEP):
    return CurvatureField(c.chart, lambda q: riemann_curvature(c, q, h), step=h)


def gaussian_curvature(c, g, p, h=CURVATURE_STEP):
    """Gaussian curvature ``R_{0101} / det g`` from a (metric) connection and its metric."""
    q = _coords(p)
    Riem = riemann_curvature(c, q, h)
    gq = g(q)
    return float(gq[0] @ Riem[:, 1, 0, 1] / np.linalg.det(gq))


def anholonomy_check(v, p, method="fd"):
    """Coefficients ``A[i, mu, nu] = d_mu e[i, nu] - d_nu e[i, mu]``.

    These are the components of the exterior derivative of the frame
    one-forms, ``d(e^i) = sum_{mu<nu} A[i, mu, nu] dq^mu ^ dq^nu``; all zero
    exactly when the frame is holonomic.
    """
    de = v.derivative(p, method)  # [mu, i, nu]
    d = de.transpose(1, 0, 2)  # [i, mu, nu]
    return d - d.transpose(0, 2, 1)


def vielbein_covariant_derivatives(v, c, p):
    """Covariant derivatives of the frame and its inverse under ``c``.

    Returns ``(De, DE)`` with::

        De[mu, i, nu]  = d_mu e[i, nu] - Gamma[rho, mu, nu] e[i, rho]
        DE[mu, rho, i] = d_mu E[rho, i] + Gamma[rho, mu, s] E[s, i]

    both identically zero for the connection built from the same frame.
    Derivatives are central differences.
    """
    q = _coords(p)
    steps = fd_steps(q, FD_REL_STEP)
    check = v.chart.validate_field_point
    de = central_partials(v.frame, q, steps, check=check)
    dE = central_partials(v.inverse, q, steps, check=check)
    G = c(q)
    De = de - np.einsum("rmn,ir->min", G, v.frame(q))
    DE = dE + np.einsum("rms,si->mri", G, v.inverse(q))
    return De, DE


def conformal_transform(g, c, lam, grad_lam):
    """Rescale ``g -> exp(2 lam) g`` and shift the connection accordingly.

    ``Gamma~[r,m,n] = Gamma[r,m,n] + delta[r,m] dn lam + delta[r,n] dm lam
    - g[m,n] g^{r s} ds lam``.
    """

    def metric(q):
        return math.exp(2.0 * float(lam(q))) * g(q)

    def gamma(q):
        gq = g(q)
        if not np.all(np.isfinite(gq)) or abs(np.linalg.det(gq)) < 1e-300 or np.linalg.cond(gq) > 1e14:
            raise NumericError("metric is singular; cannot raise the gradient index")
        dl = np.asarray(grad_lam(q), dtype=float)
        eye = np.eye(2)
        raised = np.linalg.solve(gq, dl)
        return (
            c(q)
            + np.einsum("rm,n->rmn", eye, dl)
            + np.einsum("rn,m->rmn", eye, dl)
            - np.einsum("mn,r->rmn", gq, raised)
        )

    return MetricField(g.chart, metric), ConnectionField(c.chart, gamma, label=f"conformal[{c.label}]")


def pullback_metric(f, q, target_metric=None, rel_step=FD_REL_STEP, check=None):
    """Metric induced by the map ``f`` at ``q``: ``J^T g_target(f(q)) J``.

    ``target_metric`` defaults to the Euclidean metric of the target space.
    """
    q = np.asarray(q, dtype=float)
    J = jacobian(f, q, rel_step, check=check)
    gt = np.eye(J.shape[0]) if target_metric is None else np.asarray(target_metric(f(q)))
    return J.T @ gt @ J


# -- pseudosphere and loxodromes ------------------------------------------------------


def pseudosphere_embed(p, R=math.sqrt(2.0)):
    """Cartesian point ``(r cos phi, r sin phi, h)`` on the pseudosphere of pseudoradius R.

    ``r = R exp(-u/R)``; the height ``h = R artanh(s) - R s`` with
    ``s = sqrt(1 - exp(-2u/R))`` is evaluated as ``R log1p(s) + u - R s``,
    which is the same function without the cancellation of ``1 - s``.
    """
    _check_radius(R)
    q = _coords(p)
    phi, u = float(q[0]), float(q[1])
    if not u >= 0:
        raise DomainError("pseudosphere requires u >= 0", field="u")
    r = R * math.exp(-u / R)
    s = math.sqrt(-math.expm1(-2.0 * u / R))
    h = R * math.log1p(s) + u - R * s
    return np.array([r * math.cos(phi), r * math.sin(phi), h])


def pseudosphere_metric(R=math.sqrt(2.0)):
    """``ds^2 = R^2 exp(-2u/R) dphi^2 + du^2``."""
    _check_radius(R)
    return MetricField(ChartId.PSEUDOSPHERE, lambda q: np.diag([R * R * math.exp(-2.0 * q[1] / R), 1.0]))


def validate_course_angle(angle):
    if not (math.isfinite(angle) and 0.0 < angle < math.pi):
        raise DomainError("course angle must lie in (0, pi)", field="course")
    if abs(angle - math.pi / 2) < COURSE_GUARD:
        raise DomainError("course angle pi/2 is a parallel of latitude, not a loxodrome", field="course")
    return float(angle)


def loxodrome_relation_sphere(phi, theta, phi0, course_angle):
    """Residual ``theta - gd(cot(course) (phi - phi0))``; zero on the loxodrome."""
    course_angle = validate_course_angle(course_angle)
    return theta - sf.gd((phi - phi0) / math.tan(course_angle))


def pseudosphere_to_flattened(p, R=math.sqrt(2.0)):
    """Conformally flattened coordinates ``(x~, y~) = (R phi, R exp(u/R))``.

    Integrates ``dx~ = R dphi``, ``dy~ = exp(u/R) du`` with the additive
    constants chosen so that ``y~ = R`` at ``u = 0``.
    """
    _check_radius(R)
    if p.chart is not ChartId.PSEUDOSPHERE:
        raise DomainError(f"expected a pseudosphere point, got {p.chart.value}", field="chart")
    return Point2(ChartId.FLATTENED_PLANE, R * p.a, R * math.exp(p.b / R))


def flattened_to_pseudosphere(p, R=math.sqrt(2.0)):
    _check_radius(R)
    if p.chart is not ChartId.FLATTENED_PLANE:
        raise DomainError(f"expected a flattened-plane point, got {p.chart.value}", field="chart")
    if p.b < R:
        raise DomainError("flattened ordinate below R lies outside the pseudosphere", field="y_f")
    return Point2(ChartId.PSEUDOSPHERE, p.a / R, R * math.log(p.b / R))
