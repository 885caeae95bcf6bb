"""Auto-parallel curves of torsionful connections and analytic loxodromes.

The auto-parallel equation is integrated as

    q''[rho] = -sum_{mu,nu} Gamma[rho, mu, nu] q'[mu] q'[nu]

summing over *all* ordered index pairs, so the result does not depend on
which lower slot of a non-symmetric connection is read as the
differentiation index.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import specialfun as sf
from .errors import DomainError, PreconditionError, UnsupportedProjectionError
from .geometry import ChartId, Point2, _coords, validate_course_angle
from .numerics import uniform_derivatives

GENERATORS = ("analytic-loxodrome", "integrated", "projected")


@dataclass(frozen=True)
class CourseAngle:
    """Angle between a loxodrome and every meridian it crosses, in (0, pi) minus pi/2."""

    phi_course: float

    def __post_init__(self):
        object.__setattr__(self, "phi_course", validate_course_angle(float(self.phi_course)))

    @property
    def tan(self):
        return math.tan(self.phi_course)


def _angle(angle):
    return angle if isinstance(angle, CourseAngle) else CourseAngle(angle)


@dataclass(frozen=True)
class Curve2:
    """Samples ``points[k]`` at parameters ``t[k]`` in one chart.

    ``velocities`` holds ``dq/dt`` at each sample when the generator knows
    it exactly (analytic curves, the integrator's state). ``exited`` marks an
    integration that was stopped because it left the chart domain.
    """

    chart: ChartId
    t: np.ndarray
    points: np.ndarray
    generator: str
    velocities: Optional[np.ndarray] = None
    exited: bool = False

    def __post_init__(self):
        t = np.asarray(self.t, dtype=float).reshape(-1)
        pts = np.asarray(self.points, dtype=float).reshape(-1, 2)
        if t.shape[0] != pts.shape[0]:
            raise ValueError("t and points must have the same length")
        if np.any(np.diff(t) <= 0):
            raise PreconditionError("curve parameter must be strictly increasing", field="t")
        if self.generator not in GENERATORS:
            raise ValueError(f"unknown generator label {self.generator!r}")
        for a, b in pts:
            self.chart.validate(a, b)
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "points", pts)
        if self.velocities is not None:
            object.__setattr__(self, "velocities", np.asarray(self.velocities, dtype=float).reshape(-1, 2))

    def __len__(self):
        return self.t.shape[0]

    def point(self, k):
        return Point2(self.chart, *self.points[k])


def _acceleration(c, q, v):
    return -np.einsum("rmn,m,n->r", c(q), v, v)


def integrate_autoparallel(c, q0, v0, t_end, dt):
    """Classical RK4 for the auto-parallel equation of ``c``, sampled every step.

    If the trajectory leaves the chart domain the samples reached so far are
    returned with ``exited=True``.
    """
    if not dt > 0:
        raise PreconditionError("dt must be > 0", field="dt")
    if not t_end > 0:
        raise PreconditionError("t_end must be > 0", field="t_end")
    q = _coords(q0).copy()
    c.chart.validate(*q)
    v = np.asarray(v0, dtype=float).copy()

    n_full = int(math.floor(t_end / dt + 1e-9))
    ts = [k * dt for k in range(n_full + 1)]
    if t_end - ts[-1] > 1e-12 * max(1.0, t_end):
        ts.append(t_end)

    qs, vs = [q.copy()], [v.copy()]
    exited = False
    for k in range(1, len(ts)):
        h = ts[k] - ts[k - 1]
        try:
            k1q, k1v = v, _acceleration(c, q, v)
            k2q = v + 0.5 * h * k1v
            k2v = _acceleration(c, q + 0.5 * h * k1q, k2q)
            k3q = v + 0.5 * h * k2v
            k3v = _acceleration(c, q + 0.5 * h * k2q, k3q)
            k4q = v + h * k3v
            k4v = _acceleration(c, q + h * k3q, k4q)
            q_new = q + h / 6.0 * (k1q + 2.0 * k2q + 2.0 * k3q + k4q)
            v_new = v + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
            c.chart.validate(*q_new)
        except DomainError:
            exited = True
            break
        q, v = q_new, v_new
        qs.append(q.copy())
        vs.append(v.copy())

    return Curve2(c.chart, np.array(ts[: len(qs)]), np.array(qs), "integrated", np.array(vs), exited)


def loxodrome_sphere_curve(angle, phi0, R, t_grid, parametrization="map"):
    """Loxodrome on the sphere of radius ``R`` through ``(phi0, 0)``.

    ``parametrization="map"`` follows the straight Mercator line
    ``x = tan(course) t, y = t``: ``theta = gd(t/R)``,
    ``phi = phi0 + tan(course) t / R``.

    ``parametrization="frame"`` has constant velocity in the orthonormal
    frame, which is the affine parameter of the sphere's frame connection:
    ``theta = t/R``, ``phi = phi0 + tan(course) gd_inv(t/R)``.
    """
    angle = _angle(angle)
    if not R > 0:
        raise DomainError("R must be > 0", field="R")
    t = np.asarray(t_grid, dtype=float).reshape(-1)
    k = angle.tan
    if parametrization == "map":
        theta = sf.gd(t / R) if t.size else t
        phi = phi0 + k * t / R
        vel = np.column_stack([np.full_like(t, k / R), np.cosh(t / R) ** -1 / R])
    elif parametrization == "frame":
        theta = t / R
        phi = phi0 + k * sf.gd_inv(theta) if t.size else t
        vel = np.column_stack([k / (R * np.cos(theta)), np.full_like(t, 1.0 / R)])
    else:
        raise ValueError(f"unknown parametrization {parametrization!r}")
    return Curve2(ChartId.SPHERE_GEOGRAPHIC, t, np.column_stack([phi, theta]), "analytic-loxodrome", vel)


def loxodrome_pseudosphere_curve(angle, phi0, R, t_grid):
    """Loxodrome ``u = t``, ``phi = phi0 + tan(course) exp(t/R)`` on the pseudosphere."""
    angle = _angle(angle)
    if not R > 0:
        raise DomainError("R must be > 0", field="R")
    t = np.asarray(t_grid, dtype=float).reshape(-1)
    if np.any(t < 0):
        raise DomainError("pseudosphere loxodrome needs t >= 0 (u = t)", field="t")
    k = angle.tan
    growth = np.exp(t / R)
    phi = phi0 + k * growth
    vel = np.column_stack([k / R * growth, np.ones_like(t)])
    return Curve2(ChartId.PSEUDOSPHERE, t, np.column_stack([phi, t]), "analytic-loxodrome", vel)


def autoparallel_residual(curve, c):
    """Max of ``|q'' + Gamma q' q'|`` over interior samples, derivatives from the samples.

    Uses 5-point central differences, so the grid must be uniform with at
    least 5 samples; the two samples at each end are excluded.
    """
    if len(curve) < 5:
        raise PreconditionError("residual needs at least 5 samples", field="t")
    steps = np.diff(curve.t)
    dt = steps.mean()
    if np.max(np.abs(steps - dt)) > 1e-9 * max(dt, abs(curve.t[-1])):
        raise PreconditionError("residual needs a uniform parameter grid", field="t")
    vel, acc = uniform_derivatives(curve.points, dt)
    worst = 0.0
    for q, v, a in zip(curve.points[2:-2], vel, acc):
        r = a + np.einsum("rmn,m,n->r", c(q), v, v)
        worst = max(worst, float(np.max(np.abs(r))))
    return worst


def frame_velocities(curve, vielbein):
    """``e[i, mu] q'[mu]`` at each sample; needs ``curve.velocities``."""
    if curve.velocities is None:
        raise PreconditionError("curve carries no velocities", field="velocities")
    return np.array([vielbein.frame(q) @ v for q, v in zip(curve.points, curve.velocities)])


def course_angles(curve, vielbein):
    """Angle between the tangent and the meridian direction, in [0, pi).

    Measured in the orthonormal frame, whose second axis points along the
    meridian.
    """
    fv = frame_velocities(curve, vielbein)
    return np.mod(np.arctan2(fv[:, 0], fv[:, 1]), math.pi)


def project_curve(curve, target, R=1.0, phi0=0.0):
    """Apply a chart map pointwise, keeping the parametrization.

    Supported pairs: sphere <-> Mercator plane (``x = R (phi - phi0)``,
    ``y = R gd_inv(theta)``) and pseudosphere <-> flattened plane
    (``x~ = R phi``, ``y~ = R exp(u/R)``).
    """
    src = curve.chart
    if not R > 0:
        raise DomainError("R must be > 0", field="R")
    a, b = curve.points[:, 0], curve.points[:, 1]
    if src is target:
        new = curve.points.copy()
    elif (src, target) == (ChartId.SPHERE_GEOGRAPHIC, ChartId.MERCATOR_PLANE):
        new = np.column_stack([R * (a - phi0), R * np.asarray(sf.gd_inv(b))])
    elif (src, target) == (ChartId.MERCATOR_PLANE, ChartId.SPHERE_GEOGRAPHIC):
        new = np.column_stack([phi0 + a / R, np.asarray(sf.gd(b / R))])
    elif (src, target) == (ChartId.PSEUDOSPHERE, ChartId.FLATTENED_PLANE):
        new = np.column_stack([R * a, R * np.exp(b / R)])
    elif (src, target) == (ChartId.FLATTENED_PLANE, ChartId.PSEUDOSPHERE):
        if np.any(b < R):
            raise DomainError("flattened ordinate below R lies outside the pseudosphere", field="y_f")
        new = np.column_stack([a / R, R * np.log(b / R)])
    else:
        raise UnsupportedProjectionError(f"no chart map from {src.value} to {target.value}")
    return Curve2(target, curve.t, new.reshape(-1, 2), "projected")
