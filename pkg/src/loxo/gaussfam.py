"""The normal family N(mu, sigma^2) as a surface with the Fisher-Rao metric.

Chain of charts used here::

    (mu, sigma) --normalize--> (mu~, sigma~) --to_pseudosphere--> (phi, u)
                                    |
                                    +--to_flattened--> (x~, y~) = (mu~, sqrt(2) sigma~)

The pseudoradius of the matching pseudosphere is sqrt(2).
"""

import math
from dataclasses import dataclass

import numpy as np

from .autoparallel import CourseAngle, loxodrome_pseudosphere_curve
from .errors import DomainError
from .geometry import ChartId, ConnectionField, MetricField, Point2, gaussian_curvature
from .numerics import CURVATURE_STEP
from .specialfun import adaptive_quad

#: Pseudoradius matching the normalized Fisher-Rao metric.
GAUSS_RADIUS = math.sqrt(2.0)


@dataclass(frozen=True)
class GaussParams:
    mu: float
    sigma: float

    def __post_init__(self):
        if not math.isfinite(self.mu):
            raise DomainError("mu must be finite", field="mu")
        if not (math.isfinite(self.sigma) and self.sigma > 0):
            raise DomainError("sigma must be > 0", field="sigma")


@dataclass(frozen=True)
class NormalizationBox:
    """Admitted region ``sigma >= sigma_min``, ``|mu| <= mu_max_abs``.

    Defaults select the region ``sigma >= 1``, ``|mu| <= pi`` directly, so
    normalization is the identity there.
    """

    sigma_min: float = 1.0
    mu_max_abs: float = math.pi

    def __post_init__(self):
        if not (math.isfinite(self.sigma_min) and self.sigma_min > 0):
            raise DomainError("sigma_min must be > 0", field="sigma_min")
        if not (math.isfinite(self.mu_max_abs) and self.mu_max_abs > 0):
            raise DomainError("mu_max_abs must be > 0", field="mu_max_abs")


def _params(p):
    return p if isinstance(p, GaussParams) else GaussParams(*p)


def gauss_pdf(x, p):
    p = _params(p)
    z = (np.asarray(x, dtype=float) - p.mu) / p.sigma
    out = np.exp(-0.5 * z * z) / math.sqrt(2.0 * math.pi * p.sigma**2)
    return float(out) if out.ndim == 0 else out


def fisher_rao_metric(p):
    """``diag(1, 2) / sigma^2`` in ``(mu, sigma)`` coordinates."""
    p = _params(p)
    return np.diag([1.0, 2.0]) / p.sigma**2


def fisher_rao_field(scale=1.0):
    """Fisher-Rao metric as a field on ``(mu, sigma)``, optionally times a constant."""

    def g(q):
        ChartId.GAUSS_PARAMS.validate_field_point(q)
        return scale * np.diag([1.0, 2.0]) / q[1] ** 2

    return MetricField(ChartId.GAUSS_PARAMS, g)


def fisher_rao_christoffel():
    """Levi-Civita symbols of ``(dmu^2 + 2 dsigma^2) / sigma^2``.

    Unchanged by a constant rescaling of the metric. Nonzero entries:
    ``G[mu,mu,s] = G[mu,s,mu] = -1/s``, ``G[s,mu,mu] = 1/(2s)``,
    ``G[s,s,s] = -1/s``.
    """

    def gamma(q):
        ChartId.GAUSS_PARAMS.validate_field_point(q)
        s = q[1]
        G = np.zeros((2, 2, 2))
        G[0, 0, 1] = G[0, 1, 0] = -1.0 / s
        G[1, 0, 0] = 0.5 / s
        G[1, 1, 1] = -1.0 / s
        return G

    return ConnectionField(ChartId.GAUSS_PARAMS, gamma, label="levi-civita[fisher-rao]")


def fisher_information_quadrature(p, half_width=12.0, rel_step=1e-6):
    """Fisher information ``E[score score^T]`` by quadrature.

    The score is the central-difference gradient of ``log gauss_pdf`` in
    ``(mu, sigma)``; the expectation is integrated over
    ``mu +- half_width sigma``.
    """
    p = _params(p)
    hm = rel_step * max(1.0, abs(p.mu))
    hs = rel_step * p.sigma

    def score(x):
        return np.array([
            (math.log(gauss_pdf(x, (p.mu + hm, p.sigma))) - math.log(gauss_pdf(x, (p.mu - hm, p.sigma)))) / (2 * hm),
            (math.log(gauss_pdf(x, (p.mu, p.sigma + hs))) - math.log(gauss_pdf(x, (p.mu, p.sigma - hs)))) / (2 * hs),
        ])

    lo, hi = p.mu - half_width * p.sigma, p.mu + half_width * p.sigma
    info = np.empty((2, 2))
    for i in range(2):
        for j in range(i, 2):
            info[i, j] = info[j, i] = adaptive_quad(
                lambda x: gauss_pdf(x, p) * score(x)[i] * score(x)[j], lo, hi, tol=1e-10
            )
    return info


def poincare_curvature_check(p, h=CURVATURE_STEP, scale=1.0):
    """Numeric Gaussian curvature of ``scale * g_FR`` at ``p`` (expected ``-1/(2 scale)``)."""
    p = _params(p)
    if p.sigma - h <= 0:
        raise DomainError("curvature stencil crosses sigma <= 0", field="sigma")
    return gaussian_curvature(fisher_rao_christoffel(), fisher_rao_field(scale), (p.mu, p.sigma), h)


# -- chart maps ---------------------------------------------------------------------


def normalize(p, box=NormalizationBox()):
    """``(mu~, sigma~) = (pi mu / mu_max_abs, sigma / sigma_min)``."""
    p = _params(p)
    if p.sigma < box.sigma_min:
        raise DomainError(f"sigma={p.sigma} is below sigma_min={box.sigma_min}", field="sigma_min")
    if abs(p.mu) > box.mu_max_abs:
        raise DomainError(f"|mu|={abs(p.mu)} exceeds mu_max_abs={box.mu_max_abs}", field="mu_max_abs")
    return Point2(ChartId.GAUSS_NORMALIZED, math.pi * p.mu / box.mu_max_abs, p.sigma / box.sigma_min)


def denormalize(pn, box=NormalizationBox()):
    return GaussParams(pn.a * box.mu_max_abs / math.pi, pn.b * box.sigma_min)


def to_pseudosphere(pn):
    """``(phi, u) = (mu~ / sqrt(2), sqrt(2) ln sigma~)``."""
    _expect(pn, ChartId.GAUSS_NORMALIZED)
    return Point2(ChartId.PSEUDOSPHERE, pn.a / GAUSS_RADIUS, GAUSS_RADIUS * math.log(pn.b))


def from_pseudosphere(pp):
    _expect(pp, ChartId.PSEUDOSPHERE)
    return Point2(ChartId.GAUSS_NORMALIZED, GAUSS_RADIUS * pp.a, math.exp(pp.b / GAUSS_RADIUS))


def to_flattened(pn):
    """``(x~, y~) = (mu~, sqrt(2) sigma~)``."""
    _expect(pn, ChartId.GAUSS_NORMALIZED)
    return Point2(ChartId.FLATTENED_PLANE, pn.a, GAUSS_RADIUS * pn.b)


def normalized_poincare_metric(q):
    """``(dmu~^2 + 2 dsigma~^2) / sigma~^2`` at ``q = (mu~, sigma~)``."""
    return np.diag([1.0, 2.0]) / q[1] ** 2


def _expect(p, chart):
    if p.chart is not chart:
        raise DomainError(f"expected a {chart.value} point, got {p.chart.value}", field="chart")


@dataclass(frozen=True)
class GaussPath:
    """Gaussians traced along a pseudosphere loxodrome, one per retained sample."""

    t: np.ndarray
    params: list
    normalized: list
    pseudosphere: list
    flattened: list
    exited: bool = False

    def __len__(self):
        return len(self.params)


def gauss_family_along_loxodrome(angle, box=NormalizationBox(), t_grid=(), phi0=None):
    """Pull a pseudosphere loxodrome back to the normal family.

    ``phi0`` defaults to ``-tan(course)`` so that the path starts at
    ``(mu, sigma) = (0, sigma_min)``. Sampling stops at the first point
    outside the admitted region and the result is flagged ``exited``.
    """
    angle = angle if isinstance(angle, CourseAngle) else CourseAngle(angle)
    if phi0 is None:
        phi0 = -angle.tan
    curve = loxodrome_pseudosphere_curve(angle, phi0, GAUSS_RADIUS, t_grid)
    kept_t, params, normed, pseudo, flat = [], [], [], [], []
    exited = False
    for t, (phi, u) in zip(curve.t, curve.points):
        pp = Point2(ChartId.PSEUDOSPHERE, phi, u)
        pn = from_pseudosphere(pp)
        if abs(pn.a) > math.pi * (1 + 1e-15):
            exited = True
            break
        gp = denormalize(pn, box)
        kept_t.append(t)
        params.append(gp)
        normed.append(pn)
        pseudo.append(pp)
        flat.append(to_flattened(pn))
    return GaussPath(np.array(kept_t), params, normed, pseudo, flat, exited)
