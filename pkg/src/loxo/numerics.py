"""Finite-difference stencils and small fitting helpers."""

import numpy as np

#: Relative step for first derivatives of frames and connections.
FD_REL_STEP = 1e-5
#: Step for derivatives of connection coefficients inside curvature tensors.
CURVATURE_STEP = 1e-4


def fd_steps(q, rel_step=FD_REL_STEP):
    q = np.asarray(q, dtype=float)
    return rel_step * np.maximum(1.0, np.abs(q))


def central_partials(f, q, steps, check=None):
    """Stack of central differences ``[d_0 f(q), d_1 f(q), ...]``.

    ``f`` maps a coordinate vector to an array; the result has one extra
    leading axis indexing the differentiation coordinate. ``check`` is called
    on every stencil point before evaluation so that domain violations
    surface as exceptions rather than as NaNs.
    """
    q = np.asarray(q, dtype=float)
    steps = np.broadcast_to(np.asarray(steps, dtype=float), q.shape)
    out = []
    for mu in range(q.size):
        dq = np.zeros_like(q)
        dq[mu] = steps[mu]
        hi, lo = q + dq, q - dq
        if check is not None:
            check(hi)
            check(lo)
        out.append((np.asarray(f(hi)) - np.asarray(f(lo))) / (2.0 * steps[mu]))
    return np.stack(out)


def jacobian(f, q, rel_step=FD_REL_STEP, check=None):
    """Central-difference Jacobian ``J[k, mu] = d f_k / d q^mu``."""
    partials = central_partials(f, q, fd_steps(q, rel_step), check=check)
    return partials.T


def derivative(f, x, h):
    """Second-order central difference of a scalar function."""
    return (f(x + h) - f(x - h)) / (2.0 * h)


def uniform_derivatives(values, dt):
    """First and second derivatives by 4th-order central differences.

    ``values`` has shape ``(n, ...)`` sampled on a uniform grid; the returned
    arrays cover the interior samples ``2 .. n-3``.
    """
    v = np.asarray(values, dtype=float)
    if v.shape[0] < 5:
        raise ValueError("need at least 5 samples for a 5-point stencil")
    m2, m1, c, p1, p2 = v[:-4], v[1:-3], v[2:-2], v[3:-1], v[4:]
    first = (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * dt)
    second = (-m2 + 16.0 * m1 - 30.0 * c + 16.0 * p1 - p2) / (12.0 * dt * dt)
    return first, second


def line_fit(points):
    """Total-least-squares line through 2D points.

    Returns ``(centroid, direction, max_dev)`` where ``max_dev`` is the
    largest perpendicular distance of any point from the fitted line.
    """
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    centroid = pts.mean(axis=0)
    centered = pts - centroid
    if not np.any(centered):
        return centroid, np.array([1.0, 0.0]), 0.0
    _, _, vt = np.linalg.svd(centered, full_matrices=False)
    direction, normal = vt[0], vt[1]
    return centroid, direction, float(np.max(np.abs(centered @ normal)))


def collinearity_residual(points):
    """Max perpendicular deviation of ``points`` from their best-fit line."""
    return line_fit(points)[2]
