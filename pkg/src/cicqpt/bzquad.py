"""Globally adaptive 2D quadrature on rectangles.

Each panel carries a coarse tensor-product Gauss-Legendre estimate and a fine
one (the same rule on its four quadrants); their difference is the panel's
error estimate. Panels with the largest estimates are split until the summed
estimate drops below the absolute tolerance. Splitting by total error, not by
a per-area allowance, is what lets isolated point singularities converge:
a bounded integrand with a jump at a point has panel errors proportional to
panel area, which a per-area criterion never accepts.

Known singular points can be passed in: the initial partition gets grid
lines through them, so they sit on panel corners, and the estimate of every
panel touching one is raised to the rigorous bound ``2 * sup|f| * area``
(true integral and rule value each lie within ``sup|f| * area`` of zero).
Difference-based estimates alone can be fooled by a cone-shaped point
singularity in the interior of a panel.

Nodes of an even-order rule are strictly interior and never on panel
midlines, so points on panel edges are never sampled.
"""
import numpy as np

from .errors import IntegrationError

ORDER = 8
_NODES, _WEIGHTS = np.polynomial.legendre.leggauss(ORDER)


def _rule(f, x0, x1, y0, y1):
    """Tensor Gauss-Legendre estimate on a batch of panels."""
    hx = 0.5 * (x1 - x0)
    hy = 0.5 * (y1 - y0)
    X = (x0 + hx)[:, None, None] + hx[:, None, None] * _NODES[None, :, None]
    Y = (y0 + hy)[:, None, None] + hy[:, None, None] * _NODES[None, None, :]
    X, Y = np.broadcast_arrays(X, Y)
    vals = f(X, Y)
    return hx * hy * np.einsum("pij,i,j->p", vals, _WEIGHTS, _WEIGHTS)


def _quadrants(x0, x1, y0, y1):
    xm = 0.5 * (x0 + x1)
    ym = 0.5 * (y0 + y1)
    return (
        np.concatenate([x0, xm, x0, xm]),
        np.concatenate([xm, x1, xm, x1]),
        np.concatenate([y0, y0, ym, ym]),
        np.concatenate([ym, ym, y1, y1]),
    )


def _fine(f, x0, x1, y0, y1):
    """Sum of the rule over the four quadrants of each panel."""
    qx0, qx1, qy0, qy1 = _quadrants(x0, x1, y0, y1)
    q = _rule(f, qx0, qx1, qy0, qy1).reshape(4, -1)
    return q.sum(axis=0), q


def _breaks(lo, hi, n, extra):
    pts = np.concatenate([np.linspace(lo, hi, n + 1), [p for p in extra if lo < p < hi]])
    pts = np.unique(pts)
    # drop slivers a coincident break would create
    keep = np.concatenate([[True], np.diff(pts) > 1e-12 * (hi - lo)])
    return pts[keep]


def _touching(x0, x1, y0, y1, points, slack):
    hit = np.zeros(x0.size, dtype=bool)
    for px, py in points:
        hit |= (x0 - slack <= px) & (px <= x1 + slack) & (y0 - slack <= py) & (py <= y1 + slack)
    return hit


def adaptive_integrate(f, xlim, ylim, tol, initial_split=4, max_panels=400_000,
                       singular_points=(), bound=None):
    """Integrate ``f(X, Y)`` (vectorized over arrays) over a rectangle.

    ``singular_points`` is an iterable of ``(x, y)``; ``bound`` is ``sup|f|``
    and is required with them. Returns ``(value, error_estimate)`` with
    ``error_estimate <= tol``, or raises :class:`IntegrationError` once more
    than ``max_panels`` panels would be needed.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    singular_points = [tuple(p) for p in singular_points]
    if singular_points and bound is None:
        raise ValueError("singular points need an integrand bound")
    gx = _breaks(xlim[0], xlim[1], initial_split, [p[0] for p in singular_points])
    gy = _breaks(ylim[0], ylim[1], initial_split, [p[1] for p in singular_points])
    slack = 1e-9 * max(xlim[1] - xlim[0], ylim[1] - ylim[0])
    X0, Y0 = np.meshgrid(gx[:-1], gy[:-1], indexing="ij")
    X1, Y1 = np.meshgrid(gx[1:], gy[1:], indexing="ij")
    x0, x1, y0, y1 = X0.ravel(), X1.ravel(), Y0.ravel(), Y1.ravel()

    def estimate(coarse, fine, x0, x1, y0, y1):
        err = np.abs(fine - coarse)
        if singular_points:
            hit = _touching(x0, x1, y0, y1, singular_points, slack)
            err[hit] = np.maximum(err[hit], 2 * bound * (x1 - x0)[hit] * (y1 - y0)[hit])
        return err

    coarse = _rule(f, x0, x1, y0, y1)
    fine, quads = _fine(f, x0, x1, y0, y1)
    err = estimate(coarse, fine, x0, x1, y0, y1)

    while True:
        total_err = err.sum()
        if total_err <= tol:
            return float(fine.sum()), float(total_err)
        if x0.size > max_panels:
            raise IntegrationError(
                f"adaptive quadrature exceeded {max_panels} panels with error estimate {total_err:.3e} > {tol:.1e}",
                float(fine.sum()),
                float(total_err),
            )
        # split the largest-error panels until the untouched rest is within tol/2
        order = np.argsort(err)[::-1]
        remaining = total_err - np.cumsum(err[order])
        n_split = int(np.searchsorted(-remaining, -0.5 * tol)) + 1
        n_split = min(n_split, order.size)
        split = order[:n_split]
        keep = np.ones(x0.size, dtype=bool)
        keep[split] = False

        # children's coarse values are the parent's quadrant values
        cx0, cx1, cy0, cy1 = _quadrants(x0[split], x1[split], y0[split], y1[split])
        c_coarse = quads[:, split].ravel()
        c_fine, c_quads = _fine(f, cx0, cx1, cy0, cy1)

        x0 = np.concatenate([x0[keep], cx0])
        x1 = np.concatenate([x1[keep], cx1])
        y0 = np.concatenate([y0[keep], cy0])
        y1 = np.concatenate([y1[keep], cy1])
        fine = np.concatenate([fine[keep], c_fine])
        err = np.concatenate([err[keep], estimate(c_coarse, c_fine, cx0, cx1, cy0, cy1)])
        quads = np.concatenate([quads[:, keep], c_quads], axis=1)
