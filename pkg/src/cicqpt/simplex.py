"""Nelder-Mead minimization run on many starting points at once.

Every start keeps its own simplex; each iteration evaluates the reflection,
expansion and both contraction candidates for all active starts in a single
vectorized call of the objective, which makes a few dozen restarts about as
cheap as one.
"""
from dataclasses import dataclass

import numpy as np


@dataclass
class BatchResult:
    x: np.ndarray          # (S, n) best point of each start
    fun: np.ndarray        # (S,)
    converged: np.ndarray  # (S,) bool
    nit: int
    nfev: int


def batched_nelder_mead(func, x0, step=0.25, max_iters=500, xatol=1e-10, fatol=1e-12):
    """Minimize ``func`` from every row of ``x0``.

    ``func`` maps an ``(N, n)`` array of points to ``N`` values; ``inf`` marks
    infeasible points. Standard coefficients (1, 2, 1/2, 1/2).
    """
    x0 = np.atleast_2d(np.asarray(x0, dtype=float))
    S, n = x0.shape
    sim = np.repeat(x0[:, None, :], n + 1, axis=1)
    sim[:, 1:, :] += step * np.eye(n)[None, :, :]
    fs = func(sim.reshape(-1, n)).reshape(S, n + 1)
    nfev = S * (n + 1)
    active = np.ones(S, dtype=bool)
    converged = np.zeros(S, dtype=bool)
    it = 0
    rows = np.arange(S)

    while it < max_iters and active.any():
        it += 1
        order = np.argsort(fs, axis=1, kind="stable")
        sim = np.take_along_axis(sim, order[:, :, None], axis=1)
        fs = np.take_along_axis(fs, order, axis=1)

        with np.errstate(invalid="ignore"):
            xspread = np.max(np.abs(sim[:, 1:, :] - sim[:, :1, :]), axis=(1, 2))
            fspread = np.max(np.abs(fs[:, 1:] - fs[:, :1]), axis=1)
        done = active & (xspread <= xatol) & (fspread <= fatol)
        converged |= done
        active &= ~done
        idx = rows[active]
        if idx.size == 0:
            break

        s = sim[idx]
        f = fs[idx]
        worst = s[:, -1, :]
        xo = s[:, :-1, :].mean(axis=1)
        xr = xo + (xo - worst)
        xe = xo + 2.0 * (xo - worst)
        xoc = xo + 0.5 * (xr - xo)
        xic = xo + 0.5 * (worst - xo)
        k = idx.size
        vals = func(np.concatenate([xr, xe, xoc, xic])).reshape(4, k)
        nfev += 4 * k
        fr, fe, foc, fic = vals

        f_best, f_second, f_worst = f[:, 0], f[:, -2], f[:, -1]
        new_x = np.empty_like(worst)
        new_f = np.empty(k)
        shrink = np.zeros(k, dtype=bool)

        c_exp = fr < f_best
        use_e = c_exp & (fe < fr)
        new_x[use_e], new_f[use_e] = xe[use_e], fe[use_e]
        use_r = (c_exp & ~use_e) | (~c_exp & (fr < f_second))
        new_x[use_r], new_f[use_r] = xr[use_r], fr[use_r]
        rest = ~(c_exp | (fr < f_second))
        outside = rest & (fr < f_worst)
        inside = rest & ~outside
        ok_oc = outside & (foc <= fr)
        new_x[ok_oc], new_f[ok_oc] = xoc[ok_oc], foc[ok_oc]
        ok_ic = inside & (fic < f_worst)
        new_x[ok_ic], new_f[ok_ic] = xic[ok_ic], fic[ok_ic]
        shrink = (outside & ~ok_oc) | (inside & ~ok_ic)

        keep = ~shrink
        s[keep, -1, :] = new_x[keep]
        f[keep, -1] = new_f[keep]
        if shrink.any():
            sh = np.flatnonzero(shrink)
            pts = s[sh, :1, :] + 0.5 * (s[sh, 1:, :] - s[sh, :1, :])
            s[sh, 1:, :] = pts
            f[sh, 1:] = func(pts.reshape(-1, n)).reshape(sh.size, n)
            nfev += sh.size * n
        sim[idx] = s
        fs[idx] = f

    best = np.argmin(fs, axis=1)
    return BatchResult(sim[rows, best], fs[rows, best], converged, it, nfev)
