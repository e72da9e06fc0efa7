"""Nearest-neighbour CIC of the spin-1/2 XXZ chain in the thermodynamic limit.

For ``H = sum_j S^x S^x + S^y S^y + Delta S^z S^z`` the two-site reduced state
has ``a = b = 0`` and ``T = diag(xx, xx, zz)``. The correlators follow from
the ground-state energy per site ``e_g`` through

    zz = 4 de_g/dDelta,        xx = (4 e_g - Delta zz) / 2,

and the CIC of the pair is ``max(|xx|, |zz|)``.

``e_g`` is the Bethe-ansatz integral

    e_g = Delta/4 + sin(pi xi)/(2 pi) * int_{Im x = 1/2} coth(xi x) / sinh(x) dx,   Delta = cos(pi xi)

on the gapless branch ``-1 < Delta < 1``; for ``Delta > 1`` the same contour
integral with ``xi = i phi`` (``Delta = cosh(pi phi)``), i.e.
``sinh(pi phi)/(2 pi) * int cot(phi x) / sinh(x) dx``. For ``Delta <= -1`` the
fully polarized state gives ``e_g = Delta/4``.
"""
import warnings
from dataclasses import dataclass
from functools import partial
from math import log, pi

import numpy as np
from scipy.integrate import IntegrationWarning, quad

from .core import BlochRepresentation, reconstruct
from .errors import IntegrationError
from .scan import DEFAULT_Z_THRESHOLD, ScanResult, evaluate_grid, uniform_grid

__all__ = [
    "SpectralParameter",
    "XxzCorrelators",
    "spectral_parameter",
    "ground_state_energy",
    "derivative",
    "correlators",
    "cic_xxz",
    "xxz_bloch_state",
    "xxz_pair_state",
    "xxz_scan",
    "E_ISOTROPIC",
]

E_ISOTROPIC = 0.25 - log(2.0)

# |coth| * |1/sinh| ~ 2 e^{-|t|} on the contour, so this tail is far below 1e-12
CONTOUR_HALF_WIDTH = 40.0
CONTOUR_SHIFT = 0.5j
QUAD_TOL = 1e-13
MAX_QUAD_ERROR = 1e-10
MAX_IMAG_RESIDUE = 1e-10

BASE_STEP = 1e-4
ONE_SIDED_WINDOW = 1e-3


@dataclass(frozen=True)
class SpectralParameter:
    """``xi`` with ``Delta = cos(pi xi)`` for ``|Delta| < 1``; ``phi`` with ``Delta = cosh(pi phi)`` for ``Delta > 1``."""

    xi: float = float("nan")
    phi: float = float("nan")


@dataclass(frozen=True)
class XxzCorrelators:
    delta: float
    xx: float  # <sx sx> = <sy sy>
    zz: float
    eg: float


def spectral_parameter(delta):
    if abs(delta) < 1:
        return SpectralParameter(xi=float(np.arccos(delta) / pi))
    if delta > 1:
        return SpectralParameter(phi=float(np.arccosh(delta) / pi))
    raise ValueError(f"no spectral parameter at Delta = {delta} (|Delta| = 1 or ferromagnetic branch)")


def _contour_integral(f):
    """``int f(x) dx`` along ``x = t + i/2``; returns the real part after checking the imaginary one."""
    X = CONTOUR_HALF_WIDTH
    parts = []
    for component in (np.real, np.imag):
        # convergence is judged from the returned error estimate below
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", IntegrationWarning)
            val, err = quad(
                lambda t: component(f(t + CONTOUR_SHIFT)),
                -X, X, epsabs=QUAD_TOL, epsrel=QUAD_TOL, limit=400,
            )
        if not np.isfinite(val) or err > MAX_QUAD_ERROR * max(1.0, abs(val)):
            raise IntegrationError(
                f"contour quadrature did not converge (error estimate {err:.2e})", val, err
            )
        parts.append(val)
    re, im = parts
    if abs(im) > MAX_IMAG_RESIDUE * max(1.0, abs(re)):
        raise IntegrationError(f"contour integral has imaginary part {im:.2e}", re, abs(im))
    return re


def ground_state_energy(delta):
    """Ground-state energy per site ``e_g(Delta)``."""
    delta = float(delta)
    if not np.isfinite(delta):
        raise ValueError("Delta must be finite")
    if delta <= -1.0:
        return delta / 4.0
    if delta == 1.0:
        return E_ISOTROPIC
    if delta < 1.0:
        xi = spectral_parameter(delta).xi
        pref = np.sin(pi * xi)
        integral = _contour_integral(lambda x: pref / (np.sinh(x) * np.tanh(xi * x)))
        return delta / 4.0 + integral / (2 * pi)
    phi = spectral_parameter(delta).phi
    pref = np.sinh(pi * phi)
    integral = _contour_integral(lambda x: pref / (np.sinh(x) * np.tan(phi * x)))
    return delta / 4.0 + integral / (2 * pi)


def derivative(f, x, h=BASE_STEP, side=None):
    """Richardson-extrapolated finite difference of ``f`` at ``x``.

    ``side=None`` uses central differences; ``'left'``/``'right'`` use
    second-order one-sided stencils that only sample ``f`` on that side of ``x``.
    Both are extrapolated over steps ``h`` and ``h/2``.
    """
    if side is None:
        def d(s):
            return (f(x + s) - f(x - s)) / (2 * s)
    elif side == "left":
        f0 = f(x)

        def d(s):
            return (3 * f0 - 4 * f(x - s) + f(x - 2 * s)) / (2 * s)
    elif side == "right":
        f0 = f(x)

        def d(s):
            return (-3 * f0 + 4 * f(x + s) - f(x + 2 * s)) / (2 * s)
    else:
        raise ValueError(f"side must be None, 'left' or 'right', got {side!r}")
    return (4 * d(h / 2) - d(h)) / 3


def _stencil_side(delta, side):
    for crit in (-1.0, 1.0):
        if delta == crit:
            if side not in ("left", "right"):
                raise ValueError(
                    f"e_g is not differentiable at Delta = {crit:g}; pass side='left' or 'right'"
                )
            return side
        if abs(delta - crit) < ONE_SIDED_WINDOW:
            return "left" if delta < crit else "right"
    return None


def correlators(delta, side=None):
    """``<sx sx>``, ``<sz sz>`` and ``e_g`` for nearest neighbours at anisotropy ``delta``.

    At ``Delta = +-1`` the derivative is one-sided and ``side`` must be given.
    """
    delta = float(delta)
    eg = ground_state_energy(delta)
    zz = 4.0 * derivative(ground_state_energy, delta, side=_stencil_side(delta, side))
    xx = 0.5 * (4.0 * eg - delta * zz)
    return XxzCorrelators(delta, xx, zz, eg)


def cic_xxz(delta, side=None, with_branch=False):
    """``max(|xx|, |zz|)``; with ``with_branch`` also returns ``'xx'`` (theta = pi/2) or ``'zz'`` (theta = 0, pi)."""
    c = correlators(delta, side)
    value = max(abs(c.xx), abs(c.zz))
    if with_branch:
        return value, ("xx" if abs(c.xx) > abs(c.zz) else "zz")
    return value


def xxz_bloch_state(delta, side=None):
    c = correlators(delta, side)
    return BlochRepresentation(2, np.zeros(3), np.zeros(3), np.diag([c.xx, c.xx, c.zz]))


def xxz_pair_state(delta, side=None):
    """Two-site reduced density matrix."""
    return reconstruct(xxz_bloch_state(delta, side))


def _scan_point(delta, side):
    c = correlators(delta, side=side if abs(delta) == 1.0 else None)
    return c.eg, c.xx, c.zz, max(abs(c.xx), abs(c.zz))


def xxz_scan(delta_min=-2.0, delta_max=3.0, step=0.01, side="left", threads=1,
             z_threshold=DEFAULT_Z_THRESHOLD):
    """CIC of neighbouring spins on a uniform anisotropy grid.

    Grid points that land exactly on ``Delta = +-1`` use the one-sided
    derivative from ``side`` (default ``'left'``, i.e. the closed branch
    ``Delta <= -1`` is ferromagnetic and ``Delta = 1`` is the limit of the
    gapless phase).
    """
    grid = uniform_grid(delta_min, delta_max, step)
    rows = np.array(evaluate_grid(partial(_scan_point, side=side), grid, threads))
    return ScanResult.from_values(
        grid,
        rows[:, 3],
        z_threshold=z_threshold,
        parameter_name="delta",
        extra_columns={"eg": rows[:, 0], "xx": rows[:, 1], "zz": rows[:, 2]},
    )
