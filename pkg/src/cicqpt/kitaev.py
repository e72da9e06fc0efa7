"""Link correlators and CIC of the Kitaev honeycomb model in the thermodynamic limit.

On a z link the only nonzero two-site correlator is

    <sz sz> = 1/(4 pi^2) int_{[-pi, pi]^2} eps / sqrt(eps^2 + delta^2) dwx dwy,
    eps = Jz + Jx cos wx + Jy cos wy,   delta = Jx sin wx + Jy sin wy,

and the pair state ``(I + <sz sz> sz sz)/4`` has ``a = b = 0``, so its CIC is
``|<sz sz>|``. x and y links use the same integral with that link's coupling
moved into the ``Jz`` slot (``Jx <-> Jz`` and ``Jy <-> Jz`` respectively).
"""
import enum
from dataclasses import dataclass
from functools import partial
from math import pi

import numpy as np

from .bzquad import adaptive_integrate
from .core import BlochRepresentation, reconstruct
from .scan import DEFAULT_Z_THRESHOLD, ScanResult, evaluate_grid, uniform_grid

__all__ = [
    "KitaevCouplings",
    "LinkType",
    "Phase",
    "bz_integrand",
    "dirac_points",
    "link_correlator",
    "cic_link",
    "link_bloch_state",
    "link_pair_state",
    "phase_region",
    "symmetric_line",
    "line_point",
    "parse_line",
    "line_scan",
]

MIN_TOL, MAX_TOL = 1e-10, 1e-3
# difference-based panel estimates undercount by up to ~2x where the two Dirac
# points nearly merge into a line; integrate to a tenth of the requested tol
TOL_SAFETY = 0.1
INITIAL_SPLIT = 8


class LinkType(str, enum.Enum):
    X = "x"
    Y = "y"
    Z = "z"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        return cls(str(value).lower())


class Phase(str, enum.Enum):
    GAPLESS_B = "B"
    GAPPED_AX = "Ax"
    GAPPED_AY = "Ay"
    GAPPED_AZ = "Az"


@dataclass(frozen=True)
class KitaevCouplings:
    jx: float
    jy: float
    jz: float

    def __post_init__(self):
        if not np.all(np.isfinite([self.jx, self.jy, self.jz])):
            raise ValueError("couplings must be finite")

    def on_plane(self, atol=1e-12):
        return abs(self.jx + self.jy + self.jz - 1.0) <= atol

    def for_link(self, link):
        """Couplings with ``link``'s own coupling in the z slot."""
        link = LinkType.parse(link)
        if link is LinkType.X:
            return KitaevCouplings(self.jz, self.jy, self.jx)
        if link is LinkType.Y:
            return KitaevCouplings(self.jx, self.jz, self.jy)
        return self


def symmetric_line(jz):
    """Point on the line ``Jx = Jy = (1 - Jz)/2`` of the ``Jx + Jy + Jz = 1`` plane."""
    return line_point(jz, 0.5)


def bz_integrand(j, wx, wy):
    """``eps / sqrt(eps^2 + delta^2)`` for the z link; 0 where both vanish."""
    eps = j.jz + j.jx * np.cos(wx) + j.jy * np.cos(wy)
    dlt = j.jx * np.sin(wx) + j.jy * np.sin(wy)
    norm = np.hypot(eps, dlt)
    out = np.zeros(np.broadcast(eps, norm).shape)
    np.divide(eps, norm, out=out, where=norm > 0)
    return out


def dirac_points(j):
    """Minima of ``|eps + i delta| = |Jz + Jx e^{i wx} + Jy e^{i wy}|`` over the zone.

    In the gapless phase these are the zeros (the Dirac points, a pair related
    by ``w -> -w``); in a gapped phase the single point where the gap is
    smallest. Returns an empty list when the zero set is a whole line (one
    coupling zero and the other two equal in magnitude) and when all
    couplings vanish.
    """
    A, B, C = abs(j.jz), abs(j.jx), abs(j.jy)
    small, mid, big = sorted((A, B, C))
    if big == 0 or (small <= 1e-14 and big - mid <= 1e-14):
        return []
    off = [pi if c < 0 else 0.0 for c in (j.jz, j.jx, j.jy)]  # phase carried by a sign
    a0 = off[0]
    if A <= B + C and B <= A + C and C <= A + B:
        # close the triangle A e^{i a0} + B e^{i a1} + C e^{i a2} = 0; A, B > 0 here
        cos01 = np.clip((C * C - A * A - B * B) / (2 * A * B), -1.0, 1.0)
        rel = np.arccos(cos01)
        pts = []
        for sgn in (1.0, -1.0):
            a1 = a0 + sgn * rel
            v01 = A * np.exp(1j * a0) + B * np.exp(1j * a1)
            a2 = np.angle(-v01)
            pts.append((a1 - off[1], a2 - off[2]))
    else:
        dominant = int(np.argmax([A, B, C]))
        phases = [a0, a0, a0]
        if dominant == 0:
            phases[1] = phases[2] = a0 + pi
        elif dominant == 1:
            phases[1] = a0 + pi
        else:
            phases[2] = a0 + pi
        pts = [(phases[1] - off[1], phases[2] - off[2])]
    wrap = lambda t: float((t + pi) % (2 * pi) - pi)  # noqa: E731
    return sorted({(wrap(a), wrap(b)) for a, b in pts})


def _upper_half(points):
    """Representatives of the points in ``wy >= 0`` (the map ``w -> -w`` covers the rest)."""
    out = set()
    for a, b in points:
        if b < 0 or (b == 0 and a < 0):
            a, b = -a, -b
        if b == -pi:
            b = pi
        out.add((a if a != -pi else pi, b))
        if b in (0.0, pi):
            out.add((-a, b))
    return sorted(out)


def link_correlator(j, link="z", tol=1e-6):
    """Two-site correlator along ``link``, with absolute error estimate at most ``tol``."""
    if not MIN_TOL <= tol <= MAX_TOL:
        raise ValueError(f"tol must lie in [{MIN_TOL:g}, {MAX_TOL:g}], got {tol:g}")
    jl = j.for_link(link)
    norm = 4 * pi * pi
    # the integrand is even under (wx, wy) -> (-wx, -wy): integrate over wy in [0, pi] and double
    val, _ = adaptive_integrate(
        lambda X, Y: bz_integrand(jl, X, Y), (-pi, pi), (0.0, pi), TOL_SAFETY * tol * norm / 2,
        initial_split=INITIAL_SPLIT, singular_points=_upper_half(dirac_points(jl)), bound=1.0,
    )
    return 2 * val / norm


def cic_link(j, link="z", tol=1e-6):
    return abs(link_correlator(j, link, tol))


def link_bloch_state(correlator, link="z"):
    """Bloch form of ``(I + c s_l s_l)/4``: only ``T_ll = c`` is nonzero."""
    k = "xyz".index(LinkType.parse(link).value)
    T = np.zeros((3, 3))
    T[k, k] = correlator
    return BlochRepresentation(2, np.zeros(3), np.zeros(3), T)


def link_pair_state(correlator, link="z"):
    return reconstruct(link_bloch_state(correlator, link))


def phase_region(j):
    """Gapless B when all triangle inequalities hold (boundaries included), else the gapped A phase of the dominant coupling."""
    ax, ay, az = abs(j.jx), abs(j.jy), abs(j.jz)
    if ax <= ay + az and ay <= ax + az and az <= ax + ay:
        return Phase.GAPLESS_B
    dominant = int(np.argmax([ax, ay, az]))
    return (Phase.GAPPED_AX, Phase.GAPPED_AY, Phase.GAPPED_AZ)[dominant]


def line_point(jz, ratio=0.5):
    """Point of the ``Jx + Jy + Jz = 1`` plane with ``Jx : Jy = ratio : (1 - ratio)``."""
    return KitaevCouplings(ratio * (1 - jz), (1 - ratio) * (1 - jz), jz)


def parse_line(line):
    """``"jx=jy=(1-jz)/2"`` (the symmetric line) or ``"ratio=R"`` with ``Jx = R (1 - Jz)``."""
    text = "".join(str(line).split()).lower()
    if text in ("jx=jy=(1-jz)/2", "jy=jx=(1-jz)/2", "symmetric"):
        return 0.5
    if text.startswith("ratio="):
        r = float(text[len("ratio="):])
        if not 0.0 <= r <= 1.0:
            raise ValueError("ratio must lie in [0, 1]")
        return r
    raise ValueError(f"unsupported line {line!r}; use 'jx=jy=(1-jz)/2' or 'ratio=R'")


def _scan_point(jz, link, tol, ratio):
    j = line_point(jz, ratio)
    return j.jx, j.jy, link_correlator(j, link, tol), phase_region(j).value


def line_scan(jz_min=0.0, jz_max=1.0, step=0.002, link="z", tol=1e-6, ratio=0.5, threads=1,
              z_threshold=DEFAULT_Z_THRESHOLD):
    """CIC of one link type along a line of the ``Jx + Jy + Jz = 1`` triangle, parameterized by ``Jz``."""
    if not 0.0 <= jz_min < jz_max <= 1.0:
        raise ValueError("need 0 <= jz_min < jz_max <= 1")
    link = LinkType.parse(link)
    grid = uniform_grid(jz_min, jz_max, step)
    rows = evaluate_grid(partial(_scan_point, link=link, tol=tol, ratio=ratio), grid, threads)
    jx, jy, corr, phase = (list(col) for col in zip(*rows))
    corr = np.array(corr)
    return ScanResult.from_values(
        grid,
        np.abs(corr),
        z_threshold=z_threshold,
        parameter_name="jz",
        extra_columns={"jx": np.array(jx), "jy": np.array(jy), "correlator": corr},
        trailing_columns={"phase": phase},
    )
