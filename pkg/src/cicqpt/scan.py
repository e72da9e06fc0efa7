"""Parameter sweeps: susceptibility, kink detection and CSV / SVG output."""
import csv
import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import GridError

__all__ = [
    "CriticalPoint",
    "ScanResult",
    "uniform_grid",
    "grid_step",
    "susceptibility",
    "detect_kinks",
    "evaluate_grid",
    "emit_csv",
    "emit_svg",
    "format_number",
]

DEFAULT_Z_THRESHOLD = 8.0
# second differences below this fraction of the curve's scale are rounding noise
NOISE_FLOOR = 1e-12


@dataclass(frozen=True)
class CriticalPoint:
    location: float
    score: float
    index: int
    label: str = "kink"  # or "discontinuity"


@dataclass
class ScanResult:
    parameter: np.ndarray
    value: np.ndarray
    susceptibility: np.ndarray
    critical_points: list = field(default_factory=list)
    parameter_name: str = "parameter"
    value_name: str = "cic"
    extra_columns: dict = field(default_factory=dict)  # written between parameter and value
    trailing_columns: dict = field(default_factory=dict)  # written after susceptibility

    @classmethod
    def from_values(cls, parameter, value, z_threshold=DEFAULT_Z_THRESHOLD, **kwargs):
        parameter = np.asarray(parameter, dtype=float)
        value = np.asarray(value, dtype=float)
        return cls(
            parameter,
            value,
            susceptibility(parameter, value),
            detect_kinks(parameter, value, z_threshold),
            **kwargs,
        )

    def columns(self):
        cols = {self.parameter_name: self.parameter}
        cols.update(self.extra_columns)
        cols[self.value_name] = self.value
        cols["susceptibility"] = self.susceptibility
        cols.update(self.trailing_columns)
        return cols


def uniform_grid(lo, hi, step):
    """Grid ``lo, lo + step, ..., hi``; ``(hi - lo)/step`` must be (nearly) an integer.

    Points are rounded to 12 decimals so that values such as -1.0 land exactly.
    """
    if not (np.isfinite(lo) and np.isfinite(hi) and np.isfinite(step)):
        raise GridError("grid bounds and step must be finite")
    if not lo < hi:
        raise GridError(f"empty range: min={lo} must be below max={hi}")
    if step <= 0:
        raise GridError("step must be positive")
    n = (hi - lo) / step
    k = int(round(n))
    if abs(n - k) > 1e-6 * max(1.0, n):
        raise GridError(f"range [{lo}, {hi}] is not a whole number of steps of {step}")
    return np.round(lo + step * np.arange(k + 1), 12)


def grid_step(parameter, rtol=1e-6):
    parameter = np.asarray(parameter, dtype=float)
    if parameter.ndim != 1 or parameter.size < 2:
        raise GridError("grid needs at least two points")
    diffs = np.diff(parameter)
    h = diffs.mean()
    if h <= 0 or np.max(np.abs(diffs - h)) > rtol * abs(h) + 1e-12:
        raise GridError("grid is not uniformly spaced and increasing")
    return h


def susceptibility(parameter, value):
    """``dC/dparam``: central differences inside, 3-point one-sided formulas at the ends."""
    value = np.asarray(value, dtype=float)
    if np.size(parameter) < 5 or np.size(value) != np.size(parameter):
        raise GridError("susceptibility needs at least 5 points and matching lengths")
    h = grid_step(parameter)
    out = np.empty_like(value)
    out[1:-1] = (value[2:] - value[:-2]) / (2 * h)
    out[0] = (-3 * value[0] + 4 * value[1] - value[2]) / (2 * h)
    out[-1] = (3 * value[-1] - 4 * value[-2] + value[-3]) / (2 * h)
    return out


def detect_kinks(parameter, value, z_threshold=DEFAULT_Z_THRESHOLD):
    """Locate nonanalytic points of a sampled curve.

    A grid point is flagged when its absolute second difference is a strict
    local maximum (both neighbours smaller or equal, at least one smaller) and
    exceeds ``z_threshold`` times the median absolute second difference. Flags
    within two steps of each other are merged, keeping the largest. Each point
    is labelled ``"discontinuity"`` when the jump across it is more than ten
    times the median first difference, otherwise ``"kink"``. Results are
    sorted by descending score (ratio to the median).
    """
    parameter = np.asarray(parameter, dtype=float)
    value = np.asarray(value, dtype=float)
    if value.size < 9 or value.size != parameter.size:
        raise GridError("kink detection needs at least 9 points and matching lengths")
    grid_step(parameter)
    scale = np.max(np.abs(value))
    if scale == 0:
        return []
    s2 = np.abs(value[2:] - 2 * value[1:-1] + value[:-2])  # s2[i - 1] belongs to point i
    ref = max(np.median(s2), NOISE_FLOOR * scale)
    score = s2 / ref
    s1 = np.abs(np.diff(value))
    ref1 = max(np.median(s1), NOISE_FLOOR * scale)

    flags = []
    for k in range(1, s2.size - 1):
        left, mid, right = s2[k - 1], s2[k], s2[k + 1]
        if score[k] > z_threshold and mid >= left and mid >= right and (mid > left or mid > right):
            flags.append(k + 1)

    merged = []
    for i in flags:
        if merged and i - merged[-1][-1] <= 2:
            merged[-1].append(i)
        else:
            merged.append([i])

    points = []
    for group in merged:
        i = max(group, key=lambda g: s2[g - 1])
        jump = max(s1[i - 1], s1[i])
        label = "discontinuity" if jump > 10 * ref1 else "kink"
        points.append(CriticalPoint(float(parameter[i]), float(score[i - 1]), int(i), label))
    points.sort(key=lambda p: (-p.score, p.index))
    return points


def _call(args):
    fn, x = args
    return fn(x)


def evaluate_grid(fn, grid, threads=1):
    """``[fn(x) for x in grid]``, optionally over a process pool; order follows the grid."""
    grid = list(grid)
    if threads is None or threads <= 1:
        return [fn(x) for x in grid]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(_call, [(fn, x) for x in grid], chunksize=max(1, len(grid) // (4 * threads))))


def format_number(x):
    """12 significant digits, stable across platforms."""
    if isinstance(x, str):
        return x
    x = float(x)
    if x == 0:
        return "0"
    return format(x, ".12g")


def emit_csv(result, path):
    """Write ``result`` as comma-separated text with a header row and LF line endings."""
    cols = result.columns()
    names = list(cols)
    n = len(result.parameter)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(names)
    for i in range(n):
        writer.writerow([format_number(cols[name][i]) for name in names])
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(buf.getvalue())
    except OSError as exc:
        raise OSError(f"cannot write CSV to {path}: {exc}") from exc


def _nice_ticks(lo, hi, n=6):
    span = hi - lo
    if span <= 0:
        return [lo]
    raw = span / n
    mag = 10 ** np.floor(np.log10(raw))
    step = min((m * mag for m in (1, 2, 2.5, 5, 10) if m * mag >= raw), default=10 * mag)
    start = np.ceil(lo / step) * step
    return [float(t) for t in np.arange(start, hi + 1e-9 * span, step)]


def emit_svg(result, path, title=None, width=640, height=400):
    """Line plot of the susceptibility with dashed markers at critical points."""
    x = np.asarray(result.parameter, dtype=float)
    y = np.asarray(result.susceptibility, dtype=float)
    if x.size == 0:
        raise ValueError("cannot plot an empty scan")
    finite = np.isfinite(y)
    ml, mr, mt, mb = 70, 20, 40, 50
    pw, ph = width - ml - mr, height - mt - mb
    x0, x1 = float(x.min()), float(x.max())
    y0, y1 = (float(y[finite].min()), float(y[finite].max())) if finite.any() else (0.0, 1.0)
    if y1 - y0 < 1e-12:
        y0, y1 = y0 - 1.0, y1 + 1.0
    pad = 0.05 * (y1 - y0)
    y0, y1 = y0 - pad, y1 + pad
    if x1 == x0:
        x0, x1 = x0 - 1.0, x1 + 1.0

    def px(v):
        return ml + (v - x0) / (x1 - x0) * pw

    def py(v):
        return mt + (y1 - v) / (y1 - y0) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<rect x="{ml}" y="{mt}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    for t in _nice_ticks(x0, x1):
        out.append(f'<line x1="{px(t):.2f}" y1="{mt + ph}" x2="{px(t):.2f}" y2="{mt + ph + 5}" stroke="black"/>')
        out.append(f'<text x="{px(t):.2f}" y="{mt + ph + 18}" font-size="11" text-anchor="middle">{t:g}</text>')
    for t in _nice_ticks(y0, y1):
        out.append(f'<line x1="{ml - 5}" y1="{py(t):.2f}" x2="{ml}" y2="{py(t):.2f}" stroke="black"/>')
        out.append(f'<text x="{ml - 8}" y="{py(t) + 4:.2f}" font-size="11" text-anchor="end">{t:.3g}</text>')
    segments, cur = [], []
    for xi, yi, ok in zip(x, y, finite):
        if ok:
            cur.append(f"{px(xi):.2f},{py(yi):.2f}")
        elif cur:
            segments.append(cur)
            cur = []
    if cur:
        segments.append(cur)
    for seg in segments:
        out.append(f'<polyline fill="none" stroke="#1f4e9c" stroke-width="1.5" points="{" ".join(seg)}"/>')
    for cp in result.critical_points:
        xc = px(cp.location)
        out.append(
            f'<line class="critical" x1="{xc:.2f}" y1="{mt}" x2="{xc:.2f}" y2="{mt + ph}" '
            f'stroke="#c0392b" stroke-dasharray="6,4"/>'
        )
        out.append(f'<text x="{xc + 3:.2f}" y="{mt + 12}" font-size="10" fill="#c0392b">{cp.location:g}</text>')
    pname = result.parameter_name
    out.append(f'<text x="{ml + pw / 2}" y="{height - 10}" font-size="13" text-anchor="middle">{pname}</text>')
    out.append(
        f'<text x="16" y="{mt + ph / 2}" font-size="13" text-anchor="middle" '
        f'transform="rotate(-90 16 {mt + ph / 2})">dC/d{pname}</text>'
    )
    if title:
        out.append(f'<text x="{ml + pw / 2}" y="22" font-size="14" text-anchor="middle">{title}</text>')
    out.append("</svg>")
    try:
        Path(path).write_text("\n".join(out) + "\n", encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot write SVG to {path}: {exc}") from exc
