"""Scan configuration: validation, key=value config files and dispatch to the model scans.

Config files hold one ``key = value`` per line; ``#`` starts a comment and
keys are the long CLI flag names (``-`` and ``_`` are interchangeable)::

    # kitaev.cfg
    line = jx=jy=(1-jz)/2
    min = 0
    max = 1
    step = 0.002
    link = z
    tol = 1e-6
    out = kitaev.csv
    threads = 4
"""
import enum
from dataclasses import dataclass, field

from .cic import OptimizerOptions
from .errors import GridError
from .kitaev import LinkType, line_scan
from .xxz import xxz_scan

__all__ = ["Model", "ScanConfig", "read_config_file", "run_scan"]


class Model(str, enum.Enum):
    XXZ = "xxz"
    KITAEV = "kitaev"
    STATE_FILE = "state"


@dataclass(frozen=True)
class ScanConfig:
    model: Model
    min: float
    max: float
    step: float
    link: LinkType = None
    quad_tol: float = 1e-6
    optimizer: OptimizerOptions = field(default_factory=OptimizerOptions)
    csv_path: str = None
    svg_path: str = None
    json_path: str = None
    threads: int = 1
    side: str = "left"  # one-sided derivative at Delta = +-1
    ratio: float = 0.5  # Kitaev line Jx = ratio (1 - Jz)

    def __post_init__(self):
        object.__setattr__(self, "model", Model(self.model))
        if self.link is not None:
            object.__setattr__(self, "link", LinkType.parse(self.link))
        if not self.min < self.max:
            raise GridError(f"min ({self.min}) must be below max ({self.max})")
        if not self.step > 0:
            raise GridError("step must be positive")
        if not self.step < (self.max - self.min) / 10:
            raise GridError("step must be below (max - min)/10 so the scan has enough points")
        if self.threads < 1:
            raise ValueError("threads must be at least 1")
        if self.model is Model.KITAEV and self.link is None:
            object.__setattr__(self, "link", LinkType.Z)


def read_config_file(path):
    """Parse a key=value file into a dict with ``_``-style keys and string values."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            if not sep or not key.strip():
                raise ValueError(f"{path}:{lineno}: expected 'key = value', got {raw.strip()!r}")
            out[key.strip().lstrip("-").replace("-", "_")] = value.strip()
    return out


def run_scan(config):
    """Evaluate the scan described by ``config`` and return its :class:`ScanResult`."""
    if config.model is Model.XXZ:
        return xxz_scan(config.min, config.max, config.step, side=config.side, threads=config.threads)
    if config.model is Model.KITAEV:
        return line_scan(config.min, config.max, config.step, link=config.link, tol=config.quad_tol,
                         ratio=config.ratio, threads=config.threads)
    raise ValueError(f"model {config.model.value!r} is not a parameter scan")
