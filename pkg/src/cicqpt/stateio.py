"""JSON serialization of density matrices.

Format: ``{"dim": n, "re": [[...]], "im": [[...]]}``, row-major, where ``n``
is the side length of the matrix (4 for a two-qubit state).
"""
import json
from pathlib import Path

import numpy as np

from .core import validate_density_matrix
from .errors import ShapeError


def state_to_dict(rho):
    rho = np.asarray(rho, dtype=complex)
    return {"dim": int(rho.shape[0]), "re": rho.real.tolist(), "im": rho.imag.tolist()}


def state_from_dict(obj):
    try:
        n = int(obj["dim"])
        re = np.asarray(obj["re"], dtype=float)
        im = np.asarray(obj.get("im", np.zeros_like(re)), dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise ShapeError(f"malformed state JSON: {exc}") from exc
    if re.shape != (n, n) or im.shape != (n, n):
        raise ShapeError(f"state JSON declares dim={n} but has re {re.shape}, im {im.shape}")
    return validate_density_matrix(re + 1j * im)


def load_state(path):
    with open(path, encoding="utf-8") as fh:
        return state_from_dict(json.load(fh))


def save_state(rho, path):
    Path(path).write_text(json.dumps(state_to_dict(rho)) + "\n", encoding="utf-8")
