import json

import numpy as np
import pytest

from cicqpt.core import partial_trace, validate_density_matrix
from cicqpt.errors import InvalidStateError, ShapeError
from cicqpt.stateio import load_state, save_state, state_from_dict, state_to_dict
from cicqpt.states import (
    maximally_entangled,
    random_density_matrix,
    random_unitary,
    schmidt_state,
    werner_state,
)


def test_random_states_are_valid_and_reproducible():
    a = random_density_matrix(4, 7, rank=2)
    b = random_density_matrix(4, 7, rank=2)
    assert np.array_equal(a, b)
    validate_density_matrix(a)
    assert np.linalg.matrix_rank(a, tol=1e-10) == 2


def test_random_unitary_is_unitary():
    U = random_unitary(3, 1)
    assert np.allclose(U @ U.conj().T, np.eye(3))


def test_maximally_entangled_reductions():
    for d in (2, 3):
        rho = maximally_entangled(d)
        assert np.allclose(partial_trace(rho, "A"), np.eye(d) / d)


def test_schmidt_state_spectrum():
    rho = schmidt_state([0.7, 0.2, 0.1], 3)
    red = np.linalg.eigvalsh(partial_trace(rho, "A"))
    assert np.allclose(np.sort(red), [0.1, 0.2, 0.7])


def test_werner_state_is_valid():
    validate_density_matrix(werner_state(0.5))


def test_json_roundtrip(tmp_path):
    rho = random_density_matrix(4, 3)
    path = tmp_path / "s.json"
    save_state(rho, path)
    assert np.array_equal(load_state(path), rho)
    assert json.loads(path.read_text())["dim"] == 4


def test_json_validation():
    good = state_to_dict(np.eye(4) / 4)
    with pytest.raises(ShapeError):
        state_from_dict({**good, "dim": 3})
    with pytest.raises(ShapeError):
        state_from_dict({"re": good["re"]})
    with pytest.raises(InvalidStateError):
        state_from_dict(state_to_dict(np.eye(4)))
    # the imaginary part may be omitted for real states
    assert np.allclose(state_from_dict({"dim": 4, "re": good["re"]}), np.eye(4) / 4)
