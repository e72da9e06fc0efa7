"""Named states and random sampling used by tests, property suites and the CLI.

Pure states are Haar-uniform (normalized complex Gaussian vectors); mixed
states are reduced states of Haar-random pure states on a larger space.
"""
import numpy as np
from scipy.stats import unitary_group



def _rng(rng):
    return rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)


def random_pure_state(d, rng=None):
    rng = _rng(rng)
    v = rng.normal(size=d) + 1j * rng.normal(size=d)
    return v / np.linalg.norm(v)


def random_density_matrix(d, rng=None, rank=None):
    """Random ``d x d`` state of the given rank (default full rank)."""
    rng = _rng(rng)
    k = d if rank is None else rank
    g = rng.normal(size=(d, k)) + 1j * rng.normal(size=(d, k))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_unitary(d, rng=None):
    return unitary_group.rvs(d, random_state=_rng(rng))


def projector(vec):
    vec = np.asarray(vec, dtype=complex)
    return np.outer(vec, vec.conj())


def maximally_entangled(d):
    """``sum_i |ii> / sqrt(d)``."""
    v = np.zeros(d * d, dtype=complex)
    v[:: d + 1] = 1.0 / np.sqrt(d)
    return projector(v)


def bell_phi_plus():
    return maximally_entangled(2)


def werner_state(p):
    """``p |Phi+><Phi+| + (1 - p) I/4``."""
    return p * bell_phi_plus() + (1 - p) * np.eye(4) / 4


def schmidt_state(coeffs, rng=None):
    """Pure bipartite state with Schmidt probabilities ``coeffs`` in random local bases."""
    coeffs = np.asarray(coeffs, dtype=float)
    d = coeffs.size
    rng = _rng(rng)
    psi = np.zeros((d, d), dtype=complex)
    np.fill_diagonal(psi, np.sqrt(coeffs / coeffs.sum()))
    UA, UB = random_unitary(d, rng), random_unitary(d, rng)
    return projector((UA @ psi @ UB.T).ravel())


def local_unitary_conjugate(rho_AB, UA, UB):
    U = np.kron(UA, UB)
    return U @ rho_AB @ U.conj().T


def random_product_state(d, rng=None):
    rng = _rng(rng)
    return np.kron(random_density_matrix(d, rng), random_density_matrix(d, rng))


