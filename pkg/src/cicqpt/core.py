"""Finite-dimensional state machinery.

Generalized Gell-Mann generators, the Bloch decomposition of a bipartite
state ``rho_AB = I/d (x) I/d + a.L (x) I/(2d) + I/(2d) (x) b.L + T_ij L_i (x) L_j / 4``,
the degree of coherence and the state of one party conditioned on a
measurement outcome of the other.

Matrices are plain complex ``numpy`` arrays. Bipartite states are
``d**2 x d**2`` with Alice as the first tensor factor.
"""
from dataclasses import dataclass, field
from math import isqrt

import numpy as np

from .errors import (
    InvalidDimensionError,
    InvalidStateError,
    NonHermitianError,
    NotAStateWarning,
    ShapeError,
    ZeroProbabilityError,
)

__all__ = [
    "GeneratorBasis",
    "BlochRepresentation",
    "MeasurementElement",
    "build_generators",
    "is_hermitian",
    "validate_density_matrix",
    "bipartite_local_dim",
    "decompose",
    "reconstruct",
    "partial_trace",
    "degree_of_coherence",
    "bz_information",
    "bloch_vector",
    "conditioned_state",
    "bloch_conditioned_vector",
    "bloch_radius",
]

HERMITIAN_ATOL = 1e-12
TRACE_ATOL = 1e-12
MIN_EIGENVALUE = -1e-10
IMAG_RESIDUE_MAX = 1e-9
RECONSTRUCT_MIN_EIGENVALUE = -1e-8
ZERO_PROBABILITY = 1e-14
MAX_LOCAL_DIM = 8


@dataclass(frozen=True)
class GeneratorBasis:
    """Traceless Hermitian generators of SU(d) with ``tr(L_j L_k) = 2 delta_jk``.

    ``matrices`` has shape ``(d**2 - 1, d, d)`` and is ordered as the
    symmetric block, then the antisymmetric block (both over index pairs
    ``j < k`` in lexicographic order), then the ``d - 1`` diagonal generators.
    """

    dim: int
    matrices: np.ndarray = field(repr=False)

    def __len__(self):
        return self.matrices.shape[0]

    def __getitem__(self, k):
        return self.matrices[k]

    def __iter__(self):
        return iter(self.matrices)


@dataclass(frozen=True)
class BlochRepresentation:
    """Local Bloch vectors ``a`` (Alice), ``b`` (Bob) and correlation matrix ``T``."""

    dim: int
    a: np.ndarray
    b: np.ndarray
    T: np.ndarray

    def __post_init__(self):
        n = self.dim * self.dim - 1
        a = np.asarray(self.a, dtype=float)
        b = np.asarray(self.b, dtype=float)
        T = np.asarray(self.T, dtype=float)
        if a.shape != (n,) or b.shape != (n,) or T.shape != (n, n):
            raise ShapeError(
                f"expected a, b of length {n} and T of shape ({n}, {n}) for d={self.dim}; "
                f"got {a.shape}, {b.shape}, {T.shape}"
            )
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "T", T)

    def swapped(self):
        """Representation of the same state with the two parties exchanged."""
        return BlochRepresentation(self.dim, self.b, self.a, self.T.T)


def bloch_radius(d):
    """Length of the Bloch vector of any pure state of dimension ``d``."""
    return np.sqrt(2.0 * (d - 1) / d)


_GENERATOR_CACHE = {}


def build_generators(d):
    """Generalized Gell-Mann basis of SU(d).

    >>> [g.real.astype(int).tolist() for g in build_generators(2)][::2]
    [[[0, 1], [1, 0]], [[1, 0], [0, -1]]]
    """
    if int(d) != d or d < 2:
        raise InvalidDimensionError(f"generators need an integer dimension d >= 2, got {d!r}")
    d = int(d)
    if d in _GENERATOR_CACHE:
        return _GENERATOR_CACHE[d]
    pairs = [(j, k) for j in range(d) for k in range(j + 1, d)]
    out = []
    for j, k in pairs:
        g = np.zeros((d, d), dtype=complex)
        g[j, k] = g[k, j] = 1.0
        out.append(g)
    for j, k in pairs:
        g = np.zeros((d, d), dtype=complex)
        g[j, k] = -1j
        g[k, j] = 1j
        out.append(g)
    for l in range(1, d):
        diag = np.zeros(d)
        diag[:l] = 1.0
        diag[l] = -l
        out.append(np.diag(np.sqrt(2.0 / (l * (l + 1))) * diag).astype(complex))
    matrices = np.array(out)
    matrices.setflags(write=False)
    basis = GeneratorBasis(d, matrices)
    _GENERATOR_CACHE[d] = basis
    return basis


def is_hermitian(mat, atol=HERMITIAN_ATOL):
    mat = np.asarray(mat)
    return mat.ndim == 2 and mat.shape[0] == mat.shape[1] and np.allclose(mat, mat.conj().T, rtol=0, atol=atol)


def validate_density_matrix(rho, atol=HERMITIAN_ATOL):
    """Return ``rho`` as a complex array after checking it is a valid state.

    Hermitian and unit trace within ``atol``; smallest eigenvalue above -1e-10.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1] or rho.shape[0] < 1:
        raise ShapeError(f"density matrix must be square, got shape {rho.shape}")
    if not is_hermitian(rho, atol):
        raise NonHermitianError("density matrix is not Hermitian within %.1e" % atol)
    tr = np.trace(rho)
    if abs(tr - 1.0) > atol:
        raise InvalidStateError(f"density matrix trace is {tr.real:.15g}, expected 1")
    lam_min = np.linalg.eigvalsh(rho).min()
    if lam_min < MIN_EIGENVALUE:
        raise InvalidStateError(f"density matrix has negative eigenvalue {lam_min:.3e}")
    return rho


def bipartite_local_dim(rho):
    """Local dimension ``d`` of a ``d**2 x d**2`` bipartite operator."""
    n = np.shape(rho)[0]
    d = isqrt(n)
    if d * d != n or np.shape(rho) != (n, n):
        raise ShapeError(f"shape {np.shape(rho)} does not factor as (d*d, d*d)")
    if not 2 <= d <= MAX_LOCAL_DIM:
        raise InvalidDimensionError(f"local dimension {d} outside supported range 2..{MAX_LOCAL_DIM}")
    return d


def _real_or_raise(x, what):
    resid = np.max(np.abs(np.imag(x))) if np.size(x) else 0.0
    if resid > IMAG_RESIDUE_MAX:
        raise NonHermitianError(f"{what} has imaginary residue {resid:.3e}")
    return np.real(x).astype(float)


def decompose(rho_AB, basis=None):
    """Bloch decomposition ``(a, b, T)`` of a bipartite state."""
    rho_AB = np.asarray(rho_AB, dtype=complex)
    d = bipartite_local_dim(rho_AB)
    if basis is None:
        basis = build_generators(d)
    elif basis.dim != d:
        raise ShapeError(f"basis is for d={basis.dim} but state has local dimension {d}")
    L = basis.matrices
    r4 = rho_AB.reshape(d, d, d, d)
    rho_A = np.einsum("ibjb->ij", r4)
    rho_B = np.einsum("aiaj->ij", r4)
    a = np.einsum("kij,ji->k", L, rho_A)
    b = np.einsum("kij,ji->k", L, rho_B)
    T = np.einsum("iac,jbd,cdab->ij", L, L, r4)
    return BlochRepresentation(
        d,
        _real_or_raise(a, "Alice Bloch vector"),
        _real_or_raise(b, "Bob Bloch vector"),
        _real_or_raise(T, "correlation matrix"),
    )


def bloch_vector(rho, basis=None):
    """Bloch vector ``lam`` of a single-party state ``rho = I/d + lam.L/2``."""
    rho = np.asarray(rho, dtype=complex)
    d = rho.shape[0]
    if basis is None:
        basis = build_generators(d)
    return _real_or_raise(np.einsum("kij,ji->k", basis.matrices, rho), "Bloch vector")


def reconstruct(bloch, basis=None):
    """Inverse of :func:`decompose`.

    Arbitrary ``(a, b, T)`` need not describe a physical state; in that case a
    :class:`NotAStateWarning` is issued and the operator is returned anyway.
    """
    import warnings

    d = bloch.dim
    if basis is None:
        basis = build_generators(d)
    L = basis.matrices
    eye = np.eye(d)
    rho = np.kron(eye, eye) / d**2
    rho = rho + 0.5 * np.kron(np.einsum("k,kij->ij", bloch.a, L), eye / d)
    rho = rho + 0.5 * np.kron(eye / d, np.einsum("k,kij->ij", bloch.b, L))
    # sum_ij t_ij L_i (x) L_j as one contraction over a 4-index tensor
    corr = np.einsum("ij,iac,jbd->abcd", bloch.T, L, L).reshape(d * d, d * d)
    rho = rho + 0.25 * corr
    lam_min = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T)).min()
    if lam_min < RECONSTRUCT_MIN_EIGENVALUE:
        warnings.warn(
            f"reconstructed operator has eigenvalue {lam_min:.3e}; (a, b, T) is not a physical state",
            NotAStateWarning,
            stacklevel=2,
        )
    return rho


def partial_trace(rho_AB, side):
    """Trace out subsystem ``side`` ('A' or 'B') of a ``d x d`` bipartite state."""
    rho_AB = np.asarray(rho_AB, dtype=complex)
    d = bipartite_local_dim(rho_AB)
    r4 = rho_AB.reshape(d, d, d, d)
    side = str(side).upper()
    if side == "A":
        return np.einsum("aiaj->ij", r4)
    if side == "B":
        return np.einsum("ibjb->ij", r4)
    raise ValueError(f"side must be 'A' or 'B', got {side!r}")


def degree_of_coherence(rho):
    """``sqrt((d tr rho^2 - 1) / (d - 1))``, in [0, 1] for valid states."""
    rho = np.asarray(rho, dtype=complex)
    d = rho.shape[0]
    if d < 2:
        raise InvalidDimensionError("degree of coherence needs d >= 2")
    purity = np.real(np.vdot(rho, rho))  # tr(rho^2) for Hermitian rho
    radicand = (d * purity - 1.0) / (d - 1)
    if radicand < -1e-9:
        raise InvalidStateError(f"purity {purity:.6g} is below 1/d; not a valid state")
    if radicand < 0.0:
        return 0.0
    return float(np.sqrt(radicand))


def bz_information(rho):
    """Brukner-Zeilinger invariant information ``tr rho^2 - 1/d``."""
    d = np.shape(rho)[0]
    return (d - 1) / d * degree_of_coherence(rho) ** 2


@dataclass(frozen=True)
class MeasurementElement:
    """Rank-1 measurement element ``M = |phi><phi| = c (I + m.L)``.

    For a projector ``c = 1/d`` and ``m = (d/2) <phi|L|phi>``.
    """

    dim: int
    state_vector: np.ndarray
    m: np.ndarray
    c: float

    @classmethod
    def from_state(cls, vec, basis=None):
        vec = np.asarray(vec, dtype=complex).ravel()
        norm = np.linalg.norm(vec)
        if norm == 0:
            raise ValueError("measurement state vector is zero")
        vec = vec / norm
        d = vec.size
        if basis is None:
            basis = build_generators(d)
        mu = np.real(np.einsum("i,kij,j->k", vec.conj(), basis.matrices, vec))
        return cls(d, vec, 0.5 * d * mu, 1.0 / d)

    @property
    def operator(self):
        return np.outer(self.state_vector, self.state_vector.conj())


def _measurement_operator(M, d):
    if isinstance(M, MeasurementElement):
        op = M.operator
    else:
        op = np.asarray(M, dtype=complex)
        if op.ndim == 1:
            op = np.outer(op, op.conj())
        if not is_hermitian(op, 1e-10):
            raise NonHermitianError("measurement element is not Hermitian")
        lam = np.linalg.eigvalsh(op)
        if lam.min() < -1e-10 or lam.max() > 1 + 1e-10:
            raise ValueError("measurement element must satisfy 0 <= M <= I")
    if op.shape != (d, d):
        raise ShapeError(f"measurement element has shape {op.shape}, expected ({d}, {d})")
    return op


def conditioned_state(rho_AB, M, measured="A"):
    """State of the unmeasured party after outcome ``M`` on party ``measured``.

    Returns ``(rho_cond, p)`` with ``p = tr((M (x) I) rho_AB)`` (or
    ``I (x) M`` when Bob measures). ``M`` may be a :class:`MeasurementElement`,
    a state vector, or any operator with ``0 <= M <= I``.
    """
    rho_AB = np.asarray(rho_AB, dtype=complex)
    d = bipartite_local_dim(rho_AB)
    op = _measurement_operator(M, d)
    r4 = rho_AB.reshape(d, d, d, d)
    if measured == "A":
        # tr_A[(M (x) I) rho]_{b b'} = sum M[a', a] rho[a, b, a', b']
        sigma = np.einsum("ca,abcd->bd", op, r4)
    elif measured == "B":
        sigma = np.einsum("db,abcd->ac", op, r4)
    else:
        raise ValueError(f"measured must be 'A' or 'B', got {measured!r}")
    p = float(np.real(np.trace(sigma)))
    if p <= ZERO_PROBABILITY:
        raise ZeroProbabilityError(f"outcome probability {p:.3e} is zero")
    return sigma / p, p


def bloch_conditioned_vector(bloch, m):
    """Bob's Bloch vector after Alice's outcome ``c (I + m.L)``: ``(b + T^T m) / (1 + a.m)``."""
    m = np.asarray(m, dtype=float)
    den = 1.0 + bloch.a @ m
    if den <= ZERO_PROBABILITY:
        raise ZeroProbabilityError(f"outcome probability factor 1 + a.m = {den:.3e}")
    return (bloch.b + bloch.T.T @ m) / den
