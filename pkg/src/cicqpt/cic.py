"""Correlation-induced coherence of bipartite states.

``C->(rho_AB)`` is the largest increase of Bob's degree of coherence that a
single outcome of a measurement on Alice's side can produce,

    C-> = max_M  D(rho_B^M) - D(rho_B)
        = max_m  sqrt(d / (2(d-1))) (|b_M| - |b|),   b_M = (b + T^T m) / (1 + a.m).

The maximum is searched over rank-1 projectors ``|phi><phi|`` (``M -> cM``
leaves ``rho_B^M`` unchanged, and the extreme values of ``|b_M|`` over the
convex set ``0 <= M <= I`` sit at its extreme points). ``|phi>`` is
parameterized by ``d - 1`` hyperspherical amplitude angles and ``d - 1``
relative phases and optimized by a multi-start simplex search. ``C<-`` is
the same with the roles of Alice and Bob exchanged.
"""
from dataclasses import dataclass, field

import numpy as np

from .core import (
    BlochRepresentation,
    build_generators,
    bipartite_local_dim,
    conditioned_state,
    partial_trace,
    decompose,
    degree_of_coherence,
    validate_density_matrix,
    ZERO_PROBABILITY,
)
from .errors import InvalidDimensionError, OptimizerError
from .simplex import batched_nelder_mead
from .states import random_pure_state

__all__ = [
    "OptimizerOptions",
    "CicResult",
    "cic_forward",
    "cic_backward",
    "cic_from_bloch",
    "cic_exact_centered_qubit",
    "cic_brute_force_oracle",
    "raw_increment",
    "angles_to_state",
    "state_to_angles",
    "fibonacci_sphere",
]


@dataclass(frozen=True)
class OptimizerOptions:
    n_starts: int = 64
    max_iters: int = 500
    step_tolerance: float = 1e-10
    value_tolerance: float = 1e-12
    seed: int = 0

    def __post_init__(self):
        if self.n_starts < 1 or self.max_iters < 1:
            raise ValueError("n_starts and max_iters must be positive")
        if self.step_tolerance <= 0 or self.value_tolerance <= 0:
            raise ValueError("tolerances must be positive")


@dataclass
class CicResult:
    value: float
    argmax_m: np.ndarray
    argmax_state: np.ndarray
    diagnostics: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "value": self.value,
            "argmax_m": self.argmax_m.tolist(),
            "argmax_state": {
                "re": self.argmax_state.real.tolist(),
                "im": self.argmax_state.imag.tolist(),
            },
            "diagnostics": dict(self.diagnostics),
        }


def angles_to_state(x, d):
    """Map ``(..., 2d - 2)`` angles to unit vectors of shape ``(..., d)``.

    The first ``d - 1`` entries are hyperspherical amplitude angles, the rest
    are phases of components ``1..d-1`` relative to component 0.
    """
    x = np.asarray(x, dtype=float)
    theta, phase = x[..., : d - 1], x[..., d - 1 :]
    sin_cum = np.cumprod(np.sin(theta), axis=-1)
    amp = np.empty(x.shape[:-1] + (d,))
    amp[..., 0] = np.cos(theta[..., 0])
    amp[..., 1 : d - 1] = sin_cum[..., : d - 2] * np.cos(theta[..., 1:])
    amp[..., d - 1] = sin_cum[..., d - 2]
    ph = np.concatenate([np.zeros(x.shape[:-1] + (1,)), phase], axis=-1)
    return amp * np.exp(1j * ph)


def state_to_angles(vec):
    """Inverse of :func:`angles_to_state` up to a global phase."""
    vec = np.asarray(vec, dtype=complex)
    vec = vec / np.linalg.norm(vec)
    r = np.abs(vec)
    d = vec.size
    tail = np.sqrt(np.cumsum((r**2)[::-1])[::-1])  # tail[k] = |r[k:]|
    theta = np.arctan2(tail[1:], r[:-1])
    phase = np.angle(vec[1:]) - np.angle(vec[0])
    return np.concatenate([theta, phase]) if d > 1 else theta


def _bloch_objective(bloch, basis):
    """Vectorized raw increment over a batch of angle vectors (Bloch-space route)."""
    d = bloch.dim
    L = basis.matrices
    scale = np.sqrt(d / (2.0 * (d - 1)))
    b_len = np.linalg.norm(bloch.b)

    def raw(x):
        phi = angles_to_state(x, d)
        mu = np.real(np.einsum("ni,kij,nj->nk", phi.conj(), L, phi, optimize=True))
        m = 0.5 * d * mu
        den = 1.0 + m @ bloch.a
        num = bloch.b + m @ bloch.T
        with np.errstate(divide="ignore", invalid="ignore"):
            val = scale * (np.linalg.norm(num, axis=1) / den - b_len)
        return np.where(den > ZERO_PROBABILITY, val, -np.inf)

    return raw


def _axis_states(d):
    """Eigenvectors of every generator: basis states and (|j> + {1, i}|k>)/sqrt2, with sign flips."""
    out = [np.eye(d)[j].astype(complex) for j in range(d)]
    for j in range(d):
        for k in range(j + 1, d):
            for ph in (1, -1, 1j, -1j):
                v = np.zeros(d, dtype=complex)
                v[j], v[k] = 1, ph
                out.append(v / np.sqrt(2))
    return out


def cic_from_bloch(bloch, opts=None):
    """Maximize the raw increment for a given Bloch representation (Alice measures)."""
    opts = opts or OptimizerOptions()
    d = bloch.dim
    basis = build_generators(d)
    raw = _bloch_objective(bloch, basis)
    rng = np.random.default_rng(opts.seed)

    starts = [state_to_angles(v) for v in _axis_states(d)]
    starts += [state_to_angles(random_pure_state(d, rng)) for _ in range(opts.n_starts)]
    x0 = np.array(starts)
    res = batched_nelder_mead(
        lambda x: -raw(x),
        x0,
        max_iters=opts.max_iters,
        xatol=opts.step_tolerance,
        fatol=opts.value_tolerance,
    )
    vals = -res.fun
    if not np.isfinite(vals).any():
        raise OptimizerError("no start produced an outcome with nonzero probability")
    best = int(np.argmax(vals))  # first index among ties
    phi = angles_to_state(res.x[best], d)
    mu = np.real(np.einsum("i,kij,j->k", phi.conj(), basis.matrices, phi))
    best_raw = float(vals[best])
    return CicResult(
        value=max(best_raw, 0.0),
        argmax_m=0.5 * d * mu,
        argmax_state=phi,
        diagnostics={
            "starts": int(x0.shape[0]) + 1,  # + the M = I candidate with increment 0
            "best_raw": best_raw,
            "converged": bool(res.converged[best]),
            "iterations": int(res.nit),
            "evaluations": int(res.nfev),
        },
    )


def cic_forward(rho_AB, opts=None):
    """``C->``: Alice measures, Bob's coherence increment is maximized."""
    rho_AB = validate_density_matrix(rho_AB)
    return cic_from_bloch(decompose(rho_AB), opts)


def cic_backward(rho_AB, opts=None):
    """``C<-``: Bob measures, Alice's coherence increment is maximized."""
    rho_AB = validate_density_matrix(rho_AB)
    return cic_from_bloch(decompose(rho_AB).swapped(), opts)


def cic_exact_centered_qubit(T):
    """Closed form for two qubits with ``a = b = 0``: the largest singular value of ``T``.

    Accepts a 3x3 correlation matrix or a :class:`BlochRepresentation`, in
    which case the centering precondition is checked.
    """
    if isinstance(T, BlochRepresentation):
        if T.dim != 2:
            raise InvalidDimensionError("closed form applies to two qubits only")
        if max(np.abs(T.a).max(), np.abs(T.b).max()) > 1e-10:
            raise ValueError("closed form requires vanishing local Bloch vectors")
        T = T.T
    T = np.asarray(T, dtype=float)
    if T.shape != (3, 3):
        raise ValueError(f"expected a 3x3 correlation matrix, got {T.shape}")
    return float(np.linalg.svd(T, compute_uv=False)[0])


def raw_increment(rho_AB, M, measured="A"):
    """``D(rho^M) - D(rho)`` on the unmeasured side, computed in state space."""
    cond, _ = conditioned_state(rho_AB, M, measured=measured)
    before = partial_trace(rho_AB, measured)
    return degree_of_coherence(cond) - degree_of_coherence(before)


def fibonacci_sphere(n):
    """``n`` near-uniform unit vectors on the sphere."""
    k = np.arange(n) + 0.5
    z = 1.0 - 2.0 * k / n
    r = np.sqrt(1.0 - z * z)
    ang = np.pi * (1.0 + np.sqrt(5.0)) * k
    return np.stack([r * np.cos(ang), r * np.sin(ang), z], axis=1)


def cic_brute_force_oracle(rho_AB, n_grid=2000):
    """Grid maximum of the increment over qubit projectors ``(I + n.sigma)/2``.

    Works directly with conditioned density matrices (no Bloch update), so it
    is independent of the optimizer's objective.
    """
    rho_AB = validate_density_matrix(rho_AB)
    if bipartite_local_dim(rho_AB) != 2:
        raise InvalidDimensionError("brute-force oracle is for a qubit on Alice's side")
    if n_grid < 100:
        raise ValueError("n_grid must be at least 100")
    sig = build_generators(2).matrices
    dirs = fibonacci_sphere(n_grid)
    Ms = 0.5 * (np.eye(2)[None] + np.einsum("nk,kij->nij", dirs, sig))
    r4 = rho_AB.reshape(2, 2, 2, 2)
    unnorm = np.einsum("nca,abcd->nbd", Ms, r4)
    p = np.real(np.einsum("nii->n", unnorm))
    ok = p > ZERO_PROBABILITY
    cond = unnorm[ok] / p[ok, None, None]
    purity = np.real(np.einsum("nij,nji->n", cond, cond))
    d_cond = np.sqrt(np.clip(2.0 * purity - 1.0, 0.0, None))
    rho_B = np.einsum("aiaj->ij", r4)
    base = degree_of_coherence(rho_B)
    return float(max(np.max(d_cond - base, initial=0.0), 0.0))
