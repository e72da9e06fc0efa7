"""Seeded property suites for the CIC optimizer, runnable from tests and the CLI.

Each suite returns a :class:`SuiteResult` with the worst observed deviation
and the tolerance it was judged against.
"""
from dataclasses import dataclass

import numpy as np

from .cic import (
    OptimizerOptions,
    cic_brute_force_oracle,
    cic_exact_centered_qubit,
    cic_forward,
    raw_increment,
)
from .core import (
    BlochRepresentation,
    MeasurementElement,
    bloch_conditioned_vector,
    conditioned_state,
    decompose,
    degree_of_coherence,
    partial_trace,
    reconstruct,
)
from .states import (
    local_unitary_conjugate,
    maximally_entangled,
    random_density_matrix,
    random_product_state,
    random_pure_state,
    random_unitary,
    schmidt_state,
)

__all__ = ["SuiteResult", "SUITES", "run_suites", "random_two_qubit_states"]

UNITARY_TOL = 1e-5
PRODUCT_TOL = 1e-7
UPPER_SLACK = 1e-9
MAXIMAL_TOL = 1e-6
NONMAXIMAL_MARGIN = 1e-4
RANK1_TOL = 1e-6
EXACT_TOL = 1e-6
UPDATE_TOL = 1e-10
ORACLE_TOL = 5e-3


@dataclass
class SuiteResult:
    name: str
    passed: bool
    worst: float
    tolerance: float
    cases: int

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name}: worst {self.worst:.3e} (tol {self.tolerance:.1e}, {self.cases} cases)"


def random_two_qubit_states(n, rng):
    """Ranks cycle through 1..4 so pure, low-rank and full-rank states all appear."""
    return [random_density_matrix(4, rng, rank=1 + i % 4) for i in range(n)]


def _opts(seed):
    return OptimizerOptions(seed=seed)


def suite_unitary(rng, n, seed):
    worst = 0.0
    for rho in random_two_qubit_states(n, rng):
        rotated = local_unitary_conjugate(rho, random_unitary(2, rng), random_unitary(2, rng))
        worst = max(worst, abs(cic_forward(rho, _opts(seed)).value - cic_forward(rotated, _opts(seed)).value))
    return SuiteResult("local-unitary invariance", worst < UNITARY_TOL, worst, UNITARY_TOL, n)


def suite_product(rng, n, seed):
    worst = max(cic_forward(random_product_state(2, rng), _opts(seed)).value for _ in range(n))
    return SuiteResult("product states vanish", worst < PRODUCT_TOL, worst, PRODUCT_TOL, n)


def suite_range(rng, n, seed):
    vals = np.array([cic_forward(rho, _opts(seed)).value for rho in random_two_qubit_states(n, rng)])
    # distance outside [0, 1]
    worst = float(max(0.0, -vals.min(), vals.max() - 1.0))
    return SuiteResult("values in [0, 1]", worst <= UPPER_SLACK, worst, UPPER_SLACK, n)


def suite_maximal(rng, n, seed):
    worst = 0.0
    cases = 0
    for d in (2, 3):
        states = [maximally_entangled(d)]
        for _ in range(max(1, n // 50)):
            U, V = random_unitary(d, rng), random_unitary(d, rng)
            states.append(local_unitary_conjugate(maximally_entangled(d), U, V))
        for rho in states:
            worst = max(worst, abs(cic_forward(rho, _opts(seed)).value - 1.0))
            cases += 1
    return SuiteResult("maximally entangled give 1", worst < MAXIMAL_TOL, worst, MAXIMAL_TOL, cases)


def suite_nonmaximal(rng, n, seed):
    # smallest gap 1 - C over Schmidt spectra with max p >= 1/d + 0.05
    worst_gap = np.inf
    cases = 0
    for d in (2, 3):
        for _ in range(max(1, n // 4)):
            while True:
                p = rng.dirichlet(np.ones(d))
                if p.max() >= 1.0 / d + 0.05:
                    break
            worst_gap = min(worst_gap, 1.0 - cic_forward(schmidt_state(p, rng), _opts(seed)).value)
            cases += 1
    return SuiteResult("non-maximal pure states below 1 (smallest gap)", worst_gap > NONMAXIMAL_MARGIN,
                       float(worst_gap), NONMAXIMAL_MARGIN, cases)


def suite_rank1(rng, n, seed, per_state=100):
    worst = -np.inf
    for rho in random_two_qubit_states(max(1, n // 10), rng):
        best = cic_forward(rho, _opts(seed)).value
        for _ in range(per_state):
            # rank-2 element of a qubit: positive matrix with spectrum in (0, 1]
            U = random_unitary(2, rng)
            M = U @ np.diag(rng.uniform(0.05, 1.0, size=2)) @ U.conj().T
            p = np.real(np.trace(np.kron(M, np.eye(2)) @ rho))
            if p > 1e-12:
                worst = max(worst, raw_increment(rho, M) - best)
    return SuiteResult("rank-1 elements suffice", worst <= RANK1_TOL, float(worst), RANK1_TOL, max(1, n // 10))


def _centered_state(rng):
    """Two-qubit state with ``a = b = 0`` and ``T = O1 diag(t) O2``, t inside the physical tetrahedron."""
    # eigenvalues of (I + sum t_k s_k s_k)/4 are (1 - signs @ t)/4
    signs = np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]])
    while True:
        t = rng.uniform(-1, 1, size=3)
        if np.all(1 - signs @ t >= 0):
            break
    O1 = _random_rotation(rng)
    O2 = _random_rotation(rng)
    T = O1 @ np.diag(t) @ O2
    return BlochRepresentation(2, np.zeros(3), np.zeros(3), T)


def _random_rotation(rng):
    q, r = np.linalg.qr(rng.normal(size=(3, 3)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def suite_exact(rng, n, seed):
    worst = 0.0
    m = max(1, n // 4)
    for _ in range(m):
        bloch = _centered_state(rng)
        rho = reconstruct(bloch)
        worst = max(worst, abs(cic_exact_centered_qubit(bloch) - cic_forward(rho, _opts(seed)).value))
    return SuiteResult("closed form on centered states", worst < EXACT_TOL, worst, EXACT_TOL, m)


def suite_update(rng, n, seed):
    worst = 0.0
    for rho in random_two_qubit_states(n, rng):
        el = MeasurementElement.from_state(random_pure_state(2, rng))
        cond, _ = conditioned_state(rho, el)
        b_state = decompose(np.kron(np.eye(2) / 2, cond)).b
        b_bloch = bloch_conditioned_vector(decompose(rho), el.m)
        worst = max(worst, float(np.max(np.abs(b_state - b_bloch))))
        # and the coherence increment itself, computed both ways
        d_state = degree_of_coherence(cond) - degree_of_coherence(partial_trace(rho, "A"))
        d_bloch = np.linalg.norm(b_bloch) - np.linalg.norm(decompose(rho).b)
        worst = max(worst, abs(d_state - d_bloch))
    return SuiteResult("Bloch update matches state update", worst < UPDATE_TOL, worst, UPDATE_TOL, n)


def suite_oracle(rng, n, seed, n_grid=5000):
    m = max(1, n // 4)
    worst = 0.0
    for rho in random_two_qubit_states(m, rng):
        worst = max(worst, abs(cic_brute_force_oracle(rho, n_grid) - cic_forward(rho, _opts(seed)).value))
    return SuiteResult("optimizer matches grid oracle", worst < ORACLE_TOL, worst, ORACLE_TOL, m)


SUITES = {
    "unitary": suite_unitary,
    "product": suite_product,
    "range": suite_range,
    "maximal": suite_maximal,
    "nonmaximal": suite_nonmaximal,
    "rank1": suite_rank1,
    "exact": suite_exact,
    "update": suite_update,
    "oracle": suite_oracle,
}


def run_suites(names=("all",), seed=0, n_states=200):
    """Run the named suites (``"all"`` for every one) with independent seeded streams."""
    names = list(SUITES) if "all" in names else list(names)
    unknown = [s for s in names if s not in SUITES]
    if unknown:
        raise ValueError(f"unknown suite(s) {unknown}; choose from {sorted(SUITES)} or 'all'")
    if n_states < 4:
        raise ValueError("n_states must be at least 4")
    out = []
    for k, name in enumerate(names):
        rng = np.random.default_rng([seed, k])
        out.append(SUITES[name](rng, n_states, seed))
    return out
