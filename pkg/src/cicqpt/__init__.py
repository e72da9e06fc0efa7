"""Correlation-induced coherence of bipartite states and its use as a phase-transition probe."""
from .cic import (
    CicResult,
    OptimizerOptions,
    cic_backward,
    cic_brute_force_oracle,
    cic_exact_centered_qubit,
    cic_forward,
)
from .core import (
    BlochRepresentation,
    MeasurementElement,
    build_generators,
    conditioned_state,
    decompose,
    degree_of_coherence,
    partial_trace,
    reconstruct,
)
from .errors import (
    CicError,
    GridError,
    IntegrationError,
    InvalidDimensionError,
    InvalidStateError,
    NonHermitianError,
    NotAStateWarning,
    OptimizerError,
    ShapeError,
    ZeroProbabilityError,
)
from .kitaev import KitaevCouplings, LinkType, Phase, cic_link, line_scan, link_correlator, phase_region
from .scan import ScanResult, detect_kinks, emit_csv, emit_svg, susceptibility
from .xxz import cic_xxz, correlators, ground_state_energy, xxz_scan

__version__ = "0.1.0"
