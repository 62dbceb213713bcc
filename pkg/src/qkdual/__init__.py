"""Duality between unitaries and bipartite pure states, with machine-relative
program-length complexity estimates for both."""

from .duality import (
    PurifiedState,
    RhoOperator,
    RoundtripReport,
    build_rho,
    compute_alpha,
    dualize,
    hermitian_generator,
    purify,
    reconstruct_unitary,
    verify_roundtrip,
)
from .estimator import (
    Budget,
    ComplexityEstimate,
    DualityReport,
    compare_duality,
    estimate_dual_complexity,
    estimate_state_complexity,
    estimate_unitary_complexity,
    penalty_bits,
)
from .linalg import (
    PhaseSpectrum,
    Tolerances,
    fidelity_overlap,
    formal_partial_trace_R,
    hs_inner,
    is_unitary,
    unitary_eigendecomposition,
)
from .machine import Circuit, Gate, Program, decode_program, encode_circuit, enumerate_programs, run_state, run_unitary

__version__ = "0.1.0"
