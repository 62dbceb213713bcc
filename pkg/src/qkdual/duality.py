"""Unitary to bipartite pure state and back.

The pipeline is U -> S = i ln U -> alpha -> rho = i ln(e^{i alpha} U) -> |AR>.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass

import numpy as np

from .linalg import (
    DEFAULT_TOLERANCES,
    PhaseSpectrum,
    Tolerances,
    formal_partial_trace_R,
    max_abs,
    qubit_count,
    unitary_eigendecomposition,
)


@dataclass(frozen=True)
class RhoOperator:
    """Trace-one Hermitian operator ``V diag(weights) V^dagger``.

    Weights may be negative, in which case this is not a density matrix.
    """

    weights: np.ndarray
    eigenbasis: np.ndarray

    def __post_init__(self):
        self.weights.setflags(write=False)
        self.eigenbasis.setflags(write=False)

    @property
    def qubits(self) -> int:
        return qubit_count(len(self.weights))

    @property
    def matrix(self) -> np.ndarray:
        v = self.eigenbasis
        return (v * self.weights) @ v.conj().T


@dataclass(frozen=True)
class PurifiedState:
    """Amplitudes of sum_i sqrt(p_i) |v_i>_A |conj(v_i)>_R on 2n qubits.

    Not normalized when some p_i < 0: ``squared_norm`` is sum_i |p_i|.
    """

    vector: np.ndarray
    squared_norm: float
    source_weights: np.ndarray

    def __post_init__(self):
        self.vector.setflags(write=False)
        self.source_weights.setflags(write=False)

    @property
    def qubits(self) -> int:
        return qubit_count(len(self.vector))

    @property
    def is_normalized(self) -> bool:
        return bool(np.all(self.source_weights >= 0))

    def normalized(self) -> np.ndarray:
        return self.vector / math.sqrt(self.squared_norm)


def hermitian_generator(spec: PhaseSpectrum) -> np.ndarray:
    """S = V diag(phases) V^dagger, so that exp(-iS) = U."""
    v = spec.eigenbasis
    return (v * spec.phases) @ v.conj().T


def compute_alpha(spec: PhaseSpectrum) -> float:
    """Global phase making sum_i (phi_i - alpha) equal to one."""
    return (-1.0 + math.fsum(spec.phases)) / spec.dim


def rho_from_spectrum(spec: PhaseSpectrum) -> RhoOperator:
    alpha = compute_alpha(spec)
    return RhoOperator(np.asarray(spec.phases) - alpha, np.array(spec.eigenbasis))


def build_rho(u, tol: Tolerances = DEFAULT_TOLERANCES) -> RhoOperator:
    """Trace-one operator i ln(e^{i alpha} U) with eigenvalues phi_i - alpha."""
    return rho_from_spectrum(unitary_eigendecomposition(u, tol))


def principal_sqrt(p: np.ndarray) -> np.ndarray:
    """sqrt(p) for real p, taking i*sqrt(|p|) for negative entries."""
    p = np.asarray(p, dtype=float)
    return np.where(p >= 0, np.sqrt(np.abs(p)) + 0j, 1j * np.sqrt(np.abs(p)))


def purify(rho: RhoOperator) -> PurifiedState:
    v = rho.eigenbasis
    # sum_i c_i v_i (x) conj(v_i), laid out as the d x d grid V diag(c) V^dagger.
    grid = (v * principal_sqrt(rho.weights)) @ v.conj().T
    weights = np.array(rho.weights)
    return PurifiedState(grid.reshape(-1), math.fsum(np.abs(weights)), weights)


def dualize(u, tol: Tolerances = DEFAULT_TOLERANCES) -> PurifiedState:
    return purify(build_rho(u, tol))


def reconstruct_unitary(rho: RhoOperator) -> np.ndarray:
    """exp(-i rho), which equals e^{i alpha} U when rho = build_rho(U)."""
    v = rho.eigenbasis
    return (v * np.exp(-1j * np.asarray(rho.weights))) @ v.conj().T


def phase_invariant_fidelity(u, w) -> float:
    """|tr(U^dagger W)| / dim, equal to one iff W = e^{i theta} U."""
    u = np.asarray(u, dtype=complex)
    return float(abs(np.vdot(u, np.asarray(w, dtype=complex)))) / u.shape[0]


@dataclass(frozen=True)
class RoundtripReport:
    trace_error: float
    hermiticity_error: float
    partial_trace_error: float
    unitary_fidelity: float
    squared_norm: float

    def to_dict(self) -> dict:
        return asdict(self)

    def to_text(self) -> str:
        return "".join(f"{k}={v!r}\n" for k, v in self.to_dict().items())

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def verify_roundtrip(u, tol: Tolerances = DEFAULT_TOLERANCES) -> RoundtripReport:
    u = np.asarray(u, dtype=complex)
    rho = build_rho(u, tol)
    m = rho.matrix
    state = purify(rho)
    return RoundtripReport(
        trace_error=float(abs(complex(np.trace(m)) - 1.0)),
        hermiticity_error=max_abs(m - m.conj().T),
        partial_trace_error=max_abs(formal_partial_trace_R(state.vector) - m),
        unitary_fidelity=phase_invariant_fidelity(u, reconstruct_unitary(rho)),
        squared_norm=float(state.squared_norm),
    )
