"""Machine-relative upper bounds on program-length complexity.

Every estimate is a minimum of ``l(p) + ceil(-log2 overlap)`` over the
accepted programs ``p`` of the reference machine within a bit budget. It is
an upper bound on the true quantity and depends on the machine definition,
which reports carry as a fingerprint.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from .duality import dualize
from .errors import NoCandidateError, NotUnitaryError, ZeroOverlapError
from .linalg import (
    DEFAULT_TOLERANCES,
    Tolerances,
    as_square,
    as_state,
    fidelity_overlap,
    hs_inner,
    is_normalized,
    is_unitary,
    qubit_count,
)
from .machine import (
    Circuit,
    Program,
    enumerate_programs,
    machine_fingerprint,
    run_state,
    run_unitary,
)

OVERLAP_DIGITS = 12


@dataclass(frozen=True)
class Budget:
    max_program_bits: int
    max_penalty_bits: int = 8

    def __post_init__(self):
        if self.max_program_bits < 3:
            raise ValueError("max_program_bits must cover at least the HALT opcode")
        if self.max_penalty_bits < 0:
            raise ValueError("max_penalty_bits must be non-negative")


def round_overlap(overlap: float) -> float:
    return round(float(overlap), OVERLAP_DIGITS)


def penalty_bits(overlap: float) -> int:
    """ceil(-log2 overlap), after rounding the overlap to 12 decimals."""
    o = round_overlap(overlap)
    if o <= 0.0:
        raise ZeroOverlapError(f"overlap {overlap!r} is zero")
    if o >= 1.0:
        return 0
    return math.ceil(-math.log2(o))


@dataclass(frozen=True)
class ComplexityEstimate:
    value_bits: int
    best_program: Program
    best_circuit: Circuit
    best_overlap: float
    penalty_bits: int
    budget: Budget
    exhausted: bool
    candidates: int
    capped: int = 0
    cap_binding: bool = False
    rescaled: bool = False
    target_squared_norm: float = 1.0

    @property
    def program_bits(self) -> int:
        return self.best_program.length

    @property
    def minimal(self) -> bool:
        """True when this is the exact minimum over all programs within the bit budget."""
        return self.exhausted and not self.cap_binding

    def to_dict(self) -> dict:
        return {
            "value_bits": self.value_bits,
            "program_bits": self.program_bits,
            "penalty_bits": self.penalty_bits,
            "best_program": self.best_program.bits,
            "best_circuit": str(self.best_circuit),
            "best_overlap": self.best_overlap,
            "qubits": self.best_program.qubits,
            "machine": machine_fingerprint(self.best_program.qubits),
            "max_program_bits": self.budget.max_program_bits,
            "max_penalty_bits": self.budget.max_penalty_bits,
            "exhausted": self.exhausted,
            "minimal": self.minimal,
            "candidates": self.candidates,
            "capped": self.capped,
            "rescaled": self.rescaled,
            "target_squared_norm": self.target_squared_norm,
        }

    def to_text(self, prefix: str = "") -> str:
        return "".join(f"{prefix}{k}={_text(v)}\n" for k, v in self.to_dict().items())

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _text(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _minimize(n: int, budget: Budget, overlap_of: Callable[[Circuit], float],
              max_candidates: int | None) -> ComplexityEstimate:
    best = None  # (value, length, bits, program, circuit, overlap, penalty)
    capped_values = []
    seen = 0
    exhausted = True
    for program, circuit in enumerate_programs(n, budget.max_program_bits):
        if max_candidates is not None and seen >= max_candidates:
            exhausted = False
            break
        seen += 1
        overlap = round_overlap(overlap_of(circuit))
        try:
            pen = penalty_bits(overlap)
        except ZeroOverlapError:
            continue
        value = program.length + pen
        if pen > budget.max_penalty_bits:
            capped_values.append((value, program.length, program.bits))
            continue
        # stream order is (length, bits), so strict < keeps the canonical tie-break
        if best is None or value < best[0]:
            best = (value, program.length, program.bits, program, circuit, overlap, pen)
    if best is None:
        raise NoCandidateError(
            f"no program of <= {budget.max_program_bits} bits reaches the target "
            f"with penalty <= {budget.max_penalty_bits}")
    value, length, bits, program, circuit, overlap, pen = best
    binding = any(c < (value, length, bits) for c in capped_values)
    return ComplexityEstimate(value, program, circuit, overlap, pen, budget, exhausted,
                              seen, len(capped_values), binding)


def estimate_state_complexity(x, n: int | None = None, budget: Budget = Budget(12), *,
                              max_candidates: int | None = None) -> ComplexityEstimate:
    """Shortest program plus approximation penalty for preparing ``x``."""
    x = as_state(x, name="x")
    if not is_normalized(x):
        raise ValueError("target state is not normalized")
    n = qubit_count(len(x)) if n is None else n
    if len(x) != 1 << n:
        raise ValueError(f"state of dimension {len(x)} is not on {n} qubits")
    return _minimize(n, budget, lambda c: fidelity_overlap(run_state(c), x), max_candidates)


def estimate_unitary_complexity(u, n: int | None = None, budget: Budget = Budget(12), *,
                                tol: Tolerances = DEFAULT_TOLERANCES,
                                max_candidates: int | None = None) -> ComplexityEstimate:
    """Like ``estimate_state_complexity``, with U viewed as a vector in operator space.

    Both operators are scaled to unit Hilbert-Schmidt norm, so the overlap is
    ``|tr(W^dagger U)|^2 / 4^n``.
    """
    u = as_square(u, name="U")
    if not is_unitary(u, tol):
        raise NotUnitaryError("U is not unitary")
    n = qubit_count(len(u)) if n is None else n
    if len(u) != 1 << n:
        raise ValueError(f"matrix of dimension {len(u)} is not on {n} qubits")
    norm = float(len(u)) ** 2
    return _minimize(n, budget, lambda c: abs(hs_inner(run_unitary(c), u)) ** 2 / norm,
                     max_candidates)


def estimate_dual_complexity(u, budget: Budget = Budget(15), *,
                             tol: Tolerances = DEFAULT_TOLERANCES,
                             max_candidates: int | None = None) -> ComplexityEstimate:
    """State complexity of the dual pure state |AR> of ``u`` on 2n qubits.

    |AR> is rescaled to unit norm first when it has negative weights; the
    returned estimate records this in ``rescaled`` and ``target_squared_norm``.
    """
    state = dualize(u, tol)
    rescaled = not math.isclose(state.squared_norm, 1.0, rel_tol=0.0, abs_tol=1e-12)
    target = state.normalized() if rescaled else np.asarray(state.vector)
    est = estimate_state_complexity(target, state.qubits, budget, max_candidates=max_candidates)
    return replace(est, rescaled=rescaled, target_squared_norm=state.squared_norm)


@dataclass(frozen=True)
class DualityReport:
    k_unitary: ComplexityEstimate
    k_dual: ComplexityEstimate
    qubits: int
    delta: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "delta", self.k_dual.value_bits - self.k_unitary.value_bits)

    def to_dict(self) -> dict:
        return {
            "qubits": self.qubits,
            "delta": self.delta,
            "hs_normalized": True,
            "dual_rescaled": self.k_dual.rescaled,
            "dual_squared_norm": self.k_dual.target_squared_norm,
            "k_unitary": self.k_unitary.to_dict(),
            "k_dual": self.k_dual.to_dict(),
        }

    def to_text(self) -> str:
        d = self.to_dict()
        lines = [f"{k}={_text(d[k])}\n" for k in ("qubits", "delta", "hs_normalized",
                                                   "dual_rescaled", "dual_squared_norm")]
        return ("".join(lines) + self.k_unitary.to_text("k_unitary.")
                + self.k_dual.to_text("k_dual."))

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def compare_duality(u, budget_u: Budget = Budget(12), budget_dual: Budget = Budget(15), *,
                    tol: Tolerances = DEFAULT_TOLERANCES) -> DualityReport:
    """Estimate the unitary directly and through its dual state; no verdict is drawn."""
    u = as_square(u, name="U")
    k_u = estimate_unitary_complexity(u, budget=budget_u, tol=tol)
    k_d = estimate_dual_complexity(u, budget_dual, tol=tol)
    return DualityReport(k_u, k_d, qubit_count(len(u)))
