"""Command-line front end.

Exit codes: 0 success, 2 input or parse error, 3 invariant violation
(non-unitary or invalid operator), 4 estimation infeasible.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import matrixio
from .duality import (
    RhoOperator,
    compute_alpha,
    purify,
    reconstruct_unitary,
    rho_from_spectrum,
    verify_roundtrip,
)
from .errors import ConvergenceError, DimensionError, NoCandidateError, NotUnitaryError, ParseError
from .estimator import (
    Budget,
    compare_duality,
    estimate_state_complexity,
    estimate_unitary_complexity,
)
from .linalg import Tolerances, is_normalized, is_unitary, jacobi_hermitian, max_abs, unitary_eigendecomposition
from .machine import machine_fingerprint
from .sampling import random_unitaries

EXIT_OK, EXIT_INPUT, EXIT_INVARIANT, EXIT_INFEASIBLE = 0, 2, 3, 4

_R2 = 1.0 / math.sqrt(2.0)
BUILTIN_GATES = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
    "S": np.array([[1, 0], [0, 1j]], dtype=complex),
    "T": np.array([[1, 0], [0, np.exp(1j * math.pi / 4)]], dtype=complex),
    "H": np.array([[_R2, _R2], [_R2, -_R2]], dtype=complex),
}

SUITE_COLUMNS = ("name", "qubits", "k_unitary", "k_dual", "delta", "squared_norm",
                 "exhausted_unitary", "exhausted_dual", "program_unitary", "program_dual")


class CliError(Exception):
    def __init__(self, code: int, message: str):
        self.code = code
        super().__init__(message)


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, complex):
        return matrixio.format_complex(value)
    if isinstance(value, (list, tuple)):
        return " ".join(_fmt(v) for v in value)
    return str(value)


def _jsonable(value):
    if isinstance(value, complex):
        return [value.real, value.imag]
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def render(record: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps({k: _jsonable(v) for k, v in record.items()}, indent=2) + "\n"
    return "".join(f"{k}={_fmt(v)}\n" for k, v in record.items())


def _tolerances(args) -> Tolerances:
    if args.tol is None:
        return Tolerances()
    try:
        # an eigen-residual cannot beat the input's own unitarity defect
        return Tolerances(unitarity_tol=args.tol, eig_residual_tol=max(1e-9, 10 * args.tol))
    except ValueError as exc:
        raise CliError(EXIT_INPUT, str(exc)) from exc


def _budget(bits: int, cap: int) -> Budget:
    try:
        return Budget(bits, cap)
    except ValueError as exc:
        raise CliError(EXIT_INPUT, str(exc)) from exc


def _load(path, kind: str) -> np.ndarray:
    try:
        a = matrixio.load_array(path)
    except ParseError as exc:
        raise CliError(EXIT_INPUT, f"parse error: {exc}") from exc
    if kind == "matrix" and a.ndim != 2:
        raise CliError(EXIT_INPUT, f"{path}: expected a matrix, got a state vector")
    if kind == "state" and a.ndim != 1:
        raise CliError(EXIT_INPUT, f"{path}: expected a state vector, got a matrix")
    return a


def _load_unitary(path, tol: Tolerances) -> np.ndarray:
    u = _load(path, "matrix")
    if not is_unitary(u, tol):
        err = max_abs(u.conj().T @ u - np.eye(len(u)))
        raise CliError(EXIT_INVARIANT, f"not unitary: max|U^dagger U - I| = {err:.3e} "
                                       f"exceeds unitarity_tol {tol.unitarity_tol:g}")
    return u


def cmd_dualize(args) -> str:
    tol = _tolerances(args)
    u = _load_unitary(args.file, tol)
    spec = unitary_eigendecomposition(u, tol)
    rho = rho_from_spectrum(spec)
    state = purify(rho)
    report = verify_roundtrip(u, tol)
    record = {
        "qubits": spec.qubits,
        "phases": [float(x) for x in spec.phases],
        "alpha": compute_alpha(spec),
        "weights": [float(x) for x in rho.weights],
        "amplitudes": [complex(z) for z in state.vector],
        "normalized": state.is_normalized,
        "partial_trace": "bilinear",
        **{k: float(v) for k, v in report.to_dict().items()},
    }
    return render(record, args.format)


def cmd_reconstruct(args) -> str:
    """exp(-i rho) for a Hermitian trace-one operator rho read from a file."""
    tol = _tolerances(args)
    rho_m = _load(args.file, "matrix")
    herm_err = max_abs(rho_m - rho_m.conj().T)
    if herm_err > tol.unitarity_tol:
        raise CliError(EXIT_INVARIANT, f"not Hermitian: max|rho - rho^dagger| = {herm_err:.3e}")
    trace_err = abs(complex(np.trace(rho_m)) - 1.0)
    if trace_err > 1e-9:
        raise CliError(EXIT_INVARIANT, f"trace is not one: |tr(rho) - 1| = {trace_err:.3e}")
    w, v = jacobi_hermitian((rho_m + rho_m.conj().T) / 2)
    rho = RhoOperator(w, v)
    unitary = reconstruct_unitary(rho)
    if args.format == "json":
        record = {"qubits": rho.qubits, "weights": [float(x) for x in w],
                  "unitary": [[_jsonable(complex(z)) for z in row] for row in unitary]}
        return json.dumps(record, indent=2) + "\n"
    return matrixio.format_array(unitary)


def _estimate_record(est) -> dict:
    return {"machine": machine_fingerprint(est.best_program.qubits), **est.to_dict()}


def cmd_estimate_state(args) -> str:
    x = _load(args.file, "state")
    if not is_normalized(x):
        raise CliError(EXIT_INVARIANT, "state is not normalized")
    est = estimate_state_complexity(x, budget=_budget(args.budget_bits, args.penalty_cap))
    return render(_estimate_record(est), args.format)


def cmd_estimate_unitary(args) -> str:
    tol = _tolerances(args)
    u = _load_unitary(args.file, tol)
    est = estimate_unitary_complexity(u, budget=_budget(args.budget_bits, args.penalty_cap), tol=tol)
    return render(_estimate_record(est), args.format)


def cmd_compare(args) -> str:
    tol = _tolerances(args)
    u = _load_unitary(args.file, tol)
    report = compare_duality(u, _budget(args.budget_bits, args.penalty_cap),
                             _budget(args.budget_dual_bits, args.penalty_cap), tol=tol)
    if args.format == "json":
        return json.dumps(report.to_dict(), indent=2) + "\n"
    return report.to_text()


def suite_rows(targets, budget_u: Budget, budget_d: Budget, tol: Tolerances) -> list[dict]:
    rows = []
    for name, u in targets:
        rep = compare_duality(u, budget_u, budget_d, tol=tol)
        rows.append({
            "name": name,
            "qubits": rep.qubits,
            "k_unitary": rep.k_unitary.value_bits,
            "k_dual": rep.k_dual.value_bits,
            "delta": rep.delta,
            "squared_norm": rep.k_dual.target_squared_norm,
            "exhausted_unitary": rep.k_unitary.exhausted,
            "exhausted_dual": rep.k_dual.exhausted,
            "program_unitary": rep.k_unitary.best_program.bits,
            "program_dual": rep.k_dual.best_program.bits,
        })
    return rows


def cmd_suite(args) -> str:
    tol = _tolerances(args)
    targets = []
    for token in args.gates:
        for name in filter(None, token.split(",")):
            if name not in BUILTIN_GATES:
                raise CliError(EXIT_INPUT, f"unknown gate {name!r}; choose from "
                                           f"{', '.join(BUILTIN_GATES)}")
            targets.append((name, BUILTIN_GATES[name]))
    if args.random:
        if args.qubits < 1:
            raise CliError(EXIT_INPUT, "--qubits must be >= 1")
        for k, u in enumerate(random_unitaries(args.random, args.qubits, args.seed)):
            targets.append((f"random{k}", u))
    budget_u = _budget(args.budget_bits, args.penalty_cap)
    budget_d = _budget(args.budget_dual_bits, args.penalty_cap)
    rows = suite_rows(targets, budget_u, budget_d, tol)
    qubit_counts = sorted({1, 2} | {r["qubits"] for r in rows} | {2 * r["qubits"] for r in rows})
    deltas = [r["delta"] for r in rows]
    summary = {"rows": len(rows), "min_delta": min(deltas) if deltas else None,
               "max_delta": max(deltas) if deltas else None}
    header = {
        "budget_bits": budget_u.max_program_bits,
        "budget_dual_bits": budget_d.max_program_bits,
        "penalty_cap": budget_u.max_penalty_bits,
        "hs_normalized": True,
        "machines": {str(n): machine_fingerprint(n) for n in qubit_counts},
    }
    if args.format == "json":
        return json.dumps({**header, "columns": list(SUITE_COLUMNS), "rows": rows,
                           "summary": summary}, indent=2) + "\n"
    out = [f"{k}={_fmt(header[k])}" for k in ("budget_bits", "budget_dual_bits",
                                               "penalty_cap", "hs_normalized")]
    out += [f"machine[{n}]={fp}" for n, fp in header["machines"].items()]
    out.append("\t".join(SUITE_COLUMNS))
    out += ["\t".join(_fmt(r[c]) for c in SUITE_COLUMNS) for r in rows]
    out.append("summary " + " ".join(f"{k}={'none' if v is None else v}" for k, v in summary.items()))
    return "\n".join(out) + "\n"


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None,
                        help="unitarity tolerance (default 1e-10); the eigen-residual "
                             "tolerance becomes max(1e-9, 10 * tol)")
    common.add_argument("--format", choices=("text", "json"), default="text")

    budgets = argparse.ArgumentParser(add_help=False)
    budgets.add_argument("--budget-bits", type=int, default=12,
                         help="max program length for the direct estimate (default 12)")
    budgets.add_argument("--penalty-cap", type=int, default=8,
                         help="skip candidates whose penalty exceeds this (default 8)")

    dual = argparse.ArgumentParser(add_help=False)
    dual.add_argument("--budget-dual-bits", type=int, default=15,
                      help="max program length for the dual-state estimate (default 15)")

    parser = argparse.ArgumentParser(prog="qkdual", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dualize", parents=[common], help="map a unitary to its dual state")
    p.add_argument("file")
    p.set_defaults(func=cmd_dualize)

    p = sub.add_parser("reconstruct", parents=[common],
                       help="exp(-i rho) for a Hermitian trace-one operator")
    p.add_argument("file")
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("estimate-state", parents=[common, budgets], help="state complexity")
    p.add_argument("file")
    p.set_defaults(func=cmd_estimate_state)

    p = sub.add_parser("estimate-unitary", parents=[common, budgets], help="unitary complexity")
    p.add_argument("file")
    p.set_defaults(func=cmd_estimate_unitary)

    p = sub.add_parser("compare", parents=[common, budgets, dual],
                       help="direct vs dual-state estimate of a unitary")
    p.add_argument("file")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("suite", parents=[common, budgets, dual],
                       help="duality table over built-in gates and random unitaries")
    p.add_argument("gates", nargs="*", help=f"built-in gate names: {' '.join(BUILTIN_GATES)}")
    p.add_argument("--random", type=int, default=0, metavar="COUNT")
    p.add_argument("--qubits", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_suite)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        sys.stdout.write(args.func(args))
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (NotUnitaryError, ConvergenceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except NoCandidateError as exc:
        print(f"error: estimation infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (DimensionError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
