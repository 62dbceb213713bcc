"""Acceptance criteria. Each test records one PASS/FAIL line, printed in the
pytest terminal summary under "acceptance criteria"."""

import contextlib
import math
import subprocess
import sys
import time

import numpy as np
import pytest

import oracles
from conftest import ACCEPTANCE_LINES, GATES, R2
from qkdual.duality import build_rho, dualize, purify, reconstruct_unitary
from qkdual.estimator import Budget, estimate_state_complexity, estimate_unitary_complexity
from qkdual.linalg import formal_partial_trace_R, max_abs
from qkdual.sampling import random_unitaries

pytestmark = pytest.mark.acceptance


@contextlib.contextmanager
def criterion(label):
    start = time.perf_counter()
    try:
        yield
    except BaseException as exc:
        ACCEPTANCE_LINES.append(f"FAIL  {label}  ({type(exc).__name__}: {exc})".splitlines()[0])
        raise
    ACCEPTANCE_LINES.append(f"PASS  {label}  [{time.perf_counter() - start:.2f}s]")


def test_1_duality_roundtrip():
    with criterion("1 duality round trip, 200 random unitaries per n in {1,2,3}"):
        start = time.perf_counter()
        worst = dict(trace=0.0, herm=0.0, ptrace=0.0, fid=0.0)
        for n in (1, 2, 3):
            for u in random_unitaries(200, n, seed=1000 + n):
                rho = build_rho(u)
                m = rho.matrix
                worst["trace"] = max(worst["trace"], abs(np.trace(m) - 1))
                worst["herm"] = max(worst["herm"], max_abs(m - m.conj().T))
                worst["ptrace"] = max(worst["ptrace"], max_abs(formal_partial_trace_R(purify(rho).vector) - m))
                fid = abs(np.trace(u.conj().T @ reconstruct_unitary(rho))) / 2 ** n
                worst["fid"] = max(worst["fid"], abs(1 - fid))
        elapsed = time.perf_counter() - start
        assert worst["trace"] <= 1e-10, worst
        assert worst["herm"] <= 1e-10, worst
        assert worst["ptrace"] <= 1e-10, worst
        assert worst["fid"] <= 1e-9, worst
        assert elapsed <= 10.0, f"took {elapsed:.1f}s"


def test_2_bell_fixture():
    with criterion("2 Bell fixture: dualize(I2) and weights of I4"):
        assert max_abs(dualize(GATES["I"]).vector - np.array([R2, 0, 0, R2])) <= 1e-12
        assert max_abs(build_rho(np.eye(4)).weights - 0.25) <= 1e-12


def test_3_z_fixture():
    with criterion("3 Z fixture: weights ((1-pi)/2, (1+pi)/2), squared norm pi"):
        w = build_rho(GATES["Z"]).weights
        assert max_abs(w - np.array([(1 - math.pi) / 2, (1 + math.pi) / 2])) <= 1e-12
        assert abs(dualize(GATES["Z"]).squared_norm - math.pi) <= 1e-10


STATE_TARGETS = {
    "|0>": np.array([1, 0], dtype=complex),
    "|1>": np.array([0, 1], dtype=complex),
    "|+>": np.array([R2, R2], dtype=complex),
    "(|0>+i|1>)/sqrt2": np.array([R2, 1j * R2]),
    "TH|0>": np.array([R2, np.exp(1j * math.pi / 4) * R2]),
}


def test_4_oracle_equivalence():
    with criterion("4 oracle equivalence at 12 bits (5 states, 6 unitaries)"):
        start = time.perf_counter()
        budget = Budget(12)
        for name, x in STATE_TARGETS.items():
            e = estimate_state_complexity(x, 1, budget)
            got = (e.value_bits, e.best_program.bits, e.penalty_bits)
            assert got == oracles.state_oracle(x, 1, 12), name
        for name, u in GATES.items():
            e = estimate_unitary_complexity(u, 1, budget)
            got = (e.value_bits, e.best_program.bits, e.penalty_bits)
            assert got == oracles.unitary_oracle(u, 1, 12), name
        assert time.perf_counter() - start <= 60.0


def test_5_invariance_suite():
    with criterion("5 phase invariance, budget anti-monotonicity, prefix-freeness"):
        for name, u in GATES.items():
            base = estimate_unitary_complexity(u, 1, Budget(12))
            for theta in (math.pi / 7, 1.0, 3.0):
                assert estimate_unitary_complexity(np.exp(1j * theta) * u, 1, Budget(12)) == base, name

        def value(fn, target, bits):
            try:
                return fn(target, 1, Budget(bits)).value_bits
            except Exception:  # NoCandidateError at small budgets counts as +inf
                return math.inf

        targets = [(estimate_state_complexity, x) for x in STATE_TARGETS.values()]
        targets += [(estimate_unitary_complexity, u) for u in GATES.values()]
        for fn, target in targets:
            vals = [value(fn, target, b) for b in (6, 9, 12)]
            assert vals[0] >= vals[1] >= vals[2] < math.inf, vals

        acc = set(oracles.accepted(1, 12))
        assert acc
        for b in acc:
            assert not any(b[:k] in acc for k in range(1, len(b))), b


def _suite_output():
    cmd = [sys.executable, "-m", "qkdual", "suite", "I", "X", "Z", "S", "T", "H",
           "--budget-bits", "12", "--budget-dual-bits", "15"]
    proc = subprocess.run(cmd, capture_output=True, text=True, timeout=300)
    assert proc.returncode == 0, proc.stderr
    return proc.stdout


def test_6_duality_table():
    with criterion("6 duality table over I,X,Z,S,T,H at budgets (12, 15)"):
        start = time.perf_counter()
        first = _suite_output()
        second = _suite_output()
        assert time.perf_counter() - start <= 300.0
        assert first == second
        lines = first.splitlines()
        head = next(i for i, ln in enumerate(lines) if ln.startswith("name\t"))
        cols = lines[head].split("\t")
        rows = [dict(zip(cols, ln.split("\t"))) for ln in lines[head + 1:-1]]
        assert [r["name"] for r in rows] == list("IXZSTH")
        for r in rows:
            for key in ("k_unitary", "k_dual", "delta"):
                int(r[key])
            assert math.isfinite(float(r["squared_norm"]))
            assert r["exhausted_unitary"] == r["exhausted_dual"] == "true"
        assert rows[0]["delta"] == "2"
