"""Reference machine: prefix-free bit programs decoded into gate circuits.

A program is a sequence of tokens. Each token is a 3-bit opcode followed by
qubit-index fields of ``w = ceil(log2 n)`` bits, most significant bit first:

    000 H(q)    001 S(q)    010 T(q)    011 X(q)
    100 CNOT(c, t)          101 HALT    110, 111 invalid

Single-qubit gates carry one index field and CNOT carries two. HALT carries
one field that must be all zeros, so every token except CNOT is ``3 + w``
bits wide. A program is accepted iff HALT ends exactly at the last bit.
The number of qubits is a machine parameter and is not encoded in the bits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, NamedTuple

import numpy as np

from .errors import ProgramRejected

OPCODES = {"H": "000", "S": "001", "T": "010", "X": "011", "CNOT": "100", "HALT": "101"}
_KIND_BY_OPCODE = {code: kind for kind, code in OPCODES.items()}
SINGLE_QUBIT_GATES = ("H", "S", "T", "X")

_R2 = 1.0 / math.sqrt(2.0)
GATE_MATRICES = {
    "H": np.array([[_R2, _R2], [_R2, -_R2]], dtype=complex),
    "S": np.array([[1, 0], [0, 1j]], dtype=complex),
    "T": np.array([[1, 0], [0, np.exp(1j * math.pi / 4)]], dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
}


def index_width(n: int) -> int:
    if n < 1:
        raise ValueError(f"qubit count must be >= 1, got {n}")
    return (n - 1).bit_length()


def halt_width(n: int) -> int:
    return 3 + index_width(n)


def machine_fingerprint(n: int) -> str:
    opmap = ",".join(f"{kind}={code}" for kind, code in OPCODES.items())
    return f"gates=H,S,T,X,CNOT opcodes={opmap} index_bits={index_width(n)} qubits={n}"


class Gate(NamedTuple):
    kind: str
    qubits: tuple[int, ...]

    def __str__(self):
        return f"{self.kind}({','.join(map(str, self.qubits))})"


@dataclass(frozen=True)
class Circuit:
    gates: tuple[Gate, ...]
    qubits: int

    def __post_init__(self):
        for g in self.gates:
            if g.kind == "CNOT":
                ok = len(g.qubits) == 2 and g.qubits[0] != g.qubits[1]
            else:
                ok = g.kind in SINGLE_QUBIT_GATES and len(g.qubits) == 1
            if not ok or not all(0 <= q < self.qubits for q in g.qubits):
                raise ValueError(f"invalid gate {g} on {self.qubits} qubits")

    def __str__(self):
        return " ".join([*map(str, self.gates), "HALT"])


@dataclass(frozen=True, order=True)
class Program:
    bits: str
    qubits: int

    @property
    def length(self) -> int:
        return len(self.bits)

    def __str__(self):
        return self.bits


def decode_program(bits: str, n: int) -> Circuit:
    """Parse ``bits`` into a circuit, raising ProgramRejected on failure."""
    w = index_width(n)
    if set(bits) - {"0", "1"}:
        raise ProgramRejected("non-binary character", bits)
    gates = []
    pos = 0
    size = len(bits)

    def field() -> int:
        nonlocal pos
        if pos + w > size:
            raise ProgramRejected("truncated index field", bits)
        value = int(bits[pos:pos + w], 2) if w else 0
        pos += w
        if value >= n:
            raise ProgramRejected(f"qubit index {value} out of range", bits)
        return value

    while True:
        if pos + 3 > size:
            raise ProgramRejected("missing HALT" if pos == size else "truncated opcode", bits)
        kind = _KIND_BY_OPCODE.get(bits[pos:pos + 3])
        pos += 3
        if kind is None:
            raise ProgramRejected(f"invalid opcode {bits[pos - 3:pos]}", bits)
        if kind == "HALT":
            if pos + w > size:
                raise ProgramRejected("truncated HALT padding", bits)
            if "1" in bits[pos:pos + w]:
                raise ProgramRejected("nonzero HALT padding", bits)
            pos += w
            if pos != size:
                raise ProgramRejected("trailing bits after HALT", bits)
            return Circuit(tuple(gates), n)
        if kind == "CNOT":
            control, target = field(), field()
            if control == target:
                raise ProgramRejected("CNOT control equals target", bits)
            gates.append(Gate(kind, (control, target)))
        else:
            gates.append(Gate(kind, (field(),)))


def _field_bits(q: int, w: int) -> str:
    return format(q, f"0{w}b") if w else ""


def encode_circuit(circuit: Circuit) -> Program:
    w = index_width(circuit.qubits)
    parts = [OPCODES[g.kind] + "".join(_field_bits(q, w) for q in g.qubits) for g in circuit.gates]
    parts.append(OPCODES["HALT"] + "0" * w)
    return Program("".join(parts), circuit.qubits)


def _apply_gate(tensor: np.ndarray, gate: Gate, n: int) -> np.ndarray:
    # tensor has n qubit axes followed by one batch axis.
    if gate.kind == "CNOT":
        c, t = gate.qubits
        out = tensor.copy()
        idx1 = [slice(None)] * tensor.ndim
        idx1[c] = 1
        sub = out[tuple(idx1)]
        # axis t shifts down by one once axis c is removed
        sub_t = t - 1 if t > c else t
        out[tuple(idx1)] = np.flip(sub, axis=sub_t)
        return out
    q = gate.qubits[0]
    moved = np.tensordot(GATE_MATRICES[gate.kind], tensor, axes=([1], [q]))
    return np.moveaxis(moved, 0, q)


def _run(circuit: Circuit, columns: np.ndarray) -> np.ndarray:
    n = circuit.qubits
    tensor = columns.reshape([2] * n + [-1])
    for gate in circuit.gates:
        tensor = _apply_gate(tensor, gate, n)
    return tensor.reshape(1 << n, -1)


def run_state(circuit: Circuit, n: int | None = None) -> np.ndarray:
    """Apply the circuit to |0...0>."""
    n = circuit.qubits if n is None else n
    if n != circuit.qubits:
        raise ValueError(f"circuit acts on {circuit.qubits} qubits, not {n}")
    start = np.zeros((1 << n, 1), dtype=complex)
    start[0, 0] = 1.0
    return _run(circuit, start)[:, 0]


def run_unitary(circuit: Circuit, n: int | None = None) -> np.ndarray:
    """Matrix of the circuit: the product G_k ... G_1 for gates G_1..G_k."""
    n = circuit.qubits if n is None else n
    if n != circuit.qubits:
        raise ValueError(f"circuit acts on {circuit.qubits} qubits, not {n}")
    return _run(circuit, np.eye(1 << n, dtype=complex))


@lru_cache(maxsize=None)
def _tokens(n: int) -> tuple[tuple[str, Gate | None], ...]:
    """All tokens for n qubits as (bits, gate), sorted by bit string. HALT has gate None."""
    w = index_width(n)
    toks = [(OPCODES["HALT"] + "0" * w, None)]
    for kind in SINGLE_QUBIT_GATES:
        for q in range(n):
            toks.append((OPCODES[kind] + _field_bits(q, w), Gate(kind, (q,))))
    for c in range(n):
        for t in range(n):
            if c != t:
                toks.append((OPCODES["CNOT"] + _field_bits(c, w) + _field_bits(t, w), Gate("CNOT", (c, t))))
    return tuple(sorted(toks))


@lru_cache(maxsize=None)
def count_programs(n: int, length: int) -> int:
    """Number of accepted programs of exactly ``length`` bits."""
    total = 0
    for bits, gate in _tokens(n):
        rest = length - len(bits)
        if gate is None:
            total += rest == 0
        elif rest > 0:
            total += count_programs(n, rest)
    return total


def _programs_of_length(n: int, length: int, prefix: str, gates: list) -> Iterator[tuple[str, list]]:
    # Tokens are prefix-free, so visiting them in sorted order yields lexicographic order.
    for bits, gate in _tokens(n):
        rest = length - len(bits)
        if gate is None:
            if rest == 0:
                yield prefix + bits, gates
        elif rest > 0 and count_programs(n, rest):
            gates.append(gate)
            yield from _programs_of_length(n, rest, prefix + bits, gates)
            gates.pop()


def enumerate_programs(n: int, max_bits: int) -> Iterator[tuple[Program, Circuit]]:
    """Every accepted program of at most ``max_bits`` bits, shortest first,
    lexicographic within a length."""
    if max_bits < halt_width(n):
        raise ValueError(f"max_bits must be at least {halt_width(n)} for n={n}")
    for length in range(halt_width(n), max_bits + 1):
        if not count_programs(n, length):
            continue
        for bits, gates in _programs_of_length(n, length, "", []):
            yield Program(bits, n), Circuit(tuple(gates), n)
