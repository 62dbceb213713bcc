"""Independent reference computations used as test oracles.

Nothing here imports the package's decoder, enumerator or simulator. Bit
strings are scanned exhaustively and gates are built with explicit
Kronecker products.
"""

import functools
import itertools
import math

import numpy as np

_R2 = 1 / math.sqrt(2)
ONE_QUBIT = {
    "000": np.array([[_R2, _R2], [_R2, -_R2]]),
    "001": np.diag([1, 1j]),
    "010": np.diag([1, np.exp(1j * math.pi / 4)]),
    "011": np.array([[0, 1], [1, 0]]),
}
P0 = np.diag([1.0, 0.0])
P1 = np.diag([0.0, 1.0])
XMAT = np.array([[0.0, 1.0], [1.0, 0.0]])


def embed(ops, n):
    """kron of per-qubit operators, qubit 0 leftmost (most significant)."""
    out = np.eye(1)
    for q in range(n):
        out = np.kron(out, ops.get(q, np.eye(2)))
    return out


def cnot_matrix(c, t, n):
    return embed({c: P0}, n) + embed({c: P1, t: XMAT}, n)


def oracle_decode(bits, n):
    """Return the list of gate matrices, or None if ``bits`` is rejected."""
    w = math.ceil(math.log2(n)) if n > 1 else 0
    mats = []
    i = 0
    while i + 3 <= len(bits):
        op = bits[i:i + 3]
        i += 3
        if op == "101":
            pad = bits[i:i + w]
            if len(pad) != w or "1" in pad or i + w != len(bits):
                return None
            return mats
        if op in ONE_QUBIT:
            if i + w > len(bits):
                return None
            q = int(bits[i:i + w], 2) if w else 0
            i += w
            if q >= n:
                return None
            mats.append(embed({q: ONE_QUBIT[op]}, n))
        elif op == "100":
            if i + 2 * w > len(bits):
                return None
            c = int(bits[i:i + w], 2) if w else 0
            t = int(bits[i + w:i + 2 * w], 2) if w else 0
            i += 2 * w
            if c == t or c >= n or t >= n:
                return None
            mats.append(cnot_matrix(c, t, n))
        else:
            return None
    return None


def all_bitstrings(max_bits):
    for length in range(1, max_bits + 1):
        for tup in itertools.product("01", repeat=length):
            yield "".join(tup)


@functools.lru_cache(maxsize=None)
def _accepted(n, max_bits):
    return tuple(b for b in all_bitstrings(max_bits) if oracle_decode(b, n) is not None)


def accepted(n, max_bits):
    return list(_accepted(n, max_bits))


def oracle_unitary(bits, n):
    u = np.eye(2 ** n, dtype=complex)
    for m in oracle_decode(bits, n):
        u = m @ u
    return u


def oracle_minimum(n, max_bits, overlap_fn, cap=8):
    """Brute-force min of len(p) + ceil(-log2 overlap), tie-break (len, bits).

    Returns (value, bits, penalty).
    """
    best = None
    for bits in accepted(n, max_bits):
        o = round(overlap_fn(oracle_unitary(bits, n)), 12)
        if o <= 0:
            continue
        pen = 0 if o >= 1 else math.ceil(-math.log2(o))
        if pen > cap:
            continue
        key = (len(bits) + pen, len(bits), bits)
        if best is None or key < best[0]:
            best = (key, pen)
    (value, _, bits), pen = best
    return value, bits, pen


def state_oracle(x, n, max_bits, cap=8):
    x = np.asarray(x, dtype=complex)
    return oracle_minimum(n, max_bits, lambda u: abs(np.vdot(u[:, 0], x)) ** 2, cap)


def unitary_oracle(target, n, max_bits, cap=8):
    target = np.asarray(target, dtype=complex)
    d = 2 ** n
    return oracle_minimum(n, max_bits, lambda u: abs(np.trace(u.conj().T @ target)) ** 2 / d ** 2, cap)
