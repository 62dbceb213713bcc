"""Seeded random unitaries.

Entries are standard complex Gaussians ``(a + ib) / sqrt(2)`` drawn from
``numpy.random.default_rng(seed)`` (the PCG64 bit generator), then the
columns are orthonormalized by modified Gram-Schmidt. This yields
Haar-distributed unitaries.
"""

from __future__ import annotations

import numpy as np


def complex_gaussian(dim: int, rng: np.random.Generator) -> np.ndarray:
    re = rng.standard_normal((dim, dim))
    im = rng.standard_normal((dim, dim))
    return (re + 1j * im) / np.sqrt(2.0)


def modified_gram_schmidt(a) -> np.ndarray:
    q = np.array(a, dtype=complex)
    n = q.shape[1]
    for k in range(n):
        norm = np.linalg.norm(q[:, k])
        if norm == 0.0:
            raise np.linalg.LinAlgError("columns are linearly dependent")
        q[:, k] /= norm
        q[:, k + 1:] -= np.outer(q[:, k], q[:, k].conj() @ q[:, k + 1:])
    return q


def random_unitary(dim: int, rng: np.random.Generator | int | None = None) -> np.ndarray:
    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)
    return modified_gram_schmidt(complex_gaussian(dim, rng))


def random_unitaries(count: int, qubits: int, seed: int) -> list[np.ndarray]:
    rng = np.random.default_rng(seed)
    return [random_unitary(1 << qubits, rng) for _ in range(count)]
