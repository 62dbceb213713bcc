"""Dense complex linear algebra at dimension 2^n.

Matrices and state vectors are plain ``numpy`` arrays of dtype ``complex128``.
Qubit 0 is the most significant bit of a basis index, so ``|q0 q1 ... >``
maps to row ``q0 * 2^(n-1) + q1 * 2^(n-2) + ...``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DimensionError, NotNormalizedError, NotUnitaryError

TWO_PI = 2.0 * math.pi

# Mixing constants for A_t = Re(U) + t * Im(U); the first is the default.
MIXING_SEQUENCE = (0.618, 0.414, 1.732, 0.2679, 2.414, 0.1, 3.3, 0.83, 5.1, 0.05)

# Above this size the Hermitian step uses LAPACK instead of Jacobi sweeps.
JACOBI_MAX_DIM = 64

_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class Tolerances:
    unitarity_tol: float = 1e-10
    eig_residual_tol: float = 1e-9
    phase_snap_tol: float = 1e-12

    def __post_init__(self):
        for name in ("unitarity_tol", "eig_residual_tol", "phase_snap_tol"):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise ValueError(f"{name} must be a positive finite number, got {value!r}")


DEFAULT_TOLERANCES = Tolerances()


def qubit_count(dim: int) -> int:
    """Return n for dim = 2^n (n >= 0), raising DimensionError otherwise."""
    if dim < 1 or dim & (dim - 1):
        raise DimensionError(f"dimension {dim} is not a power of two")
    return dim.bit_length() - 1


def as_square(a, *, name: str = "matrix") -> np.ndarray:
    """Coerce ``a`` to a finite complex square matrix of power-of-two size."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionError(f"{name} must be square, got shape {m.shape}")
    qubit_count(m.shape[0])
    if not np.all(np.isfinite(m)):
        raise ValueError(f"{name} has non-finite entries")
    return m


def as_state(x, *, name: str = "state") -> np.ndarray:
    v = np.asarray(x, dtype=complex)
    if v.ndim != 1:
        raise DimensionError(f"{name} must be one-dimensional, got shape {v.shape}")
    qubit_count(v.shape[0])
    if not np.all(np.isfinite(v)):
        raise ValueError(f"{name} has non-finite entries")
    return v


def is_normalized(x, tol: float = 1e-10) -> bool:
    v = np.asarray(x, dtype=complex)
    return abs(float(np.vdot(v, v).real) - 1.0) <= tol


def hs_inner(a, b) -> complex:
    """Hilbert-Schmidt inner product tr(A^dagger B)."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape or a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"shape mismatch: {a.shape} vs {b.shape}")
    return complex(np.vdot(a, b))


def max_abs(a) -> float:
    a = np.asarray(a)
    return float(np.max(np.abs(a))) if a.size else 0.0


def is_unitary(u, tol: Tolerances = DEFAULT_TOLERANCES) -> bool:
    m = np.asarray(u, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or not np.all(np.isfinite(m)):
        return False
    return max_abs(m.conj().T @ m - np.eye(m.shape[0])) <= tol.unitarity_tol


def fidelity_overlap(z, x, tol: float = 1e-10) -> float:
    """Return |<z|x>|^2 for unit vectors ``z`` and ``x``.

    The inner product conjugates the left argument. The result is clipped to
    [0, 1] to absorb rounding.
    """
    z = as_state(z, name="z")
    x = as_state(x, name="x")
    if z.shape != x.shape:
        raise DimensionError(f"dimension mismatch: {z.shape[0]} vs {x.shape[0]}")
    for name, v in (("z", z), ("x", x)):
        if not is_normalized(v, tol):
            raise NotNormalizedError(f"{name} is not normalized (norm^2 = {np.vdot(v, v).real!r})")
    f = abs(np.vdot(z, x)) ** 2
    return float(min(max(f, 0.0), 1.0))


def formal_partial_trace_R(psi, *, conjugate: bool = False) -> np.ndarray:
    """Reduce a 2n-qubit amplitude vector to an operator on the first n qubits.

    ``psi`` is indexed by ``i_A * 2^n + i_R``; write ``Psi[a, r]`` for that
    amplitude grid. The auxiliary factor is paired with the dual of A, so a
    vector ``sum_i c_i |v_i> (x) |conj(v_i)>`` is the operator
    ``sum_i c_i |v_i><v_i|``. The default bilinear reduction multiplies two
    amplitudes without conjugating either:

        M[a, b] = sum_r Psi[a, r] * Psi[r, b]

    which returns ``sum_i c_i^2 |v_i><v_i|``. With imaginary coefficients this
    keeps the sign of c_i^2, unlike the physical partial trace. For any state
    with a symmetric amplitude grid (Bell states, product states |k>|k>,
    real purifications) both reductions agree.

    ``conjugate=True`` gives the physical partial trace ``Psi @ Psi^dagger``.
    """
    v = as_state(psi, name="psi")
    total = qubit_count(v.shape[0])
    if total % 2:
        raise DimensionError(f"dimension {v.shape[0]} is not 2^(2n)")
    d = 1 << (total // 2)
    grid = v.reshape(d, d)
    if conjugate:
        return grid @ grid.conj().T
    return grid @ grid


def jacobi_hermitian(a, *, max_sweeps: int = 64) -> tuple[np.ndarray, np.ndarray]:
    """Diagonalize a Hermitian matrix with cyclic complex Jacobi rotations.

    Returns ``(w, V)`` with real ``w`` and unitary ``V`` such that
    ``A V = V diag(w)``. Pivots are visited in row-cyclic order, so the
    result is fully deterministic. No sorting is applied.
    """
    a = np.array(a, dtype=complex)
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    if n == 1:
        return a.real.diagonal().copy(), v
    scale = np.linalg.norm(a)
    if scale == 0.0:
        return np.zeros(n), v
    threshold = 4.0 * n * _EPS * scale
    for _ in range(max_sweeps):
        off = np.linalg.norm(a - np.diag(a.diagonal()))
        if off <= threshold:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag <= _EPS * _EPS * scale:
                    continue
                phase = apq / mag
                tau = (a[q, q].real - a[p, p].real) / (2.0 * mag)
                t = 1.0 / (tau + math.copysign(math.hypot(1.0, tau), tau)) if tau != 0.0 else 1.0
                c = 1.0 / math.hypot(1.0, t)
                s = t * c
                # G = diag(1, conj(phase)) @ [[c, s], [-s, c]]
                g = np.array([[c, s], [-s * phase.conjugate(), c * phase.conjugate()]])
                idx = [p, q]
                a[:, idx] = a[:, idx] @ g
                a[idx, :] = g.conj().T @ a[idx, :]
                a[p, q] = a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                v[:, idx] = v[:, idx] @ g
    return a.real.diagonal().copy(), v


@dataclass(frozen=True)
class PhaseSpectrum:
    """Eigenphases of a unitary: ``U = V diag(exp(-i phases)) V^dagger``."""

    phases: np.ndarray
    eigenbasis: np.ndarray

    def __post_init__(self):
        self.phases.setflags(write=False)
        self.eigenbasis.setflags(write=False)

    @property
    def qubits(self) -> int:
        return qubit_count(len(self.phases))

    @property
    def dim(self) -> int:
        return len(self.phases)

    def unitary(self) -> np.ndarray:
        v = self.eigenbasis
        return (v * np.exp(-1j * self.phases)) @ v.conj().T


def _eigenphase(lam: complex, snap: float) -> float:
    phi = (-math.atan2(lam.imag, lam.real)) % TWO_PI
    if phi < snap or TWO_PI - phi < snap:
        return 0.0
    return phi


def _fix_column_phases(v: np.ndarray) -> np.ndarray:
    # First non-negligible entry of each column becomes real and positive.
    k = np.argmax(np.abs(v) > 1e-8, axis=0)
    lead = v[k, np.arange(v.shape[1])]
    out = v * (np.abs(lead) / lead)
    out[k, np.arange(v.shape[1])] = np.abs(lead)
    return out


def unitary_eigendecomposition(u, tol: Tolerances = DEFAULT_TOLERANCES) -> PhaseSpectrum:
    """Eigenphases in [0, 2pi) and an orthonormal eigenbasis of a unitary.

    The Hermitian matrix ``Re(U) + t Im(U)`` (with ``Re``/``Im`` the Hermitian
    and anti-Hermitian halves) commutes with U and is diagonalized by Jacobi
    rotations; eigenvalues of U are then read off as Rayleigh quotients. If
    a coincidence in that mixture merges distinct eigenvalues of U, the next
    constant of ``MIXING_SEQUENCE`` is tried. Matrices larger than
    ``JACOBI_MAX_DIM`` are diagonalized with ``numpy.linalg.eigh``.
    """
    m = as_square(u, name="U")
    if not is_unitary(m, tol):
        raise NotUnitaryError("U^dagger U differs from I by more than "
                              f"{tol.unitarity_tol:g}")
    n = m.shape[0]
    herm = (m + m.conj().T) / 2.0
    skew = (m - m.conj().T) / 2j
    solver = jacobi_hermitian if n <= JACOBI_MAX_DIM else np.linalg.eigh
    worst = math.inf
    for t in MIXING_SEQUENCE:
        _, v = solver(herm + t * skew)
        v = _fix_column_phases(v)
        lam = np.sum(v.conj() * (m @ v), axis=0)
        phases = np.array([_eigenphase(complex(x), tol.phase_snap_tol) for x in lam])
        # Equal phases: larger leading entries first, so a degenerate identity keeps V = I.
        keys = [(phases[k], tuple(-c for z in v[:, k] for c in (z.real, z.imag))) for k in range(n)]
        order = sorted(range(n), key=keys.__getitem__)
        phases = phases[order]
        v = np.ascontiguousarray(v[:, order])
        residual = max_abs(m @ v - v * np.exp(-1j * phases))
        orth = max_abs(v.conj().T @ v - np.eye(n))
        worst = min(worst, max(residual, orth))
        if residual <= tol.eig_residual_tol and orth <= tol.eig_residual_tol:
            return PhaseSpectrum(phases, v)
    raise ConvergenceError(f"eigendecomposition residual {worst:.3e} exceeds "
                           f"{tol.eig_residual_tol:g} for every mixing constant")
