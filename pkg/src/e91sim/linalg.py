"""Dense complex linear algebra for the 2x2 and 4x4 matrices used everywhere else.

Matrices are plain numpy complex arrays. Two-qubit operators live in the
computational product basis |00>, |01>, |10>, |11> (row-major). The Hermitian
eigensolver is a cyclic Jacobi iteration: at these sizes it is simple, has no
dependencies beyond numpy storage, and is easy to cross-check against
independent oracles.
"""

from __future__ import annotations

import math

import numpy as np

#: Absolute tolerance used by :func:`allclose` when none is given.
DEFAULT_ATOL = 1e-9

# Inputs to the eigensolver must be Hermitian to within this bound.
HERMITICITY_TOL = 1e-10

# Cyclic Jacobi stops once the off-diagonal Frobenius norm drops below this.
_JACOBI_OFF_TOL = 1e-13
_JACOBI_MAX_SWEEPS = 100

# Eigenvalues of a nominally PSD matrix may undershoot zero by at most this.
PSD_EIGENVALUE_FLOOR = -1e-10


def _const(rows) -> np.ndarray:
    m = np.array(rows, dtype=complex)
    m.flags.writeable = False
    return m


I2 = _const([[1, 0], [0, 1]])
PAULI_X = _const([[0, 1], [1, 0]])
PAULI_Y = _const([[0, -1j], [1j, 0]])
PAULI_Z = _const([[1, 0], [0, -1]])
PAULIS = (PAULI_X, PAULI_Y, PAULI_Z)


def dagger(m: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return np.asarray(m).conj().T


def allclose(a, b, atol: float = DEFAULT_ATOL) -> bool:
    """Elementwise equality within an absolute tolerance.

    This is the only sanctioned way to compare matrices in this package;
    exact float comparison of computed matrices is never meaningful.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        return False
    return bool(np.max(np.abs(a - b)) <= atol) if a.size else True


def tensor(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product of two single-qubit (2x2) operators.

    Index convention: ``tensor(A, B)[2i+j, 2k+l] = A[i,k] * B[j,l]``, i.e.
    the first operand acts on qubit A (row-major product basis).
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != (2, 2) or b.shape != (2, 2):
        raise ValueError(
            f"tensor expects 2x2 operands, got shapes {a.shape} and {b.shape}"
        )
    return np.kron(a, b)


def max_asymmetry(m: np.ndarray) -> float:
    """Largest elementwise deviation of ``m`` from its conjugate transpose."""
    m = np.asarray(m, dtype=complex)
    return float(np.max(np.abs(m - m.conj().T)))


def _require_hermitian(m: np.ndarray) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    dev = max_asymmetry(m)
    if dev > HERMITICITY_TOL:
        raise ValueError(
            f"matrix is not Hermitian: max |M - M^dagger| = {dev:.3e} "
            f"exceeds {HERMITICITY_TOL:g}"
        )
    return m


def _jacobi_eigh(h: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic Jacobi diagonalization of a Hermitian matrix.

    Returns ``(values, vectors)`` with eigenvalues sorted descending and the
    matching eigenvectors as columns. Rotations run over plain Python complex
    scalars; for n <= 4 that beats array dispatch overhead by a wide margin.
    """
    n = h.shape[0]
    a = [[complex(h[i, j]) for j in range(n)] for i in range(n)]
    v = [[1.0 + 0j if i == j else 0j for j in range(n)] for i in range(n)]

    quarter_pi = 0.25 * math.pi
    for _ in range(_JACOBI_MAX_SWEEPS):
        off = math.sqrt(
            2.0 * sum(abs(a[p][q]) ** 2 for p in range(n) for q in range(p + 1, n))
        )
        if off <= _JACOBI_OFF_TOL:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p][q]
                if apq == 0:
                    continue
                app = a[p][p].real
                aqq = a[q][q].real
                mag = abs(apq)
                phase = apq / mag
                t = 0.5 * math.atan2(2.0 * mag, app - aqq)
                if t > quarter_pi:
                    # equivalent zeroing rotation closest to the identity,
                    # required for cyclic convergence
                    t -= 0.5 * math.pi
                c = math.cos(t)
                s = math.sin(t)
                sp = s * phase
                spc = s * phase.conjugate()
                for i in range(n):
                    if i == p or i == q:
                        continue
                    aip = a[i][p]
                    aiq = a[i][q]
                    a[i][p] = c * aip + spc * aiq
                    a[i][q] = -sp * aip + c * aiq
                    a[p][i] = a[i][p].conjugate()
                    a[q][i] = a[i][q].conjugate()
                a[p][p] = complex(c * c * app + 2.0 * c * s * mag + s * s * aqq)
                a[q][q] = complex(s * s * app - 2.0 * c * s * mag + c * c * aqq)
                a[p][q] = 0j
                a[q][p] = 0j
                for i in range(n):
                    vip = v[i][p]
                    viq = v[i][q]
                    v[i][p] = c * vip + spc * viq
                    v[i][q] = -sp * vip + c * viq
    else:
        raise np.linalg.LinAlgError(
            f"Jacobi iteration did not converge in {_JACOBI_MAX_SWEEPS} sweeps"
        )

    vals = np.array([a[i][i].real for i in range(n)])
    vecs = np.array(v, dtype=complex)
    order = np.argsort(-vals, kind="stable")
    return vals[order], vecs[:, order]


def hermitian_eigenvalues(h: np.ndarray) -> np.ndarray:
    """Real eigenvalues of a Hermitian matrix, sorted descending.

    The input must be Hermitian to within ``HERMITICITY_TOL``; the error
    message reports the offending asymmetry. Tiny negative values that a PSD
    caller wants to treat as zero are the caller's business, not clamped here.
    """
    h = _require_hermitian(h)
    vals, _ = _jacobi_eigh(h)
    return vals


def hermitian_eigensystem(h: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (descending) and matching eigenvector columns."""
    h = _require_hermitian(h)
    return _jacobi_eigh(h)


def matrix_sqrt_psd(h: np.ndarray) -> np.ndarray:
    """Principal square root of a positive semidefinite Hermitian matrix.

    Eigenvalues in ``[PSD_EIGENVALUE_FLOOR, 0)`` are clamped to zero; anything
    below the floor means the input was not PSD and raises.
    """
    h = _require_hermitian(h)
    vals, vecs = _jacobi_eigh(h)
    low = float(vals.min())
    if low < PSD_EIGENVALUE_FLOOR:
        raise ValueError(
            f"matrix is not positive semidefinite: eigenvalue {low:.3e} "
            f"below {PSD_EIGENVALUE_FLOOR:g}"
        )
    root = vecs @ np.diag(np.sqrt(np.maximum(vals, 0.0))) @ vecs.conj().T
    return 0.5 * (root + root.conj().T)
