"""Two-qubit density matrices: the singlet and its noisy descendants.

Every constructor returns a validated :class:`TwoQubitState`. The noisy
constructors are closed forms in the key error rate d; they must (and, per the
test suite, do) agree with pushing the singlet through the corresponding Kraus
channel on Bob's side.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import linalg

TRACE_TOL = 1e-10


def _check_range(name: str, value: float, lo: float, hi: float) -> float:
    value = float(value)
    if not (lo <= value <= hi):
        raise ValueError(f"{name} must be in [{lo:g}, {hi:g}], got {value!r}")
    return value


@dataclass(frozen=True, eq=False)
class TwoQubitState:
    """A 4x4 density matrix in the computational basis |00>,|01>,|10>,|11>.

    Construction validates unit trace, Hermiticity, and positive
    semidefiniteness (eigenvalues above -1e-10); the stored array is
    read-only.
    """

    matrix: np.ndarray

    def __post_init__(self) -> None:
        m = np.array(self.matrix, dtype=complex)
        if m.shape != (4, 4):
            raise ValueError(f"state matrix must be 4x4, got shape {m.shape}")
        tr = complex(np.trace(m))
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValueError(f"state trace must be 1, got {tr}")
        dev = linalg.max_asymmetry(m)
        if dev > linalg.HERMITICITY_TOL:
            raise ValueError(
                f"state matrix is not Hermitian: max asymmetry {dev:.3e}"
            )
        eigs = linalg.hermitian_eigenvalues(m)
        if float(eigs[-1]) < linalg.PSD_EIGENVALUE_FLOOR:
            raise ValueError(
                f"state matrix is not positive semidefinite: "
                f"min eigenvalue {float(eigs[-1]):.3e}"
            )
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    def diagonal(self) -> np.ndarray:
        """Real parts of the computational-basis populations."""
        return self.matrix.diagonal().real.copy()


@dataclass(frozen=True)
class KeyStatistics:
    """Computational-basis joint outcome probabilities and the key error rate.

    ``error_rate`` is the probability that the parties' raw key bits disagree
    after Bob flips his bit, i.e. the weight on the correlated outcomes 00/11.
    """

    p00: float
    p01: float
    p10: float
    p11: float
    error_rate: float

    def __post_init__(self) -> None:
        total = self.p00 + self.p01 + self.p10 + self.p11
        if abs(total - 1.0) > TRACE_TOL:
            raise ValueError(f"outcome probabilities must sum to 1, got {total!r}")
        if abs(self.error_rate - (self.p00 + self.p11)) > 1e-12:
            raise ValueError("error_rate must equal p00 + p11")

    def probability(self, i: int, j: int) -> float:
        return (
            (self.p00, self.p01),
            (self.p10, self.p11),
        )[i][j]


def key_statistics(state: TwoQubitState) -> KeyStatistics:
    """Measurement statistics of a matched-basis key round on ``state``."""
    d = state.diagonal()
    return KeyStatistics(
        p00=float(d[0]),
        p01=float(d[1]),
        p10=float(d[2]),
        p11=float(d[3]),
        error_rate=float(d[0] + d[3]),
    )


def singlet() -> TwoQubitState:
    """The two-qubit singlet (|01> - |10>)/sqrt(2) as a density matrix."""
    m = np.zeros((4, 4), dtype=complex)
    m[1, 1] = m[2, 2] = 0.5
    m[1, 2] = m[2, 1] = -0.5
    return TwoQubitState(m)


def noisy_singlet_depolarizing(d: float) -> TwoQubitState:
    """Singlet after one-sided depolarizing noise with key error rate d.

    Valid for d in [0, 1/2]; the underlying channel parameter is p = 2d and
    d = 1/2 is the maximally mixed state.
    """
    d = _check_range("d", d, 0.0, 0.5)
    m = 0.5 * np.array(
        [
            [d, 0, 0, 0],
            [0, 1.0 - d, 2.0 * d - 1.0, 0],
            [0, 2.0 * d - 1.0, 1.0 - d, 0],
            [0, 0, 0, d],
        ],
        dtype=complex,
    )
    return TwoQubitState(m)


def noisy_singlet_bitflip(d: float) -> TwoQubitState:
    """Singlet after a one-sided bit flip occurring with probability d.

    Valid for d in [0, 1]; equals the singlet mixed with the flipped Bell
    state (|00> - |11>)/sqrt(2) at weight d.
    """
    d = _check_range("d", d, 0.0, 1.0)
    m = 0.5 * np.array(
        [
            [d, 0, 0, -d],
            [0, 1.0 - d, -(1.0 - d), 0],
            [0, -(1.0 - d), 1.0 - d, 0],
            [-d, 0, 0, d],
        ],
        dtype=complex,
    )
    return TwoQubitState(m)


def noisy_singlet_gad(p: float, d: float) -> TwoQubitState:
    """Singlet after one-sided generalized amplitude damping.

    ``p`` is the channel's thermal mixing weight, ``d`` the key error rate
    (damping strength gamma = 2d, so d is valid on [0, 1/2]). The coherence
    decays as sqrt(1 - 2d) while the populations leak toward |00>/|11> with
    weights p and 1-p.
    """
    p = _check_range("p", p, 0.0, 1.0)
    d = _check_range("d", d, 0.0, 0.5)
    coh = -math.sqrt(1.0 - 2.0 * d)
    m = 0.5 * np.array(
        [
            [2.0 * p * d, 0, 0, 0],
            [0, 1.0 - 2.0 * p * d, coh, 0],
            [0, coh, 1.0 - 2.0 * (1.0 - p) * d, 0],
            [0, 0, 0, 2.0 * (1.0 - p) * d],
        ],
        dtype=complex,
    )
    return TwoQubitState(m)


def maximally_mixed() -> TwoQubitState:
    """I/4; useful as a reference point in tests and demos."""
    return TwoQubitState(np.eye(4, dtype=complex) / 4.0)
