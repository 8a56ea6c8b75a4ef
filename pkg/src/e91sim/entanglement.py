"""Wootters concurrence: spectral computation and family closed forms."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import linalg
from .states import TwoQubitState, _check_range

_YY = linalg.tensor(linalg.PAULI_Y, linalg.PAULI_Y)

# An eigenvalue of the Hermitian form below this signals numerical breakdown.
BREAKDOWN_FLOOR = -1e-8
# Eigenvalues below this are exact zeros drowned in matmul noise; taking
# their square root would inject ~1e-7 of error per rank-deficient direction.
ZERO_FLOOR = 1e-12


@dataclass(frozen=True)
class ConcurrenceSpectrum:
    """The four Wootters lambdas (descending) and the resulting concurrence."""

    lambdas: tuple[float, float, float, float]
    concurrence: float

    def __post_init__(self) -> None:
        ls = self.lambdas
        if len(ls) != 4 or any(l < 0.0 for l in ls):
            raise ValueError(f"lambdas must be four nonnegative reals, got {ls}")
        if any(ls[i] < ls[i + 1] for i in range(3)):
            raise ValueError(f"lambdas must be sorted descending, got {ls}")
        expected = max(0.0, ls[0] - ls[1] - ls[2] - ls[3])
        if abs(self.concurrence - expected) > 1e-12:
            raise ValueError("concurrence is inconsistent with the lambdas")


def spin_flip(rho: np.ndarray) -> np.ndarray:
    """(Y x Y) rho* (Y x Y), the spin-flipped state."""
    return _YY @ np.asarray(rho, dtype=complex).conj() @ _YY


def concurrence(state: TwoQubitState) -> ConcurrenceSpectrum:
    """Concurrence of a two-qubit state via the Hermitian spectral form.

    The lambdas are the square roots of the eigenvalues of
    sqrt(rho) · rho_tilde · sqrt(rho), which is Hermitian PSD; working with
    this form (rather than the non-Hermitian rho·rho_tilde) keeps the
    eigenproblem inside the Jacobi solver's contract.
    """
    rho = state.matrix
    root = linalg.matrix_sqrt_psd(rho)
    m = root @ spin_flip(rho) @ root
    m = 0.5 * (m + m.conj().T)
    xs = linalg.hermitian_eigenvalues(m)
    lambdas = []
    for x in xs:
        x = float(x)
        if x < BREAKDOWN_FLOOR:
            raise ValueError(
                f"concurrence spectrum breakdown: eigenvalue {x:.3e} below "
                f"{BREAKDOWN_FLOOR:g}"
            )
        lambdas.append(0.0 if x < ZERO_FLOOR else math.sqrt(x))
    c = max(0.0, lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3])
    return ConcurrenceSpectrum(tuple(lambdas), c)


def concurrence_dp_closed(d: float) -> float:
    """Closed-form concurrence of the depolarized singlet: 1 - 3d, floored at 0."""
    d = _check_range("d", d, 0.0, 0.5)
    return max(0.0, 1.0 - 3.0 * d)


def gad_disentanglement_threshold(p: float) -> float:
    """Error rate mu(p) at which the damped singlet's concurrence hits zero.

    Algebraically (sqrt(1 + 4p(1-p)) - 1) / (4p(1-p)), written in the
    equivalent form 1 / (1 + sqrt(1 + 4p(1-p))) which is exact at p in {0, 1}
    where the raw ratio degenerates to 0/0.
    """
    p = _check_range("p", p, 0.0, 1.0)
    q = 4.0 * p * (1.0 - p)
    return 1.0 / (1.0 + math.sqrt(1.0 + q))


def concurrence_gad_closed(p: float, d: float) -> float:
    """Closed-form concurrence of the singlet under one-sided damping.

    The Wootters spectrum is {lam_plus, lam_minus, lam1, lam1} with
    lam_plus/minus = sqrt((A ± sqrt(B)) / 2) and lam1 = sqrt(p(1-p)) d, where
    A = 1 - 2d + 2p(1-p)d^2 and B = (1-2d)(1 - 2d + 4p(1-p)d^2). The ordering
    lam_plus >= lam_minus, lam1 is asserted, not assumed.
    """
    p = _check_range("p", p, 0.0, 1.0)
    d = _check_range("d", d, 0.0, 0.5)
    q = p * (1.0 - p)
    a = 1.0 - 2.0 * d + 2.0 * q * d * d
    b = (1.0 - 2.0 * d) * (1.0 - 2.0 * d + 4.0 * q * d * d)
    root = math.sqrt(max(b, 0.0))
    lam_plus = math.sqrt(max(0.5 * (a + root), 0.0))
    lam_minus = math.sqrt(max(0.5 * (a - root), 0.0))
    lam1 = math.sqrt(q) * d
    if lam_plus + 1e-12 < lam_minus or lam_plus + 1e-12 < lam1:
        raise ValueError(
            f"largest Wootters lambda is not lam_plus at p={p}, d={d}; "
            f"spectrum ({lam_plus}, {lam_minus}, {lam1}, {lam1})"
        )
    if d >= gad_disentanglement_threshold(p):
        return 0.0
    return max(0.0, lam_plus - lam_minus - 2.0 * lam1)
