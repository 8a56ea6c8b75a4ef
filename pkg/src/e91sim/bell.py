"""CHSH correlations for in-plane (azimuthal) measurement directions.

Directions are parameterized by a single azimuthal angle theta; the +1
eigenvector of the measured observable is (|0> + e^{i theta} |1>)/sqrt(2).
The canonical CHSH configuration a1=0, a2=pi/2, b1=pi/4, b2=3pi/4 maximizes
|S| for the singlet at -2*sqrt(2) (signed value; report |S| when quoting a
violation).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from . import linalg
from .channels import ChannelFamily
from .states import (
    TwoQubitState,
    noisy_singlet_bitflip,
    noisy_singlet_depolarizing,
    noisy_singlet_gad,
)

TAU = 2.0 * math.pi

#: CHSH crossing is located to within this bracket width.
BISECTION_TOL = 1e-10
_BISECTION_MAX_ITER = 200


@dataclass(frozen=True)
class MeasurementDirection:
    """An azimuthal measurement angle, normalized into [0, 2*pi)."""

    theta: float

    def __post_init__(self) -> None:
        theta = float(self.theta)
        if not math.isfinite(theta):
            raise ValueError(f"theta must be finite, got {theta!r}")
        object.__setattr__(self, "theta", theta % TAU)


@dataclass(frozen=True)
class ChshConfig:
    """The two-by-two grid of directions entering the CHSH combination."""

    a1: MeasurementDirection
    a2: MeasurementDirection
    b1: MeasurementDirection
    b2: MeasurementDirection


CANONICAL_CHSH = ChshConfig(
    a1=MeasurementDirection(0.0),
    a2=MeasurementDirection(math.pi / 2),
    b1=MeasurementDirection(math.pi / 4),
    b2=MeasurementDirection(3 * math.pi / 4),
)


class JointProbabilities(NamedTuple):
    """Outcome probabilities (P++, P+-, P-+, P--) for one direction pair."""

    pp: float
    pm: float
    mp: float
    mm: float


def _eigvector(theta: float, sign: int) -> np.ndarray:
    return np.array([1.0, sign * cmath.exp(1j * theta)], dtype=complex) / math.sqrt(2)


def joint_probabilities(
    state: TwoQubitState, a: MeasurementDirection, b: MeasurementDirection
) -> JointProbabilities:
    """Joint +-1 outcome probabilities when A measures along a and B along b."""
    rho = state.matrix
    ap = _eigvector(a.theta, +1)
    am = _eigvector(a.theta, -1)
    bp = _eigvector(b.theta, +1)
    bm = _eigvector(b.theta, -1)

    def prob(u: np.ndarray, w: np.ndarray) -> float:
        v = np.kron(u, w)
        return float(np.real(v.conj() @ rho @ v))

    return JointProbabilities(
        pp=prob(ap, bp), pm=prob(ap, bm), mp=prob(am, bp), mm=prob(am, bm)
    )


def correlation(
    state: TwoQubitState, a: MeasurementDirection, b: MeasurementDirection
) -> float:
    """Expectation of the +-1 outcome product, E(a, b)."""
    p = joint_probabilities(state, a, b)
    return p.pp - p.pm - p.mp + p.mm


def chsh_s(state: TwoQubitState, config: ChshConfig = CANONICAL_CHSH) -> float:
    """Signed CHSH combination E(a1,b1) - E(a1,b2) + E(a2,b1) + E(a2,b2)."""
    return (
        correlation(state, config.a1, config.b1)
        - correlation(state, config.a1, config.b2)
        + correlation(state, config.a2, config.b1)
        + correlation(state, config.a2, config.b2)
    )


@dataclass(frozen=True, eq=False)
class CorrelationTensor:
    """T_ij = Tr[rho sigma_i x sigma_j] for i, j in {x, y, z}."""

    t: np.ndarray

    def __post_init__(self) -> None:
        t = np.array(self.t, dtype=float)
        if t.shape != (3, 3):
            raise ValueError(f"correlation tensor must be 3x3, got shape {t.shape}")
        worst = float(np.max(np.abs(t)))
        if worst > 1.0 + 1e-9:
            raise ValueError(f"correlation tensor entry out of [-1, 1]: {worst}")
        t.flags.writeable = False
        object.__setattr__(self, "t", t)


def correlation_tensor(state: TwoQubitState) -> CorrelationTensor:
    rho = state.matrix
    t = np.empty((3, 3))
    for i, si in enumerate(linalg.PAULIS):
        for j, sj in enumerate(linalg.PAULIS):
            t[i, j] = float(np.real(np.trace(rho @ linalg.tensor(si, sj))))
    return CorrelationTensor(t)


def optimal_s(state: TwoQubitState) -> float:
    """Largest |S| over all measurement directions: 2*sqrt(m1 + m2).

    m1 >= m2 are the two largest eigenvalues of T^T T. The in-plane
    :func:`chsh_s` at any configuration is bounded by this value.
    """
    t = correlation_tensor(state).t
    eigs = linalg.hermitian_eigenvalues(t.T @ t)
    m1 = max(float(eigs[0]), 0.0)
    m2 = max(float(eigs[1]), 0.0)
    return 2.0 * math.sqrt(m1 + m2)


_FAMILY_STATES: dict[ChannelFamily, tuple[Callable[..., TwoQubitState], float]] = {
    ChannelFamily.DEPOLARIZING: (noisy_singlet_depolarizing, 0.5),
    ChannelFamily.BIT_FLIP: (noisy_singlet_bitflip, 1.0),
    ChannelFamily.GENERALIZED_AMPLITUDE_DAMPING: (noisy_singlet_gad, 0.5),
}


def critical_error_rate(
    family: ChannelFamily,
    *,
    p: float | None = None,
    config: ChshConfig = CANONICAL_CHSH,
    d_max: float | None = None,
) -> float:
    """Error rate at which |S| for the family's noisy singlet crosses 2.

    Bisection on [0, d_max] to a bracket width of 1e-10. ``p`` is required for
    the generalized-amplitude-damping family and rejected otherwise. Raises if
    there is no CHSH violation at d=0 or if |S| - 2 does not change sign on
    the interval.
    """
    constructor, family_max = _FAMILY_STATES[family]
    if family is ChannelFamily.GENERALIZED_AMPLITUDE_DAMPING:
        if p is None:
            raise ValueError("the GAD family needs its mixing weight p")
        state_of = lambda d: constructor(p, d)  # noqa: E731
    else:
        if p is not None:
            raise ValueError(f"p is not a parameter of the {family.value} family")
        state_of = constructor
    if d_max is None:
        d_max = family_max
    if not (0.0 < d_max <= family_max):
        raise ValueError(f"d_max must be in (0, {family_max:g}], got {d_max!r}")

    def excess(d: float) -> float:
        return abs(chsh_s(state_of(d), config)) - 2.0

    lo, hi = 0.0, float(d_max)
    f_lo = excess(lo)
    if f_lo <= 0.0:
        raise ValueError(
            f"no violation at d=0 with this configuration: |S| = {f_lo + 2.0:.6f}"
        )
    if excess(hi) >= 0.0:
        raise ValueError(
            f"|S| - 2 does not change sign on [0, {hi:g}]; no crossing to find"
        )
    for _ in range(_BISECTION_MAX_ITER):
        if hi - lo <= BISECTION_TOL:
            break
        mid = 0.5 * (lo + hi)
        if excess(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
