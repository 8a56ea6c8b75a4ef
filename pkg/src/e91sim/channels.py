"""Single-qubit Kraus channels and their one-sided action on two-qubit states.

Three families are implemented:

depolarizing(p)
    E0 = sqrt(1 - 3p/4) I,  Ek = sqrt(p/4) sigma_k for k in {x, y, z}.
    Sends rho to p I/2 + (1-p) rho.

bit_flip(p)
    E0 = sqrt(p) I,  E1 = sqrt(1-p) X.  The qubit survives with probability p.

generalized_amplitude_damping(p, gamma)
    Four elements; relaxation of strength gamma toward a target that is |0>
    with weight p and |1> with weight 1-p.

All constructors produce complete (trace-preserving) sets; completeness is
checked explicitly by :func:`validate_cptp` and enforced before any channel is
applied to a state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import linalg
from .states import TwoQubitState

#: sum_k E_k^dagger E_k must equal the identity elementwise within this.
CPTP_TOL = 1e-10


class ChannelFamily(Enum):
    DEPOLARIZING = "depolarizing"
    BIT_FLIP = "bitflip"
    GENERALIZED_AMPLITUDE_DAMPING = "gad"


@dataclass(frozen=True, eq=False)
class KrausChannel:
    """A named family, its parameters, and the concrete Kraus elements.

    Elements are eagerly materialized 2x2 complex arrays (read-only). The
    dataclass itself does not enforce completeness so that deliberately
    corrupted channels can be constructed and reported on by
    :func:`validate_cptp`; the factory functions below always produce
    complete sets.
    """

    family: ChannelFamily
    params: dict[str, float]
    elements: tuple[np.ndarray, ...] = field(repr=False)

    def __post_init__(self) -> None:
        frozen = []
        for e in self.elements:
            e = np.array(e, dtype=complex)
            if e.shape != (2, 2):
                raise ValueError(f"Kraus elements must be 2x2, got shape {e.shape}")
            e.flags.writeable = False
            frozen.append(e)
        object.__setattr__(self, "elements", tuple(frozen))
        object.__setattr__(self, "params", dict(self.params))


@dataclass(frozen=True)
class CptpReport:
    """Result of a completeness check: worst deviation and pass/fail."""

    max_deviation: float
    passed: bool
    tolerance: float = CPTP_TOL


def _check_probability(name: str, value: float) -> float:
    value = float(value)
    if not (0.0 <= value <= 1.0):
        raise ValueError(f"{name} must be in [0, 1], got {value!r}")
    return value


def depolarizing(p: float) -> KrausChannel:
    """Depolarizing channel with error probability ``p``."""
    p = _check_probability("p", p)
    w = math.sqrt(p / 4.0)
    elements = (
        math.sqrt(1.0 - 0.75 * p) * linalg.I2,
        w * linalg.PAULI_X,
        w * linalg.PAULI_Y,
        w * linalg.PAULI_Z,
    )
    return KrausChannel(ChannelFamily.DEPOLARIZING, {"p": p}, elements)


def bit_flip(p: float) -> KrausChannel:
    """Bit-flip channel; the qubit is left alone with probability ``p``."""
    p = _check_probability("p", p)
    elements = (
        math.sqrt(p) * linalg.I2,
        math.sqrt(1.0 - p) * linalg.PAULI_X,
    )
    return KrausChannel(ChannelFamily.BIT_FLIP, {"p": p}, elements)


def generalized_amplitude_damping(p: float, gamma: float) -> KrausChannel:
    """Generalized amplitude damping with mixing weight ``p``, strength ``gamma``."""
    p = _check_probability("p", p)
    gamma = _check_probability("gamma", gamma)
    sp = math.sqrt(p)
    s1p = math.sqrt(1.0 - p)
    rg = math.sqrt(gamma)
    r1g = math.sqrt(1.0 - gamma)
    elements = (
        sp * np.array([[1.0, 0.0], [0.0, r1g]], dtype=complex),
        sp * np.array([[0.0, rg], [0.0, 0.0]], dtype=complex),
        s1p * np.array([[r1g, 0.0], [0.0, 1.0]], dtype=complex),
        s1p * np.array([[0.0, 0.0], [rg, 0.0]], dtype=complex),
    )
    return KrausChannel(
        ChannelFamily.GENERALIZED_AMPLITUDE_DAMPING,
        {"p": p, "gamma": gamma},
        elements,
    )


def completeness_deviation(channel: KrausChannel) -> float:
    """Largest elementwise deviation of sum_k E_k^dagger E_k from identity."""
    acc = np.zeros((2, 2), dtype=complex)
    for e in channel.elements:
        acc += e.conj().T @ e
    return float(np.max(np.abs(acc - linalg.I2)))


def validate_cptp(channel: KrausChannel) -> CptpReport:
    """Check the Kraus completeness relation to within :data:`CPTP_TOL`."""
    dev = completeness_deviation(channel)
    return CptpReport(max_deviation=dev, passed=dev <= CPTP_TOL)


def apply_single_qubit(channel: KrausChannel, rho: np.ndarray) -> np.ndarray:
    """Apply the channel to a single-qubit density matrix (no validation)."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (2, 2):
        raise ValueError(f"expected a 2x2 density matrix, got shape {rho.shape}")
    out = np.zeros((2, 2), dtype=complex)
    for e in channel.elements:
        out += e @ rho @ e.conj().T
    return out


def apply_one_sided(channel: KrausChannel, state: TwoQubitState) -> TwoQubitState:
    """Apply the channel to qubit B of a two-qubit state: sum (I x E) rho (I x E)^+.

    Raises if the channel fails its completeness check; the returned state is
    re-validated by construction.
    """
    report = validate_cptp(channel)
    if not report.passed:
        raise ValueError(
            f"channel fails the completeness relation: deviation "
            f"{report.max_deviation:.3e} exceeds {report.tolerance:g}"
        )
    rho = state.matrix
    out = np.zeros((4, 4), dtype=complex)
    for e in channel.elements:
        big = linalg.tensor(linalg.I2, e)
        out += big @ rho @ big.conj().T
    return TwoQubitState(out)
