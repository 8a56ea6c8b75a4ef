"""Monte Carlo simulation of the Ekert91 entanglement-based key protocol.

Each round, a singlet is distributed, Bob's half passes through the configured
noise channel, and both parties pick one of three measurement directions
uniformly at random. Rounds with matching directions are sifted into the raw
key (Bob flips his bit, so errors are the anticorrelation failures); four of
the mismatched combinations feed the CHSH estimator; the rest are discarded.

Sampling is vectorized over independently seeded batches
(numpy PCG64 generators spawned from a single SeedSequence), so a run is
reproducible bit-for-bit from its config and the per-batch tallies can be
merged in any order.
"""

from __future__ import annotations

import math
import operator
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .bell import CANONICAL_CHSH, ChshConfig, MeasurementDirection, TAU, joint_probabilities
from .channels import KrausChannel, apply_one_sided
from .states import TwoQubitState, key_statistics, singlet

E91_ALICE_ANGLES = (
    MeasurementDirection(0.0),
    MeasurementDirection(math.pi / 4),
    MeasurementDirection(math.pi / 2),
)
E91_BOB_ANGLES = (
    MeasurementDirection(math.pi / 4),
    MeasurementDirection(math.pi / 2),
    MeasurementDirection(3 * math.pi / 4),
)

_ANGLE_MATCH_TOL = 1e-12

# Outcome category orders are fixed; tallies and CDFs use them everywhere.
KEY_OUTCOMES = ((0, 0), (0, 1), (1, 0), (1, 1))
CHSH_OUTCOMES = ((+1, +1), (+1, -1), (-1, +1), (-1, -1))


class Verdict(Enum):
    SECURE = "Secure"
    BELL_VIOLATION_FAILED = "BellViolationFailed"
    INSUFFICIENT_SAMPLES = "InsufficientSamples"


def _same_direction(a: MeasurementDirection, b: MeasurementDirection) -> bool:
    delta = abs(a.theta - b.theta) % TAU
    return min(delta, TAU - delta) < _ANGLE_MATCH_TOL


@dataclass(frozen=True)
class ProtocolConfig:
    """Inputs of one simulated session.

    ``chsh`` names which four angle pairs estimate S (its directions must
    appear in the parties' angle sets); ``batch_size`` fixes the seed schedule
    of the vectorized sampler and therefore participates in determinism.
    """

    n_pairs: int
    channel: KrausChannel
    alice_angles: tuple[MeasurementDirection, ...] = E91_ALICE_ANGLES
    bob_angles: tuple[MeasurementDirection, ...] = E91_BOB_ANGLES
    rng_seed: int = 0
    s_threshold: float = 2.0
    chsh: ChshConfig = CANONICAL_CHSH
    batch_size: int = 1 << 17

    def __post_init__(self) -> None:
        try:
            n_pairs = operator.index(self.n_pairs)
            rng_seed = operator.index(self.rng_seed)
            batch_size = operator.index(self.batch_size)
        except TypeError as exc:
            raise ValueError(f"integer field holds a non-integer: {exc}") from exc
        if n_pairs < 1:
            raise ValueError(f"n_pairs must be a positive integer, got {n_pairs!r}")
        if not 0 <= rng_seed < 2**64:
            raise ValueError(f"rng_seed must be a 64-bit unsigned integer, got {rng_seed!r}")
        if batch_size < 1:
            raise ValueError(f"batch_size must be a positive integer, got {batch_size!r}")
        object.__setattr__(self, "n_pairs", n_pairs)
        object.__setattr__(self, "rng_seed", rng_seed)
        object.__setattr__(self, "batch_size", batch_size)
        if not math.isfinite(self.s_threshold) or self.s_threshold <= 0.0:
            raise ValueError(f"s_threshold must be positive, got {self.s_threshold!r}")
        alice = tuple(
            a if isinstance(a, MeasurementDirection) else MeasurementDirection(a)
            for a in self.alice_angles
        )
        bob = tuple(
            b if isinstance(b, MeasurementDirection) else MeasurementDirection(b)
            for b in self.bob_angles
        )
        if len(alice) != 3 or len(bob) != 3:
            raise ValueError("each party needs exactly three measurement directions")
        object.__setattr__(self, "alice_angles", alice)
        object.__setattr__(self, "bob_angles", bob)
        matches = sum(
            1 for a in alice for b in bob if _same_direction(a, b)
        )
        if matches != 2:
            raise ValueError(
                f"exactly two angle pairs must coincide for key sifting, found {matches}"
            )
        for name, direction, pool in (
            ("a1", self.chsh.a1, alice),
            ("a2", self.chsh.a2, alice),
            ("b1", self.chsh.b1, bob),
            ("b2", self.chsh.b2, bob),
        ):
            if not any(_same_direction(direction, x) for x in pool):
                raise ValueError(f"CHSH direction {name} is not in the party's angle set")

    def chsh_pairs(self) -> tuple[tuple[MeasurementDirection, MeasurementDirection], ...]:
        """The four (alice, bob) direction pairs feeding the S estimate."""
        return (
            (self.chsh.a1, self.chsh.b1),
            (self.chsh.a1, self.chsh.b2),
            (self.chsh.a2, self.chsh.b1),
            (self.chsh.a2, self.chsh.b2),
        )


@dataclass(frozen=True)
class ProtocolReport:
    """Outputs of one simulated session; comparable field-by-field."""

    sifted_key_length: int
    qber_estimate: float
    qber_expected: float
    s_estimate: float
    s_standard_error: float
    verdict: Verdict
    key_counts: tuple[int, int, int, int]
    chsh_counts: tuple[tuple[int, int, int, int], ...]
    n_discarded: int


def sample_pair_outcome(
    state: TwoQubitState,
    a: MeasurementDirection,
    b: MeasurementDirection,
    rng: np.random.Generator,
) -> tuple[int, int]:
    """Draw one (+-1, +-1) outcome pair by inverse transform over the CDF.

    Categories follow :data:`CHSH_OUTCOMES` order; one uniform variate is
    consumed per call.
    """
    probs = joint_probabilities(state, a, b)
    edges = np.cumsum(np.maximum(probs, 0.0))[:3]
    u = rng.random()
    category = int(np.searchsorted(edges, u, side="right"))
    return CHSH_OUTCOMES[category]


def estimate_s(cell_counts) -> tuple[float, float]:
    """CHSH estimate and its standard error from per-cell outcome counts.

    ``cell_counts`` holds four rows (cells a1b1, a1b2, a2b1, a2b2), each with
    counts for the outcomes in :data:`CHSH_OUTCOMES` order. Counts may be
    non-integer (useful for exactness checks); every cell must be non-empty.
    Per-cell correlations are combined with signs (+, -, +, +) and the
    binomial variances (1 - E^2)/N add in quadrature.
    """
    rows = [tuple(float(x) for x in row) for row in cell_counts]
    if len(rows) != 4 or any(len(r) != 4 for r in rows):
        raise ValueError("cell_counts must be 4 cells x 4 outcome counts")
    correlations = []
    variance = 0.0
    for row in rows:
        n = sum(row)
        if n <= 0.0:
            raise ValueError("empty CHSH cell: cannot estimate a correlation")
        e = (row[0] + row[3] - row[1] - row[2]) / n
        correlations.append(e)
        variance += max(0.0, 1.0 - e * e) / n
    s = correlations[0] - correlations[1] + correlations[2] + correlations[3]
    return s, math.sqrt(variance)


def _classify_combos(cfg: ProtocolConfig) -> list[list[tuple[str, int]]]:
    """Map each (alice index, bob index) combo to its role.

    Returns a 3x3 table of ("key", -1) / ("chsh", cell) / ("discard", -1).
    Matching angles always sift to key; the CHSH cells are taken from
    ``cfg.chsh``.
    """
    pairs = cfg.chsh_pairs()
    table: list[list[tuple[str, int]]] = []
    for a in cfg.alice_angles:
        row: list[tuple[str, int]] = []
        for b in cfg.bob_angles:
            if _same_direction(a, b):
                row.append(("key", -1))
                continue
            for cell, (ca, cb) in enumerate(pairs):
                if _same_direction(a, ca) and _same_direction(b, cb):
                    row.append(("chsh", cell))
                    break
            else:
                row.append(("discard", -1))
        table.append(row)
    return table


def _cdf_edges(probs) -> np.ndarray:
    return np.cumsum(np.maximum(np.asarray(probs, dtype=float), 0.0))[:3]


def _batch_tallies(
    rng: np.random.Generator,
    size: int,
    table,
    key_edges: np.ndarray,
    cell_edges: list[np.ndarray],
):
    """Tally one batch: (key counts[4], chsh counts[4][4], discarded)."""
    alice = rng.integers(0, 3, size)
    bob = rng.integers(0, 3, size)
    u = rng.random(size)
    key = np.zeros(4, dtype=np.int64)
    cells = np.zeros((4, 4), dtype=np.int64)
    discarded = 0
    for i in range(3):
        for j in range(3):
            mask = (alice == i) & (bob == j)
            hits = int(mask.sum())
            if hits == 0:
                continue
            kind, cell = table[i][j]
            if kind == "discard":
                discarded += hits
                continue
            edges = key_edges if kind == "key" else cell_edges[cell]
            cats = np.searchsorted(edges, u[mask], side="right")
            counts = np.bincount(cats, minlength=4)
            if kind == "key":
                key += counts
            else:
                cells[cell] += counts
    return key, cells, discarded


def _batch_sizes(n: int, batch_size: int) -> list[int]:
    sizes = [batch_size] * (n // batch_size)
    if n % batch_size:
        sizes.append(n % batch_size)
    return sizes


def run_ekert91(cfg: ProtocolConfig) -> ProtocolReport:
    """Simulate one session and reduce it to a report.

    Key rounds sample the computational-basis statistics of the shared state
    (matched analyzer settings only mark a round as key material); CHSH
    rounds sample the four joint +-1 outcome probabilities of their cell.
    The verdict is Secure iff |s| - 2*SE clears ``cfg.s_threshold``; any empty
    CHSH cell, or an empty sifted key, is InsufficientSamples.
    """
    state = apply_one_sided(cfg.channel, singlet())
    stats = key_statistics(state)
    key_edges = _cdf_edges([stats.p00, stats.p01, stats.p10, stats.p11])
    cell_edges = [
        _cdf_edges(joint_probabilities(state, a, b)) for a, b in cfg.chsh_pairs()
    ]
    table = _classify_combos(cfg)

    key = np.zeros(4, dtype=np.int64)
    cells = np.zeros((4, 4), dtype=np.int64)
    discarded = 0
    seeds = np.random.SeedSequence(cfg.rng_seed)
    sizes = _batch_sizes(cfg.n_pairs, cfg.batch_size)
    for child, size in zip(seeds.spawn(len(sizes)), sizes):
        rng = np.random.Generator(np.random.PCG64(child))
        bkey, bcells, bdisc = _batch_tallies(rng, size, table, key_edges, cell_edges)
        key += bkey
        cells += bcells
        discarded += bdisc

    sifted = int(key.sum())
    qber = float((key[0] + key[3]) / sifted) if sifted else 0.0
    insufficient = sifted == 0 or any(int(row.sum()) == 0 for row in cells)
    if insufficient:
        s, se = 0.0, 0.0
        verdict = Verdict.INSUFFICIENT_SAMPLES
    else:
        s, se = estimate_s(cells)
        verdict = (
            Verdict.SECURE
            if abs(s) - 2.0 * se > cfg.s_threshold
            else Verdict.BELL_VIOLATION_FAILED
        )
    return ProtocolReport(
        sifted_key_length=sifted,
        qber_estimate=qber,
        qber_expected=stats.error_rate,
        s_estimate=float(s),
        s_standard_error=float(se),
        verdict=verdict,
        key_counts=tuple(int(x) for x in key),
        chsh_counts=tuple(tuple(int(x) for x in row) for row in cells),
        n_discarded=int(discarded),
    )
