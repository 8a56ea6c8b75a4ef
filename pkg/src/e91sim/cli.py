"""Command-line front end: parameter sweeps, critical rates, protocol runs.

Subcommands
-----------
sweep     CSV of concurrence / CHSH / QBER quantities over an error-rate grid.
critical  CSV with the error rate where |S| crosses 2 for one family.
protocol  One Monte Carlo session; exit code encodes the verdict.
state     Print a noisy state's matrix and derived quantities.

CSV numbers are rendered with 9 significant digits, so outputs are byte-stable
across runs. Exit codes: 0 success (protocol: Secure), 2 usage error,
3 BellViolationFailed, 4 InsufficientSamples.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass

from . import bell, channels, entanglement, states
from .channels import ChannelFamily
from .protocol import ProtocolConfig, ProtocolReport, Verdict, run_ekert91

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_BELL_FAILED = 3
EXIT_INSUFFICIENT = 4

SWEEP_HEADER = "family,p,d,concurrence,s_plane,s_optimal,qber"
CRITICAL_HEADER = "family,p,d_critical,concurrence_at_critical"
PROTOCOL_HEADER = (
    "channel,p,d,pairs,seed,s_threshold,"
    "sifted_key_length,qber_estimate,s_estimate,s_standard_error,verdict"
)

QUANTITIES = ("concurrence", "s_plane", "s_optimal", "qber")

_FAMILY_D_MAX = {
    ChannelFamily.DEPOLARIZING: 0.5,
    ChannelFamily.BIT_FLIP: 1.0,
    ChannelFamily.GENERALIZED_AMPLITUDE_DAMPING: 0.5,
}

_VERDICT_EXIT = {
    Verdict.SECURE: EXIT_OK,
    Verdict.BELL_VIOLATION_FAILED: EXIT_BELL_FAILED,
    Verdict.INSUFFICIENT_SAMPLES: EXIT_INSUFFICIENT,
}


def fmt(x: float) -> str:
    """Fixed 9-significant-digit rendering; negative zero normalized."""
    x = float(x)
    if x == 0.0:
        x = 0.0
    return f"{x:.9g}"


def _family_state(family: ChannelFamily, d: float, p: float | None) -> states.TwoQubitState:
    if family is ChannelFamily.DEPOLARIZING:
        return states.noisy_singlet_depolarizing(d)
    if family is ChannelFamily.BIT_FLIP:
        return states.noisy_singlet_bitflip(d)
    return states.noisy_singlet_gad(p, d)


@dataclass(frozen=True)
class SweepSpec:
    """A validated sweep request: family, fixed params, d grid, quantities."""

    family: ChannelFamily
    d_min: float = 0.0
    d_max: float | None = None
    d_step: float = 0.01
    p: float | None = None
    quantities: tuple[str, ...] = QUANTITIES

    def __post_init__(self) -> None:
        family_max = _FAMILY_D_MAX[self.family]
        d_max = family_max if self.d_max is None else float(self.d_max)
        d_min = float(self.d_min)
        step = float(self.d_step)
        if not (0.0 <= d_min <= d_max <= family_max):
            raise ValueError(
                f"need 0 <= d-min <= d-max <= {family_max:g} for "
                f"{self.family.value}, got [{d_min!r}, {d_max!r}]"
            )
        if not (step > 0.0 and math.isfinite(step)):
            raise ValueError(f"d-step must be positive, got {step!r}")
        if self.family is ChannelFamily.GENERALIZED_AMPLITUDE_DAMPING:
            if self.p is None:
                raise ValueError("the gad family needs --p")
        elif self.p is not None:
            raise ValueError(f"--p is not a parameter of the {self.family.value} family")
        unknown = [q for q in self.quantities if q not in QUANTITIES]
        if unknown:
            raise ValueError(
                f"unknown quantities {unknown}; choose from {', '.join(QUANTITIES)}"
            )
        if not self.quantities:
            raise ValueError("at least one quantity is required")
        object.__setattr__(self, "d_min", d_min)
        object.__setattr__(self, "d_max", d_max)
        object.__setattr__(self, "d_step", step)
        object.__setattr__(self, "quantities", tuple(self.quantities))

    def grid(self) -> list[float]:
        """d values d_min, d_min+step, ... snapped onto the family domain."""
        n = int(math.floor((self.d_max - self.d_min) / self.d_step + 1e-9))
        points = []
        for i in range(n + 1):
            d = self.d_min + i * self.d_step
            if d > self.d_max:
                d = self.d_max
            points.append(d)
        return points


def run_sweep(spec: SweepSpec) -> str:
    """Render the sweep as CSV text (header + one row per grid point)."""
    wanted = set(spec.quantities)
    rows = [SWEEP_HEADER]
    p_cell = fmt(spec.p) if spec.p is not None else ""
    for d in spec.grid():
        state = _family_state(spec.family, d, spec.p)
        cells = {
            "concurrence": (
                fmt(entanglement.concurrence(state).concurrence)
                if "concurrence" in wanted
                else ""
            ),
            "s_plane": (
                fmt(abs(bell.chsh_s(state))) if "s_plane" in wanted else ""
            ),
            "s_optimal": fmt(bell.optimal_s(state)) if "s_optimal" in wanted else "",
            "qber": (
                fmt(states.key_statistics(state).error_rate)
                if "qber" in wanted
                else ""
            ),
        }
        rows.append(
            ",".join(
                [spec.family.value, p_cell, fmt(d)]
                + [cells[q] for q in QUANTITIES]
            )
        )
    return "\n".join(rows) + "\n"


@dataclass(frozen=True)
class CriticalResult:
    family: ChannelFamily
    p: float | None
    d_critical: float
    concurrence_at_critical: float


def find_critical(family: ChannelFamily, p: float | None = None) -> CriticalResult:
    """Bisect the |S| = 2 crossing and evaluate the concurrence there."""
    d_c = bell.critical_error_rate(family, p=p)
    c = entanglement.concurrence(_family_state(family, d_c, p)).concurrence
    return CriticalResult(family=family, p=p, d_critical=d_c, concurrence_at_critical=c)


def _critical_csv(result: CriticalResult) -> str:
    p_cell = fmt(result.p) if result.p is not None else ""
    row = ",".join(
        [result.family.value, p_cell, fmt(result.d_critical), fmt(result.concurrence_at_critical)]
    )
    return CRITICAL_HEADER + "\n" + row + "\n"


def run_protocol(
    channel_name: str,
    d: float | None,
    p: float | None,
    pairs: int,
    seed: int,
    s_threshold: float,
) -> tuple[ProtocolReport, str]:
    """Build the channel, run one session, and render the CSV row."""
    if channel_name == "identity":
        if d is not None or p is not None:
            raise ValueError("the identity channel takes neither --d nor --p")
        channel = channels.depolarizing(0.0)
    elif channel_name == "depolarizing":
        if d is None:
            raise ValueError("--d is required for the depolarizing channel")
        if p is not None:
            raise ValueError("--p is not a parameter of the depolarizing channel")
        if not 0.0 <= d <= 0.5:
            raise ValueError(f"depolarizing d must be in [0, 0.5], got {d!r}")
        channel = channels.depolarizing(2.0 * d)
    elif channel_name == "bitflip":
        if d is None:
            raise ValueError("--d is required for the bitflip channel")
        if p is not None:
            raise ValueError("--p is not a parameter of the bitflip channel")
        if not 0.0 <= d <= 1.0:
            raise ValueError(f"bitflip d must be in [0, 1], got {d!r}")
        channel = channels.bit_flip(1.0 - d)
    elif channel_name == "gad":
        if d is None or p is None:
            raise ValueError("the gad channel needs both --d and --p")
        if not 0.0 <= d <= 0.5:
            raise ValueError(f"gad d must be in [0, 0.5], got {d!r}")
        channel = channels.generalized_amplitude_damping(p, 2.0 * d)
    else:
        raise ValueError(f"unknown channel {channel_name!r}")

    cfg = ProtocolConfig(
        n_pairs=pairs, channel=channel, rng_seed=seed, s_threshold=s_threshold
    )
    report = run_ekert91(cfg)
    row = ",".join(
        [
            channel_name,
            fmt(p) if p is not None else "",
            fmt(d) if d is not None else "",
            str(pairs),
            str(seed),
            fmt(s_threshold),
            str(report.sifted_key_length),
            fmt(report.qber_estimate),
            fmt(report.s_estimate),
            fmt(report.s_standard_error),
            report.verdict.value,
        ]
    )
    return report, PROTOCOL_HEADER + "\n" + row + "\n"


def _protocol_text(report: ProtocolReport, s_threshold: float) -> str:
    lines = [
        f"sifted key length: {report.sifted_key_length}",
        f"qber estimate: {fmt(report.qber_estimate)} (channel value {fmt(report.qber_expected)})",
        f"S estimate: {fmt(report.s_estimate)} +/- {fmt(report.s_standard_error)}",
        f"|S| - 2*SE: {fmt(abs(report.s_estimate) - 2.0 * report.s_standard_error)}"
        f" (threshold {fmt(s_threshold)})",
        f"verdict: {report.verdict.value}",
    ]
    return "\n".join(lines) + "\n"


def _entry_str(value: complex) -> str:
    if abs(value.imag) < 1e-15:
        return fmt(value.real)
    return f"{fmt(value.real)}{value.imag:+.9g}j"


def _state_text(family: ChannelFamily, d: float, p: float | None) -> str:
    state = _family_state(family, d, p)
    lines = [f"family: {family.value}"]
    if p is not None:
        lines.append(f"p: {fmt(p)}")
    lines.append(f"d: {fmt(d)}")
    lines.append("density matrix (basis |00>,|01>,|10>,|11>):")
    for row in state.matrix:
        lines.append("  " + "  ".join(_entry_str(x) for x in row))
    spectrum = entanglement.concurrence(state)
    lines.append(f"concurrence: {fmt(spectrum.concurrence)}")
    s = bell.chsh_s(state)
    lines.append(f"S (canonical angles): {fmt(s)}")
    lines.append(f"|S|: {fmt(abs(s))}")
    lines.append(f"S optimal: {fmt(bell.optimal_s(state))}")
    lines.append(f"qber: {fmt(states.key_statistics(state).error_rate)}")
    return "\n".join(lines) + "\n"


def _emit(text: str, out_path: str | None) -> None:
    if out_path is None:
        sys.stdout.write(text)
    else:
        with open(out_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="e91sim",
        description="Decoherence and CHSH security analysis for the Ekert91 protocol.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    families = [f.value for f in ChannelFamily]

    sweep = sub.add_parser(
        "sweep",
        help="tabulate quantities over an error-rate grid",
        description=f"Emit CSV with columns: {SWEEP_HEADER}. Unrequested "
        "quantity columns are left empty; the p column is filled for gad only.",
    )
    sweep.add_argument("--family", required=True, choices=families)
    sweep.add_argument("--p", type=float, help="gad mixing weight (gad only)")
    sweep.add_argument("--d-min", type=float, default=0.0)
    sweep.add_argument("--d-max", type=float, default=None,
                       help="default: the family's domain edge")
    sweep.add_argument("--d-step", type=float, default=0.01)
    sweep.add_argument("--quantities", default=",".join(QUANTITIES),
                       help=f"comma-separated subset of: {', '.join(QUANTITIES)}")
    sweep.add_argument("--out", default=None, help="write CSV here instead of stdout")

    critical = sub.add_parser(
        "critical",
        help="locate the error rate where |S| crosses 2",
        description=f"Emit CSV with columns: {CRITICAL_HEADER}.",
    )
    critical.add_argument("--family", required=True, choices=families)
    critical.add_argument("--p", type=float, help="gad mixing weight (gad only)")
    critical.add_argument("--out", default=None)

    protocol = sub.add_parser(
        "protocol",
        help="run one Monte Carlo session",
        description="Print a session report; exit 0 on Secure, 3 on "
        "BellViolationFailed, 4 on InsufficientSamples. With --out, also "
        f"write a one-row CSV with columns: {PROTOCOL_HEADER}.",
    )
    protocol.add_argument("--channel", required=True,
                          choices=["identity", "depolarizing", "bitflip", "gad"])
    protocol.add_argument("--d", type=float, default=None, help="key error rate")
    protocol.add_argument("--p", type=float, default=None, help="gad mixing weight")
    protocol.add_argument("--pairs", type=int, default=100000)
    protocol.add_argument("--seed", type=int, default=0)
    protocol.add_argument("--s-threshold", type=float, default=2.0)
    protocol.add_argument("--out", default=None, help="also write a CSV row here")

    state = sub.add_parser(
        "state",
        help="print a noisy state and its derived quantities",
    )
    state.add_argument("--family", required=True, choices=families)
    state.add_argument("--d", type=float, required=True)
    state.add_argument("--p", type=float, default=None, help="gad mixing weight")
    state.add_argument("--out", default=None)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "sweep":
            spec = SweepSpec(
                family=ChannelFamily(args.family),
                d_min=args.d_min,
                d_max=args.d_max,
                d_step=args.d_step,
                p=args.p,
                quantities=tuple(
                    q.strip() for q in args.quantities.split(",") if q.strip()
                ),
            )
            _emit(run_sweep(spec), args.out)
            return EXIT_OK
        if args.command == "critical":
            result = find_critical(ChannelFamily(args.family), p=args.p)
            _emit(_critical_csv(result), args.out)
            return EXIT_OK
        if args.command == "protocol":
            report, csv_text = run_protocol(
                args.channel, args.d, args.p, args.pairs, args.seed, args.s_threshold
            )
            sys.stdout.write(_protocol_text(report, args.s_threshold))
            if args.out is not None:
                _emit(csv_text, args.out)
            return _VERDICT_EXIT[report.verdict]
        if args.command == "state":
            family = ChannelFamily(args.family)
            if family is ChannelFamily.GENERALIZED_AMPLITUDE_DAMPING:
                if args.p is None:
                    raise ValueError("the gad family needs --p")
            elif args.p is not None:
                raise ValueError(f"--p is not a parameter of the {family.value} family")
            _emit(_state_text(family, args.d, args.p), args.out)
            return EXIT_OK
    except ValueError as exc:
        print(f"e91sim: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    raise AssertionError(f"unhandled command {args.command!r}")


if __name__ == "__main__":
    sys.exit(main())
