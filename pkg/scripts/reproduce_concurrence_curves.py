"""Regenerate the concurrence-vs-error-rate curves and critical rates.

Writes one sweep CSV per channel family (the damping family once per mixing
weight in --p-values) plus a critical_rates.csv summary into --out-dir.
With --plot, also renders the curves to concurrence_curves.png; the
depolarizing curve should sit below every damping curve, and among damping
curves p=0.5 should be the lowest.
"""

from __future__ import annotations

import argparse
import pathlib

from e91sim.channels import ChannelFamily
from e91sim.cli import CRITICAL_HEADER, SweepSpec, find_critical, fmt, run_sweep


def parse_args() -> argparse.Namespace:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out-dir", default="results", help="directory for CSV output")
    parser.add_argument("--d-step", type=float, default=0.01)
    parser.add_argument(
        "--p-values",
        default="0,0.9,0.7,0.5",
        help="comma-separated damping mixing weights",
    )
    parser.add_argument("--plot", action="store_true", help="also write a PNG figure")
    return parser.parse_args()


def main() -> None:
    args = parse_args()
    out_dir = pathlib.Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    p_values = [float(x) for x in args.p_values.split(",") if x.strip()]

    sweeps = {"depolarizing": SweepSpec(family=ChannelFamily.DEPOLARIZING, d_step=args.d_step)}
    sweeps["bitflip"] = SweepSpec(
        family=ChannelFamily.BIT_FLIP, d_max=0.5, d_step=args.d_step
    )
    for p in p_values:
        sweeps[f"gad_p{p:g}"] = SweepSpec(
            family=ChannelFamily.GENERALIZED_AMPLITUDE_DAMPING, p=p, d_step=args.d_step
        )

    curves = {}
    for name, spec in sweeps.items():
        csv_text = run_sweep(spec)
        path = out_dir / f"{name}.csv"
        path.write_text(csv_text, encoding="utf-8", newline="")
        rows = [line.split(",") for line in csv_text.splitlines()[1:]]
        curves[name] = ([float(r[2]) for r in rows], [float(r[3]) for r in rows])
        print(f"wrote {path} ({len(rows)} rows)")

    lines = [CRITICAL_HEADER]
    for family, p in [
        (ChannelFamily.DEPOLARIZING, None),
        (ChannelFamily.BIT_FLIP, None),
    ] + [(ChannelFamily.GENERALIZED_AMPLITUDE_DAMPING, p) for p in p_values]:
        result = find_critical(family, p=p)
        lines.append(
            ",".join(
                [
                    family.value,
                    fmt(p) if p is not None else "",
                    fmt(result.d_critical),
                    fmt(result.concurrence_at_critical),
                ]
            )
        )
        label = family.value if p is None else f"{family.value} p={p:g}"
        print(f"{label}: D_c = {result.d_critical:.9f}")
    summary = out_dir / "critical_rates.csv"
    summary.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="")
    print(f"wrote {summary}")

    if args.plot:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt

        fig, ax = plt.subplots(figsize=(6, 4))
        style = {"depolarizing": ":", "bitflip": "-."}
        for name, (ds, cs) in curves.items():
            ax.plot(ds, cs, style.get(name, "-"), label=name.replace("_", " "))
        ax.set_xlabel("key error rate d")
        ax.set_ylabel("concurrence")
        ax.set_xlim(0.0, 0.5)
        ax.set_ylim(0.0, 1.0)
        ax.legend()
        fig.tight_layout()
        figure_path = out_dir / "concurrence_curves.png"
        fig.savefig(figure_path, dpi=150)
        print(f"wrote {figure_path}")


if __name__ == "__main__":
    main()
