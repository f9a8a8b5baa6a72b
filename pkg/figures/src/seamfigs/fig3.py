"""Bell-pair rate versus communication-qubit count, per design.

Input: the rate-curve CSV (see `common.FIG3_COLUMNS`).  Draws one curve
per design on log-log axes, the dashed reference-rate line taken from
the CSV, and a corner marker where each capped design's rate saturates
(the first N whose rate equals the curve's maximum — read off the data,
not recomputed).
"""

from __future__ import annotations

import argparse
import sys
from collections import defaultdict

from .common import FIG3_COLUMNS, FigureSpec, SchemaError, \
    new_figure, read_csv_checked, save_figure


def corners(rows_by_design: dict[str, list[tuple[int, float]]]
            ) -> dict[str, tuple[int, float]]:
    """First (N, rate) at which each design's curve saturates."""
    out = {}
    for design, pts in rows_by_design.items():
        pts = sorted(pts)
        top = max(r for _, r in pts)
        saturated = [(n, r) for n, r in pts if r >= top * (1 - 1e-9)]
        if len(saturated) > 1:   # flat tail means a cap is active
            out[design] = saturated[0]
    return out


def render(spec: FigureSpec) -> str:
    by_design: dict[str, list[tuple[int, float]]] = defaultdict(list)
    ref = None
    for path in spec.inputs:
        for row in read_csv_checked(path, FIG3_COLUMNS):
            by_design[row["design"]].append(
                (int(row["N"]), float(row["bell_rate_per_us"])))
            ref = float(row["reference_rate_per_us"])

    fig, ax = new_figure(spec.style)
    for design in sorted(by_design):
        pts = sorted(by_design[design])
        ax.plot([p[0] for p in pts], [p[1] for p in pts], label=design)
    for design, (n, rate) in sorted(corners(by_design).items()):
        ax.plot([n], [rate], marker="o", color="black", markersize=4,
                linestyle="none")
        ax.annotate(f"N={n}", xy=(n, rate), xytext=(3, -9),
                    textcoords="offset points", fontsize=7)
    if ref is not None:
        ax.axhline(ref, color="black", linestyle="--", linewidth=0.8)
        ax.annotate(f"{ref * 1e6 / 1000:g} kHz", xy=(1.0, ref),
                    xycoords=("axes fraction", "data"),
                    xytext=(-30, 3), textcoords="offset points", fontsize=7)
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("communication qubits N")
    ax.set_ylabel("Bell-pair rate (1/us)")
    ax.legend(fontsize=6)
    save_figure(fig, spec.output)
    return spec.output


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(
        description="Bell-rate-versus-N figure from the rate-curve CSV.")
    ap.add_argument("--in", dest="inputs", nargs="+", required=True,
                    help="Rate-curve CSV paths.")
    ap.add_argument("--out", required=True, help="Output figure path.")
    args = ap.parse_args(argv)
    try:
        render(FigureSpec(tuple(args.inputs), "fig3", args.out))
    except (SchemaError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
