"""Logical failure rate versus local error rate, per (family, L) curve.

Input: one or more failure-sweep CSVs (see `common.SWEEP_COLUMNS`).
Bulk-family curves are drawn dotted, seam-bearing families solid; a
vertical line marks the bulk threshold (default 1.3%), annotated with
its value.
"""

from __future__ import annotations

import argparse
import sys
from collections import defaultdict

from .common import FigureSpec, SchemaError, SWEEP_COLUMNS, \
    new_figure, read_csv_checked, save_figure

_FAMILY_STYLE = {
    "bulk": {"linestyle": ":"},
    "combined": {"linestyle": "-"},
    "boundary": {"linestyle": "--"},
    "uniform_pq": {"linestyle": "-."},
    "small_modules": {"linestyle": "-"},
}


def render(spec: FigureSpec, threshold: float | None = 0.013) -> str:
    curves: dict[tuple[str, int], list[tuple[float, float, float, float]]] \
        = defaultdict(list)
    for path in spec.inputs:
        for row in read_csv_checked(path, SWEEP_COLUMNS):
            x = float(row["eps_ryd"]) or float(row["x"])
            curves[(row["family"], int(row["L"]))].append(
                (x, float(row["p_fail"]), float(row["ci_lo"]),
                 float(row["ci_hi"])))

    fig, ax = new_figure(spec.style)
    for (family, L) in sorted(curves):
        pts = sorted(curves[(family, L)])
        xs = [p[0] for p in pts]
        ys = [p[1] for p in pts]
        yerr = ([max(0.0, p[1] - p[2]) for p in pts],
                [max(0.0, p[3] - p[1]) for p in pts])
        style = _FAMILY_STYLE.get(family, {})
        ax.errorbar(xs, ys, yerr=yerr, marker="o", markersize=3,
                    capsize=2, label=f"{family} L={L}", **style)
    if threshold is not None:
        ax.axvline(threshold, color="black", linewidth=0.8)
        ax.annotate(f"{100 * threshold:g}%", xy=(threshold, 1.0),
                    xycoords=("data", "axes fraction"),
                    xytext=(2, -10), textcoords="offset points")
    ax.set_yscale("log")
    ax.set_xlabel("local error rate")
    ax.set_ylabel("logical failure rate")
    ax.legend(fontsize=6)
    save_figure(fig, spec.output)
    return spec.output


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(
        description="Failure-rate curves from sweep CSVs.")
    ap.add_argument("--in", dest="inputs", nargs="+", required=True,
                    help="Sweep CSV paths.")
    ap.add_argument("--out", required=True, help="Output figure path.")
    ap.add_argument("--threshold", type=float, default=0.013,
                    help="Vertical marker (default 0.013); nan to omit.")
    args = ap.parse_args(argv)
    th = None if args.threshold != args.threshold else args.threshold
    try:
        render(FigureSpec(tuple(args.inputs), "fig2a", args.out), th)
    except (SchemaError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
