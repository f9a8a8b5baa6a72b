"""Below-threshold region in the (local error, Bell error) plane.

Input: a threshold-ray CSV (see `common.RAYS_COLUMNS`) holding 'ray'
rows (per-ray threshold crossings) and optional 'small_modules_line'
rows.  A blue star marks the headline ray (Bell/local ratio 8 by
default); the region under the ray curve is shaded.
"""

from __future__ import annotations

import argparse
import math
import sys

from .common import FigureSpec, RAYS_COLUMNS, SchemaError, \
    new_figure, read_csv_checked, save_figure


def render(spec: FigureSpec, star_ratio: float = 8.0) -> str:
    rays, line = [], []
    for path in spec.inputs:
        for row in read_csv_checked(path, RAYS_COLUMNS):
            x, y = float(row["eps_ryd"]), float(row["eps_bell"])
            if row["series"] == "small_modules_line":
                line.append((x, y))
            else:
                ratio = float(row["ratio"]) if row["ratio"] else math.inf
                rays.append((ratio, x, y))
    if not rays:
        raise SchemaError("no 'ray' rows found in the inputs")

    fig, ax = new_figure(spec.style)
    # Boundary of the correctable region: rays ordered by local error.
    pts = sorted((x, y) for _, x, y in rays)
    ax.plot([p[0] for p in pts], [p[1] for p in pts], color="C0",
            label="threshold boundary")
    ax.fill_between([p[0] for p in pts], 0, [p[1] for p in pts],
                    color="C0", alpha=0.15)
    if line:
        line.sort()
        ax.plot([p[0] for p in line], [p[1] for p in line], color="C2",
                linestyle="--", label="fully teleported (linear)")
    star = [(x, y) for r, x, y in rays
            if math.isfinite(r) and math.isclose(r, star_ratio)]
    if star:
        sx, sy = star[0]
        ax.plot([sx], [sy], marker="*", markersize=14, color="blue",
                linestyle="none", label=f"ratio {star_ratio:g} threshold")
        ax.annotate(f"({100 * sx:.1f}%, {100 * sy:.1f}%)", xy=(sx, sy),
                    xytext=(4, 4), textcoords="offset points", fontsize=7)
    ax.set_xlabel("local error rate")
    ax.set_ylabel("Bell-pair error rate")
    ax.set_xlim(left=0)
    ax.set_ylim(bottom=0)
    ax.legend(fontsize=6)
    save_figure(fig, spec.output)
    return spec.output


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(
        description="Threshold-plane figure from a ray CSV.")
    ap.add_argument("--in", dest="inputs", nargs="+", required=True,
                    help="Threshold-ray CSV paths.")
    ap.add_argument("--out", required=True, help="Output figure path.")
    ap.add_argument("--star-ratio", type=float, default=8.0,
                    help="Bell/local ratio marked with the star.")
    args = ap.parse_args(argv)
    try:
        render(FigureSpec(tuple(args.inputs), "fig2b", args.out),
               args.star_ratio)
    except (SchemaError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
