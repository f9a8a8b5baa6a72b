"""Shared CSV validation and figure plumbing."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")

# Column contracts of the upstream CSVs (headers are self-describing;
# _us / _per_us suffixes carry the units).
SWEEP_COLUMNS = ["eps_ryd", "eps_bell", "eps_m", "L", "shots", "p_fail",
                 "ci_lo", "ci_hi", "family", "x", "rounds", "p_bulk",
                 "p_bound"]
RAYS_COLUMNS = ["series", "ratio", "eps_ryd", "eps_bell", "uncertainty"]
FIG3_COLUMNS = ["design", "N", "attempt_rate_per_us", "bell_rate_per_us",
                "tau_bell_us", "T_us", "gate_time_us", "decoh_ratio",
                "reference_rate_per_us"]

FIGURE_KINDS = ("fig2a", "fig2b", "fig3")

STYLE = {
    "font.size": 9,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "figure.dpi": 150,
    "savefig.bbox": "tight",
    # Keep SVG text as text so annotations stay machine-checkable.
    "svg.fonttype": "none",
}


class SchemaError(ValueError):
    """A CSV is empty or missing required columns."""


@dataclass(frozen=True)
class FigureSpec:
    """What to render: inputs, figure kind, and the output path."""

    inputs: tuple[str, ...]
    kind: str
    output: str
    style: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.kind not in FIGURE_KINDS:
            raise ValueError(
                f"kind must be one of {FIGURE_KINDS}, got {self.kind!r}")
        if not self.inputs:
            raise ValueError("at least one input CSV is required")


def read_csv_checked(path: str, required: list[str]) -> list[dict]:
    """Rows of a CSV, or a SchemaError naming what is missing."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        missing = set(required) - set(reader.fieldnames or [])
        if missing:
            raise SchemaError(
                f"{path}: missing columns {sorted(missing)}; "
                f"expected {required}")
        rows = list(reader)
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    return rows


def new_figure(style: dict | None = None):
    """Axes with the shared style applied; deterministic output."""
    import matplotlib.pyplot as plt

    params = dict(STYLE)
    params.update(style or {})
    matplotlib.rcParams.update(params)
    # Strip wall-clock metadata so identical inputs give identical bytes.
    matplotlib.rcParams["svg.hashsalt"] = "seamfigs"
    fig, ax = plt.subplots(figsize=(4.2, 3.2))
    return fig, ax


def save_figure(fig, path: str) -> None:
    kwargs = {}
    if str(path).endswith(".png"):
        kwargs["metadata"] = {"Software": None}
    elif str(path).endswith(".svg"):
        kwargs["metadata"] = {"Date": None}
    fig.savefig(path, **kwargs)
