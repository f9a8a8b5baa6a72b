"""Figure scripts: schema validation, landmark annotations, determinism.

The fixtures write synthetic CSVs that follow the upstream column
contracts; no simulator import is needed (or allowed) here.
"""

import csv

import pytest

from seamfigs import FigureSpec, SchemaError, read_csv_checked
from seamfigs.common import FIG3_COLUMNS, RAYS_COLUMNS, SWEEP_COLUMNS
from seamfigs import fig2a, fig2b, fig3


def _write_csv(path, columns, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(columns)
        w.writerows(rows)
    return str(path)


@pytest.fixture
def sweep_csv(tmp_path):
    rows = []
    for family, ls in (("bulk", (5, 7)), ("combined", (5, 7))):
        for L in ls:
            for x in (0.008, 0.011, 0.014, 0.017):
                p = (x / 0.013) ** (L / 2)
                rows.append([x, 8 * x if family == "combined" else 0.0, x,
                             L, 50000, p, p * 0.9, min(1.0, p * 1.1),
                             family, x, L, 2 * x, 0.0])
    return _write_csv(tmp_path / "sweep.csv", SWEEP_COLUMNS, rows)


@pytest.fixture
def rays_csv(tmp_path):
    rows = [
        ["ray", "2.0", "0.0125", "0.025", "0.001"],
        ["ray", "8.0", "0.011", "0.088", "0.001"],
        ["ray", "16.0", "0.008", "0.128", "0.002"],
        ["ray", "", "0.0", "0.2", "0.01"],
        ["small_modules_line", "", "0.0", "0.02", ""],
        ["small_modules_line", "", "0.002", "0.010666666", ""],
    ]
    return _write_csv(tmp_path / "rays.csv", RAYS_COLUMNS, rows)


@pytest.fixture
def fig3_csv(tmp_path):
    rows = []
    specs = {
        "lens": (0.0035, 16.0, None),
        "single_cavity": (0.1, 16.0, 160),
        "cavity_array": (0.24, 0.3, 86),
    }
    for design, (paa, period, corner) in specs.items():
        for n in (1, 2, 5, 20, 86, 160, 400):
            att = n / period
            if corner is not None:
                att = min(att, corner / period)
            rate = paa * att
            rows.append([design, n, att, rate, 1.0 / rate,
                         40.0 / rate, 800.0 / rate, 1e-5, 0.02])
    return _write_csv(tmp_path / "fig3.csv", FIG3_COLUMNS, rows)


def test_read_csv_checked_errors(tmp_path):
    bad = _write_csv(tmp_path / "bad.csv", ["a", "b"], [[1, 2]])
    with pytest.raises(SchemaError) as err:
        read_csv_checked(bad, ["a", "missing_col"])
    assert "missing_col" in str(err.value)
    empty = _write_csv(tmp_path / "empty.csv", SWEEP_COLUMNS, [])
    with pytest.raises(SchemaError):
        read_csv_checked(empty, SWEEP_COLUMNS)


def test_figure_spec_validation():
    with pytest.raises(ValueError):
        FigureSpec(("a.csv",), "fig9", "out.png")
    with pytest.raises(ValueError):
        FigureSpec((), "fig2a", "out.png")


def test_fig2a_renders_with_threshold_line(sweep_csv, tmp_path):
    out = tmp_path / "fig2a.svg"
    fig2a.render(FigureSpec((sweep_csv,), "fig2a", str(out)),
                 threshold=0.013)
    text = out.read_text()
    assert "1.3%" in text          # annotated threshold marker
    assert "bulk L=5" in text
    assert "combined L=7" in text


def test_fig2a_cli_and_error_paths(sweep_csv, tmp_path):
    out = tmp_path / "a.png"
    assert fig2a.main(["--in", sweep_csv, "--out", str(out)]) == 0
    assert out.stat().st_size > 0

    empty = _write_csv(tmp_path / "empty.csv", SWEEP_COLUMNS, [])
    missing_out = tmp_path / "never.png"
    assert fig2a.main(["--in", empty, "--out", str(missing_out)]) == 1
    assert not missing_out.exists()   # error: no file written


def test_fig2b_star_at_headline_ray(rays_csv, tmp_path):
    out = tmp_path / "fig2b.svg"
    fig2b.render(FigureSpec((rays_csv,), "fig2b", str(out)), star_ratio=8.0)
    text = out.read_text()
    assert "(1.1%, 8.8%)" in text     # the starred crossing
    assert "fully teleported" in text  # small-modules line legend
    assert "threshold boundary" in text


def test_fig2b_requires_ray_rows(tmp_path):
    only_line = _write_csv(tmp_path / "line.csv", RAYS_COLUMNS,
                           [["small_modules_line", "", "0.0", "0.02", ""]])
    with pytest.raises(SchemaError):
        fig2b.render(FigureSpec((only_line,), "fig2b",
                                str(tmp_path / "x.svg")))


def test_fig3_corners_and_reference_line(fig3_csv, tmp_path):
    out = tmp_path / "fig3.svg"
    fig3.render(FigureSpec((fig3_csv,), "fig3", str(out)))
    text = out.read_text()
    assert "N=160" in text
    assert "N=86" in text
    assert "20 kHz" in text
    assert "lens" in text and "cavity_array" in text


def test_fig3_corner_detection_reads_data_only():
    pts = {"capped": [(1, 1.0), (2, 2.0), (4, 4.0), (8, 4.0), (16, 4.0)],
           "linear": [(1, 1.0), (2, 2.0), (4, 4.0)]}
    got = fig3.corners(pts)
    assert got == {"capped": (4, 4.0)}   # first N at the plateau


def test_fig3_cli(fig3_csv, tmp_path):
    out = tmp_path / "f3.png"
    assert fig3.main(["--in", fig3_csv, "--out", str(out)]) == 0
    assert out.stat().st_size > 0


def test_svg_rendering_deterministic(sweep_csv, tmp_path):
    outs = []
    for name in ("one.svg", "two.svg"):
        out = tmp_path / name
        fig2a.render(FigureSpec((sweep_csv,), "fig2a", str(out)))
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]
