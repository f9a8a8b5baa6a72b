"""Sweeps, threshold crossings, scaling fits, CSV plumbing."""

import json
import math

import numpy as np
import pytest

from seamsim.experiments import (
    FitError, NoCrossingError, NoiseFamily, SweepPoint, SweepResult,
    ThresholdEstimate, estimate_pfail, find_threshold, fit_log_slope,
    fit_simple_model, layout_for, run_sweep, seam_column_for, shot_config,
    small_modules_line, sweep_from_csv, sweep_to_csv, threshold_curve_2d,
    wilson_interval, write_manifest,
)


def test_wilson_interval_reference_values():
    # Frozen reference values computed from the closed-form score interval.
    lo, hi = wilson_interval(10, 100)
    assert lo == pytest.approx(0.05523, abs=2e-5)
    assert hi == pytest.approx(0.17436, abs=2e-5)
    lo, hi = wilson_interval(0, 50)
    assert lo == 0.0
    assert hi == pytest.approx(0.07135, abs=2e-5)
    with pytest.raises(ValueError):
        wilson_interval(1, 0)


def test_family_rate_mapping():
    bulk = NoiseFamily(name="bulk")
    r = bulk.region_rates(0.01)
    assert set(r) == {"bulk"}
    assert r["bulk"].p_data == pytest.approx(0.02)
    assert r["bulk"].q_meas == pytest.approx(0.03)

    comb = NoiseFamily(name="combined", bell_ratio=8.0)
    r = comb.region_rates(0.01)
    assert set(r) == {"bulk", "seam"}
    assert r["seam"].p_data == pytest.approx(0.5 * 0.08 + 2.5 * 0.01 + 0.01)

    bound = NoiseFamily(name="boundary", fixed_bulk_eps=0.002)
    er = bound.error_rates(0.15)
    assert er.eps_bell == 0.15 and er.eps_ryd == 0.002 and er.eps_m == 0.002

    pq = NoiseFamily(name="uniform_pq")
    r = pq.region_rates(0.03)
    assert r["bulk"].p_data == r["bulk"].q_meas == 0.03

    with pytest.raises(ValueError):
        NoiseFamily(name="edge_of_the_map")


def test_seam_column_for():
    assert seam_column_for(5) == 4
    assert seam_column_for(6) == 4
    assert seam_column_for(7) == 6
    layout = layout_for(NoiseFamily(name="combined"), 5)
    assert layout.seam_column == 4
    assert layout_for(NoiseFamily(name="bulk"), 5).seam_column is None


def test_point_seeds_distinct_and_stable():
    fam = NoiseFamily(name="bulk")
    a = shot_config(fam, 0.01, 5, seed=3)
    b = shot_config(fam, 0.01, 5, seed=3)
    c = shot_config(fam, 0.012, 5, seed=3)
    d = shot_config(fam, 0.01, 7, seed=3)
    assert a.seed == b.seed
    assert len({a.seed, c.seed, d.seed}) == 3


def test_estimate_pfail_matches_direct_count():
    fam = NoiseFamily(name="uniform_pq")
    cfg = shot_config(fam, 0.04, 3, seed=7)
    p1, ci1 = estimate_pfail(cfg, 3000, batch_size=256)
    p2, ci2 = estimate_pfail(cfg, 3000, batch_size=3000)
    assert p1 == p2 and ci1 == ci2  # batching cannot change the estimate
    assert ci1[0] <= p1 <= ci1[1]


def _synthetic_sweep(xs, ls, x_th, family_name="bulk"):
    """Exact scaling-form data P = (x / x_th)^(L/2) as a SweepResult."""
    res = SweepResult(family=NoiseFamily(name=family_name))
    for L in ls:
        for x in xs:
            p = (x / x_th) ** (L / 2)
            lo, hi = p * 0.97, min(1.0, p * 1.03)
            res.points.append(SweepPoint(
                eps_ryd=x / 2, eps_bell=0.0, eps_m=x / 2, L=L, shots=10 ** 6,
                p_fail=p, ci_lo=lo, ci_hi=hi, family=family_name, x=x,
                rounds=L, p_bulk=x, p_bound=0.0))
    return res


def test_find_threshold_exact_on_synthetic_crossing():
    # Curves P = (x/x_th)^(L/2) all cross exactly at x_th.
    sweep = _synthetic_sweep([0.02, 0.025, 0.03, 0.035, 0.04], [5, 7, 9],
                             x_th=0.03)
    th = find_threshold(sweep)
    assert th.value == pytest.approx(0.03, rel=1e-6)
    assert th.family == "bulk"
    assert len(th.crossings) == 2
    assert th.pair_labels == ("L5/L7", "L7/L9")
    assert th.uncertainty > 0


def test_find_threshold_requires_three_ls_and_a_crossing():
    with pytest.raises(NoCrossingError):
        find_threshold(_synthetic_sweep([0.02, 0.03], [5, 7], x_th=0.025))
    # All-subthreshold grid: curves never cross.
    with pytest.raises(NoCrossingError) as err:
        find_threshold(
            _synthetic_sweep([0.01, 0.015, 0.02], [5, 7, 9], x_th=0.03))
    assert err.value.curves is not None


def test_threshold_estimate_validation():
    with pytest.raises(ValueError):
        ThresholdEstimate(value=0.01, uncertainty=0.0, family="bulk")


def test_fit_recovers_bulk_threshold():
    sweep = _synthetic_sweep([0.01, 0.015, 0.02], [5, 7, 9, 11], x_th=0.02)
    fit = fit_simple_model(sweep)
    assert fit.p_bulk_th == pytest.approx(0.02, rel=1e-4)
    assert fit.p_bound_th is None
    assert fit.residual_rms < 1e-6


def test_fit_recovers_two_term_thresholds():
    # Combined synthetic data: P = (p/0.02)^(L/2) + (ps/0.10)^(L/2) with
    # ps = 5p, plus a bulk-only anchor sweep.
    bulk_th, bound_th = 0.02, 0.10
    res = SweepResult(family=NoiseFamily(name="combined"))
    for L in (5, 7, 9, 11):
        for p in (0.008, 0.011, 0.014, 0.017):
            ps = 5 * p
            pf = (p / bulk_th) ** (L / 2) + (ps / bound_th) ** (L / 2)
            res.points.append(SweepPoint(
                eps_ryd=p / 2, eps_bell=ps, eps_m=p / 2, L=L, shots=10 ** 6,
                p_fail=pf, ci_lo=pf * 0.97, ci_hi=min(1.0, pf * 1.03),
                family="combined", x=p / 2, rounds=L, p_bulk=p, p_bound=ps))
    anchor = _synthetic_sweep([0.008, 0.012, 0.016], [5, 7, 9, 11],
                              x_th=bulk_th)
    fit = fit_simple_model(res, extra=anchor)
    assert fit.p_bulk_th == pytest.approx(bulk_th, rel=0.05)
    assert fit.p_bound_th == pytest.approx(bound_th, rel=0.05)
    assert fit.p_bound_th > fit.p_bulk_th


def test_fit_errors():
    with pytest.raises(FitError):
        fit_simple_model(_synthetic_sweep([0.01], [5], x_th=0.02))
    with pytest.raises(FitError):
        fit_simple_model(_synthetic_sweep([0.01, 0.02], [5, 7], x_th=0.03))


def test_log_slope_ratio_near_one_on_synthetic():
    sweep = _synthetic_sweep([0.005, 0.0075, 0.01], [5, 7, 9, 11],
                             x_th=0.02)
    ratio, err = fit_log_slope(sweep)
    assert ratio == pytest.approx(1.0, abs=1e-6)
    assert err >= 0.0


def test_small_modules_line_endpoints():
    # eps_cx = 0 gives eps_bell = 2%; eps_bell = 0 at eps_cx = 3%/7.
    vals = small_modules_line([0.0, 0.03 / 7])
    assert vals[0] == pytest.approx(0.02)
    assert vals[1] == pytest.approx(0.0, abs=1e-12)
    assert small_modules_line([0.001])[0] == pytest.approx(
        (0.03 - 0.007) / 1.5)
    with pytest.raises(ValueError):
        small_modules_line([0.01])


def test_run_sweep_deterministic_and_csv_round_trip(tmp_path):
    fam = NoiseFamily(name="uniform_pq")
    sweep = run_sweep(fam, [0.02, 0.05], [3, 4], shots=500, seed=11)
    again = run_sweep(fam, [0.02, 0.05], [3, 4], shots=500, seed=11)
    assert sweep.points == again.points
    assert [p.rounds for p in sweep.curve(3)] == [3, 3]

    path = tmp_path / "sweep.csv"
    sweep_to_csv(sweep, path)
    back = sweep_from_csv(path)
    assert back.points == sweep.points
    assert back.family == NoiseFamily(name="uniform_pq")


def test_sweep_csv_missing_columns_rejected(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("eps_ryd,L\n0.01,5\n")
    with pytest.raises(ValueError):
        sweep_from_csv(path)


def test_run_sweep_top_up_reduces_interval():
    fam = NoiseFamily(name="uniform_pq")
    base = run_sweep(fam, [0.05], [3], shots=400, seed=5)
    topped = run_sweep(fam, [0.05], [3], shots=400, seed=5,
                       target_rel_halfwidth=0.05, max_shots=20000)
    assert topped.points[0].shots > base.points[0].shots
    pt = topped.points[0]
    assert (pt.ci_hi - pt.ci_lo) / 2 <= 0.05 * pt.p_fail


def test_threshold_curve_2d_records_errors():
    # Tiny grids: the finite ray brackets its crossing; the boundary ray
    # (eps_ryd = 0) swept far below threshold yields zero failures and
    # records a no-crossing error instead of raising.
    rays = threshold_curve_2d([1.0, math.inf], xs=[0.002, 0.003, 0.004],
                              l_values=[3, 4, 5], shots=400, seed=9)
    inf_ray = rays[1]
    assert math.isinf(inf_ray.ratio)
    assert inf_ray.error is not None and inf_ray.eps_ryd_th is None

    finite = threshold_curve_2d([1.0], xs=[0.02, 0.03, 0.04],
                                l_values=[3, 4, 5], shots=1500, seed=9)[0]
    assert finite.ratio == 1.0
    if finite.error is None:
        assert finite.eps_bell_th == pytest.approx(finite.eps_ryd_th)
        assert finite.uncertainty > 0


def test_uniform_pq_threshold_small_scale():
    # Coarse check near the p = q crossing with small codes; the
    # acceptance suite repeats this at full scale and tight tolerance.
    fam = NoiseFamily(name="uniform_pq")
    sweep = run_sweep(fam, [0.022, 0.027, 0.032, 0.037], [3, 5, 7],
                      shots=4000, seed=17)
    th = find_threshold(sweep)
    assert th.value == pytest.approx(0.030, abs=0.008)


def test_write_manifest_fields(tmp_path):
    path = tmp_path / "manifest.json"
    write_manifest(path, {"family": "bulk", "shots": 10}, seed=42,
                   wall_time_s=1.5, outputs=["sweep.csv"],
                   extra={"threshold": 0.013})
    blob = json.loads(path.read_text())
    assert blob["seed"] == 42
    assert blob["config"]["family"] == "bulk"
    assert len(blob["config_sha256"]) == 64
    assert blob["outputs"] == ["sweep.csv"]
    assert blob["threshold"] == 0.013
    assert blob["schema_version"] == 1
    assert "tool_version" in blob and "finished_utc" in blob


def test_worker_count_does_not_change_results():
    fam = NoiseFamily(name="uniform_pq")
    cfg = shot_config(fam, 0.05, 3, seed=2)
    p1, _ = estimate_pfail(cfg, 2000, workers=1)
    p2, _ = estimate_pfail(cfg, 2000, workers=2)
    assert p1 == p2
