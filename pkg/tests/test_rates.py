"""Interconnect rate calculators against the published operating points."""

import math

import pytest

from seamsim.rates import (
    CavityParams, InterconnectDesign, all_designs, attempt_rate,
    convert_time, fig3_curves, get_design, p_aa, rate_point,
    reference_bell_rate_per_us, single_qubit_reference_rates,
    within_printed,
)


def test_time_conversion_exact_round_trip():
    assert convert_time(1.0, "ms", "us") == 1000.0
    assert convert_time(560.0, "ns", "us") == 0.56
    assert convert_time(2.0, "s", "us") == 2_000_000.0
    for v in (0.1, 3.7, 1234.5678):
        for a in ("ns", "us", "ms", "s"):
            for b in ("ns", "us", "ms", "s"):
                assert convert_time(convert_time(v, a, b), b, a) == v
    with pytest.raises(ValueError):
        convert_time(1.0, "fortnight", "us")


def test_p_aa_printed_values():
    # 0.5 (eta eta_det)^2 with eta_det = 0.7 reproduces the printed
    # success probabilities to their printed precision.
    assert within_printed(p_aa(0.12, 0.7), 0.0035, 0.0001)
    assert within_printed(p_aa(0.66, 0.7), 0.1, 0.01)
    assert within_printed(p_aa(0.98, 0.7), 0.24, 0.01)
    for d in all_designs():
        digit = 10.0 ** math.floor(math.log10(d.p_aa_printed)) / 10
        assert within_printed(d.computed_p_aa(), d.p_aa_printed, digit)
    with pytest.raises(ValueError):
        p_aa(1.2, 0.7)


def test_presets_load():
    lens = get_design("lens")
    assert lens.kind == "lens" and lens.cavity is None
    assert lens.attempt_cap_per_us is None
    cav = get_design("single_cavity")
    assert cav.cavity.cooperativity == pytest.approx(3.2)
    arr = get_design("cavity_array")
    assert arr.cavity.cooperativity == pytest.approx(56)
    assert arr.n_cavities == 30
    assert [d.kind for d in all_designs()] == \
        ["lens", "single_cavity", "cavity_array"]
    with pytest.raises(ValueError):
        get_design("smoke_signals")


def test_attempt_rate_caps():
    lens = get_design("lens")
    assert attempt_rate(lens, 160) == pytest.approx(10.0)  # 160 / 16 us
    assert attempt_rate(lens, 10_000) == pytest.approx(625.0)  # uncapped
    cav = get_design("single_cavity")
    assert attempt_rate(cav, 160) == pytest.approx(10.0)
    assert attempt_rate(cav, 10_000) == pytest.approx(10.0)  # capped
    arr = get_design("cavity_array")
    assert attempt_rate(arr, 30) == pytest.approx(100.0)  # 30 / 0.3 us
    assert attempt_rate(arr, 10_000) == pytest.approx(286.0)
    assert attempt_rate(arr, 10_000, cap_source="prose") == \
        pytest.approx(300.0)
    with pytest.raises(ValueError):
        attempt_rate(lens, 0)
    with pytest.raises(ValueError):
        attempt_rate(lens, 5, cap_source="rumor")


def test_corner_qubit_counts():
    # The cap binds at N = cap * attempt period: 160 for the single
    # cavity, ~86 (85.8) for the cavity array.
    assert get_design("lens").corner_n() is None
    assert get_design("single_cavity").corner_n() == pytest.approx(160.0)
    assert get_design("cavity_array").corner_n() == pytest.approx(85.8)
    assert get_design("cavity_array").corner_n("prose") == pytest.approx(90.0)


def test_rate_point_identities_exact():
    pt = rate_point(get_design("single_cavity"), 200, distance=20)
    assert pt.tau_bell_us * pt.bell_rate_per_us == pytest.approx(1.0,
                                                                 rel=1e-12)
    assert pt.cycle_time_us == pytest.approx(2 * 20 * pt.tau_bell_us,
                                             rel=1e-12)
    assert pt.gate_time_us == pytest.approx(20 * pt.cycle_time_us, rel=1e-12)
    assert pt.bell_pairs_per_gate == 800
    assert pt.decoh_ratio == pytest.approx(pt.cycle_time_us / 2e6, rel=1e-12)
    with pytest.raises(ValueError):
        rate_point(get_design("lens"), 10, distance=1)
    with pytest.raises(ValueError):
        rate_point(get_design("lens"), 10, tau_dec_s=0.0)


def test_printed_operating_table_single_cavity():
    # Saturated single cavity: tau_Bell 1.0 us, T 40 us, gate 0.8 ms.
    pt = rate_point(get_design("single_cavity"), 160, distance=20)
    assert within_printed(pt.tau_bell_us, 1.0, 0.1)
    assert within_printed(pt.cycle_time_us, 40.0, 1.0)
    assert within_printed(convert_time(pt.gate_time_us, "us", "ms"), 0.8,
                          0.1)
    assert pt.within_budget  # 40 us against the 2 s decoherence time


def test_printed_operating_table_cavity_array():
    # Saturated cavity array (prose 300/us cap): tau_Bell 14 ns,
    # T 560 ns, gate 11.2 us.
    pt = rate_point(get_design("cavity_array"), 10_000, distance=20,
                    cap_source="prose")
    assert within_printed(convert_time(pt.tau_bell_us, "us", "ns"), 14.0, 1.0)
    assert within_printed(convert_time(pt.cycle_time_us, "us", "ns"),
                          560.0, 10.0)
    assert within_printed(pt.gate_time_us, 11.2, 0.1)
    assert pt.within_budget


def test_printed_operating_table_single_lens_qubit():
    # One lens-coupled qubit: T ~ 180 ms, gate ~ 3.7 s.
    pt = rate_point(get_design("lens"), 1, distance=20)
    assert within_printed(convert_time(pt.cycle_time_us, "us", "ms"),
                          180.0, 10.0)
    assert within_printed(convert_time(pt.gate_time_us, "us", "s"), 3.7, 0.1)
    assert not pt.within_budget  # 183 ms cycle blows the 2 ms budget


def test_reference_rate_is_20_khz():
    # 2L = 40 Bell pairs per 2 ms cycle -> 0.02 per us = 20 kHz.
    ref = reference_bell_rate_per_us()
    assert ref == pytest.approx(0.02)
    assert convert_time(1.0, "s", "us") * ref == pytest.approx(20_000.0)


def test_single_qubit_reference_rates():
    vals = single_qubit_reference_rates()
    assert vals["lens_mean_bell_time_ms"] == pytest.approx(16 / 0.0035 / 1000)
    assert vals["single_cavity_rate_hz"] == pytest.approx(6250.0)
    assert vals["single_cavity_quoted_hz"] == 5800.0
    assert abs(vals["single_cavity_rate_gap_rel"]) < 0.08


def test_fig3_curves_shape_and_monotonicity():
    designs = all_designs()
    ns = [1, 2, 5, 10, 20, 50, 100, 200, 500]
    rows = fig3_curves(designs, ns)
    assert len(rows) == 3 * len(ns)
    for d in designs:
        sub = [r for r in rows if r["design"] == d.kind]
        rates = [r["bell_rate_per_us"] for r in sub]
        assert all(b >= a for a, b in zip(rates, rates[1:]))
        assert all(r["reference_rate_per_us"] == pytest.approx(0.02)
                   for r in sub)
    # Cap flattens the capped designs between N=200 and N=500.
    for kind in ("single_cavity", "cavity_array"):
        sub = [r for r in rows if r["design"] == kind]
        assert sub[-1]["bell_rate_per_us"] == \
            pytest.approx(sub[-2]["bell_rate_per_us"])


def test_design_validation():
    with pytest.raises(ValueError):
        InterconnectDesign(
            kind="carrier_pigeon", n_cavities=0, eta_collect=0.5,
            eta_det=0.7, p_aa_printed=0.1, attempt_period_us=16.0,
            reset_us=6.0, recool_amortized_us=10.0, switch_floor_us=0.1,
            attempt_cap_per_us=None, prose_cap_per_us=None, cavity=None)
    with pytest.raises(ValueError):
        CavityParams(length_um=50.0, waist_um=3.0, g_mhz=100.0,
                     kappa_mhz=10.0, gamma_mhz=6.0, cooperativity=56.0,
                     eta_cav=1.5, tau_cav_ns=0.39)
