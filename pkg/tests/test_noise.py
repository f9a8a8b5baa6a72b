"""Flip-rate coefficients: exact counting, printed rounding, evaluation."""

import math
from fractions import Fraction

import pytest

from seamsim.noise import (
    ErrorRates, FlipRates, PRINTED_COEFFS, RegionPreset, SaturationError,
    coefficients_json, exact_coefficients, flip_rates, printed_from_exact,
    supermodule_bell_error,
)
from seamsim.pauli import (
    EPS_BELL, EPS_CX, EPS_M, teleported_gate_propagation,
)

F = Fraction

# Exact first-order coefficients of the per-cycle circuits, derived
# independently by counting error insertions by hand:
#   - a two-qubit error channel contributes 8/15 per "one qubit of the
#     pair ends up flipped" pattern (8 of 15 Paulis flip a given side),
#   - a readout error contributes 1 per measurement whose flip reaches
#     the tracked quantity.
EXACT = {
    ("bulk", "p"): {EPS_BELL: F(0), EPS_CX: F(32, 15), EPS_M: F(0)},
    ("bulk", "q"): {EPS_BELL: F(0), EPS_CX: F(32, 15), EPS_M: F(1)},
    ("seam", "p"): {EPS_BELL: F(8, 15), EPS_CX: F(40, 15), EPS_M: F(1)},
    ("seam", "q"): {EPS_BELL: F(8, 15), EPS_CX: F(40, 15), EPS_M: F(2)},
    ("small_modules", "p"): {EPS_BELL: F(16, 15), EPS_CX: F(48, 15),
                             EPS_M: F(2)},
    ("small_modules", "q"): {EPS_BELL: F(32, 15), EPS_CX: F(64, 15),
                             EPS_M: F(5)},
}


@pytest.mark.parametrize("key", sorted(EXACT))
def test_exact_coefficients(key):
    region, which = key
    assert exact_coefficients(region, which) == EXACT[key]


@pytest.mark.parametrize("region", ["bulk", "seam", "small_modules"])
@pytest.mark.parametrize("which", ["p", "q"])
def test_printed_rounding_map(region, which):
    # Every 8/15 becomes 1/2; readout coefficients pass through.
    printed = printed_from_exact(exact_coefficients(region, which))
    assert printed == PRINTED_COEFFS[region][which]


def test_rounding_map_relative_error_bounded():
    # 8/15 -> 1/2 understates by exactly 1/16 relative; the printed
    # forms deviate from exact counting by at most 6.25% per coefficient.
    for (region, which), exact in EXACT.items():
        printed = PRINTED_COEFFS[region][which]
        for sym, c in exact.items():
            if c == 0:
                assert printed[sym] == 0
                continue
            rel = abs(printed[sym] - float(c)) / float(c)
            assert rel <= 0.0625 + 1e-12


def test_flip_rates_table_mode():
    rates = ErrorRates(eps_cx=0.01, eps_bell=0.08, eps_m=0.01)
    bulk = flip_rates(rates, RegionPreset("bulk"))
    assert bulk.p_data == pytest.approx(0.02)
    assert bulk.q_meas == pytest.approx(0.03)
    seam = flip_rates(rates, RegionPreset("seam"))
    assert seam.p_data == pytest.approx(0.5 * 0.08 + 2.5 * 0.01 + 0.01)
    assert seam.q_meas == pytest.approx(0.5 * 0.08 + 2.5 * 0.01 + 0.02)


def test_flip_rates_exact_mode():
    rates = ErrorRates(eps_cx=0.015, eps_bell=0.0, eps_m=0.015)
    fr = flip_rates(rates, RegionPreset("bulk", mode="exact_counting"))
    assert fr.p_data == pytest.approx(32 / 15 * 0.015)
    assert fr.q_meas == pytest.approx(32 / 15 * 0.015 + 0.015)


def test_q_exceeds_p_by_readout():
    # Syndrome qubits see the same propagation as data plus readout noise.
    rates = ErrorRates(eps_cx=0.01, eps_bell=0.05, eps_m=0.007)
    for region in ("bulk", "seam"):
        fr = flip_rates(rates, RegionPreset(region))
        assert fr.q_meas == pytest.approx(fr.p_data + 0.007)


def test_validation_errors():
    with pytest.raises(SaturationError):
        ErrorRates(eps_cx=-0.1)
    with pytest.raises(SaturationError):
        ErrorRates(eps_m=1.5)
    with pytest.raises(SaturationError):
        FlipRates(p_data=1.2, q_meas=0.0)
    with pytest.raises(ValueError):
        RegionPreset("nowhere")
    with pytest.raises(ValueError):
        RegionPreset("bulk", mode="guesswork")


def test_saturation_detected():
    rates = ErrorRates(eps_cx=0.4, eps_bell=0.9, eps_m=0.9)
    with pytest.raises(SaturationError):
        flip_rates(rates, RegionPreset("small_modules"))


def test_eps_ryd_alias():
    assert ErrorRates(eps_cx=0.013).eps_ryd == 0.013


@pytest.mark.parametrize("error,expected", [
    ("X", ("I", "X")),
    ("Z", ("Z", "I")),
    ("Y", ("Z", "X")),
    ("I", ("I", "I")),
])
@pytest.mark.parametrize("bell_qubit", [1, 2])
def test_teleported_gate_propagation(error, expected, bell_qubit):
    # Bell-pair X-type errors land on the target, Z-type on the control,
    # identically for either Bell half.
    assert teleported_gate_propagation(error, bell_qubit) == expected


def test_coefficients_json_shape():
    blob = coefficients_json("seam")
    assert blob["p"]["exact"][EPS_BELL] == "8/15"
    assert blob["p"]["printed"][EPS_BELL] == 0.5
    assert blob["q"]["exact"][EPS_M] == "2"


def test_supermodule_transport():
    t, eps = supermodule_bell_error(10.0)  # 10 cm at 1 um/us
    assert t == pytest.approx(0.1)
    assert eps == pytest.approx(1.0 - math.exp(-0.05))
    with pytest.raises(ValueError):
        supermodule_bell_error(-1.0)
    with pytest.raises(ValueError):
        supermodule_bell_error(1.0, speed_um_per_us=0.0)
