"""Physical error parameters and per-region phenomenological flip rates.

Two coefficient modes are available.  ``table_rounded`` evaluates the
printed linear forms (bulk p = 2 eps_cx, seam p = 0.5 eps_bell +
2.5 eps_cx + eps_m, ...), which treat every counted 8/15 as 1/2; this is
the default because it matches the published threshold figures.
``exact_counting`` evaluates the unrounded fractions produced by the
Pauli-propagation engine over the corresponding per-cycle circuits
(bulk p = (32/15) eps_cx, ...).  The two modes agree to within 6.25%
relative on every coefficient.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import pauli
from .pauli import EPS_BELL, EPS_CX, EPS_M, PauliCircuit, derive_flip_rates

REGIONS = ("bulk", "seam", "small_modules")
MODES = ("table_rounded", "exact_counting")


class SaturationError(ValueError):
    """A derived flip probability left [0, 1]."""


@dataclass(frozen=True)
class ErrorRates:
    """Physical error probabilities per operation.

    eps_cx is the local two-qubit (Rydberg) gate error, also known as
    eps_ryd; eps_bell the distributed Bell-pair error; eps_m the
    fluorescence readout error.
    """

    eps_cx: float = 0.0
    eps_bell: float = 0.0
    eps_m: float = 0.0

    def __post_init__(self) -> None:
        for name in ("eps_cx", "eps_bell", "eps_m"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise SaturationError(f"{name} = {v} outside [0, 1]")

    @property
    def eps_ryd(self) -> float:
        return self.eps_cx


@dataclass(frozen=True)
class FlipRates:
    """Per-cycle bit-flip probabilities: p on data, q on measurements."""

    p_data: float
    q_meas: float

    def __post_init__(self) -> None:
        for name in ("p_data", "q_meas"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise SaturationError(f"{name} = {v} outside [0, 1]")


@dataclass(frozen=True)
class RegionPreset:
    region: str = "bulk"
    mode: str = "table_rounded"

    def __post_init__(self) -> None:
        if self.region not in REGIONS:
            raise ValueError(f"unknown region {self.region!r}")
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}")


# Printed per-cycle coefficient tables: {region: {p|q: {symbol: coeff}}}.
PRINTED_COEFFS: dict[str, dict[str, dict[str, float]]] = {
    "bulk": {
        "p": {EPS_BELL: 0.0, EPS_CX: 2.0, EPS_M: 0.0},
        "q": {EPS_BELL: 0.0, EPS_CX: 2.0, EPS_M: 1.0},
    },
    "seam": {
        "p": {EPS_BELL: 0.5, EPS_CX: 2.5, EPS_M: 1.0},
        "q": {EPS_BELL: 0.5, EPS_CX: 2.5, EPS_M: 2.0},
    },
    "small_modules": {
        "p": {EPS_BELL: 1.0, EPS_CX: 3.0, EPS_M: 2.0},
        "q": {EPS_BELL: 2.0, EPS_CX: 4.0, EPS_M: 5.0},
    },
}

_CIRCUITS: dict[tuple[str, str], "CircuitFactory"] = {
    ("bulk", "p"): pauli.bulk_data_circuit,
    ("bulk", "q"): pauli.bulk_syndrome_circuit,
    ("seam", "p"): pauli.seam_data_circuit,
    ("seam", "q"): pauli.seam_syndrome_circuit,
    ("small_modules", "p"): pauli.small_modules_data_circuit,
    ("small_modules", "q"): pauli.small_modules_syndrome_circuit,
}

CircuitFactory = type(pauli.bulk_data_circuit)


def region_circuit(region: str, which: str) -> PauliCircuit:
    """The per-cycle circuit whose counting defines p or q for a region."""
    try:
        return _CIRCUITS[(region, which)]()
    except KeyError:
        raise ValueError(f"no circuit for region={region!r}, which={which!r}")


@lru_cache(maxsize=None)
def exact_coefficients(region: str, which: str) -> dict[str, Fraction]:
    return derive_flip_rates(region_circuit(region, which))


def printed_from_exact(coeffs: dict[str, Fraction]) -> dict[str, float]:
    """Map exact coefficients to the printed ones: each 8/15 becomes 1/2.

    Bell and CNOT coefficients are integer multiples of 8/15 by
    construction; readout coefficients are integers and pass through.
    """
    printed = {}
    for sym, c in coeffs.items():
        if sym == EPS_M:
            printed[sym] = float(c)
        else:
            units = c / Fraction(8, 15)
            if units.denominator != 1:
                raise ValueError(f"{sym} coefficient {c} not a multiple of 8/15")
            printed[sym] = units.numerator / 2.0
    return printed


def _evaluate(coeffs: dict[str, float | Fraction], rates: ErrorRates) -> float:
    values = {EPS_BELL: rates.eps_bell, EPS_CX: rates.eps_cx, EPS_M: rates.eps_m}
    return float(sum(float(c) * values[s] for s, c in coeffs.items()))


def flip_rates(rates: ErrorRates, preset: RegionPreset) -> FlipRates:
    """Per-cycle (p, q) for a region, in the preset's coefficient mode."""
    if preset.mode == "table_rounded":
        p = _evaluate(PRINTED_COEFFS[preset.region]["p"], rates)
        q = _evaluate(PRINTED_COEFFS[preset.region]["q"], rates)
    else:
        p = _evaluate(exact_coefficients(preset.region, "p"), rates)
        q = _evaluate(exact_coefficients(preset.region, "q"), rates)
    if p > 1.0 or q > 1.0:
        raise SaturationError(
            f"flip rates saturate above 1 for {preset.region}: p={p}, q={q}"
        )
    return FlipRates(p_data=p, q_meas=q)


def coefficients_json(region: str) -> dict:
    """Exact and printed coefficient maps, rationals rendered as strings."""
    out = {}
    for which in ("p", "q"):
        exact = exact_coefficients(region, which)
        out[which] = {
            "exact": {s: str(c) for s, c in exact.items()},
            "printed": PRINTED_COEFFS[region][which],
        }
    return out


def supermodule_bell_error(separation_cm: float, speed_um_per_us: float = 1.0,
                           tau_dec_s: float = 2.0) -> tuple[float, float]:
    """Conveyor-belt transport time and resulting Bell-pair decoherence.

    Transport time is separation over belt speed; the infidelity estimate
    uses an exponential decay model, eps = 1 - exp(-t / tau_dec).
    """
    if separation_cm < 0 or speed_um_per_us <= 0 or tau_dec_s <= 0:
        raise ValueError("separation must be >= 0; speed and tau_dec > 0")
    transport_time_s = (separation_cm * 1e4) / speed_um_per_us * 1e-6
    eps = 1.0 - math.exp(-transport_time_s / tau_dec_s)
    return transport_time_s, eps
