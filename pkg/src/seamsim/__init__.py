"""Surface-code seam-noise simulator and interconnect rate planner.

Submodules: `geometry` (lattice with a noisy seam column), `pauli`
(first-order error propagation), `noise` (per-region flip rates),
`sampler` (Monte Carlo detection events), `decoder` (exact minimum-weight
matching), `experiments` (sweeps, thresholds, scaling fits), `rates`
(interconnect Bell-pair rate calculators), `cli` (command line).
"""

__version__ = "0.1.0"

from .geometry import CodeLayout, build_layout, logical_flip_reference
from .noise import ErrorRates, FlipRates, RegionPreset, flip_rates
from .sampler import DetectionSet, ShotConfig, sample_batch, sample_shot
from .decoder import (Correction, Matching, MatchingGraph,
                      build_matching_graph, decode_bruteforce, decode_mwpm)
from .experiments import (NoiseFamily, SweepResult, ThresholdEstimate,
                          estimate_pfail, find_threshold, fit_simple_model,
                          rays_to_csv, run_sweep, small_modules_line,
                          sweep_from_csv, sweep_to_csv, threshold_curve_2d)
from .rates import (CavityParams, InterconnectDesign, RatePoint,
                    attempt_rate, fig3_curves, get_design, p_aa, rate_point,
                    single_qubit_reference_rates)

__all__ = [
    "__version__",
    "CodeLayout", "build_layout", "logical_flip_reference",
    "ErrorRates", "FlipRates", "RegionPreset", "flip_rates",
    "DetectionSet", "ShotConfig", "sample_batch", "sample_shot",
    "Correction", "Matching", "MatchingGraph", "build_matching_graph",
    "decode_bruteforce", "decode_mwpm",
    "NoiseFamily", "SweepResult", "ThresholdEstimate", "estimate_pfail",
    "find_threshold", "fit_simple_model", "rays_to_csv", "run_sweep",
    "small_modules_line", "sweep_from_csv", "sweep_to_csv",
    "threshold_curve_2d",
    "CavityParams", "InterconnectDesign", "RatePoint", "attempt_rate",
    "fig3_curves", "get_design", "p_aa", "rate_point",
    "single_qubit_reference_rates",
]
