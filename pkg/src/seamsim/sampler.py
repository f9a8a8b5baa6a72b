"""Monte Carlo sampling of syndrome histories under phenomenological noise.

Each shot runs ``rounds`` noisy syndrome-extraction cycles followed by one
perfect readout.  Per cycle, every data qubit flips independently with
probability p (p_seam on the seam column) and every bit-flip check
misreports with probability q (q_seam on the seam column).  Detection
events are the round-to-round differences of the syndrome history; the
final, perfect layer closes all strings.

Randomness is counter-based: every Bernoulli draw is a hash of
(seed, shot_index, mechanism_index), where mechanisms enumerate
(round, site) pairs with data qubits before checks within a round.  A
given (seed, shot_index) therefore yields the same shot regardless of
batch size, worker, or call order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import IO, Iterable

import numpy as np

from .geometry import CodeLayout, logical_flip_reference
from .noise import FlipRates

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_STREAM = np.uint64(0xD1B54A32D192ED03)


def _splitmix64(x: np.ndarray) -> np.ndarray:
    """SplitMix64 finalizer; a bijective 64-bit mixing function."""
    with np.errstate(over="ignore"):
        z = x + _GOLDEN
        z = (z ^ (z >> np.uint64(30))) * _MIX1
        z = (z ^ (z >> np.uint64(27))) * _MIX2
        return z ^ (z >> np.uint64(31))


def counter_uniform(seed: int, shot_indices: np.ndarray,
                    n_mechanisms: int) -> np.ndarray:
    """Uniform [0, 1) draws indexed by (shot, mechanism).

    Returns an array of shape (len(shot_indices), n_mechanisms).  Draw
    (s, m) depends only on (seed, s, m).
    """
    key = _splitmix64(np.array(seed & 0xFFFFFFFFFFFFFFFF, dtype=np.uint64))
    shots = shot_indices.astype(np.uint64)[:, None]
    mechs = np.arange(n_mechanisms, dtype=np.uint64)[None, :]
    with np.errstate(over="ignore"):
        ctr = shots * np.uint64(n_mechanisms) + mechs
        bits = _splitmix64(key ^ (ctr * _GOLDEN + _STREAM))
    return (bits >> np.uint64(11)).astype(np.float64) * (2.0 ** -53)


@dataclass(frozen=True)
class ShotConfig:
    """Everything needed to reproduce a shot stream deterministically.

    ``rounds`` defaults to the code distance (noisy cycles; one perfect
    readout layer is always appended).  ``shot_index`` names the default
    shot decoded by `sample_shot`.
    """

    layout: CodeLayout
    rounds: int | None = None
    rates_bulk: FlipRates = FlipRates(0.0, 0.0)
    rates_seam: FlipRates | None = None
    seed: int = 0
    shot_index: int = 0

    def __post_init__(self) -> None:
        if self.rounds is None:
            object.__setattr__(self, "rounds", self.layout.distance)
        if self.rounds < 1:
            raise ValueError(f"rounds must be >= 1, got {self.rounds}")
        if self.rates_seam is not None and self.layout.seam_column is None:
            raise ValueError("seam rates given but layout has no seam column")

    @classmethod
    def from_region_rates(cls, layout: CodeLayout,
                          rates_by_region: dict[str, FlipRates],
                          rounds: int | None = None, seed: int = 0,
                          shot_index: int = 0) -> "ShotConfig":
        """Build from a region->rates map with keys 'bulk' and 'seam'."""
        unknown = set(rates_by_region) - {"bulk", "seam"}
        if unknown:
            raise ValueError(f"unknown regions {sorted(unknown)}")
        if "bulk" not in rates_by_region:
            raise ValueError("rates_by_region must cover 'bulk'")
        if layout.seam_column is not None and "seam" not in rates_by_region:
            raise ValueError("layout has a seam but no 'seam' rates given")
        return cls(layout=layout, rounds=rounds,
                   rates_bulk=rates_by_region["bulk"],
                   rates_seam=rates_by_region.get("seam"),
                   seed=seed, shot_index=shot_index)

    @property
    def rates_by_region(self) -> dict[str, FlipRates]:
        out = {"bulk": self.rates_bulk}
        if self.rates_seam is not None:
            out["seam"] = self.rates_seam
        return out

    @property
    def n_detector_layers(self) -> int:
        return self.rounds + 1

    @property
    def n_detectors(self) -> int:
        return self.layout.n_zchecks * self.n_detector_layers

    @property
    def n_mechanisms_per_round(self) -> int:
        return self.layout.n_data + self.layout.n_zchecks

    @property
    def n_mechanisms(self) -> int:
        return self.rounds * self.n_mechanisms_per_round


@dataclass(frozen=True)
class DetectionSet:
    """Sampled detection events plus the ground-truth logical flips.

    ``detections`` has shape (n_shots, n_detectors) with detector index
    layer * n_zchecks + zcheck; ``true_flips`` is the parity of the
    accumulated data error across the logical reference string.
    """

    detections: np.ndarray
    true_flips: np.ndarray
    shot_indices: np.ndarray

    @property
    def n_shots(self) -> int:
        return int(self.detections.shape[0])

    def events(self, shot: int = 0, n_zchecks: int | None = None
               ) -> set[tuple[int, int]]:
        """Fired detectors of one shot as (check index, 1-based round)."""
        if n_zchecks is None:
            raise ValueError("n_zchecks required to unflatten detector ids")
        fired = np.flatnonzero(self.detections[shot])
        return {(int(d % n_zchecks), int(d // n_zchecks) + 1) for d in fired}

    @property
    def true_logical_flip(self) -> bool:
        """Ground-truth flip of a single-shot set."""
        if self.n_shots != 1:
            raise ValueError("true_logical_flip is only defined for one shot")
        return bool(self.true_flips[0])


def _per_site_probs(config: ShotConfig) -> tuple[np.ndarray, np.ndarray]:
    """(p per data qubit, q per check), applying seam overrides."""
    layout = config.layout
    p = np.full(layout.n_data, config.rates_bulk.p_data)
    q = np.full(layout.n_zchecks, config.rates_bulk.q_meas)
    if config.rates_seam is not None:
        p[layout.data_seam_mask()] = config.rates_seam.p_data
        q[layout.zcheck_seam_mask()] = config.rates_seam.q_meas
    return p, q


def detections_from_errors(layout: CodeLayout, data_err: np.ndarray,
                           meas_err: np.ndarray,
                           shot_indices: np.ndarray | None = None
                           ) -> DetectionSet:
    """Deterministic detection events for explicit error patterns.

    ``data_err`` has shape (shots, rounds, n_data) and ``meas_err``
    (shots, rounds, n_zchecks), both 0/1.  This is the injection hook:
    the same pipeline `sample_batch` uses, minus the random draw.
    Accumulated data errors feed the check matrix per round; detection
    events are consecutive syndrome differences, closed by a perfect
    final readout layer.
    """
    data_err = np.asarray(data_err, dtype=np.uint8)
    meas_err = np.asarray(meas_err, dtype=np.uint8)
    if data_err.ndim != 3 or meas_err.ndim != 3:
        raise ValueError("error arrays must be (shots, rounds, sites)")
    n_shots, T, nd = data_err.shape
    nz = meas_err.shape[2]
    if meas_err.shape[:2] != (n_shots, T) or nd != layout.n_data \
            or nz != layout.n_zchecks:
        raise ValueError("error array shapes inconsistent with layout")
    cum = np.bitwise_and(np.cumsum(data_err, axis=1, dtype=np.int64), 1)
    H = layout.zcheck_matrix()
    flat = cum.reshape(n_shots * T, nd)
    synd = (H @ flat.T).T.astype(np.int64) & 1           # (S*T, nz)
    synd = synd.reshape(n_shots, T, nz).astype(np.uint8)
    noisy = synd ^ meas_err                              # rounds 0..T-1
    layers = np.empty((n_shots, T + 1, nz), dtype=np.uint8)
    layers[:, :T] = noisy
    layers[:, T] = synd[:, T - 1]                        # perfect readout
    dets = layers.copy()
    dets[:, 1:] ^= layers[:, :-1]

    ref = np.asarray(logical_flip_reference(layout), dtype=np.intp)
    true_flips = (cum[:, T - 1, ref].sum(axis=1) & 1).astype(np.uint8)
    if shot_indices is None:
        shot_indices = np.arange(n_shots, dtype=np.uint64)
    return DetectionSet(
        detections=dets.reshape(n_shots, (T + 1) * nz),
        true_flips=true_flips,
        shot_indices=shot_indices,
    )


def sample_batch(config: ShotConfig, shot_start: int,
                 n_shots: int) -> DetectionSet:
    """Sample shots [shot_start, shot_start + n_shots) in one vector pass."""
    if n_shots < 0 or shot_start < 0:
        raise ValueError("shot_start and n_shots must be non-negative")
    layout = config.layout
    T = config.rounds
    nd, nz = layout.n_data, layout.n_zchecks
    shot_idx = np.arange(shot_start, shot_start + n_shots, dtype=np.uint64)

    u = counter_uniform(config.seed, shot_idx, config.n_mechanisms)
    u = u.reshape(n_shots, T, nd + nz)
    p, q = _per_site_probs(config)
    data_err = (u[:, :, :nd] < p).astype(np.uint8)       # (S, T, nd)
    meas_err = (u[:, :, nd:] < q).astype(np.uint8)       # (S, T, nz)
    return detections_from_errors(layout, data_err, meas_err, shot_idx)


def sample_shot(config: ShotConfig, shot_index: int | None = None
                ) -> DetectionSet:
    """Single shot; identical to the same index inside any batch."""
    if shot_index is None:
        shot_index = config.shot_index
    return sample_batch(config, shot_index, 1)


def iter_batches(config: ShotConfig, n_shots: int,
                 batch_size: int = 4096) -> Iterable[DetectionSet]:
    """Stream n_shots as equal-result batches starting at shot 0."""
    start = 0
    while start < n_shots:
        size = min(batch_size, n_shots - start)
        yield sample_batch(config, start, size)
        start += size


def dump_shots(dataset: DetectionSet, fp: IO[str]) -> None:
    """Write shots as JSON Lines: one record per shot.

    Record fields: shot (index), detections (indices of fired detectors),
    true_flip (0/1).
    """
    for k in range(dataset.n_shots):
        fired = np.flatnonzero(dataset.detections[k]).tolist()
        rec = {
            "shot": int(dataset.shot_indices[k]),
            "detections": fired,
            "true_flip": int(dataset.true_flips[k]),
        }
        fp.write(json.dumps(rec) + "\n")


def load_shots(fp: IO[str], n_detectors: int) -> DetectionSet:
    """Read a JSON Lines shot dump back into arrays."""
    dets, flips, idx = [], [], []
    for line in fp:
        line = line.strip()
        if not line:
            continue
        rec = json.loads(line)
        row = np.zeros(n_detectors, dtype=np.uint8)
        row[np.asarray(rec["detections"], dtype=np.intp)] = 1
        dets.append(row)
        flips.append(rec["true_flip"])
        idx.append(rec["shot"])
    return DetectionSet(
        detections=np.array(dets, dtype=np.uint8).reshape(len(dets), n_detectors),
        true_flips=np.array(flips, dtype=np.uint8),
        shot_indices=np.array(idx, dtype=np.uint64),
    )
