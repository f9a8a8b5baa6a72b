"""Space-time matching graph and minimum-weight perfect matching decoding.

Detector nodes live on a (rounds + 1)-layer stack of bit-flip checks;
node index = layer * n_zchecks + zcheck.  Edges are independent error
mechanisms:

* spatial: a data-qubit flip in round t toggles the adjacent check(s) at
  layer t; data qubits next to only one check connect that check to the
  virtual boundary instead.  Probability p (or p_seam on the seam column).
* temporal: a misreported check in round t toggles layers t and t + 1.
  Probability q (or q_seam).

Edge weight is ln((1 - r) / r) for mechanism probability r; zero-rate
mechanisms are dropped, rates at or above 1/2 are rejected.  An edge's
``obs`` bit marks mechanisms that flip the logical reference string (the
top row of data qubits), so the predicted logical flip is the parity of
``obs`` over the matched paths.

Two decoders are provided: `Matching` (exact MWPM in the compiled core,
with safe pruning, component decomposition, and an exact DP fast path)
and `decode_bruteforce` (an independent oracle built on scipy's Dijkstra
and exhaustive pairing enumeration, for cross-checking small instances).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra

from . import _mwpm
from .geometry import CodeLayout, logical_flip_reference
from .noise import FlipRates
from .sampler import DetectionSet, ShotConfig

BOUNDARY = -1


class WeightError(ValueError):
    """An edge probability is not decodable (r >= 1/2)."""


@dataclass(frozen=True)
class MatchingGraph:
    """Detector graph: nodes, error-mechanism edges, weights, obs flags."""

    n_nodes: int
    n_zchecks: int
    rounds: int
    edges_uv: np.ndarray      # (m, 2) int32, v == -1 for boundary
    probabilities: np.ndarray  # (m,) float64
    weights: np.ndarray        # (m,) float64
    obs: np.ndarray            # (m,) uint8
    unweighted: bool = False

    @property
    def n_edges(self) -> int:
        return int(self.edges_uv.shape[0])

    def node_index(self, zcheck: int, layer: int) -> int:
        return layer * self.n_zchecks + zcheck


@dataclass(frozen=True)
class Correction:
    """One decoded shot: matched defect pairs and the predicted flip."""

    pairs: tuple[tuple[int, int], ...]  # node ids; -1 means boundary
    total_weight: float
    predicted_flip: bool


def _edge_weight(r: float, unweighted: bool) -> float:
    if unweighted:
        return 1.0
    return math.log((1.0 - r) / r)


def build_matching_graph(layout: CodeLayout, rounds: int | None = None,
                         rates_bulk: FlipRates | dict[str, FlipRates] = None,
                         rates_seam: FlipRates | None = None,
                         unweighted: bool = False) -> MatchingGraph:
    """Matching graph for ``rounds`` noisy cycles plus one perfect layer.

    ``rates_bulk`` may be a region->rates map with keys 'bulk' and
    optionally 'seam'; ``rounds`` defaults to the code distance.
    """
    if isinstance(rates_bulk, dict):
        if rates_seam is not None:
            raise ValueError("pass seam rates inside the region map")
        rates_seam = rates_bulk.get("seam")
        rates_bulk = rates_bulk["bulk"]
    if rates_bulk is None:
        raise ValueError("bulk flip rates are required")
    if rounds is None:
        rounds = layout.distance
    if rounds < 1:
        raise ValueError(f"rounds must be >= 1, got {rounds}")
    if rates_seam is not None and layout.seam_column is None:
        raise ValueError("seam rates given but layout has no seam column")
    nz = layout.n_zchecks
    zidx = layout.zcheck_index()
    n = layout.grid_size

    uv: list[tuple[int, int]] = []
    probs: list[float] = []
    obs: list[int] = []
    ref = set(logical_flip_reference(layout))
    didx = layout.data_index()

    def p_of(r: int, c: int) -> float:
        on_seam = layout.seam_column is not None and c == layout.seam_column
        return (rates_seam.p_data if on_seam and rates_seam is not None
                else rates_bulk.p_data)

    def q_of(r: int, c: int) -> float:
        on_seam = layout.seam_column is not None and c == layout.seam_column
        return (rates_seam.q_meas if on_seam and rates_seam is not None
                else rates_bulk.q_meas)

    # Spatial mechanisms (one per data qubit per noisy round).
    spatial: list[tuple[int, int, float, int]] = []  # (za, zb, prob, obs)
    for (r, c) in layout.data_coords:
        if r % 2 == 0:
            neigh = [(r - 1, c), (r + 1, c)]
        else:
            neigh = [(r, c - 1), (r, c + 1)]
        zs = [zidx[rc] for rc in neigh if 0 <= rc[0] < n and 0 <= rc[1] < n]
        flag = 1 if didx[(r, c)] in ref else 0
        if len(zs) == 2:
            spatial.append((zs[0], zs[1], p_of(r, c), flag))
        else:
            spatial.append((zs[0], BOUNDARY, p_of(r, c), flag))

    for t in range(rounds):
        for za, zb, p, flag in spatial:
            if p <= 0.0:
                continue
            if p >= 0.5:
                raise WeightError(f"data flip rate {p} >= 1/2")
            a = t * nz + za
            b = BOUNDARY if zb == BOUNDARY else t * nz + zb
            uv.append((a, b))
            probs.append(p)
            obs.append(flag)

    # Temporal mechanisms (one per check per noisy round).
    for t in range(rounds):
        for (r, c) in layout.zcheck_coords:
            q = q_of(r, c)
            if q <= 0.0:
                continue
            if q >= 0.5:
                raise WeightError(f"measurement flip rate {q} >= 1/2")
            z = zidx[(r, c)]
            uv.append((t * nz + z, (t + 1) * nz + z))
            probs.append(q)
            obs.append(0)

    probs_arr = np.asarray(probs, dtype=np.float64)
    weights = np.array([_edge_weight(p, unweighted) for p in probs],
                       dtype=np.float64)
    return MatchingGraph(
        n_nodes=(rounds + 1) * nz,
        n_zchecks=nz,
        rounds=rounds,
        edges_uv=np.asarray(uv, dtype=np.int32).reshape(len(uv), 2),
        probabilities=probs_arr,
        weights=weights,
        obs=np.asarray(obs, dtype=np.uint8),
        unweighted=unweighted,
    )


def graph_for_config(config: ShotConfig,
                     unweighted: bool = False) -> MatchingGraph:
    """Matching graph matched to a sampler configuration."""
    return build_matching_graph(config.layout, config.rounds,
                                config.rates_bulk, config.rates_seam,
                                unweighted=unweighted)


class Matching:
    """Exact minimum-weight perfect matching decoder over a MatchingGraph."""

    def __init__(self, graph: MatchingGraph, dp_max: int = 12):
        self.graph = graph
        self._core = _mwpm.Decoder(graph.n_nodes, graph.edges_uv,
                                   graph.weights, graph.obs, dp_max)

    def decode(self, detections: np.ndarray) -> Correction:
        """Decode one shot given its detector bit vector."""
        detections = np.asarray(detections).reshape(-1)
        if detections.shape[0] != self.graph.n_nodes:
            raise ValueError("detection vector length != number of detectors")
        defects = np.flatnonzero(detections).astype(np.int32)
        pairs, total, flip = self._core.decode([int(d) for d in defects])
        return Correction(pairs=tuple(tuple(p) for p in pairs),
                          total_weight=float(total), predicted_flip=bool(flip))

    def decode_batch(self, detections: np.ndarray
                     ) -> tuple[np.ndarray, np.ndarray]:
        """Decode many shots; returns (predicted flips, total weights)."""
        detections = np.ascontiguousarray(detections, dtype=np.uint8)
        flips, weights = self._core.decode_batch(detections)
        return np.asarray(flips, dtype=np.uint8), np.asarray(weights)

    def failures(self, dataset: DetectionSet) -> np.ndarray:
        """Per-shot logical failure indicators (prediction != truth)."""
        flips, _ = self.decode_batch(dataset.detections)
        return (flips != dataset.true_flips).astype(np.uint8)


_matching_cache: dict[int, Matching] = {}


def decode_mwpm(graph: MatchingGraph, detections: np.ndarray) -> Correction:
    """Exact minimum-weight matching decode of one detector bit vector.

    Functional entry point; `Matching` instances are cached per graph so
    repeated calls reuse the shortest-path precompute.
    """
    key = id(graph)
    matcher = _matching_cache.get(key)
    if matcher is None or matcher.graph is not graph:
        matcher = Matching(graph)
        _matching_cache.clear()
        _matching_cache[key] = matcher
    return matcher.decode(detections)


@dataclass
class _OracleGraph:
    dist: np.ndarray   # (n+1, n+1) incl. boundary as node n
    par: np.ndarray    # (n+1, n+1) uint8 crossing parity


def _oracle_graph(graph: MatchingGraph) -> _OracleGraph:
    """Independent all-pairs shortest paths via scipy's Dijkstra.

    Crossing parities are recovered from scipy's predecessor matrix, not
    from the compiled core.
    """
    n = graph.n_nodes
    nv = n + 1  # boundary node appended last
    rows, cols, vals = [], [], []
    obs_of: dict[tuple[int, int], int] = {}
    for (u, v), w, o in zip(graph.edges_uv, graph.weights, graph.obs):
        a, b = int(u), n if int(v) == BOUNDARY else int(v)
        key = (min(a, b), max(a, b))
        # These graphs have no parallel edges; guard anyway.
        if key in obs_of:
            continue
        rows += [a, b]
        cols += [b, a]
        vals += [w, w]
        obs_of[key] = int(o)
    adj = csr_matrix((vals, (rows, cols)), shape=(nv, nv))
    dist, pred = dijkstra(adj, directed=False, return_predecessors=True)
    par = np.zeros((nv, nv), dtype=np.uint8)
    for s in range(nv):
        for t in range(nv):
            if not np.isfinite(dist[s, t]) or s == t:
                continue
            x = t
            parity = 0
            while x != s:
                px = pred[s, x]
                parity ^= obs_of[(min(px, x), max(px, x))]
                x = px
            par[s, t] = parity
    return _OracleGraph(dist=dist, par=par)


def _pairings(items: list[int]):
    """All ways to split items into pairs and singletons (to the boundary)."""
    if not items:
        yield []
        return
    head, rest = items[0], items[1:]
    for tail in _pairings(rest):
        yield [(head, BOUNDARY)] + tail
    for k in range(len(rest)):
        partner = rest[k]
        remaining = rest[:k] + rest[k + 1:]
        for tail in _pairings(remaining):
            yield [(head, partner)] + tail


def decode_bruteforce(graph: MatchingGraph, detections: np.ndarray,
                      max_defects: int = 12,
                      _cache: dict | None = None) -> Correction:
    """Exhaustive minimum-weight decoding; exact but exponential.

    Enumerates every pairing of the defects (each defect matched to
    another or to the boundary) over scipy-computed shortest-path
    distances.  Ties are broken toward the lexicographically smallest
    sorted pair list, making the reported pairing deterministic.
    """
    detections = np.asarray(detections).reshape(-1)
    defects = [int(d) for d in np.flatnonzero(detections)]
    if len(defects) > max_defects:
        raise ValueError(
            f"{len(defects)} defects exceeds brute-force limit {max_defects}")
    if _cache is not None and "oracle" in _cache:
        og = _cache["oracle"]
    else:
        og = _oracle_graph(graph)
        if _cache is not None:
            _cache["oracle"] = og
    n = graph.n_nodes
    best: tuple[float, list[tuple[int, int]]] | None = None
    for pairing in _pairings(defects):
        total = 0.0
        ok = True
        for a, b in pairing:
            d = og.dist[a, n if b == BOUNDARY else b]
            if not np.isfinite(d):
                ok = False
                break
            total += d
        if not ok:
            continue
        key = sorted(pairing)
        if best is None or (total < best[0] - 1e-12) or (
                abs(total - best[0]) <= 1e-12 and key < best[1]):
            best = (total, key)
    if best is None:
        if defects:
            raise ValueError("no feasible pairing of defects")
        return Correction(pairs=(), total_weight=0.0, predicted_flip=False)
    flip = 0
    for a, b in best[1]:
        flip ^= int(og.par[a, n if b == BOUNDARY else b])
    return Correction(pairs=tuple(best[1]), total_weight=float(best[0]),
                      predicted_flip=bool(flip))
