"""Monte Carlo sweeps, failure-rate estimation, and threshold extraction.

A sweep walks a one-parameter noise family: the sweep variable x maps to
physical error rates (eps_ryd, eps_bell, eps_m) and from there to
per-region flip rates.  Families:

* ``bulk``: local-gate noise only, eps_m = m_ratio * x, no seam.
* ``combined``: bulk rates everywhere plus elevated seam-column rates,
  with eps_bell = bell_ratio * x and eps_m = m_ratio * x.
* ``boundary``: eps_bell = x on the seam while eps_ryd = eps_m stay
  fixed at ``fixed_bulk_eps`` (zero means noise on the seam only).
* ``uniform_pq``: phenomenological p = q = x directly, bypassing the
  physical-rate mapping.
* ``small_modules``: the fully-teleported per-cycle rates applied to the
  whole lattice, eps_bell = bell_ratio * x, eps_m = m_ratio * x.

Thresholds come from pairwise crossings of adjacent-L failure curves,
interpolated linearly in log P_fail; the quoted uncertainty is the
half-spread across pairs plus the propagated binomial error.
"""

from __future__ import annotations

import csv
import hashlib
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .decoder import Matching, graph_for_config
from .geometry import CodeLayout, build_layout
from .noise import ErrorRates, FlipRates, RegionPreset, flip_rates
from .sampler import ShotConfig, sample_batch

FAMILIES = ("bulk", "combined", "boundary", "uniform_pq", "small_modules")

CSV_SCHEMA_VERSION = 1
CSV_COLUMNS = [
    "eps_ryd", "eps_bell", "eps_m", "L", "shots", "p_fail", "ci_lo", "ci_hi",
    "family", "x", "rounds", "p_bulk", "p_bound",
]


class NoCrossingError(RuntimeError):
    """The swept range does not bracket a threshold crossing."""

    def __init__(self, message: str, curves=None):
        super().__init__(message)
        self.curves = curves


class FitError(RuntimeError):
    """The scaling fit is ill-conditioned; details in the message."""


def wilson_interval(failures: int, shots: int, z: float = 1.96
                    ) -> tuple[float, float]:
    """Wilson 95% score interval for a binomial proportion."""
    if shots <= 0:
        raise ValueError("shots must be positive")
    phat = failures / shots
    denom = 1.0 + z * z / shots
    center = (phat + z * z / (2 * shots)) / denom
    half = (z / denom) * math.sqrt(
        phat * (1 - phat) / shots + z * z / (4 * shots * shots))
    return max(0.0, center - half), min(1.0, center + half)


@dataclass(frozen=True)
class NoiseFamily:
    """Mapping from the sweep variable to per-region flip rates."""

    name: str
    mode: str = "table_rounded"
    bell_ratio: float = 8.0
    m_ratio: float = 1.0
    fixed_bulk_eps: float = 0.0

    def __post_init__(self) -> None:
        if self.name not in FAMILIES:
            raise ValueError(f"unknown family {self.name!r}")

    @property
    def needs_seam(self) -> bool:
        return self.name in ("combined", "boundary")

    def error_rates(self, x: float) -> ErrorRates:
        if self.name == "bulk":
            return ErrorRates(eps_cx=x, eps_bell=0.0, eps_m=self.m_ratio * x)
        if self.name in ("combined", "small_modules"):
            return ErrorRates(eps_cx=x, eps_bell=self.bell_ratio * x,
                              eps_m=self.m_ratio * x)
        if self.name == "boundary":
            return ErrorRates(eps_cx=self.fixed_bulk_eps, eps_bell=x,
                              eps_m=self.fixed_bulk_eps)
        # uniform_pq: x is p = q, not a physical rate.
        return ErrorRates(eps_cx=0.0, eps_bell=0.0, eps_m=0.0)

    def region_rates(self, x: float) -> dict[str, FlipRates]:
        if self.name == "uniform_pq":
            return {"bulk": FlipRates(p_data=x, q_meas=x)}
        er = self.error_rates(x)
        if self.name == "small_modules":
            preset = RegionPreset(region="small_modules", mode=self.mode)
            return {"bulk": flip_rates(er, preset)}
        bulk = flip_rates(er, RegionPreset(region="bulk", mode=self.mode))
        out = {"bulk": bulk}
        if self.needs_seam:
            out["seam"] = flip_rates(
                er, RegionPreset(region="seam", mode=self.mode))
        return out


@dataclass(frozen=True)
class SweepPoint:
    """One estimated failure rate with its provenance."""

    eps_ryd: float
    eps_bell: float
    eps_m: float
    L: int
    shots: int
    p_fail: float
    ci_lo: float
    ci_hi: float
    family: str
    x: float
    rounds: int
    p_bulk: float   # bulk per-cycle data flip rate at this point
    p_bound: float  # seam per-cycle data flip rate (0 without a seam)


@dataclass
class SweepResult:
    """Grid of failure-rate estimates plus run metadata."""

    points: list[SweepPoint] = field(default_factory=list)
    family: NoiseFamily | None = None
    seed: int | None = None

    def curve(self, L: int) -> list[SweepPoint]:
        return sorted((p for p in self.points if p.L == L),
                      key=lambda p: p.x)

    def l_values(self) -> list[int]:
        return sorted({p.L for p in self.points})

    def curves(self) -> dict[int, list[SweepPoint]]:
        return {L: self.curve(L) for L in self.l_values()}


@dataclass(frozen=True)
class ThresholdEstimate:
    """Crossing location of the finite-size failure curves."""

    value: float
    uncertainty: float
    family: str
    crossings: tuple[float, ...] = ()
    pair_labels: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if not self.uncertainty > 0:
            raise ValueError("uncertainty must be positive")


def seam_column_for(L: int) -> int:
    """Central even (data/check) column used as the seam."""
    c = L - 1
    return c if c % 2 == 0 else c - 1


def layout_for(family: NoiseFamily, L: int) -> CodeLayout:
    seam = seam_column_for(L) if family.needs_seam else None
    return build_layout(L, seam)


def _point_seed(base_seed: int, family: NoiseFamily, x: float, L: int,
                rounds: int) -> int:
    """Stable per-point seed so sweeps are order-independent."""
    tag = f"{family.name}|{family.mode}|{family.bell_ratio!r}|" \
          f"{family.m_ratio!r}|{family.fixed_bulk_eps!r}|{x!r}|{L}|{rounds}"
    h = hashlib.sha256(tag.encode()).digest()
    return (base_seed ^ int.from_bytes(h[:8], "little")) & 0x7FFFFFFFFFFFFFFF


def shot_config(family: NoiseFamily, x: float, L: int,
                rounds: int | None = None, seed: int = 0) -> ShotConfig:
    layout = layout_for(family, L)
    rates = family.region_rates(x)
    if rounds is None:
        rounds = L
    return ShotConfig.from_region_rates(
        layout, rates, rounds=rounds,
        seed=_point_seed(seed, family, x, L, rounds))


def _count_failures_range(config: ShotConfig, start: int, n: int,
                          batch_size: int) -> int:
    matcher = Matching(graph_for_config(config))
    failures = 0
    done = 0
    while done < n:
        size = min(batch_size, n - done)
        ds = sample_batch(config, start + done, size)
        failures += int(matcher.failures(ds).sum())
        done += size
    return failures


def estimate_pfail(config: ShotConfig, shots: int, batch_size: int = 2048,
                   workers: int = 1) -> tuple[float, tuple[float, float]]:
    """Monte Carlo logical failure rate with a Wilson 95% interval.

    Shots are split into disjoint index ranges across workers; the
    counter-based sampler makes the result identical for any worker count.
    """
    if shots < 1:
        raise ValueError("shots must be >= 1")
    if workers <= 1:
        failures = _count_failures_range(config, 0, shots, batch_size)
    else:
        chunk = -(-shots // workers)
        ranges = [(s, min(chunk, shots - s))
                  for s in range(0, shots, chunk)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futs = [pool.submit(_count_failures_range, config, s, n,
                                batch_size) for s, n in ranges]
            failures = sum(f.result() for f in futs)
    p = failures / shots
    return p, wilson_interval(failures, shots)


def run_sweep(family: NoiseFamily, xs, l_values, shots: int,
              seed: int = 0, rounds: int | None = None,
              batch_size: int = 2048, workers: int = 1,
              target_rel_halfwidth: float | None = None,
              max_shots: int | None = None) -> SweepResult:
    """Estimate P_fail on the (x, L) grid.

    With ``target_rel_halfwidth`` set, points are topped up (in ``shots``
    increments, capped at ``max_shots``) until the Wilson interval
    half-width is at most that fraction of the estimate.
    """
    result = SweepResult(family=family, seed=seed)
    for L in l_values:
        for x in xs:
            cfg = shot_config(family, x, L, rounds, seed)
            n = shots
            p, (lo, hi) = estimate_pfail(cfg, n, batch_size, workers)
            if target_rel_halfwidth is not None:
                cap = max_shots if max_shots is not None else 8 * shots
                failures = round(p * n)
                while (n < cap and p > 0.0
                       and (hi - lo) / 2 > target_rel_halfwidth * p):
                    extra = min(shots, cap - n)
                    failures += _count_failures_range(
                        cfg, n, extra, batch_size)
                    n += extra
                    p = failures / n
                    lo, hi = wilson_interval(failures, n)
            er = family.error_rates(x)
            rates = family.region_rates(x)
            result.points.append(SweepPoint(
                eps_ryd=er.eps_ryd, eps_bell=er.eps_bell, eps_m=er.eps_m,
                L=L, shots=n, p_fail=p, ci_lo=lo, ci_hi=hi,
                family=family.name, x=x, rounds=cfg.rounds,
                p_bulk=rates["bulk"].p_data,
                p_bound=rates.get("seam", FlipRates(0.0, 0.0)).p_data,
            ))
    return result


def _log_sigma(pt: SweepPoint) -> float:
    """1-sigma error of log(p_fail) from the Wilson interval width."""
    if pt.p_fail <= 0 or pt.ci_lo <= 0:
        return math.inf
    return (math.log(pt.ci_hi) - math.log(pt.ci_lo)) / (2 * 1.96)


def _pair_crossing(c1: list[SweepPoint], c2: list[SweepPoint]
                   ) -> tuple[float, float] | None:
    """Crossing of two curves via linear interpolation in log P_fail.

    Returns (x_cross, sigma_x) for the first sign change of
    log P2 - log P1, or None if the curves never cross.
    """
    xs1 = {p.x: p for p in c1}
    common = sorted(set(xs1) & {p.x: p for p in c2}.keys())
    pts = [(x, xs1[x], next(p for p in c2 if p.x == x)) for x in common]
    usable = [(x, a, b) for x, a, b in pts
              if a.p_fail > 0 and b.p_fail > 0]
    if len(usable) < 2:
        return None
    diffs = []
    for x, a, b in usable:
        d = math.log(b.p_fail) - math.log(a.p_fail)
        s = math.sqrt(_log_sigma(a) ** 2 + _log_sigma(b) ** 2)
        diffs.append((x, d, s))
    for (xa, da, sa), (xb, dbv, sb) in zip(diffs, diffs[1:]):
        if da == 0.0:
            return xa, sa * (xb - xa) / max(abs(dbv - da), 1e-300)
        if da * dbv < 0:
            denom = dbv - da
            xc = (xa * dbv - xb * da) / denom
            dxa = (xa - xb) * dbv / denom ** 2
            dxb = (xb - xa) * da / denom ** 2
            sig = math.sqrt((dxa * sa) ** 2 + (dxb * sb) ** 2)
            if not math.isfinite(sig):
                sig = (xb - xa) / 2
            return xc, sig
    return None


def find_threshold(sweep: SweepResult) -> ThresholdEstimate:
    """Mean adjacent-L crossing of the failure curves.

    Uncertainty is half the spread of the pairwise crossings plus the
    mean propagated statistical error of the interpolated crossings.
    """
    curves = sweep.curves()
    ls = sorted(curves)
    if len(ls) < 3:
        raise NoCrossingError(
            f"need >= 3 distinct L values, got {ls}", curves)
    crossings, sigmas, labels = [], [], []
    for l1, l2 in zip(ls, ls[1:]):
        got = _pair_crossing(curves[l1], curves[l2])
        if got is None:
            continue
        crossings.append(got[0])
        sigmas.append(got[1])
        labels.append(f"L{l1}/L{l2}")
    if not crossings:
        raise NoCrossingError(
            "no adjacent-L curve pair brackets a crossing in the swept "
            "range; widen the sweep grid", curves)
    value = float(np.mean(crossings))
    half_spread = (max(crossings) - min(crossings)) / 2
    stat = float(np.mean(sigmas))
    uncertainty = half_spread + stat
    if uncertainty <= 0:
        uncertainty = max(stat, 1e-12)
    fam = sweep.family.name if sweep.family is not None else "unknown"
    return ThresholdEstimate(value=value, uncertainty=uncertainty,
                             family=fam, crossings=tuple(crossings),
                             pair_labels=tuple(labels))


@dataclass(frozen=True)
class RayResult:
    """Threshold along one fixed eps_bell/eps_ryd ray."""

    ratio: float
    eps_ryd_th: float | None
    eps_bell_th: float | None
    uncertainty: float | None
    error: str | None = None


def threshold_curve_2d(ratios, xs, l_values, shots, seed: int = 0,
                       mode: str = "table_rounded", workers: int = 1,
                       batch_size: int = 2048) -> list[RayResult]:
    """Below-threshold boundary in the (eps_ryd, eps_bell) plane.

    Each ratio r defines the ray eps_bell = r * eps_ryd (with
    eps_m = eps_ryd); the degenerate ratio ``inf`` means the pure
    boundary ray eps_ryd = 0.  Per-ray no-crossing errors are recorded,
    not raised.
    """
    out = []
    for r in ratios:
        if math.isinf(r):
            fam = NoiseFamily(name="boundary", mode=mode, fixed_bulk_eps=0.0)
        else:
            fam = NoiseFamily(name="combined", mode=mode, bell_ratio=r)
        sweep = run_sweep(fam, xs, l_values, shots, seed=seed,
                          workers=workers, batch_size=batch_size)
        try:
            th = find_threshold(sweep)
        except NoCrossingError as exc:
            out.append(RayResult(ratio=r, eps_ryd_th=None, eps_bell_th=None,
                                 uncertainty=None, error=str(exc)))
            continue
        if math.isinf(r):
            out.append(RayResult(ratio=r, eps_ryd_th=0.0,
                                 eps_bell_th=th.value,
                                 uncertainty=th.uncertainty))
        else:
            out.append(RayResult(ratio=r, eps_ryd_th=th.value,
                                 eps_bell_th=r * th.value,
                                 uncertainty=th.uncertainty))
    return out


@dataclass(frozen=True)
class FitResult:
    """Two-term finite-size scaling fit P = sum_i (p_i / p_i_th)^(L/2)."""

    p_bulk_th: float
    p_bound_th: float | None
    residual_rms: float
    n_points: int


def _scaling_model(params, rows, two_term):
    log_a = params[0]
    preds = []
    for p_bulk, p_bound, L, _ in rows:
        term = (p_bulk / math.exp(log_a)) ** (L / 2)
        if two_term and p_bound > 0:
            term += (p_bound / math.exp(params[1])) ** (L / 2)
        preds.append(term)
    return np.array(preds)


def fit_simple_model(sweep: SweepResult,
                     extra: SweepResult | None = None) -> FitResult:
    """Least-squares fit of log P_fail to the two-term scaling form.

    Rows with zero seam rate constrain only the bulk threshold; rows with
    both rates constrain both.  Pass a bulk-only sweep as ``extra`` to
    anchor the bulk term when fitting combined data.
    """
    from scipy.optimize import least_squares

    points = list(sweep.points) + (list(extra.points) if extra else [])
    rows = [(p.p_bulk, p.p_bound, p.L, p.p_fail)
            for p in points if p.p_fail > 0 and p.p_bulk > 0]
    if len(rows) < 3:
        raise FitError(f"only {len(rows)} usable points (nonzero p_fail)")
    l_count = len({r[2] for r in rows})
    if l_count < 3:
        raise FitError(f"need >= 3 distinct L values, got {l_count}")
    two_term = any(r[1] > 0 for r in rows)
    target = np.log([r[3] for r in rows])

    def resid(params):
        pred = _scaling_model(params, rows, two_term)
        return np.log(np.maximum(pred, 1e-300)) - target

    x0 = [math.log(0.03)] + ([math.log(0.08)] if two_term else [])
    sol = least_squares(resid, x0, method="lm", max_nfev=10000)
    if not sol.success:
        raise FitError(f"fit did not converge: {sol.message}")
    jac = sol.jac
    cond = np.linalg.cond(jac.T @ jac)
    if not np.isfinite(cond) or cond > 1e12:
        raise FitError(
            f"ill-conditioned fit (normal-matrix condition {cond:.3g}); "
            "add data separating the bulk and seam terms")
    rms = float(np.sqrt(np.mean(sol.fun ** 2)))
    return FitResult(
        p_bulk_th=float(math.exp(sol.x[0])),
        p_bound_th=float(math.exp(sol.x[1])) if two_term else None,
        residual_rms=rms,
        n_points=len(rows),
    )


def _wls_slope(xs: np.ndarray, ys: np.ndarray,
               sigmas: np.ndarray) -> tuple[float, float]:
    """Weighted least-squares slope of ys vs xs and its variance."""
    w = 1.0 / np.maximum(sigmas, 1e-12) ** 2
    xbar = np.sum(w * xs) / np.sum(w)
    sxx = np.sum(w * (xs - xbar) ** 2)
    slope = np.sum(w * (xs - xbar) * ys) / sxx
    return float(slope), float(1.0 / sxx)


def fit_log_slope(sweep: SweepResult) -> tuple[float, float]:
    """Slope consistency of the sub-threshold data with the L/2 form.

    The scaling form P = c (p / A)^(L/2) predicts a per-unit-L slope of
    log P_fail equal to 0.5 log(p / A) at fixed p.  Over the clearly
    sub-threshold grid points (failure rate strictly decreasing in L,
    all curves nonzero), a single effective threshold A and prefactor c
    are fitted to the whole set, and each x's measured slope is divided
    by the predicted one.  Returns (mean ratio, standard error of the
    mean across x); a ratio consistent with 1 within that uncertainty
    means the L/2 form describes the decay.
    """
    rows = []   # (log p, measured slope, slope variance, points)
    for x in sorted({p.x for p in sweep.points}):
        pts = sorted((p for p in sweep.points if p.x == x and p.p_fail > 0),
                     key=lambda p: p.L)
        if len(pts) < 3 or len(pts) != len(sweep.l_values()):
            continue
        fails = [p.p_fail for p in pts]
        if any(b >= a for a, b in zip(fails, fails[1:])):
            continue   # not clearly sub-threshold
        sig = np.array([_log_sigma(p) for p in pts])
        if not np.all(np.isfinite(sig)):
            continue
        ls = np.array([p.L for p in pts], dtype=float)
        ys = np.array([math.log(p.p_fail) for p in pts])
        slope, var = _wls_slope(ls, ys, sig)
        rows.append((math.log(pts[0].p_bulk), slope, var, pts))
    if len(rows) < 2:
        raise FitError(
            "need >= 2 clearly sub-threshold x values with full L "
            "coverage to fit the scaling exponent")
    # Weighted fit of (log c, log A) to log P = log c + (L/2) log(p / A).
    design, target, weights = [], [], []
    for logp, _, _, pts in rows:
        for p in pts:
            half_l = p.L / 2.0
            design.append([1.0, -half_l])
            target.append(math.log(p.p_fail) - half_l * logp)
            weights.append(1.0 / max(_log_sigma(p), 1e-12))
    w = np.array(weights)[:, None]
    coef, *_ = np.linalg.lstsq(np.array(design) * w,
                               np.array(target) * w[:, 0], rcond=None)
    log_a = float(coef[1])
    ratios, variances = [], []
    for logp, slope, var, _ in rows:
        predicted = 0.5 * (logp - log_a)
        ratios.append(slope / predicted)
        variances.append(var / predicted ** 2)
    arr = np.array(ratios)
    mean = float(arr.mean())
    stat = math.sqrt(float(np.mean(variances)) / len(arr))
    spread = float(arr.std(ddof=1) / math.sqrt(len(arr))) \
        if len(arr) > 1 else 0.0
    return mean, max(stat, spread)


def small_modules_line(eps_cx_values) -> np.ndarray:
    """eps_bell on the line 3% = 1.5 eps_bell + 7 eps_cx.

    This is the linear estimate of the fully-teleported architecture's
    threshold locus in the (eps_cx, eps_bell) plane at eps_m = eps_cx.
    """
    eps = np.asarray(eps_cx_values, dtype=float)
    if np.any(eps < 0) or np.any(eps > 0.03 / 7 + 1e-12):
        raise ValueError("eps_cx must lie in [0, 3%/7]")
    return (0.03 - 7.0 * eps) / 1.5


# ---------------------------------------------------------------------------
# CSV / manifest plumbing shared with the CLI.
# ---------------------------------------------------------------------------

def sweep_to_csv(sweep: SweepResult, path) -> None:
    """Write one row per point; header carries the column names.

    All eps_* and p_* columns are dimensionless probabilities; rounds and
    L are counts.
    """
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(CSV_COLUMNS)
        for p in sweep.points:
            w.writerow([
                repr(p.eps_ryd), repr(p.eps_bell), repr(p.eps_m), p.L,
                p.shots, repr(p.p_fail), repr(p.ci_lo), repr(p.ci_hi),
                p.family, repr(p.x), p.rounds, repr(p.p_bulk),
                repr(p.p_bound),
            ])


def sweep_from_csv(path) -> SweepResult:
    result = SweepResult()
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        missing = set(CSV_COLUMNS) - set(reader.fieldnames or [])
        if missing:
            raise ValueError(f"CSV missing columns {sorted(missing)}")
        fams = set()
        for row in reader:
            result.points.append(SweepPoint(
                eps_ryd=float(row["eps_ryd"]), eps_bell=float(row["eps_bell"]),
                eps_m=float(row["eps_m"]), L=int(row["L"]),
                shots=int(row["shots"]), p_fail=float(row["p_fail"]),
                ci_lo=float(row["ci_lo"]), ci_hi=float(row["ci_hi"]),
                family=row["family"], x=float(row["x"]),
                rounds=int(row["rounds"]), p_bulk=float(row["p_bulk"]),
                p_bound=float(row["p_bound"]),
            ))
            fams.add(row["family"])
        if len(fams) == 1:
            name = fams.pop()
            if name in FAMILIES:
                result.family = NoiseFamily(name=name)
    return result


RAYS_CSV_COLUMNS = ["series", "ratio", "eps_ryd", "eps_bell", "uncertainty"]


def rays_to_csv(rays: list[RayResult], path,
                small_modules_eps_cx=None) -> None:
    """Threshold-plane CSV: one row per ray, plus the small-modules line.

    Columns: series ('ray' or 'small_modules_line'), ratio (eps_bell /
    eps_ryd; empty for the line and the pure-boundary ray), eps_ryd,
    eps_bell (dimensionless probabilities), uncertainty (empty for the
    line).  Rays without a located crossing are omitted.
    """
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(RAYS_CSV_COLUMNS)
        for ray in rays:
            if ray.error is not None:
                continue
            ratio = "" if math.isinf(ray.ratio) else repr(ray.ratio)
            w.writerow(["ray", ratio, repr(ray.eps_ryd_th),
                        repr(ray.eps_bell_th), repr(ray.uncertainty)])
        if small_modules_eps_cx is not None:
            for eps, bell in zip(small_modules_eps_cx,
                                 small_modules_line(small_modules_eps_cx)):
                w.writerow(["small_modules_line", "", repr(float(eps)),
                            repr(float(bell)), ""])


def write_manifest(path, config: dict, seed: int,
                   wall_time_s: float, outputs: list[str] | None = None,
                   extra: dict | None = None) -> None:
    """JSON run manifest: resolved config, seed, version, timing, hashes."""
    blob = json.dumps(config, sort_keys=True).encode()
    manifest = {
        "schema_version": CSV_SCHEMA_VERSION,
        "tool_version": __version__,
        "seed": seed,
        "config": config,
        "config_sha256": hashlib.sha256(blob).hexdigest(),
        "wall_time_s": wall_time_s,
        "outputs": outputs or [],
        "finished_utc": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
    }
    if extra:
        manifest.update(extra)
    with open(path, "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
