"""Command-line entry point.

Subcommands: ``threshold`` (sweep + crossing), ``sweep`` (failure-rate
grid), ``rates`` (interconnect operating point), ``derive-noise``
(per-region flip-rate coefficients), ``decode-check`` (decoder vs
brute-force oracle on a shot dump), ``fig3`` (Bell-rate curves).

Configs are JSON and schema-validated; every run writes a manifest
(resolved config, seed, version, wall time).  Exit codes: 0 success,
2 configuration error, 3 no threshold crossing, 4 oracle mismatch.
Environment overrides: SEAMSIM_SEED, SEAMSIM_WORKERS.
"""

from __future__ import annotations

import dataclasses
import json
import os
import secrets
import sys
import time
from pathlib import Path

import click
import jsonschema
import numpy as np

from . import __version__
from . import experiments as xp
from . import noise, rates
from .decoder import Matching, decode_bruteforce, graph_for_config
from .sampler import load_shots

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NO_CROSSING = 3
EXIT_ORACLE_MISMATCH = 4

CONFIG_SCHEMA_VERSION = 1

_FAMILY_SCHEMA = {
    "type": "object",
    "properties": {
        "name": {"enum": list(xp.FAMILIES)},
        "mode": {"enum": list(noise.MODES)},
        "bell_ratio": {"type": "number", "minimum": 0},
        "m_ratio": {"type": "number", "minimum": 0},
        "fixed_bulk_eps": {"type": "number", "minimum": 0, "maximum": 1},
    },
    "required": ["name"],
    "additionalProperties": False,
}

SWEEP_SCHEMA = {
    "type": "object",
    "properties": {
        "family": _FAMILY_SCHEMA,
        "xs": {"type": "array", "minItems": 1,
               "items": {"type": "number", "exclusiveMinimum": 0}},
        "l_values": {"type": "array", "minItems": 1,
                     "items": {"type": "integer", "minimum": 2}},
        "shots": {"type": "integer", "minimum": 1},
        "rounds": {"type": ["integer", "null"], "minimum": 1},
        "batch_size": {"type": "integer", "minimum": 1},
        "target_rel_halfwidth": {"type": ["number", "null"],
                                 "exclusiveMinimum": 0},
        "max_shots": {"type": ["integer", "null"], "minimum": 1},
    },
    "required": ["family", "xs", "l_values", "shots"],
    "additionalProperties": False,
}

DECODE_CHECK_SCHEMA = {
    "type": "object",
    "properties": {
        "family": _FAMILY_SCHEMA,
        "x": {"type": "number", "exclusiveMinimum": 0},
        "L": {"type": "integer", "minimum": 2},
        "rounds": {"type": ["integer", "null"], "minimum": 1},
        "max_defects": {"type": "integer", "minimum": 1},
    },
    "required": ["family", "x", "L"],
    "additionalProperties": False,
}


class ConfigError(click.ClickException):
    exit_code = EXIT_CONFIG


def _load_config(path: str | None, schema: dict, defaults: dict) -> dict:
    cfg = dict(defaults)
    if path is not None:
        try:
            with open(path) as fh:
                cfg.update(json.load(fh))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}")
    try:
        jsonschema.validate(cfg, schema)
    except jsonschema.ValidationError as exc:
        path_str = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigError(f"config invalid at {path_str}: {exc.message}")
    return cfg


def _resolve_seed(seed: int | None) -> int:
    env = os.environ.get("SEAMSIM_SEED")
    if seed is not None:
        return seed
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise ConfigError(f"SEAMSIM_SEED must be an integer, got {env!r}")
    return secrets.randbits(48)


def _resolve_workers(workers: int | None) -> int:
    env = os.environ.get("SEAMSIM_WORKERS")
    if workers is None and env is not None:
        try:
            workers = int(env)
        except ValueError:
            raise ConfigError(
                f"SEAMSIM_WORKERS must be an integer, got {env!r}")
    workers = workers or 1
    if workers < 1:
        raise ConfigError("workers must be >= 1")
    return workers


def _family(cfg: dict) -> xp.NoiseFamily:
    return xp.NoiseFamily(**cfg["family"])


def _manifest(out: Path, name: str, config: dict, seed: int, t0: float,
              outputs: list[str], extra: dict | None = None) -> None:
    config = dict(config, config_schema_version=CONFIG_SCHEMA_VERSION)
    xp.write_manifest(out / f"{name}_manifest.json", config, seed,
                      time.time() - t0, outputs, extra)


def _echo_json(obj) -> None:
    click.echo(json.dumps(obj, indent=2, sort_keys=True))


@click.group()
@click.version_option(__version__)
def main() -> None:
    """Surface-code seam-noise simulator and interconnect rate planner."""


_common = [
    click.option("--config", "config_path", type=click.Path(exists=True),
                 default=None, help="JSON config file."),
    click.option("--seed", type=int, default=None,
                 help="Base RNG seed (default: random, logged)."),
    click.option("--workers", type=int, default=None,
                 help="Worker processes for shot execution."),
    click.option("--out", "out_dir", type=click.Path(file_okay=False),
                 default=".", help="Output directory."),
    click.option("--format", "fmt", type=click.Choice(["csv", "json"]),
                 default="csv", help="Tabular output format."),
]


def _with_common(fn):
    for opt in reversed(_common):
        fn = opt(fn)
    return fn


def _run_sweep_cmd(config_path, seed, workers, out_dir, preset, shots,
                   want_threshold: bool, fmt: str):
    t0 = time.time()
    defaults = {
        "family": {"name": preset or "bulk"},
        "xs": [0.008, 0.010, 0.012, 0.013, 0.014, 0.016, 0.018, 0.020],
        "l_values": [5, 7, 9, 11],
        "shots": shots or 50000,
        "rounds": None,
        "batch_size": 2048,
        "target_rel_halfwidth": None,
        "max_shots": None,
    }
    cfg = _load_config(config_path, SWEEP_SCHEMA, defaults)
    if preset is not None:
        cfg["family"]["name"] = preset
    if shots is not None:
        cfg["shots"] = shots
    seed = _resolve_seed(seed)
    workers = _resolve_workers(workers)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    family = _family(cfg)

    sweep = xp.run_sweep(
        family, cfg["xs"], cfg["l_values"], cfg["shots"], seed=seed,
        rounds=cfg["rounds"], batch_size=cfg["batch_size"], workers=workers,
        target_rel_halfwidth=cfg["target_rel_halfwidth"],
        max_shots=cfg["max_shots"])

    name = "threshold" if want_threshold else "sweep"
    outputs = []
    csv_path = out / f"{name}_sweep.csv"
    xp.sweep_to_csv(sweep, csv_path)
    outputs.append(str(csv_path))
    if fmt == "json":
        json_path = out / f"{name}_sweep.json"
        with open(json_path, "w") as fh:
            json.dump([dataclasses.asdict(p) for p in sweep.points], fh,
                      indent=2)
        outputs.append(str(json_path))

    extra = {}
    status = EXIT_OK
    if want_threshold:
        try:
            th = xp.find_threshold(sweep)
        except xp.NoCrossingError as exc:
            _manifest(out, name, cfg, seed, t0, outputs,
                      {"error": "no-crossing", "detail": str(exc)})
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_NO_CROSSING)
        result = {
            "family": th.family,
            "threshold": th.value,
            "uncertainty": th.uncertainty,
            "pairwise_crossings": dict(zip(th.pair_labels, th.crossings)),
        }
        th_path = out / "threshold.json"
        with open(th_path, "w") as fh:
            json.dump(result, fh, indent=2, sort_keys=True)
        outputs.append(str(th_path))
        extra["threshold"] = result
        _echo_json(result)
    _manifest(out, name, cfg, seed, t0, outputs, extra)
    sys.exit(status)


@main.command()
@_with_common
@click.option("--preset", type=click.Choice(list(xp.FAMILIES)), default=None,
              help="Noise family shortcut (overrides config family name).")
@click.option("--shots", type=int, default=None,
              help="Shots per grid point (overrides config).")
def threshold(config_path, seed, workers, out_dir, fmt, preset, shots):
    """Run a sweep and locate the finite-size threshold crossing."""
    _run_sweep_cmd(config_path, seed, workers, out_dir, preset, shots,
                   want_threshold=True, fmt=fmt)


@main.command()
@_with_common
@click.option("--preset", type=click.Choice(list(xp.FAMILIES)), default=None,
              help="Noise family shortcut (overrides config family name).")
@click.option("--shots", type=int, default=None,
              help="Shots per grid point (overrides config).")
def sweep(config_path, seed, workers, out_dir, fmt, preset, shots):
    """Estimate logical failure rates on an (x, L) grid."""
    _run_sweep_cmd(config_path, seed, workers, out_dir, preset, shots,
                   want_threshold=False, fmt=fmt)


@main.command(name="rates")
@_with_common
@click.option("--design", type=click.Choice(list(rates.DESIGN_KINDS)),
              required=True)
@click.option("--n", "n_qubits", type=int, required=True,
              help="Number of communication qubits N.")
@click.option("--distance", "-L", "distance", type=int, default=20,
              help="Code distance L.")
@click.option("--tau-dec-s", type=float, default=2.0,
              help="Decoherence time in seconds.")
@click.option("--cap-source", type=click.Choice(["table", "prose"]),
              default="table", help="Attempt-rate cap source.")
def rates_cmd(config_path, seed, workers, out_dir, fmt, design, n_qubits,
              distance, tau_dec_s, cap_source):
    """Interconnect operating point: Bell rate, cycle and gate times."""
    t0 = time.time()
    seed = _resolve_seed(seed)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    try:
        d = rates.get_design(design)
        pt = rates.rate_point(d, n_qubits, distance, tau_dec_s, cap_source)
    except ValueError as exc:
        raise ConfigError(str(exc))
    row = dataclasses.asdict(pt)
    outputs = []
    if fmt == "csv":
        path = out / "rates.csv"
        import csv as _csv
        with open(path, "w", newline="") as fh:
            w = _csv.DictWriter(fh, fieldnames=list(row))
            w.writeheader()
            w.writerow(row)
        outputs.append(str(path))
    _echo_json(row)
    cfg = {"design": design, "N": n_qubits, "L": distance,
           "tau_dec_s": tau_dec_s, "cap_source": cap_source}
    _manifest(out, "rates", cfg, seed, t0, outputs)


@main.command(name="derive-noise")
@_with_common
@click.option("--region", type=click.Choice(list(noise.REGIONS) + ["all"]),
              default="all")
def derive_noise(config_path, seed, workers, out_dir, fmt, region):
    """Per-region flip-rate coefficients, exact and printed."""
    t0 = time.time()
    seed = _resolve_seed(seed)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    regions = list(noise.REGIONS) if region == "all" else [region]
    table = {r: noise.coefficients_json(r) for r in regions}
    path = out / "noise_coefficients.json"
    with open(path, "w") as fh:
        json.dump(table, fh, indent=2, sort_keys=True)
    _echo_json(table)
    _manifest(out, "derive_noise", {"region": region}, seed, t0, [str(path)])


@main.command(name="decode-check")
@_with_common
@click.option("--shots-file", type=click.Path(exists=True), required=True,
              help="JSON Lines shot dump to decode.")
def decode_check(config_path, seed, workers, out_dir, fmt, shots_file):
    """Cross-check the matching decoder against the brute-force oracle."""
    t0 = time.time()
    defaults = {"family": {"name": "bulk"}, "x": 0.01, "L": 3,
                "rounds": None, "max_defects": 12}
    cfg = _load_config(config_path, DECODE_CHECK_SCHEMA, defaults)
    seed = _resolve_seed(seed)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    family = _family(cfg)
    shot_cfg = xp.shot_config(family, cfg["x"], cfg["L"], cfg["rounds"])
    graph = graph_for_config(shot_cfg)
    with open(shots_file) as fh:
        dataset = load_shots(fh, graph.n_nodes)
    matcher = Matching(graph)
    cache: dict = {}
    checked = skipped = weight_mismatch = flip_mismatch = 0
    for k in range(dataset.n_shots):
        det = dataset.detections[k]
        if int(det.sum()) > cfg["max_defects"]:
            skipped += 1
            continue
        main_c = matcher.decode(det)
        oracle_c = decode_bruteforce(graph, det,
                                     max_defects=cfg["max_defects"],
                                     _cache=cache)
        checked += 1
        if abs(main_c.total_weight - oracle_c.total_weight) > 1e-9 * max(
                1.0, abs(oracle_c.total_weight)):
            weight_mismatch += 1
        elif main_c.predicted_flip != oracle_c.predicted_flip:
            flip_mismatch += 1  # only possible on exact weight ties
    report = {
        "shots": dataset.n_shots,
        "checked": checked,
        "skipped_too_many_defects": skipped,
        "weight_mismatches": weight_mismatch,
        "tie_flip_differences": flip_mismatch,
    }
    path = out / "decode_check.json"
    with open(path, "w") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
    _echo_json(report)
    status = EXIT_OK if weight_mismatch == 0 else EXIT_ORACLE_MISMATCH
    _manifest(out, "decode_check", cfg, seed, t0, [str(path)],
              {"report": report})
    if status != EXIT_OK:
        click.echo("error: decoder disagrees with brute-force oracle",
                   err=True)
    sys.exit(status)


@main.command(name="fig3")
@_with_common
@click.option("--n-max", type=int, default=400, help="Largest N on the grid.")
@click.option("--distance", "-L", "distance", type=int, default=20)
@click.option("--cap-source", type=click.Choice(["table", "prose"]),
              default="table")
def fig3(config_path, seed, workers, out_dir, fmt, n_max, distance,
         cap_source):
    """Bell-pair rate versus communication-qubit count for all designs."""
    t0 = time.time()
    seed = _resolve_seed(seed)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    if n_max < 1:
        raise ConfigError("--n-max must be >= 1")
    n_values = set(np.round(np.geomspace(1, n_max, 120)).astype(int))
    # Pin the exact saturation corners so downstream plots can mark them.
    for design in rates.all_designs():
        corner = design.corner_n(cap_source)
        if corner is not None and corner <= n_max:
            n_values.add(int(np.ceil(corner)))
    n_values = sorted(int(n) for n in n_values)
    rows = rates.fig3_curves(rates.all_designs(), n_values, distance,
                             cap_source=cap_source)
    path = Path(out) / "fig3_curves.csv"
    rates.fig3_to_csv(rows, path)
    click.echo(f"wrote {path} ({len(rows)} rows)")
    cfg = {"n_max": n_max, "L": distance, "cap_source": cap_source}
    _manifest(out, "fig3", cfg, seed, t0, [str(path)])


if __name__ == "__main__":
    main()
