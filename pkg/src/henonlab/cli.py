"""Command-line front end.

Every analysis is a subcommand that writes CSV/JSON data (normative),
optional PNG rasters, and a metadata JSON capturing the fully resolved
configuration, seed, tool version and wall time -- enough to reproduce the
run bit-exactly with `--config <metadata file>`.

Precedence: CLI flags > config file > defaults.  Exit codes: 0 success,
2 configuration error, 3 I/O error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time


from . import __version__, io
from .classify import ClassifyConfig, find_coexisting
from .dynamics import DEFAULT_GUARD, FilterCoeffs, MapParams, iterate
from .fixed_points import fixed_points, p1_always_unstable_scan, stability_region
from .lyapunov import LyapunovConfig, lyapunov_ensemble
from .sweeps import SweepConfig, bifurcation_1d, lyapunov_map_2d, set_threads

FORMATS = ("csv", "json", "png")


class ConfigError(Exception):
    pass


_COMMON = {"alpha": 1.4, "beta": 0.3, "out_dir": ".", "formats": list(FORMATS), "threads": None}

DEFAULTS: dict[str, dict] = {
    "orbit": {**_COMMON, "c0": 1.0, "c1": 0.0, "x1": 0.1, "x2": 0.1, "steps": 200,
              "guard": DEFAULT_GUARD},
    "fixed-points": {**_COMMON, "c0": 1.0, "c1": 0.0},
    "stability-region": {**_COMMON, "c0_min": -1.5, "c0_max": 1.5, "c1_min": -1.5,
                         "c1_max": 1.5, "res0": 600, "res1": 600},
    "lyapunov": {**_COMMON, "c0": 1.0, "c1": 0.0, "n_total": 3000, "n_transient": 500,
                 "n_ics": 25, "ic1_min": 0.0, "ic1_max": 1.0, "ic2_min": 0.0,
                 "ic2_max": 1.0, "seed": 0, "renorm_interval": 1, "guard": DEFAULT_GUARD},
    "bifurcation": {**_COMMON, "axis": "c1", "fixed_value": 0.5, "sweep_min": -1.5,
                    "sweep_max": 1.5, "points": 1000, "seed": 0, "transient": 1000,
                    "tail": 512, "tol": 1e-6, "max_period": 64, "h_threshold": 1e-3,
                    "n_total": 3000, "n_transient": 500, "n_record": 256,
                    "continuation": True, "reverse": False, "guard": DEFAULT_GUARD},
    "sweep-lyapunov": {**_COMMON, "c0_min": -1.5, "c0_max": 1.5, "c1_min": -1.5,
                       "c1_max": 1.5, "res0": 600, "res1": 600, "seed": 0, "n_ics": 5,
                       "n_total": 3000, "n_transient": 500, "transient": 1000,
                       "tail": 512, "tol": 1e-6, "max_period": 64, "h_threshold": 1e-3,
                       "guard": DEFAULT_GUARD},
    "basins": {**_COMMON, "c0": 0.5, "c1": 0.707, "ic1_min": 0.0, "ic1_max": 0.9,
               "ic2_min": 0.0, "ic2_max": 0.9, "res1": 30, "res2": 30, "seed": 0,
               "transient": 1000, "tail": 512, "tol": 1e-6, "max_period": 64,
               "h_threshold": 1e-3, "n_total": 3000, "n_transient": 500,
               "cluster_tol": 1e-4, "guard": DEFAULT_GUARD},
}
DEFAULTS["sweep-period"] = dict(DEFAULTS["sweep-lyapunov"])


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="henonlab",
        description="Numerical dynamics laboratory for the FIR-filtered Henon map.",
    )
    parser.add_argument("--version", action="version", version=f"henonlab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(cmd: str, help_: str) -> argparse.ArgumentParser:
        p = sub.add_parser(cmd, help=help_)
        p.add_argument("--config", help="JSON config (or metadata) file")
        p.add_argument("--out-dir", dest="out_dir")
        p.add_argument("--format", dest="formats", action="append",
                       help="comma-separated subset of csv,json,png (default all)")
        p.add_argument("--alpha", type=float)
        p.add_argument("--beta", type=float)
        p.add_argument("--threads", type=int)
        for key, default in DEFAULTS[cmd].items():
            if key in ("alpha", "beta", "out_dir", "formats", "threads", "continuation",
                       "reverse", "axis", "fixed_value", "sweep_min", "sweep_max"):
                continue  # handled above, or mapped from --c0/--c1-min/... below
            flag = "--" + key.replace("_", "-")
            p.add_argument(flag, dest=key, type=type(default))
        return p

    add("orbit", "iterate one orbit, write the time series")
    add("fixed-points", "closed-form fixed points and their stability")
    add("stability-region", "analytic stability map of the positive fixed point")
    add("lyapunov", "seeded-ensemble largest Lyapunov exponent at one point")
    p = add("bifurcation", "1-D sweep with attractor continuation")
    p.add_argument("--axis", choices=("c0", "c1"))
    p.add_argument("--c0", type=float, help="fixed c0 (sweeps c1)")
    p.add_argument("--c1", type=float, help="fixed c1 (sweeps c0)")
    p.add_argument("--c0-min", type=float, dest="c0_min")
    p.add_argument("--c0-max", type=float, dest="c0_max")
    p.add_argument("--c1-min", type=float, dest="c1_min")
    p.add_argument("--c1-max", type=float, dest="c1_max")
    p.add_argument("--no-continuation", dest="continuation", action="store_false",
                   default=None)
    p.add_argument("--reverse", action="store_true", default=None)
    add("sweep-lyapunov", "2-D Lyapunov heat map over the coefficient plane")
    add("sweep-period", "2-D period map over the coefficient plane")
    add("basins", "coexisting attractors over a grid of initial conditions")
    return parser


def _load_config_file(path: str, command: str) -> dict:
    try:
        with open(path) as f:
            raw = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigError(f"cannot read config file {path}: {e}") from e
    if not isinstance(raw, dict):
        raise ConfigError("config file must hold a JSON object")
    if "config" in raw and "command" in raw:  # a metadata file
        raw = raw["config"]
    schema = DEFAULTS[command]
    unknown = set(raw) - set(schema)
    if unknown:
        raise ConfigError(f"unknown config keys for {command}: {sorted(unknown)}")
    return raw


def _resolve(command: str, args: argparse.Namespace) -> dict:
    cfg = dict(DEFAULTS[command])
    if getattr(args, "config", None):
        cfg.update(_load_config_file(args.config, command))
    # bifurcation: map --c0/--c1-min style flags onto axis/fixed/sweep keys
    if command == "bifurcation":
        c0 = getattr(args, "c0", None)
        c1 = getattr(args, "c1", None)
        c0_rng = (getattr(args, "c0_min", None), getattr(args, "c0_max", None))
        c1_rng = (getattr(args, "c1_min", None), getattr(args, "c1_max", None))
        if any(v is not None for v in c1_rng) or c0 is not None:
            cfg["axis"] = "c1"
            if c0 is not None:
                cfg["fixed_value"] = c0
            if c1_rng[0] is not None:
                cfg["sweep_min"] = c1_rng[0]
            if c1_rng[1] is not None:
                cfg["sweep_max"] = c1_rng[1]
        if any(v is not None for v in c0_rng) or c1 is not None:
            if any(v is not None for v in c1_rng) or c0 is not None:
                raise ConfigError("give either a c0 line (--c0, --c1-min/max) "
                                  "or a c1 line (--c1, --c0-min/max), not both")
            cfg["axis"] = "c0"
            if c1 is not None:
                cfg["fixed_value"] = c1
            if c0_rng[0] is not None:
                cfg["sweep_min"] = c0_rng[0]
            if c0_rng[1] is not None:
                cfg["sweep_max"] = c0_rng[1]
        if getattr(args, "axis", None) is not None:
            cfg["axis"] = args.axis
    for key in cfg:
        val = getattr(args, key, None)
        if val is not None:
            cfg[key] = val
    if cfg["formats"] is not None and not isinstance(cfg["formats"], list):
        raise ConfigError("formats must be a list")
    if getattr(args, "formats", None):
        parts: list[str] = []
        for chunk in args.formats:
            parts.extend(s.strip() for s in chunk.split(",") if s.strip())
        cfg["formats"] = parts
    bad = set(cfg["formats"]) - set(FORMATS)
    if bad:
        raise ConfigError(f"unknown output formats: {sorted(bad)}")
    return cfg


class _Outputs:
    """Tracks files written so a failed run leaves no partial outputs."""

    def __init__(self, out_dir: str, formats: list[str]):
        self.out_dir = out_dir
        self.formats = set(formats)
        self.written: list[str] = []

    def path(self, name: str) -> str:
        p = os.path.join(self.out_dir, name)
        self.written.append(p)
        return p

    def wants(self, fmt: str) -> bool:
        return fmt in self.formats

    def cleanup(self) -> None:
        for p in self.written:
            try:
                os.remove(p)
            except OSError:
                pass


def _params(cfg: dict) -> MapParams:
    try:
        return MapParams(alpha=cfg["alpha"], beta=cfg["beta"])
    except ValueError as e:
        raise ConfigError(str(e)) from e


def _pair(cfg: dict) -> FilterCoeffs:
    try:
        return FilterCoeffs.pair(cfg["c0"], cfg["c1"])
    except ValueError as e:
        raise ConfigError(str(e)) from e


def _classify_cfg(cfg: dict) -> ClassifyConfig:
    return ClassifyConfig(
        transient=cfg["transient"], tail=cfg["tail"], tol=cfg["tol"],
        max_period=cfg["max_period"], h_threshold=cfg["h_threshold"],
        guard=cfg["guard"], lyap_n_total=cfg["n_total"],
        lyap_n_transient=cfg["n_transient"],
        cluster_tol=cfg.get("cluster_tol", 1e-4),
    )


def _run_orbit(cfg: dict, out: _Outputs) -> dict:
    trace = iterate((cfg["x1"], cfg["x2"]), cfg["steps"], _params(cfg), _pair(cfg),
                    guard=cfg["guard"])
    if out.wants("csv"):
        io.write_orbit_csv(out.path("orbit.csv"), trace)
    if out.wants("png"):
        io.raster_orbit(out.path("orbit.png"), trace)
    return {"diverged": trace.diverged, "diverged_at": trace.diverged_at,
            "steps_recorded": len(trace) - 1}


def _run_fixed_points(cfg: dict, out: _Outputs) -> dict:
    pts = fixed_points(_params(cfg), _pair(cfg))
    if out.wants("csv"):
        io.write_fixed_points_csv(out.path("fixed_points.csv"), pts)
    if out.wants("json"):
        io.write_json(out.path("fixed_points.json"), {
            "fixed_points": [
                {"branch": fp.branch, "p": fp.p, "lambda_max": fp.lambda_max,
                 "stability": fp.stability}
                for fp in pts
            ]
        })
    return {"n_fixed_points": len(pts)}


def _run_stability_region(cfg: dict, out: _Outputs) -> dict:
    params = _params(cfg)
    grid = stability_region(params, (cfg["c0_min"], cfg["c0_max"]),
                            (cfg["c1_min"], cfg["c1_max"]), (cfg["res0"], cfg["res1"]))
    extra: dict = {"stable_cells": int(grid.stable.sum()),
                   "marginal_cells": int(grid.marginal.sum()),
                   "p1_always_unstable": p1_always_unstable_scan(
                       params, (cfg["c0_min"], cfg["c0_max"]),
                       (cfg["c1_min"], cfg["c1_max"]), (cfg["res0"], cfg["res1"]))}
    if out.wants("csv"):
        io.write_stability_csv(out.path("stability_region.csv"), grid)
    if out.wants("png"):
        extra["raster"] = io.raster_stability(out.path("stability_region.png"), grid)
    return extra


def _run_lyapunov(cfg: dict, out: _Outputs) -> dict:
    lcfg = LyapunovConfig(
        n_total=cfg["n_total"], n_transient=cfg["n_transient"], n_ics=cfg["n_ics"],
        ic_box=((cfg["ic1_min"], cfg["ic1_max"]), (cfg["ic2_min"], cfg["ic2_max"])),
        seed=cfg["seed"], renorm_interval=cfg["renorm_interval"], guard=cfg["guard"],
    )
    est = lyapunov_ensemble(_params(cfg), _pair(cfg), lcfg)
    if out.wants("csv"):
        io.write_lyapunov_csv(out.path("lyapunov.csv"), cfg["c0"], cfg["c1"], est)
    if out.wants("json"):
        io.write_json(out.path("lyapunov.json"), io.lyapunov_payload(est))
    return {"h_mean": None if est.n_valid == 0 else est.h_mean, "n_valid": est.n_valid}


def _run_bifurcation(cfg: dict, out: _Outputs) -> dict:
    scfg = SweepConfig(seed=cfg["seed"], n_total=cfg["n_total"],
                       n_transient=cfg["n_transient"], classify=_classify_cfg(cfg))
    diag = bifurcation_1d(
        _params(cfg), cfg["fixed_value"], (cfg["sweep_min"], cfg["sweep_max"]),
        cfg["points"], scfg, axis=cfg["axis"], continuation=cfg["continuation"],
        reverse=cfg["reverse"], n_record=cfg["n_record"],
    )
    if out.wants("csv"):
        io.write_diagram_csv(out.path("bifurcation.csv"), diag)
    if out.wants("png"):
        io.raster_bifurcation(out.path("bifurcation.png"), diag)
    return {"points": len(diag.points)}


def _run_sweep(cfg: dict, out: _Outputs, which: str) -> dict:
    scfg = SweepConfig(seed=cfg["seed"], n_ics=cfg["n_ics"], n_total=cfg["n_total"],
                       n_transient=cfg["n_transient"], classify=_classify_cfg(cfg),
                       threads=cfg["threads"])
    grid = lyapunov_map_2d(_params(cfg), (cfg["c0_min"], cfg["c0_max"]),
                           (cfg["c1_min"], cfg["c1_max"]), (cfg["res0"], cfg["res1"]),
                           scfg)
    name = "sweep_lyapunov" if which == "sweep-lyapunov" else "sweep_period"
    extra: dict = {"divergent_cells": int((grid.n_valid == 0).sum())}
    if out.wants("csv"):
        io.write_grid_csv(out.path(f"{name}.csv"), grid)
    if out.wants("png"):
        if which == "sweep-lyapunov":
            extra["raster"] = io.raster_heatmap(out.path(f"{name}.png"), grid)
        else:
            extra["raster"] = io.raster_period_map(out.path(f"{name}.png"), grid)
    return extra


def _run_basins(cfg: dict, out: _Outputs) -> dict:
    report = find_coexisting(
        _params(cfg), _pair(cfg),
        ((cfg["ic1_min"], cfg["ic1_max"]), (cfg["ic2_min"], cfg["ic2_max"])),
        (cfg["res1"], cfg["res2"]), _classify_cfg(cfg),
    )
    if out.wants("csv"):
        io.write_basins_csv(out.path("basins.csv"), report)
    if out.wants("json"):
        io.write_json(out.path("basins.json"), io.coexistence_payload(report))
    if out.wants("png"):
        io.raster_basins(out.path("basins.png"), report)
    return {"n_attractors": len(report.attractors),
            "divergent_fraction": report.divergent_fraction}


_RUNNERS = {
    "orbit": _run_orbit,
    "fixed-points": _run_fixed_points,
    "stability-region": _run_stability_region,
    "lyapunov": _run_lyapunov,
    "bifurcation": _run_bifurcation,
    "sweep-lyapunov": lambda cfg, out: _run_sweep(cfg, out, "sweep-lyapunov"),
    "sweep-period": lambda cfg, out: _run_sweep(cfg, out, "sweep-period"),
    "basins": _run_basins,
}


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    command = args.command
    try:
        cfg = _resolve(command, args)
    except ConfigError as e:
        print(f"henonlab: config error: {e}", file=sys.stderr)
        return 2
    t0 = time.perf_counter()
    out = _Outputs(cfg["out_dir"], cfg["formats"])
    try:
        os.makedirs(cfg["out_dir"], exist_ok=True)
        effective_threads = set_threads(cfg["threads"])
        extra = _RUNNERS[command](cfg, out)
        meta = {
            "tool": "henonlab",
            "version": __version__,
            "command": command,
            "config": cfg,
            "threads_effective": effective_threads,
            "wall_time_s": time.perf_counter() - t0,
            "outputs": [os.path.basename(p) for p in out.written],
        }
        meta.update(extra)
        meta_name = command.replace("-", "_") + "_meta.json"
        io.write_json(os.path.join(cfg["out_dir"], meta_name), meta)
        return 0
    except (ConfigError, ValueError) as e:
        out.cleanup()
        print(f"henonlab: config error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        out.cleanup()
        print(f"henonlab: I/O error: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
