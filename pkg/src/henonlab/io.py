"""CSV/JSON serialization and raster images.

CSV is the normative output format: floats are written with `repr`, the
shortest decimal form that parses back to the same double, so files diff
meaningfully and byte-identical reproduction is testable.  Missing values
(divergent cells, absent periods) are empty fields.  Images are a
convenience layer on matplotlib; raster writers return the scale metadata
that the CLI records alongside.
"""
from __future__ import annotations

import json
import math
from typing import Any

import numpy as np

from .classify import KIND_NAMES, CoexistenceReport
from .dynamics import OrbitTrace
from .fixed_points import FixedPoint, StabilityGrid
from .lyapunov import LyapunovEstimate
from .sweeps import BifurcationDiagram, SweepGrid


def fmt(x: Any) -> str:
    """Round-trip text for one CSV field ('' for missing)."""
    if x is None:
        return ""
    if isinstance(x, str):
        return x
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    v = float(x)
    if math.isnan(v):
        return ""
    return repr(v)


def _write_rows(path, header: list[str], rows) -> None:
    with open(path, "w", newline="\n") as f:
        f.write(",".join(header) + "\n")
        for row in rows:
            f.write(",".join(fmt(v) for v in row) + "\n")


def jsonify(obj: Any) -> Any:
    """Recursively convert to plain JSON types; non-finite floats -> None."""
    if isinstance(obj, dict):
        return {k: jsonify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonify(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [jsonify(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if math.isfinite(v) else None
    return obj


def write_json(path, payload: dict) -> None:
    with open(path, "w", newline="\n") as f:
        json.dump(jsonify(payload), f, indent=2)
        f.write("\n")


# ---------------------------------------------------------------------------
# CSV writers


def write_orbit_csv(path, trace: OrbitTrace) -> None:
    dim = trace.states.shape[1]
    header = ["n"] + [f"x{k + 1}" for k in range(dim)]
    _write_rows(path, header, ([n, *trace.states[n]] for n in range(len(trace.states))))


def write_fixed_points_csv(path, points: list[FixedPoint]) -> None:
    _write_rows(
        path,
        ["branch", "p", "lambda_max", "stability"],
        ([fp.branch, fp.p, fp.lambda_max, fp.stability] for fp in points),
    )


def write_stability_csv(path, grid: StabilityGrid) -> None:
    def rows():
        for j, c1 in enumerate(grid.c1_values):
            for i, c0 in enumerate(grid.c0_values):
                yield [c0, c1, grid.stable[j, i]]

    _write_rows(path, ["c0", "c1", "stable"], rows())


def write_lyapunov_csv(path, c0: float, c1: float, est: LyapunovEstimate) -> None:
    _write_rows(
        path,
        ["c0", "c1", "h_mean", "h_std", "n_valid", "n_ics"],
        [[c0, c1, est.h_mean, est.h_std, est.n_valid, len(est.per_ic)]],
    )


def lyapunov_payload(est: LyapunovEstimate) -> dict:
    return {
        "h_mean": est.h_mean if not math.isnan(est.h_mean) else None,
        "h_std": est.h_std if not math.isnan(est.h_std) else None,
        "n_valid": est.n_valid,
        "per_ic": [
            {"ic": list(r.ic), "h": r.h, "diverged": r.diverged} for r in est.per_ic
        ],
    }


def write_grid_csv(path, grid: SweepGrid) -> None:
    def rows():
        for j, c1 in enumerate(grid.c1_values):
            for i, c0 in enumerate(grid.c0_values):
                per = int(grid.period[j, i])
                yield [
                    c0,
                    c1,
                    grid.h_mean[j, i],
                    grid.h_std[j, i],
                    KIND_NAMES[int(grid.kind[j, i])],
                    per if per > 0 else None,
                    int(grid.n_valid[j, i]),
                ]

    _write_rows(path, ["c0", "c1", "h_mean", "h_std", "class", "period", "n_valid"], rows())


def write_diagram_csv(path, diag: BifurcationDiagram) -> None:
    def rows():
        for pt in diag.points:
            if len(pt.x1_values) == 0:
                yield [pt.c_value, None, pt.kind, pt.h]
            else:
                for v in pt.x1_values:
                    yield [pt.c_value, v, pt.kind, pt.h]

    _write_rows(path, ["c_value", "x1_value", "class", "h"], rows())


def write_basins_csv(path, report: CoexistenceReport) -> None:
    def rows():
        for a, ic1 in enumerate(report.ic1_values):
            for b, ic2 in enumerate(report.ic2_values):
                yield [ic1, ic2, int(report.labels[a, b])]

    _write_rows(path, ["ic1", "ic2", "attractor_id"], rows())


def coexistence_payload(report: CoexistenceReport) -> dict:
    out = {
        "n_ics": report.n_ics,
        "ic_box": jsonify(report.ic_box),
        "resolution": list(report.resolution),
        "divergent_count": report.divergent_count,
        "divergent_fraction": report.divergent_fraction,
        "attractors": [],
    }
    for idx, ba in enumerate(report.attractors):
        att = ba.attractor
        out["attractors"].append(
            {
                "id": idx,
                "kind": att.kind,
                "period": att.period,
                "h": att.h,
                "cycle": jsonify(att.cycle) if att.cycle is not None else None,
                "representative_ic": list(ba.representative_ic),
                "count": ba.count,
                "basin_fraction": ba.basin_fraction,
            }
        )
    return out


# ---------------------------------------------------------------------------
# Rasters (matplotlib, loaded lazily)


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def _extent(xs: np.ndarray, ys: np.ndarray) -> list[float]:
    return [float(xs[0]), float(xs[-1]), float(ys[0]), float(ys[-1])]


def raster_orbit(path, trace: OrbitTrace) -> dict:
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(7, 3))
    ax.plot(range(len(trace.states)), trace.states[:, 0], lw=0.8)
    ax.set_xlabel("n")
    ax.set_ylabel("x1(n)")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return {}


def raster_stability(path, grid: StabilityGrid) -> dict:
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(5, 5))
    ax.imshow(
        grid.stable.astype(np.uint8),
        origin="lower",
        extent=_extent(grid.c0_values, grid.c1_values),
        cmap="gray_r",
        vmin=0,
        vmax=1,
        aspect="auto",
        interpolation="nearest",
    )
    ax.set_xlabel("c0")
    ax.set_ylabel("c1")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return {"colormap": "gray_r", "stable_value": 1}


def raster_heatmap(path, grid: SweepGrid) -> dict:
    """h_mean colormap; divergent cells (n_valid == 0) are white."""
    plt = _pyplot()
    data = np.ma.masked_invalid(grid.h_mean)
    vmin = float(data.min()) if data.count() else 0.0
    vmax = float(data.max()) if data.count() else 1.0
    fig, ax = plt.subplots(figsize=(6, 5))
    cmap = plt.get_cmap("RdYlBu_r").copy()
    cmap.set_bad("white")
    im = ax.imshow(
        data,
        origin="lower",
        extent=_extent(grid.c0_values, grid.c1_values),
        cmap=cmap,
        vmin=vmin,
        vmax=vmax,
        aspect="auto",
        interpolation="nearest",
    )
    fig.colorbar(im, ax=ax, label="h (nats/iteration)")
    ax.set_xlabel("c0")
    ax.set_ylabel("c1")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return {"colormap": "RdYlBu_r", "h_min": vmin, "h_max": vmax, "divergent": "white"}


def raster_period_map(path, grid: SweepGrid) -> dict:
    """Indexed colors per period, with a legend; aperiodic cells white."""
    plt = _pyplot()
    from matplotlib.colors import BoundaryNorm, ListedColormap

    periods = sorted({int(p) for p in np.unique(grid.period) if p > 0})
    data = np.ma.masked_less_equal(grid.period, 0)
    fig, ax = plt.subplots(figsize=(7, 5))
    if periods:
        index = {p: k for k, p in enumerate(periods)}
        coded = np.ma.masked_array(
            np.vectorize(lambda p: index.get(int(p), -1))(grid.period), mask=data.mask
        )
        base = plt.get_cmap("tab20", max(len(periods), 1))
        cmap = ListedColormap([base(k) for k in range(len(periods))])
        cmap.set_bad("white")
        norm = BoundaryNorm(np.arange(len(periods) + 1) - 0.5, len(periods))
        im = ax.imshow(
            coded,
            origin="lower",
            extent=_extent(grid.c0_values, grid.c1_values),
            cmap=cmap,
            norm=norm,
            aspect="auto",
            interpolation="nearest",
        )
        cbar = fig.colorbar(im, ax=ax, ticks=range(len(periods)))
        cbar.ax.set_yticklabels([str(p) for p in periods])
        cbar.set_label("period")
    ax.set_xlabel("c0")
    ax.set_ylabel("c1")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return {"periods": periods, "aperiodic": "white", "colormap": "tab20"}


def raster_bifurcation(path, diag: BifurcationDiagram) -> dict:
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(7, 4))
    cs: list[float] = []
    xs: list[float] = []
    for pt in diag.points:
        cs.extend([pt.c_value] * len(pt.x1_values))
        xs.extend(pt.x1_values)
    ax.plot(cs, xs, ",k", markersize=0.5)
    ax.set_xlabel(diag.axis)
    ax.set_ylabel("x1")
    ax.set_title(f"{'c0' if diag.axis == 'c1' else 'c1'} = {diag.fixed_value}")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return {}


def raster_basins(path, report: CoexistenceReport) -> dict:
    plt = _pyplot()
    from matplotlib.colors import BoundaryNorm, ListedColormap

    n = max(len(report.attractors), 1)
    base = plt.get_cmap("tab10", n)
    cmap = ListedColormap([base(k) for k in range(n)])
    cmap.set_bad("white")
    data = np.ma.masked_less(report.labels.T, 0)  # transpose: ic1 on x-axis
    norm = BoundaryNorm(np.arange(n + 1) - 0.5, n)
    fig, ax = plt.subplots(figsize=(5.5, 5))
    im = ax.imshow(
        data,
        origin="lower",
        extent=_extent(report.ic1_values, report.ic2_values),
        cmap=cmap,
        norm=norm,
        aspect="auto",
        interpolation="nearest",
    )
    if report.attractors:
        cbar = fig.colorbar(im, ax=ax, ticks=range(n))
        cbar.set_label("attractor id")
    ax.set_xlabel("x1(0)")
    ax.set_ylabel("x2(0)")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return {"divergent": "white"}
