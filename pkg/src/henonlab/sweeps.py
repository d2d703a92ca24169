"""Parameter sweeps: 1-D bifurcation diagrams with attractor continuation,
and 2-D coefficient-plane scans (Lyapunov heat maps and period maps).

Grid cells are independent work items with seeds derived from
(grid_seed, row, column), so a scan is embarrassingly parallel and its
output is bit-identical regardless of worker count.  Bifurcation sweeps
are sequential along the axis because continuation feeds each point the
attractor state from the previous one.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .classify import KIND_NAMES, ClassifyConfig
from .dynamics import MapParams


def set_threads(n: int | None) -> int:
    """Cap numba's worker count (never above what the host allows).
    Returns the effective count."""
    import numba

    available = numba.config.NUMBA_NUM_THREADS
    if n is None:
        return numba.get_num_threads()
    eff = max(1, min(int(n), available))
    numba.set_num_threads(eff)
    return eff


@dataclass(frozen=True)
class SweepConfig:
    """Per-cell protocol for sweeps.

    The per-cell ensemble defaults to 5 ICs for tractability; pass
    n_ics=25 to match the ensemble protocol used for single-point
    estimates.  `classify` supplies the orbit-classification knobs.
    """

    seed: int = 0
    n_ics: int = 5
    n_total: int = 3000
    n_transient: int = 500
    renorm_interval: int = 1
    ic_box: tuple[tuple[float, float], tuple[float, float]] = ((0.0, 1.0), (0.0, 1.0))
    classify: ClassifyConfig = field(default_factory=ClassifyConfig)
    threads: int | None = None

    def __post_init__(self) -> None:
        if self.n_ics < 1:
            raise ValueError("need at least one initial condition per cell")
        if not (0 <= self.n_transient < self.n_total):
            raise ValueError("need 0 <= n_transient < n_total")


@dataclass(frozen=True)
class CellResult:
    c0: float
    c1: float
    h_mean: float
    h_std: float
    n_valid: int
    kind: str
    period: int | None


@dataclass(frozen=True)
class SweepGrid:
    """Scan result over a rectangular coefficient grid.

    Arrays are indexed [j, i] for (c0_values[i], c1_values[j]); `kind` holds
    integer codes (see classify.KIND_NAMES).  CSV rows iterate j (c1) outer,
    i (c0) inner.
    """

    c0_values: np.ndarray
    c1_values: np.ndarray
    seed: int
    h_mean: np.ndarray = field(repr=False)
    h_std: np.ndarray = field(repr=False)
    n_valid: np.ndarray = field(repr=False)
    kind: np.ndarray = field(repr=False)
    period: np.ndarray = field(repr=False)

    @property
    def resolution(self) -> tuple[int, int]:
        return len(self.c0_values), len(self.c1_values)

    def cell(self, i: int, j: int) -> CellResult:
        per = int(self.period[j, i])
        return CellResult(
            c0=float(self.c0_values[i]),
            c1=float(self.c1_values[j]),
            h_mean=float(self.h_mean[j, i]),
            h_std=float(self.h_std[j, i]),
            n_valid=int(self.n_valid[j, i]),
            kind=KIND_NAMES[int(self.kind[j, i])],
            period=per if per > 0 else None,
        )


def scan_grid(
    params: MapParams,
    c0_values: np.ndarray,
    c1_values: np.ndarray,
    cfg: SweepConfig,
) -> SweepGrid:
    """Run the per-cell ensemble + classification over explicit coefficient
    arrays.  `lyapunov_map_2d` / `period_map_2d` are range-based wrappers."""
    set_threads(cfg.threads)
    c0s = np.ascontiguousarray(c0_values, dtype=np.float64)
    c1s = np.ascontiguousarray(c1_values, dtype=np.float64)
    (lo1, hi1), (lo2, hi2) = cfg.ic_box
    cc = cfg.classify
    h_mean, h_std, n_valid, kind, period = _kernels.scan_grid_kernel(
        c0s, c1s, params.alpha, params.beta, cfg.seed, cfg.n_ics,
        lo1, hi1, lo2, hi2,
        cfg.n_total, cfg.n_transient, cfg.renorm_interval,
        cc.transient, cc.tail, cc.tol, cc.max_period, cc.h_threshold, cc.guard,
    )
    return SweepGrid(
        c0_values=c0s, c1_values=c1s, seed=cfg.seed,
        h_mean=h_mean, h_std=h_std, n_valid=n_valid, kind=kind, period=period,
    )


def lyapunov_map_2d(
    params: MapParams,
    c0_range: tuple[float, float],
    c1_range: tuple[float, float],
    resolution: tuple[int, int],
    cfg: SweepConfig,
) -> SweepGrid:
    """Largest-Lyapunov heat map over the coefficient plane; divergent cells
    carry n_valid = 0 and NaN h_mean."""
    n0, n1 = resolution
    return scan_grid(
        params,
        np.linspace(c0_range[0], c0_range[1], n0),
        np.linspace(c1_range[0], c1_range[1], n1),
        cfg,
    )


def period_map_2d(
    params: MapParams,
    c0_range: tuple[float, float],
    c1_range: tuple[float, float],
    resolution: tuple[int, int],
    cfg: SweepConfig,
) -> SweepGrid:
    """Period map over the coefficient plane (the `period` field is the
    payload; chaotic/marginal/divergent cells carry period 0)."""
    return lyapunov_map_2d(params, c0_range, c1_range, resolution, cfg)


@dataclass(frozen=True)
class BifurcationPoint:
    c_value: float
    kind: str
    period: int | None
    h: float | None
    x1_values: np.ndarray = field(repr=False)


@dataclass(frozen=True)
class BifurcationDiagram:
    """1-D sweep result; points are ordered by c_value ascending."""

    axis: str  # which coefficient varied: "c0" or "c1"
    fixed_value: float
    points: list[BifurcationPoint]
    continuation: bool
    seed: int

    @property
    def c_values(self) -> np.ndarray:
        return np.array([p.c_value for p in self.points])


def bifurcation_1d(
    params: MapParams,
    fixed_value: float,
    sweep_range: tuple[float, float],
    n_points: int,
    cfg: SweepConfig,
    axis: str = "c1",
    continuation: bool = True,
    reverse: bool = False,
    n_record: int = 256,
) -> BifurcationDiagram:
    """Sweep one coefficient, recording the attractor's x1 samples per point.

    With continuation (default), each point is seeded with the attractor
    state from the previous one, following a single branch through
    bifurcations; after a divergent point (or at the first), a fresh seeded
    unit-square IC is drawn.  `reverse=True` runs the continuation from high
    to low c (useful for revealing hysteresis); points are returned in
    ascending c order either way.

    Periodic points record their k cycle values; chaotic/marginal points a
    subsample (n_record) of the tail; divergent points record nothing.
    """
    if n_points < 1:
        raise ValueError("need at least one sweep point")
    if axis not in ("c0", "c1"):
        raise ValueError("axis must be 'c0' or 'c1'")
    if not (cfg.classify.max_period <= n_record <= cfg.classify.tail):
        raise ValueError("need max_period <= n_record <= tail")
    sweep = np.linspace(sweep_range[0], sweep_range[1], n_points)
    if reverse:
        sweep = sweep[::-1].copy()
    fixed = np.full(n_points, float(fixed_value))
    c0s, c1s = (sweep, fixed) if axis == "c0" else (fixed, sweep)
    cc = cfg.classify
    kind, period, hs, counts, values = _kernels.bifurcation_line_kernel(
        c0s, c1s, params.alpha, params.beta, cfg.seed,
        cc.transient, cc.tail, cc.tol, cc.max_period, n_record,
        cfg.n_total, cfg.n_transient, cfg.renorm_interval,
        cc.h_threshold, cc.guard, continuation,
    )
    order = range(n_points - 1, -1, -1) if reverse else range(n_points)
    points = []
    for idx in order:
        per = int(period[idx])
        h = float(hs[idx])
        points.append(
            BifurcationPoint(
                c_value=float(sweep[idx]),
                kind=KIND_NAMES[int(kind[idx])],
                period=per if per > 0 else None,
                h=h if np.isfinite(h) else None,
                x1_values=values[idx, : int(counts[idx])].copy(),
            )
        )
    return BifurcationDiagram(
        axis=axis, fixed_value=float(fixed_value), points=points,
        continuation=continuation, seed=cfg.seed,
    )
