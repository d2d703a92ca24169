"""Long-run orbit classification and coexisting-attractor detection.

An orbit is classified by precedence: divergent if it escapes the guard;
fixed point / period-k if the post-transient tail repeats within tolerance
(smallest k wins, so reported periods are minimal); otherwise by the
tangent-map exponent h of the settled orbit: chaotic when h exceeds the
threshold, marginal when |h| is inside it.  A negative h with no detected
period (period above max_period, or quasi-periodic motion) also lands in
marginal, with `flagged` set.

`find_coexisting` classifies a whole grid of initial conditions and
clusters the outcomes into distinct attractors: periodic ones by the
Hausdorff distance between cycle point-sets, bounded aperiodic ones by
kind and closeness of h.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .dynamics import DEFAULT_GUARD, FilterCoeffs, MapParams, as_state, iterate

KIND_NAMES = ("divergent", "fixed_point", "periodic", "chaotic", "marginal")

DIVERGENT = "divergent"
FIXED_POINT = "fixed_point"
PERIODIC = "periodic"
CHAOTIC = "chaotic"
MARGINAL = "marginal"


@dataclass(frozen=True)
class ClassifyConfig:
    """Classification knobs.  Defaults: transient 1000, tail 512, tolerance
    1e-6 (inf-norm), periods up to 64, h threshold 1e-3."""

    transient: int = 1000
    tail: int = 512
    tol: float = 1e-6
    max_period: int = 64
    h_threshold: float = 1e-3
    guard: float = DEFAULT_GUARD
    lyap_n_total: int = 3000
    lyap_n_transient: int = 500
    renorm_interval: int = 1
    cluster_tol: float = 1e-4
    h_cluster_floor: float = 5e-3

    def __post_init__(self) -> None:
        if self.tail < 2 * self.max_period:
            raise ValueError("tail must be at least twice max_period")
        if self.tol <= 0 or self.cluster_tol <= 0:
            raise ValueError("tolerances must be positive")
        if not (0 <= self.lyap_n_transient < self.lyap_n_total):
            raise ValueError("need 0 <= lyap_n_transient < lyap_n_total")


@dataclass(frozen=True)
class AttractorClass:
    """Outcome of classifying one orbit.

    `period` is 1 for fixed points, k >= 2 for periodic orbits, None
    otherwise.  `cycle` holds the k cycle states (orbit order) when
    periodic.  `flagged` marks marginal outcomes whose h was clearly
    negative yet no period <= max_period was found.
    """

    kind: str
    period: int | None = None
    h: float | None = None
    cycle: np.ndarray | None = field(default=None, repr=False)
    flagged: bool = False


def detect_period(tail: np.ndarray, tol: float, max_period: int) -> int | None:
    """Smallest k <= max_period such that the tail repeats with period k
    (inf-norm within tol over the last max_period samples); None if none.

    Requires len(tail) >= 2 * max_period.  Minimality is by construction:
    any divisor of the returned k was tested first and failed.
    """
    tail = np.ascontiguousarray(tail, dtype=np.float64)
    if tail.ndim != 2 or tail.shape[0] < 2 * max_period:
        raise ValueError("tail must be a (n, dim) array with n >= 2*max_period")
    k = _kernels.period_of_tail(tail, tol, max_period)
    return int(k) if k > 0 else None


def classify(ic, params: MapParams, coeffs: FilterCoeffs, cfg: ClassifyConfig) -> AttractorClass:
    """Classify the long-run behaviour of the orbit from `ic`."""
    c0, c1 = coeffs.require_pair()
    s = as_state(ic, coeffs)
    kind_code, period, h, fx1, fx2 = _kernels.classify_kernel(
        s[0], s[1], params.alpha, params.beta, c0, c1,
        cfg.transient, cfg.tail, cfg.tol, cfg.max_period,
        cfg.lyap_n_total, cfg.lyap_n_transient, cfg.renorm_interval,
        cfg.h_threshold, cfg.guard,
    )
    kind = KIND_NAMES[kind_code]
    if kind in (FIXED_POINT, PERIODIC):
        # (fx1, fx2) is on the cycle; walk it once to extract the points.
        trace = iterate((fx1, fx2), period - 1, params, coeffs, guard=cfg.guard)
        return AttractorClass(kind=kind, period=int(period), cycle=trace.states)
    if kind == DIVERGENT:
        return AttractorClass(kind=DIVERGENT)
    flagged = kind == MARGINAL and h < -cfg.h_threshold
    return AttractorClass(kind=kind, h=float(h), flagged=flagged)


@dataclass(frozen=True)
class BasinAttractor:
    attractor: AttractorClass
    representative_ic: tuple[float, float]
    count: int
    basin_fraction: float


@dataclass(frozen=True)
class CoexistenceReport:
    """Distinct attractors found over an IC grid, with basin fractions.

    Fractions over the attractors plus `divergent_fraction` sum to 1.
    Attractors are ordered by first-encountered IC (row-major over the
    grid, ic1 varying slowest).
    """

    attractors: list[BasinAttractor]
    divergent_count: int
    divergent_fraction: float
    n_ics: int
    ic_box: tuple[tuple[float, float], tuple[float, float]]
    resolution: tuple[int, int]
    labels: np.ndarray = field(repr=False)  # (n1, n2) attractor index, -1 divergent
    ic1_values: np.ndarray = field(repr=False)
    ic2_values: np.ndarray = field(repr=False)


def _hausdorff(a: np.ndarray, b: np.ndarray) -> float:
    """Symmetric Hausdorff distance between two small 2-D point sets."""
    d = np.linalg.norm(a[:, None, :] - b[None, :, :], axis=2)
    return max(d.min(axis=1).max(), d.min(axis=0).max())


class _Cluster:
    def __init__(self, result: AttractorClass, ic: tuple[float, float]):
        self.first = result
        self.ic = ic
        self.count = 0
        self.hs: list[float] = []

    def matches(self, result: AttractorClass, cluster_tol: float, h_floor: float) -> bool:
        if result.kind != self.first.kind:
            return False
        if result.cycle is not None and self.first.cycle is not None:
            return _hausdorff(result.cycle, self.first.cycle) < cluster_tol
        if result.h is not None and self.hs:
            mean = float(np.mean(self.hs))
            std = float(np.std(self.hs, ddof=1)) if len(self.hs) > 1 else 0.0
            return abs(result.h - mean) <= max(2.0 * std, h_floor)
        return False

    def add(self, result: AttractorClass) -> None:
        self.count += 1
        if result.h is not None:
            self.hs.append(result.h)


def find_coexisting(
    params: MapParams,
    coeffs: FilterCoeffs,
    ic_box: tuple[tuple[float, float], tuple[float, float]],
    resolution: tuple[int, int],
    cfg: ClassifyConfig,
) -> CoexistenceReport:
    """Classify every IC on a rectangular grid and cluster the attractors.

    Periodic attractors are identified by their cycle point-sets
    (Hausdorff < cfg.cluster_tol); bounded aperiodic ones by kind and h
    within max(2*std, cfg.h_cluster_floor) of the cluster mean.
    """
    (lo1, hi1), (lo2, hi2) = ic_box
    n1, n2 = resolution
    if n1 < 1 or n2 < 1:
        raise ValueError("resolution must be >= 1 in each axis")
    v1 = np.linspace(lo1, hi1, n1)
    v2 = np.linspace(lo2, hi2, n2)
    labels = np.full((n1, n2), -1, dtype=np.int64)
    clusters: list[_Cluster] = []
    divergent = 0
    for a in range(n1):
        for b in range(n2):
            res = classify((v1[a], v2[b]), params, coeffs, cfg)
            if res.kind == DIVERGENT:
                divergent += 1
                continue
            hit = None
            for idx, cl in enumerate(clusters):
                if cl.matches(res, cfg.cluster_tol, cfg.h_cluster_floor):
                    hit = idx
                    break
            if hit is None:
                clusters.append(_Cluster(res, (float(v1[a]), float(v2[b]))))
                hit = len(clusters) - 1
            clusters[hit].add(res)
            labels[a, b] = hit
    total = n1 * n2
    attractors = [
        BasinAttractor(
            attractor=cl.first,
            representative_ic=cl.ic,
            count=cl.count,
            basin_fraction=cl.count / total,
        )
        for cl in clusters
    ]
    return CoexistenceReport(
        attractors=attractors,
        divergent_count=divergent,
        divergent_fraction=divergent / total,
        n_ics=total,
        ic_box=ic_box,
        resolution=resolution,
        labels=labels,
        ic1_values=v1,
        ic2_values=v2,
    )
