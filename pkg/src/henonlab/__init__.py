"""henonlab: a numerical dynamics laboratory for the FIR-filtered Henon map.

Feeding the Henon map's quadratic term a finite weighted sum of past
samples (an FIR filter output) yields a family of 2-D maps whose orbits
may be chaotic, periodic, or divergent depending on the two filter
coefficients.  This package computes fixed points and their stability,
largest-Lyapunov-exponent estimates, bifurcation diagrams with attractor
continuation, coefficient-plane scans, and coexisting-attractor basins,
all reproducibly seeded.
"""

__version__ = "0.1.0"

from .classify import (
    AttractorClass,
    ClassifyConfig,
    CoexistenceReport,
    classify,
    detect_period,
    find_coexisting,
)
from .dynamics import (
    DEFAULT_GUARD,
    FilterCoeffs,
    MapParams,
    OrbitTrace,
    iterate,
    jacobian,
    jacobian_det,
    step,
    step_reference_3var,
)
from .fixed_points import (
    FixedPoint,
    NoRealFixedPointError,
    StabilityGrid,
    fixed_points,
    p1_always_unstable_scan,
    stability_eigenvalue,
    stability_region,
)
from .lyapunov import (
    LyapunovConfig,
    LyapunovEstimate,
    largest_lyapunov,
    lyapunov_ensemble,
    lyapunov_spectrum,
)
from .sweeps import (
    BifurcationDiagram,
    CellResult,
    SweepConfig,
    SweepGrid,
    bifurcation_1d,
    lyapunov_map_2d,
    period_map_2d,
    scan_grid,
    set_threads,
)

__all__ = [
    "__version__",
    "DEFAULT_GUARD",
    "MapParams",
    "FilterCoeffs",
    "OrbitTrace",
    "step",
    "step_reference_3var",
    "iterate",
    "jacobian",
    "jacobian_det",
    "FixedPoint",
    "StabilityGrid",
    "NoRealFixedPointError",
    "fixed_points",
    "stability_eigenvalue",
    "stability_region",
    "p1_always_unstable_scan",
    "LyapunovConfig",
    "LyapunovEstimate",
    "largest_lyapunov",
    "lyapunov_spectrum",
    "lyapunov_ensemble",
    "ClassifyConfig",
    "AttractorClass",
    "CoexistenceReport",
    "detect_period",
    "classify",
    "find_coexisting",
    "SweepConfig",
    "SweepGrid",
    "CellResult",
    "BifurcationDiagram",
    "bifurcation_1d",
    "lyapunov_map_2d",
    "period_map_2d",
    "scan_grid",
    "set_threads",
]
