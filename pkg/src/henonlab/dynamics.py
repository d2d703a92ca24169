"""The FIR-filtered Henon map: state types, stepping, and the Jacobian.

The map iterates

    x1(n+1) = alpha - (sum_j c_j * x1(n-j))**2 + beta * x1(n-1)

with the classic Henon constants alpha=1.4, beta=0.3 as defaults.  The
state is the delay line of the D = max(N, 2) most recent x1 values, newest
first, where N is the number of filter coefficients.  For two coefficients
(c0, c1) the state is (x1, x2) with x2(n) = x1(n-1), and the plain Henon
map is recovered at c = (1, 0).

All arithmetic is 64-bit floating point.  Functions here are pure and safe
to call concurrently.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

DEFAULT_GUARD = 1e8


@dataclass(frozen=True)
class MapParams:
    """Henon map constants; defaults are the canonical chaotic pair."""

    alpha: float = 1.4
    beta: float = 0.3

    def __post_init__(self) -> None:
        if not (math.isfinite(self.alpha) and math.isfinite(self.beta)):
            raise ValueError("map parameters must be finite")


@dataclass(frozen=True)
class FilterCoeffs:
    """Ordered FIR feedback coefficients (c0, c1, ...), length >= 1."""

    c: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.c) < 1:
            raise ValueError("need at least one filter coefficient")
        if not all(math.isfinite(v) for v in self.c):
            raise ValueError("filter coefficients must be finite")
        object.__setattr__(self, "c", tuple(float(v) for v in self.c))

    @classmethod
    def pair(cls, c0: float, c1: float) -> "FilterCoeffs":
        return cls((c0, c1))

    @property
    def ns(self) -> int:
        return len(self.c)

    @property
    def state_dim(self) -> int:
        return max(self.ns, 2)

    def require_pair(self) -> tuple[float, float]:
        """The (c0, c1) values; analysis beyond iteration needs exactly two."""
        if self.ns != 2:
            raise ValueError(f"this operation requires exactly 2 coefficients, got {self.ns}")
        return self.c[0], self.c[1]


@dataclass(frozen=True)
class OrbitTrace:
    """Recorded orbit.  `states[k]` is the state after k steps, newest-first
    components.  If `diverged`, the trace is truncated at `diverged_at`, the
    index of the first state that escaped the guard or went non-finite."""

    states: np.ndarray
    diverged: bool
    diverged_at: int | None = None

    def __len__(self) -> int:
        return len(self.states)

    @property
    def x1(self) -> np.ndarray:
        return self.states[:, 0]


def as_state(s, coeffs: FilterCoeffs) -> np.ndarray:
    """Validate and convert a state to a float64 array of the right length."""
    arr = np.asarray(s, dtype=np.float64).reshape(-1)
    if arr.shape[0] != coeffs.state_dim:
        raise ValueError(f"state must have dimension {coeffs.state_dim}, got {arr.shape[0]}")
    return arr


def filter_output(s: np.ndarray, coeffs: FilterCoeffs) -> float:
    """Weighted sum of the delay line, sum_j c_j * x1(n-j).

    Summed left to right so that the two-coefficient case is bit-identical
    to the compiled kernels' ``c0*x1 + c1*x2``.
    """
    c = coeffs.c
    if len(c) == 2:
        return c[0] * s[0] + c[1] * s[1]
    w = 0.0
    for j in range(len(c)):
        w += c[j] * s[j]
    return w


def step(s, params: MapParams, coeffs: FilterCoeffs) -> np.ndarray:
    """Advance the state by one iteration.

    Overflow to non-finite values is legal output; callers that iterate
    guard against it (see `iterate`).
    """
    arr = as_state(s, coeffs)
    w = filter_output(arr, coeffs)
    new_x1 = params.alpha - w * w + params.beta * arr[1]
    out = np.empty_like(arr)
    out[0] = new_x1
    out[1:] = arr[:-1]
    return out


def step_reference_3var(
    x1: float, x2: float, x3: float, params: MapParams, coeffs: FilterCoeffs
) -> tuple[float, float, float]:
    """One step of the three-variable formulation, for differential testing.

    Keeps the filter output x3 as an explicit state component:

        x1' = alpha - x3**2 + beta*x2
        x2' = x1
        x3' = c0*x1' + c1*x1

    With x3(0) seeded consistently as c0*x1(0) + c1*x2(0), the x1 sequence
    matches `step` exactly.  Two coefficients only.
    """
    c0, c1 = coeffs.require_pair()
    nx1 = params.alpha - x3 * x3 + params.beta * x2
    nx2 = x1
    nx3 = c0 * nx1 + c1 * x1
    return nx1, nx2, nx3


def iterate(
    s0,
    n: int,
    params: MapParams,
    coeffs: FilterCoeffs,
    guard: float = DEFAULT_GUARD,
) -> OrbitTrace:
    """Apply `step` n times, recording every state.

    Stops early with the diverged flag if |x1| exceeds `guard` or any
    component goes non-finite; the offending state is the last one kept.
    """
    if n < 0:
        raise ValueError("step count must be >= 0")
    if not guard > 0:
        raise ValueError("guard must be positive")
    s = as_state(s0, coeffs)
    states = np.empty((n + 1, s.shape[0]))
    states[0] = s
    with np.errstate(over="ignore", invalid="ignore"):  # escape is legal output
        for k in range(1, n + 1):
            s = step(s, params, coeffs)
            states[k] = s
            if not np.all(np.isfinite(s)) or abs(s[0]) > guard:
                return OrbitTrace(states[: k + 1].copy(), True, k)
    return OrbitTrace(states, False, None)


def jacobian(s, params: MapParams, coeffs: FilterCoeffs) -> np.ndarray:
    """Jacobian of the two-coefficient map at state (x1, x2):

        [[-2*c0*w, -2*c1*w + beta],
         [      1,              0]]   with w = c0*x1 + c1*x2.
    """
    c0, c1 = coeffs.require_pair()
    arr = as_state(s, coeffs)
    w = c0 * arr[0] + c1 * arr[1]
    return np.array([[-2.0 * c0 * w, -2.0 * c1 * w + params.beta], [1.0, 0.0]])


def jacobian_det(s, params: MapParams, coeffs: FilterCoeffs) -> float:
    """det J = -(beta - 2*c1*(c0*x1 + c1*x2)); constantly -beta when c1 = 0."""
    c0, c1 = coeffs.require_pair()
    arr = as_state(s, coeffs)
    w = c0 * arr[0] + c1 * arr[1]
    return -(params.beta - 2.0 * c1 * w)
