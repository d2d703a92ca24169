"""Closed-form fixed points of the two-coefficient map and their stability.

Fixed points sit on the diagonal (p, p) and solve

    (c0 + c1)**2 * p**2 + (1 - beta) * p - alpha = 0,

so they depend on the coefficients only through s = (c0 + c1)**2.  For
s > 0 there are two: P1 < 0 and P2 > 0.  On the line c0 + c1 = 0 the
equation degenerates and the single fixed point is alpha / (1 - beta).

Stability comes from the eigenvalues of the Jacobian at (p, p): roots of
lambda**2 - A*lambda - B with A = -2*c0*p*(c0+c1), B = -2*c1*p*(c0+c1)+beta.
A complex pair (A**2 + 4B < 0) has modulus sqrt(-B) since the root product
is -B.  lambda_max within 1e-9 of 1 is reported "marginal" (the binary
stable/unstable rule leaves equality undefined).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dynamics import FilterCoeffs, MapParams

MARGINAL_BAND = 1e-9

BRANCH_P1 = "P1"
BRANCH_P2 = "P2"
BRANCH_DEGENERATE = "degenerate"


class NoRealFixedPointError(ValueError):
    """Raised when (1-beta)**2 + 4*alpha*(c0+c1)**2 < 0 (needs alpha < 0)."""


@dataclass(frozen=True)
class FixedPoint:
    """A diagonal fixed point (p, p) with its stability classification."""

    p: float
    branch: str
    lambda_max: float
    stability: str  # "stable" | "unstable" | "marginal"

    @property
    def stable(self) -> bool:
        return self.stability == "stable"


@dataclass(frozen=True)
class StabilityGrid:
    """Boolean stability map of P2 over a rectangular coefficient grid.

    `stable[j, i]` refers to (c0_values[i], c1_values[j]); marginal cells
    (lambda_max within 1e-9 of 1) are flagged separately and count as
    neither stable nor unstable.
    """

    c0_values: np.ndarray
    c1_values: np.ndarray
    stable: np.ndarray
    marginal: np.ndarray
    lambda_max: np.ndarray

    @property
    def resolution(self) -> tuple[int, int]:
        return len(self.c0_values), len(self.c1_values)


def _stability_label(lambda_max: float) -> str:
    if abs(lambda_max - 1.0) < MARGINAL_BAND:
        return "marginal"
    return "stable" if lambda_max < 1.0 else "unstable"


def stability_eigenvalue(p: float, params: MapParams, coeffs: FilterCoeffs) -> float:
    """Largest eigenvalue modulus of the Jacobian at the fixed point (p, p)."""
    c0, c1 = coeffs.require_pair()
    csum = c0 + c1
    a = -2.0 * c0 * p * csum
    b = -2.0 * c1 * p * csum + params.beta
    disc = a * a + 4.0 * b
    if disc < 0.0:
        return math.sqrt(-b)
    r = math.sqrt(disc)
    return max(abs((a + r) / 2.0), abs((a - r) / 2.0))


def _make_point(p: float, branch: str, params: MapParams, coeffs: FilterCoeffs) -> FixedPoint:
    lam = stability_eigenvalue(p, params, coeffs)
    return FixedPoint(p=p, branch=branch, lambda_max=lam, stability=_stability_label(lam))


def fixed_points(params: MapParams, coeffs: FilterCoeffs) -> list[FixedPoint]:
    """The map's fixed points: [P1, P2], or the single degenerate point when
    c0 + c1 = 0.

    P2 uses the rationalized quadratic root 2*alpha / ((1-beta) + sqrt(disc))
    to avoid cancellation for small (c0+c1)**2; both roots are computed from
    s = (c0+c1)**2 alone, so coefficient pairs with equal s give bit-identical
    results.
    """
    c0, c1 = coeffs.require_pair()
    s = (c0 + c1) ** 2
    b = 1.0 - params.beta
    if s == 0.0:
        p = params.alpha / b
        return [_make_point(p, BRANCH_DEGENERATE, params, coeffs)]
    disc = b * b + 4.0 * params.alpha * s
    if disc < 0.0:
        raise NoRealFixedPointError(
            f"no real fixed points: (1-beta)^2 + 4*alpha*(c0+c1)^2 = {disc} < 0"
        )
    root = math.sqrt(disc)
    p1 = (-b - root) / (2.0 * s)
    p2 = 2.0 * params.alpha / (b + root)
    return [
        _make_point(p1, BRANCH_P1, params, coeffs),
        _make_point(p2, BRANCH_P2, params, coeffs),
    ]


def _lambda_grids(
    params: MapParams,
    c0_range: tuple[float, float],
    c1_range: tuple[float, float],
    resolution: tuple[int, int],
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Vectorized lambda_max of P2 and P1 over the grid.

    P2's rationalized form extends continuously through the degenerate line
    (it tends to alpha/(1-beta) there, matching the single fixed point), so
    the P2 sheet needs no special casing.  The P1 sheet is NaN on that line,
    where P1 does not exist.
    """
    n0, n1 = resolution
    if n0 < 1 or n1 < 1:
        raise ValueError("resolution must be >= 1 in each axis")
    c0s = np.linspace(c0_range[0], c0_range[1], n0)
    c1s = np.linspace(c1_range[0], c1_range[1], n1)
    c0g, c1g = np.meshgrid(c0s, c1s)
    csum = c0g + c1g
    s = csum**2
    b = 1.0 - params.beta
    root = np.sqrt(b * b + 4.0 * params.alpha * s)
    p2 = 2.0 * params.alpha / (b + root)
    with np.errstate(divide="ignore", invalid="ignore"):
        p1 = np.where(s > 0.0, (-b - root) / (2.0 * s), np.nan)

    def lam(p):
        a = -2.0 * c0g * p * csum
        bb = -2.0 * c1g * p * csum + params.beta
        disc = a * a + 4.0 * bb
        with np.errstate(invalid="ignore"):
            real = np.maximum(np.abs((a + np.sqrt(np.abs(disc))) / 2.0),
                              np.abs((a - np.sqrt(np.abs(disc))) / 2.0))
            cplx = np.sqrt(np.abs(bb))
        return np.where(disc < 0.0, cplx, real)

    return c0s, c1s, lam(p2), lam(p1)


def stability_region(
    params: MapParams,
    c0_range: tuple[float, float],
    c1_range: tuple[float, float],
    resolution: tuple[int, int],
) -> StabilityGrid:
    """Analytic stability map of P2 (no simulation): cell true iff
    lambda_max < 1, outside the marginal band."""
    c0s, c1s, lam2, _ = _lambda_grids(params, c0_range, c1_range, resolution)
    marginal = np.abs(lam2 - 1.0) < MARGINAL_BAND
    stable = (lam2 < 1.0) & ~marginal
    return StabilityGrid(c0_values=c0s, c1_values=c1s, stable=stable,
                         marginal=marginal, lambda_max=lam2)


def p2_lambda_grid(
    params: MapParams,
    c0_range: tuple[float, float],
    c1_range: tuple[float, float],
    resolution: tuple[int, int],
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(c0_values, c1_values, lambda_max of P2) over the grid."""
    c0s, c1s, lam2, _ = _lambda_grids(params, c0_range, c1_range, resolution)
    return c0s, c1s, lam2


def p1_always_unstable_scan(
    params: MapParams,
    c0_range: tuple[float, float],
    c1_range: tuple[float, float],
    resolution: tuple[int, int],
) -> bool:
    """True iff lambda_max(P1) > 1 at every grid point where P1 exists
    (the degenerate line c0 + c1 = 0 has no P1 and is skipped)."""
    _, _, _, lam1 = _lambda_grids(params, c0_range, c1_range, resolution)
    exists = np.isfinite(lam1)
    return bool(np.all(lam1[exists] > 1.0))
