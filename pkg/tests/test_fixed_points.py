import numpy as np
import pytest

from henonlab import _kernels
from henonlab.dynamics import FilterCoeffs, MapParams
from henonlab.fixed_points import (
    BRANCH_DEGENERATE,
    NoRealFixedPointError,
    fixed_points,
    p1_always_unstable_scan,
    p2_lambda_grid,
    stability_eigenvalue,
    stability_region,
)

P = MapParams()
FULL = (-1.5, 1.5)


def oracle_roots(c0, c1):
    r = np.sort(np.real(np.roots([(c0 + c1) ** 2, 1.0 - P.beta, -P.alpha])))
    return r[0], r[1]


def oracle_lambda_max(p, c0, c1):
    """Companion-matrix eigenvalues of lambda^2 - A*lambda - B."""
    a = -2.0 * c0 * p * (c0 + c1)
    b = -2.0 * c1 * p * (c0 + c1) + P.beta
    return np.abs(np.roots([1.0, -a, -b])).max()


class TestFixedPoints:
    def test_classic_coefficients(self):
        p1o, p2o = oracle_roots(1.0, 0.0)
        fps = fixed_points(P, FilterCoeffs.pair(1.0, 0.0))
        assert [fp.branch for fp in fps] == ["P1", "P2"]
        assert fps[0].p == pytest.approx(p1o, abs=1e-12)
        assert fps[1].p == pytest.approx(p2o, abs=1e-12)
        assert fps[0].p == pytest.approx(-1.583897, abs=1e-6)
        assert fps[1].p == pytest.approx(0.883897, abs=1e-6)
        assert fps[0].p < 0 < fps[1].p

    def test_degenerate_line(self):
        for c in [(0.0, 0.0), (0.8, -0.8), (-1.2, 1.2)]:
            fps = fixed_points(P, FilterCoeffs.pair(*c))
            assert len(fps) == 1 and fps[0].branch == BRANCH_DEGENERATE
            assert fps[0].p == P.alpha / (1.0 - P.beta) == 2.0

    def test_depends_only_on_coefficient_sum_squared(self):
        a = fixed_points(P, FilterCoeffs.pair(1.0, 0.0))
        b = fixed_points(P, FilterCoeffs.pair(0.5, 0.5))
        assert a[0].p == b[0].p and a[1].p == b[1].p  # bit-identical

    def test_residual_invariant(self):
        rng = np.random.default_rng(11)
        n = 0
        while n < 300:
            c0, c1 = rng.uniform(-1.5, 1.5, 2)
            if abs(c0 + c1) < 0.01:
                continue  # double precision cannot hold 1e-12 residuals there
            s = (c0 + c1) ** 2
            for fp in fixed_points(P, FilterCoeffs.pair(c0, c1)):
                assert abs(s * fp.p**2 + (1 - P.beta) * fp.p - P.alpha) < 1e-12
            n += 1

    def test_no_real_fixed_points_for_negative_alpha(self):
        bad = MapParams(alpha=-5.0, beta=0.3)
        with pytest.raises(NoRealFixedPointError):
            fixed_points(bad, FilterCoeffs.pair(1.0, 0.0))


class TestStabilityEigenvalue:
    def test_classic_p2_unstable(self):
        _, p2 = oracle_roots(1.0, 0.0)
        lam = stability_eigenvalue(p2, P, FilterCoeffs.pair(1.0, 0.0))
        assert lam == pytest.approx(oracle_lambda_max(p2, 1.0, 0.0), abs=1e-10)
        # frozen from the companion-matrix oracle (6-figure value 1.92374)
        assert lam == pytest.approx(1.923739, abs=1e-6)
        assert lam > 1

    def test_symmetric_pair_stable_complex(self):
        _, p2 = oracle_roots(0.5, 0.5)
        lam = stability_eigenvalue(p2, P, FilterCoeffs.pair(0.5, 0.5))
        # complex pair: modulus sqrt(-B); frozen from the oracle (0.7641311)
        b = -2.0 * 0.5 * p2 * 1.0 + P.beta
        assert lam == pytest.approx(np.sqrt(-b), abs=1e-12)
        assert lam == pytest.approx(0.764131, abs=1e-6)
        assert lam < 1

    def test_bisector_sqrt_beta(self):
        for c in [(0.3, -0.3), (1.5, -1.5), (0.0, 0.0)]:
            fps = fixed_points(P, FilterCoeffs.pair(*c))
            assert fps[0].lambda_max == pytest.approx(np.sqrt(P.beta), abs=1e-12)
            assert fps[0].stable

    def test_characteristic_polynomial_residual(self):
        rng = np.random.default_rng(12)
        for _ in range(200):
            c0, c1 = rng.uniform(-1.5, 1.5, 2)
            if abs(c0 + c1) < 1e-6:
                continue
            for fp in fixed_points(P, FilterCoeffs.pair(c0, c1)):
                a = -2.0 * c0 * fp.p * (c0 + c1)
                b = -2.0 * c1 * fp.p * (c0 + c1) + P.beta
                for lam in np.roots([1.0, -a, -b]):
                    assert abs(lam**2 - a * lam - b) < 1e-10


class TestStabilityRegion:
    def test_known_cells(self):
        grid = stability_region(P, FULL, FULL, (301, 301))
        # (0.5, 0.5) stable; (1, 0) unstable
        i = np.argmin(np.abs(grid.c0_values - 0.5))
        j = np.argmin(np.abs(grid.c1_values - 0.5))
        assert grid.stable[j, i]
        i = np.argmin(np.abs(grid.c0_values - 1.0))
        j = np.argmin(np.abs(grid.c1_values - 0.0))
        assert not grid.stable[j, i]

    def test_point_reflection_symmetry(self):
        grid = stability_region(P, FULL, FULL, (120, 120))
        assert np.array_equal(grid.stable, grid.stable[::-1, ::-1])

    def test_bisector_reaches_boundary(self):
        # the stable set intersected with c0 + c1 = 0 extends to the frame edge
        for n in (100, 301):
            grid = stability_region(P, FULL, FULL, (n, n))
            lam = grid.lambda_max
            # cells nearest the bisector: |c0 + c1| minimal per row
            c0g, c1g = np.meshgrid(grid.c0_values, grid.c1_values)
            on_line = np.abs(c0g + c1g) <= (3.0 / (n - 1)) / 2 + 1e-12
            assert grid.stable[on_line].all()
            assert on_line[0].any() and on_line[-1].any()  # reaches both edges

    def test_matches_scalar_evaluation(self):
        grid = stability_region(P, (-1.2, 0.9), (-0.7, 1.1), (13, 11))
        for i in range(0, 13, 3):
            for j in range(0, 11, 2):
                c0 = grid.c0_values[i]
                c1 = grid.c1_values[j]
                fps = fixed_points(P, FilterCoeffs.pair(c0, c1))
                lam = fps[-1].lambda_max  # P2, or the degenerate point on the line
                assert grid.lambda_max[j, i] == lam


class TestP1AlwaysUnstable:
    def test_full_plane_scan(self):
        assert p1_always_unstable_scan(P, FULL, FULL, (300, 300))

    def test_single_cells(self):
        for c0, c1 in [(1.0, 0.0), (0.0, 0.9)]:
            p1, _ = oracle_roots(c0, c1)
            assert oracle_lambda_max(p1, c0, c1) > 1
            assert p1_always_unstable_scan(P, (c0, c0), (c1, c1), (1, 1))
        p1, _ = oracle_roots(1.0, 0.0)
        assert oracle_lambda_max(p1, 1.0, 0.0) == pytest.approx(3.259822, abs=1e-6)


class TestAnalyticSimulatedAgreement:
    def test_local_convergence_matches_eigenvalues(self):
        # stable P2 (lam < 0.95): nearby orbits converge; lam > 1.05: they do not
        rng = np.random.default_rng(13)
        stable_seen = unstable_seen = 0
        while stable_seen < 200 or unstable_seen < 200:
            c0, c1 = rng.uniform(-1.5, 1.5, 2)
            fps = fixed_points(P, FilterCoeffs.pair(c0, c1))
            fp = fps[-1]
            if fp.branch == BRANCH_DEGENERATE:
                continue
            x0 = fp.p + 7e-4
            y0 = fp.p + 7e-4
            x, y, ok = _kernels._run_transient(x0, y0, P.alpha, P.beta, c0, c1, 2000, 1e8)
            dist = max(abs(x - fp.p), abs(y - fp.p)) if ok else np.inf
            if fp.lambda_max < 0.95 and stable_seen < 200:
                assert dist < 1e-6
                stable_seen += 1
            elif fp.lambda_max > 1.05 and unstable_seen < 200:
                assert not dist < 1e-6
                unstable_seen += 1


def test_p2_lambda_grid_shape():
    c0s, c1s, lam = p2_lambda_grid(P, (-1.0, 1.0), (-0.5, 0.5), (7, 5))
    assert lam.shape == (5, 7) and len(c0s) == 7 and len(c1s) == 5
    assert np.all(np.isfinite(lam))
