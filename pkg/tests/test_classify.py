import numpy as np
import pytest

from henonlab.classify import (
    ClassifyConfig,
    classify,
    detect_period,
    find_coexisting,
)
from henonlab.dynamics import FilterCoeffs, MapParams, iterate, step
from henonlab.fixed_points import fixed_points
from henonlab.lyapunov import LyapunovConfig, lyapunov_ensemble

P = MapParams()
CFG = ClassifyConfig()


def attractor_tail(c0, c1, ic=(0.8, 0.8), transient=1000, tail=512):
    tr = iterate(ic, transient + tail, P, FilterCoeffs.pair(c0, c1))
    assert not tr.diverged
    return tr.states[transient + 1 :]


class TestDetectPeriod:
    def test_constant_tail_is_period_one(self):
        p2 = fixed_points(P, FilterCoeffs.pair(0.5, 0.5))[1].p
        tail = np.tile([p2, p2], (512, 1))
        assert detect_period(tail, 1e-6, 64) == 1

    def test_period_three_window(self):
        tail = attractor_tail(0.5, 0.708)
        assert detect_period(tail, 1e-6, 64) == 3

    def test_chaotic_tail_has_none(self):
        tail = attractor_tail(1.0, 0.0, ic=(0.0, 0.0))
        assert detect_period(tail, 1e-6, 64) is None

    def test_minimality_not_a_divisor(self):
        # synthetic period-6 signal must not match 2 or 3
        base = np.array([[0.1, 0.0], [0.9, 0.1], [0.2, 0.9], [0.7, 0.2], [0.4, 0.7], [0.6, 0.4]])
        tail = np.tile(base, (30, 1))
        assert detect_period(tail, 1e-6, 64) == 6

    def test_tolerance_behaviour(self):
        base = np.array([[0.0, 0.0], [1.0, 0.0]])
        tail = np.tile(base, (100, 1))
        tail += 1e-9 * np.arange(200)[:, None]  # slow drift below tol
        assert detect_period(tail, 1e-6, 64) == 2
        tail2 = np.tile(base, (100, 1)) + 2e-6 * (np.arange(200) % 4 == 0)[:, None]
        assert detect_period(tail2, 1e-6, 3) is None

    def test_requires_long_tail(self):
        with pytest.raises(ValueError):
            detect_period(np.zeros((10, 2)), 1e-6, 64)


class TestClassify:
    def test_stable_fixed_point(self):
        r = classify((0.8, 0.8), P, FilterCoeffs.pair(0.5, 0.5), CFG)
        p2 = fixed_points(P, FilterCoeffs.pair(0.5, 0.5))[1].p
        assert r.kind == "fixed_point" and r.period == 1
        assert r.cycle.shape == (1, 2)
        assert abs(r.cycle[0, 0] - p2) < 1e-6
        assert abs(p2 - 0.883897) < 1e-6

    def test_period_three(self):
        r = classify((0.8, 0.8), P, FilterCoeffs.pair(0.5, 0.708), CFG)
        assert r.kind == "periodic" and r.period == 3
        assert r.cycle.shape == (3, 2)

    def test_classic_henon_chaotic(self):
        r = classify((0.0, 0.0), P, FilterCoeffs.pair(1.0, 0.0), CFG)
        assert r.kind == "chaotic"
        assert r.h == pytest.approx(0.419, abs=0.03)

    def test_aperiodic_marginal(self):
        r = classify((0.8, 0.8), P, FilterCoeffs.pair(0.5, 0.707), CFG)
        assert r.kind == "marginal"
        assert abs(r.h) <= CFG.h_threshold

    def test_divergent(self):
        r = classify((0.0, 0.0), P, FilterCoeffs.pair(1.5, 1.5), CFG)
        assert r.kind == "divergent" and r.period is None and r.h is None

    def test_cycle_closure(self):
        for c0, c1 in [(0.5, 0.708), (0.7, 0.0), (0.5, 0.5)]:
            r = classify((0.8, 0.8), P, FilterCoeffs.pair(c0, c1), CFG)
            if r.cycle is None:
                continue
            s = r.cycle[0]
            for _ in range(r.period):
                s = step(s, P, FilterCoeffs.pair(c0, c1))
            assert np.max(np.abs(s - r.cycle[0])) < 10 * CFG.tol

    def test_sign_flip_invariance(self):
        for c0, c1, ic in [(0.5, 0.708, (0.8, 0.8)), (1.0, 0.0, (0.0, 0.0)),
                           (0.5, 0.5, (0.3, 0.3))]:
            a = classify(ic, P, FilterCoeffs.pair(c0, c1), CFG)
            b = classify(ic, P, FilterCoeffs.pair(-c0, -c1), CFG)
            assert a.kind == b.kind and a.period == b.period and a.h == b.h

    def test_periodic_implies_negative_ensemble_h(self):
        # ensemble h from ICs inside the basin of a periodic attractor is < 0
        est = lyapunov_ensemble(
            P, FilterCoeffs.pair(0.5, 0.708),
            LyapunovConfig(n_ics=10, ic_box=((0.0, 0.7), (0.0, 0.7))),
        )
        assert est.n_valid == 10 and est.h_mean < 0

    def test_config_validation(self):
        with pytest.raises(ValueError):
            ClassifyConfig(tail=60, max_period=64)
        with pytest.raises(ValueError):
            ClassifyConfig(tol=0.0)


class TestFindCoexisting:
    def test_two_attractors_at_coexistence_point(self):
        report = find_coexisting(
            P, FilterCoeffs.pair(0.5, 0.707), ((0.0, 0.9), (0.0, 0.9)), (30, 30), CFG
        )
        kinds = {a.attractor.kind for a in report.attractors}
        assert kinds == {"periodic", "marginal"}
        assert len(report.attractors) == 2
        per = next(a for a in report.attractors if a.attractor.kind == "periodic")
        marg = next(a for a in report.attractors if a.attractor.kind == "marginal")
        assert per.attractor.period == 3
        assert per.basin_fraction > 0.5 and marg.basin_fraction > 0.1
        assert report.divergent_count == 0
        # known sufficient basin boxes, checked at the sampled ICs:
        # every grid IC inside [0.7,0.9]^2 lands on the aperiodic attractor
        marg_id = report.attractors.index(marg)
        v1, v2 = report.ic1_values, report.ic2_values
        inner = np.ix_(np.flatnonzero(v1 >= 0.7), np.flatnonzero(v2 >= 0.7))
        assert np.all(report.labels[inner] == marg_id)
        # and >= 99% of grid ICs inside [0,0.7]^2 land on the period-3 one
        per_id = report.attractors.index(per)
        low = np.ix_(np.flatnonzero(v1 <= 0.7), np.flatnonzero(v2 <= 0.7))
        frac = np.mean(report.labels[low] == per_id)
        assert frac >= 0.99

    def test_single_attractor_full_basin(self):
        report = find_coexisting(
            P, FilterCoeffs.pair(0.5, 0.5), ((0.0, 1.0), (0.0, 1.0)), (10, 10), CFG
        )
        assert len(report.attractors) == 1
        assert report.attractors[0].attractor.kind == "fixed_point"
        assert report.attractors[0].basin_fraction == 1.0
        assert report.divergent_fraction == 0.0

    def test_all_divergent(self):
        report = find_coexisting(
            P, FilterCoeffs.pair(1.5, 1.5), ((0.0, 1.0), (0.0, 1.0)), (10, 10), CFG
        )
        assert report.attractors == []
        assert report.divergent_fraction == 1.0

    def test_fractions_sum_to_one(self):
        report = find_coexisting(
            P, FilterCoeffs.pair(0.94, 0.75), ((0.0, 1.0), (0.0, 1.0)), (12, 12), CFG
        )
        total = report.divergent_fraction + sum(a.basin_fraction for a in report.attractors)
        assert total == pytest.approx(1.0, abs=1e-12)

    def test_labels_match_counts(self):
        report = find_coexisting(
            P, FilterCoeffs.pair(0.5, 0.707), ((0.0, 0.9), (0.0, 0.9)), (15, 15), CFG
        )
        for idx, a in enumerate(report.attractors):
            assert (report.labels == idx).sum() == a.count
        assert (report.labels == -1).sum() == report.divergent_count
