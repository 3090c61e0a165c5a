import io
import math

import numpy as np
import pytest
from scipy.signal import find_peaks

from faceartifacts import threshold as th
from faceartifacts.errors import DegenerateSample


class TestSilvermanBandwidth:
    def test_two_point_hand_value(self):
        # sigma = sqrt(0.5), IQR = 0.5 -> 0.9 * (0.5/1.34) * 2^(-1/5)
        want = 0.9 * (0.5 / 1.34) * 2 ** (-0.2)
        assert th.silverman_bandwidth([0.0, 1.0]) == pytest.approx(want, abs=1e-12)

    @pytest.mark.parametrize("s", [0.1, 3.0, 42.0])
    def test_scale_equivariance(self, s):
        rng = np.random.default_rng(1)
        x = rng.normal(size=200)
        assert th.silverman_bandwidth(x * s) == pytest.approx(
            th.silverman_bandwidth(x) * s, rel=1e-12
        )

    def test_constant_sample_rejected(self):
        with pytest.raises(DegenerateSample):
            th.silverman_bandwidth([2.0] * 50)

    def test_single_value_rejected(self):
        with pytest.raises(DegenerateSample):
            th.silverman_bandwidth([1.0])

    def test_zero_iqr_falls_back_to_std(self):
        # more than half the mass on one value -> IQR 0, std > 0
        x = [5.0] * 80 + [0.0, 10.0] * 10
        h = th.silverman_bandwidth(x)
        want = 0.9 * float(np.std(x, ddof=1)) * len(x) ** (-0.2)
        assert h == pytest.approx(want, rel=1e-12)


class TestKde:
    def test_two_point_closed_form(self):
        curve = th.kde([-1.0, 1.0], 1.0)
        at0 = float(np.interp(0.0, curve.grid, curve.density))
        assert at0 == pytest.approx(math.exp(-0.5) / math.sqrt(2 * math.pi), abs=1e-6)

    def test_grid_span_and_size(self):
        curve = th.kde([0.0, 2.0], 0.5, grid_points=256)
        assert len(curve.grid) == 256
        assert curve.grid[0] == pytest.approx(-1.5)
        assert curve.grid[-1] == pytest.approx(3.5)
        steps = np.diff(curve.grid)
        assert np.allclose(steps, steps[0])

    def test_integral_near_one(self):
        rng = np.random.default_rng(4)
        x = rng.normal(size=500)
        curve = th.kde(x, th.silverman_bandwidth(x))
        assert 0.99 <= curve.integral() <= 1.01

    def test_symmetric_sample_symmetric_density(self):
        curve = th.kde([-3.0, 3.0], 1.0)
        assert np.abs(curve.density - curve.density[::-1]).max() < 1e-12

    def test_density_nonnegative(self):
        rng = np.random.default_rng(8)
        curve = th.kde(rng.normal(size=100), 0.4)
        assert (curve.density >= 0).all()


class TestFindExtrema:
    def test_simple_zigzag(self):
        curve = th.KdeCurve(
            grid=np.arange(5.0),
            density=np.array([0.0, 1.0, 0.4, 0.8, 0.0]),
            bandwidth=1.0,
        )
        peaks, valleys = th.find_extrema(curve)
        assert [p.location for p in peaks] == [1.0, 3.0]
        assert peaks[0].prominence == pytest.approx(1.0)
        assert peaks[1].prominence == pytest.approx(0.4)
        assert [v.location for v in valleys] == [2.0]

    def test_monotone_has_no_extrema(self):
        curve = th.KdeCurve(
            grid=np.arange(6.0), density=np.linspace(0, 1, 6), bandwidth=1.0
        )
        peaks, valleys = th.find_extrema(curve)
        assert peaks == [] and valleys == []

    def test_plateau_reports_midpoint(self):
        d = np.array([0.0, 0.5, 1.0, 1.0, 1.0, 0.5, 0.0]) + 0.001
        curve = th.KdeCurve(grid=np.arange(7.0), density=d, bandwidth=1.0)
        peaks, _ = th.find_extrema(curve)
        assert len(peaks) == 1
        assert peaks[0].location == 3.0

    def test_height_filter(self):
        d = np.array([0.0, 5e-4, 0.0, 0.9, 0.0]) + 1e-5
        curve = th.KdeCurve(grid=np.arange(5.0), density=d, bandwidth=1.0)
        peaks, _ = th.find_extrema(curve)
        assert [p.location for p in peaks] == [3.0]

    def test_two_gaussian_mixture_against_dense_analytic(self):
        # exact mixture density evaluated brute-force on a dense grid
        rng = np.random.default_rng(0)
        sample = np.concatenate([rng.normal(0, 0.5, 500), rng.normal(5, 0.5, 500)])
        h = th.silverman_bandwidth(sample)
        curve = th.kde(sample, h)
        peaks, valleys = th.find_extrema(curve)
        assert len(peaks) == 2
        assert abs(peaks[0].location - 0.0) < 0.5
        assert abs(peaks[1].location - 5.0) < 0.5
        inner = [v for v in valleys if 0.5 < v.location < 4.5]
        assert len(inner) == 1
        assert abs(inner[0].location - 2.5) < 0.75

    @pytest.mark.parametrize("seed", range(6))
    def test_matches_scipy_find_peaks(self, seed):
        rng = np.random.default_rng(seed)
        sample = rng.normal(size=400)
        curve = th.kde(sample, th.silverman_bandwidth(sample))
        mine, _ = th.find_extrema(curve)
        ref_idx, props = find_peaks(
            curve.density,
            height=th.PEAK_MIN_HEIGHT,
            prominence=th.PEAK_MIN_PROMINENCE,
        )
        assert [p.location for p in mine] == [float(curve.grid[i]) for i in ref_idx]
        assert [p.prominence for p in mine] == pytest.approx(
            list(props["prominences"]), rel=1e-12
        )


class TestSelectThreshold:
    def _peak(self, loc, height):
        return th.Extremum(loc, height, "peak", prominence=height)

    def _valley(self, loc, height=0.01):
        return th.Extremum(loc, height, "valley")

    def test_two_peaks_one_valley(self):
        rep = th.select_threshold(
            [self._peak(1, 0.5), self._peak(3, 0.3)], [self._valley(2)]
        )
        assert rep.found and rep.threshold == 2
        assert rep.left_peak.location == 1 and rep.right_peak.location == 3
        assert rep.threshold_prominence == pytest.approx(0.49)

    def test_single_peak_no_threshold(self):
        rep = th.select_threshold([self._peak(1, 0.5)], [self._valley(2)])
        assert not rep.found
        assert "peak" in rep.reason

    def test_no_valley_no_threshold(self):
        rep = th.select_threshold([self._peak(1, 0.5), self._peak(3, 0.3)], [])
        assert not rep.found

    def test_global_max_rule_skips_first_valley(self):
        peaks = [self._peak(1, 0.3), self._peak(3, 0.2), self._peak(6, 0.5)]
        valleys = [self._valley(2), self._valley(4.5)]
        rep = th.select_threshold(peaks, valleys)
        assert rep.found and rep.threshold == 4.5
        assert rep.left_peak.location == 3 and rep.right_peak.location == 6

    def test_first_rule_takes_first_valley(self):
        peaks = [self._peak(1, 0.3), self._peak(3, 0.2), self._peak(6, 0.5)]
        valleys = [self._valley(2), self._valley(4.5)]
        rep = th.select_threshold(peaks, valleys, valley_rule=th.VALLEY_RULE_FIRST)
        assert rep.found and rep.threshold == 2

    def test_valley_outside_peaks_skipped(self):
        peaks = [self._peak(2, 0.5), self._peak(4, 0.4)]
        valleys = [self._valley(1), self._valley(3)]
        rep = th.select_threshold(peaks, valleys)
        assert rep.found and rep.threshold == 3


class TestDetect:
    def test_bimodal_found_in_range(self):
        rng = np.random.default_rng(0)
        sample = np.concatenate([rng.normal(0, 0.5, 500), rng.normal(5, 0.5, 500)])
        rep = th.detect(sample)
        assert rep.found
        assert 2.0 <= rep.threshold <= 3.0
        assert rep.left_peak.location < rep.threshold < rep.right_peak.location
        assert rep.threshold_prominence >= 0

    def test_unimodal_no_threshold(self):
        rng = np.random.default_rng(1)
        rep = th.detect(rng.normal(0, 1, 1000))
        assert rep.status == "no-threshold"

    def test_deterministic(self):
        rng = np.random.default_rng(12)
        sample = rng.normal(size=500)
        a = th.detect(sample)
        b = th.detect(sample)
        assert a.threshold == b.threshold
        assert np.array_equal(a.curve.density, b.curve.density)

    def test_shift_equivariance(self):
        rng = np.random.default_rng(3)
        sample = np.concatenate([rng.normal(0, 0.5, 400), rng.normal(5, 0.5, 400)])
        a = th.detect(sample)
        b = th.detect(sample + 13.25)
        assert a.found and b.found
        assert b.threshold - a.threshold == pytest.approx(13.25, abs=1e-9)
        assert b.curve.bandwidth == pytest.approx(a.curve.bandwidth, rel=1e-12)

    def test_degenerate_sample_propagates(self):
        with pytest.raises(DegenerateSample):
            th.detect([1.0, 1.0, 1.0])

    def test_peaks_and_valleys_interleave(self):
        rng = np.random.default_rng(21)
        sample = np.concatenate([rng.normal(0, 1, 300), rng.normal(8, 2, 300)])
        rep = th.detect(sample)
        locs = sorted(
            [(p.location, "p") for p in rep.peaks] + [(v.location, "v") for v in rep.valleys]
        )
        kinds = [k for _, k in locs]
        for a, b in zip(kinds, kinds[1:]):
            if a == "p" == b:
                pytest.fail("two qualifying peaks with no valley between")


class TestExports:
    def test_curve_csv_round_trip(self):
        rng = np.random.default_rng(5)
        sample = rng.normal(size=300)
        curve = th.kde(sample, th.silverman_bandwidth(sample))
        buf = io.StringIO()
        th.curve_to_csv(curve, buf)
        buf.seek(0)
        back = th.curve_from_csv(buf, bandwidth=curve.bandwidth)
        assert np.array_equal(curve.grid, back.grid)
        assert np.array_equal(curve.density, back.density)

    def test_report_dict_shape(self):
        rng = np.random.default_rng(0)
        sample = np.concatenate([rng.normal(0, 0.5, 500), rng.normal(5, 0.5, 500)])
        rep = th.detect(sample)
        doc = th.report_to_dict(rep)
        assert doc["status"] == "found"
        assert doc["left_peak"]["kind"] == "peak"
        assert doc["threshold"] == rep.threshold
        assert all("prominence" in p for p in doc["peaks"])
        assert all("prominence" not in v for v in doc["valleys"])
