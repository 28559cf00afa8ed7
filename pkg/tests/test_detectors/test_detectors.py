"""Tests for the SLCD, weighted CUSUM and Kohlmorgen/Lemm detectors."""
import math

import numpy as np
import pytest

from src.detectors import (
    CusumDetector,
    KohlmorgenLemmDetector,
    SlcdDetector,
    create_detector,
    cusum_scan,
    cusum_weighted,
    epoch_distance_matrix,
    kl_sigma_heuristic,
    kl_window_distance,
    kohlmorgen_lemm,
    single_linkage_cluster,
    slcd_detect,
    viterbi_states,
    window_distance_matrix,
)
from src.exceptions import DimensionMismatch, InvalidArgument, InvalidK, TooFewSamples
from src.models import CusumParams, DistanceMatrix, KlParams, TimeSeries


def variance_step_series(rng, first=500, second=500, low=1.0, high=4.0):
    """One channel whose variance jumps from low to high after `first` samples."""
    x = np.concatenate([
        math.sqrt(low) * rng.standard_normal(first),
        math.sqrt(high) * rng.standard_normal(second),
    ])
    return TimeSeries(x)


CUSUM_GRID = np.arange(0.5, 8.01, 0.5).tolist()


class TestSingleLinkage:
    """Tests for single_linkage_cluster."""

    def test_hand_example(self):
        """Test d(1,2)=1, d(2,3)=5, d(1,3)=6 at k=2 gives {1,2} and {3}."""
        dm = DistanceMatrix(np.array([[0.0, 1.0, 6.0], [1.0, 0.0, 5.0], [6.0, 5.0, 0.0]]))
        np.testing.assert_array_equal(single_linkage_cluster(dm, 2), [0, 0, 1])

    def test_singletons(self):
        """Test k = n leaves every point alone."""
        dm = DistanceMatrix(np.array([[0.0, 1.0, 6.0], [1.0, 0.0, 5.0], [6.0, 5.0, 0.0]]))
        np.testing.assert_array_equal(single_linkage_cluster(dm, 3), [0, 1, 2])

    def test_tie_break_merges_first_pair(self):
        """Test equal distances merge (1, 2) first."""
        dm = DistanceMatrix(np.ones((3, 3)) - np.eye(3))
        np.testing.assert_array_equal(single_linkage_cluster(dm, 2), [0, 0, 1])

    def test_chaining(self):
        """Test single linkage chains points through small gaps."""
        points = np.array([0.0, 1.0, 2.0, 3.0, 10.0])
        dm = DistanceMatrix(np.abs(points[:, None] - points[None, :]))
        np.testing.assert_array_equal(single_linkage_cluster(dm, 2), [0, 0, 0, 0, 1])

    def test_invalid_k(self):
        """Test k outside [1, n] raises InvalidK."""
        dm = DistanceMatrix(np.zeros((3, 3)))
        with pytest.raises(InvalidK):
            single_linkage_cluster(dm, 0)
        with pytest.raises(InvalidK):
            single_linkage_cluster(dm, 4)


class TestSlcd:
    """Tests for slcd_detect."""

    def test_single_cluster_is_empty(self, rng):
        """Test k = 1 gives no boundaries."""
        ts = variance_step_series(rng, 1000, 1000)
        assert slcd_detect(ts, 20, 1).epoch_boundaries == []

    def test_two_regimes(self, rng):
        """Test variances 1 then 4 over 20 epochs give one boundary at the switch."""
        ts = variance_step_series(rng, 2000, 2000)
        segmentation = slcd_detect(ts, 20, 2)

        assert segmentation.epoch_boundaries == [10]
        assert segmentation.algorithm == "slcd"
        assert len(segmentation.scores) == 1

    def test_every_epoch_its_own_cluster(self, rng):
        """Test k = n_epochs flags all n - 1 boundaries."""
        ts = variance_step_series(rng, 500, 500)
        assert slcd_detect(ts, 10, 10).epoch_boundaries == list(range(1, 10))

    def test_invalid_k(self, rng):
        """Test k > n_epochs raises InvalidK."""
        with pytest.raises(InvalidK):
            slcd_detect(variance_step_series(rng), 5, 6)

    def test_distance_matrix_shape(self, small_cpd_dataset):
        """Test one row per epoch."""
        ts, truth = small_cpd_dataset
        dm = epoch_distance_matrix(ts, truth.n_epochs)
        assert dm.n == truth.n_epochs


class TestCusum:
    """Tests for the weighted CUSUM."""

    def test_no_detection_at_high_threshold(self, rng):
        """Test stationary N(0, 1) noise with h = 50 gives no detections."""
        ts = TimeSeries(rng.standard_normal(2000))
        params = CusumParams(window=50, threshold=50.0, theta_grid=CUSUM_GRID)
        assert cusum_weighted(ts, params).epoch_boundaries == []

    def test_variance_step(self, rng):
        """Test a 1 -> 4 step at t=500 is detected within [500, 600]."""
        ts = variance_step_series(rng)
        params = CusumParams(window=50, threshold=5.0, theta_grid=CUSUM_GRID)

        times = [t for t, _ in cusum_scan(ts.data[0], params)]
        assert any(500 <= t <= 600 for t in times)
        assert 10 in cusum_weighted(ts, params).epoch_boundaries

    def test_threshold_always_crossed(self, rng):
        """Test h = -1e18 detects at the first eligible time, then every W samples."""
        x = rng.standard_normal(400)
        params = CusumParams(window=50, threshold=-1e18, theta_grid=CUSUM_GRID)
        times = [t for t, _ in cusum_scan(x, params)]
        assert times[0] == 50
        assert times[1] == 100

    def test_requires_single_channel(self, rng):
        """Test a two-channel signal is rejected."""
        params = CusumParams(window=10, threshold=1.0, theta_grid=CUSUM_GRID)
        with pytest.raises(DimensionMismatch):
            cusum_weighted(TimeSeries(rng.standard_normal((2, 100))), params)

    def test_too_short(self, rng):
        """Test fewer than 2W samples raise TooFewSamples."""
        params = CusumParams(window=50, threshold=1.0, theta_grid=CUSUM_GRID)
        with pytest.raises(TooFewSamples):
            cusum_scan(rng.standard_normal(60), params)


class TestKlWindowDistance:
    """Tests for the kernel density window distance."""

    def test_identical_windows(self, rng):
        """Test E_i = E_j gives 0."""
        window = rng.standard_normal((20, 2))
        assert kl_window_distance(window, window, 0.7) == pytest.approx(0.0, abs=1e-12)

    def test_two_point_closed_form(self):
        """Test W=1, d=1 reduces to (2 - 2 exp(-t^2 / 4 sigma^2)) / sqrt(4 pi sigma^2)."""
        sigma, t = 0.8, 1.3
        expected = (2 - 2 * math.exp(-t ** 2 / (4 * sigma ** 2))) / math.sqrt(4 * math.pi * sigma ** 2)
        assert kl_window_distance(np.array([0.0]), np.array([t]), sigma) == pytest.approx(expected)

    def test_symmetric(self, rng):
        """Test swapping the windows gives the same value."""
        a, b = rng.standard_normal((15, 3)), rng.standard_normal((15, 3))
        assert kl_window_distance(a, b, 1.1) == pytest.approx(kl_window_distance(b, a, 1.1))

    def test_matrix_matches_pairwise(self, rng):
        """Test the batched matrix agrees with pairwise evaluation."""
        ts = TimeSeries(rng.standard_normal((2, 100)))
        dm = window_distance_matrix(ts, 25, 0.9)
        windows = [ts.data[:, i * 25:(i + 1) * 25].T for i in range(4)]
        for i in range(4):
            for j in range(4):
                expected = 0.0 if i == j else kl_window_distance(windows[i], windows[j], 0.9)
                assert dm.values[i, j] == pytest.approx(expected, rel=1e-9, abs=1e-12)


class TestSigmaHeuristic:
    """Tests for kl_sigma_heuristic."""

    def test_two_points(self):
        """Test two points at distance 2 in one dimension give 2."""
        assert kl_sigma_heuristic(TimeSeries(np.array([[0.0, 2.0]]))) == pytest.approx(2.0)

    def test_unit_grid(self):
        """Test the grid 0..9 gives 1."""
        assert kl_sigma_heuristic(TimeSeries(np.arange(10.0))) == pytest.approx(1.0)

    def test_homogeneous(self, rng):
        """Test scaling the data by 3 scales the width by 3."""
        data = rng.standard_normal((2, 300))
        assert kl_sigma_heuristic(TimeSeries(3 * data)) == pytest.approx(3 * kl_sigma_heuristic(TimeSeries(data)))


class TestKohlmorgenLemm:
    """Tests for Viterbi segmentation over window densities."""

    def test_viterbi_hand_example(self):
        """Test two blocks of identical windows give one switch at C = 1."""
        values = np.array([[0, 0, 5, 5], [0, 0, 5, 5], [5, 5, 0, 0], [5, 5, 0, 0]], dtype=float)
        np.testing.assert_array_equal(viterbi_states(DistanceMatrix(values), 1.0), [0, 0, 2, 2])
        np.testing.assert_array_equal(viterbi_states(DistanceMatrix(values), 1e18), [0, 0, 0, 0])

    def test_infinite_penalty_is_empty(self, rng):
        """Test C = 1e18 keeps a single state."""
        ts = variance_step_series(rng, 500, 500)
        assert kohlmorgen_lemm(ts, KlParams(window=50, transition_penalty=1e18)).epoch_boundaries == []

    def test_zero_penalty_segments_heavily(self, rng):
        """Test C = 0 lets every epoch pick its own best state."""
        ts = TimeSeries(rng.standard_normal(1000))
        segmentation = kohlmorgen_lemm(ts, KlParams(window=50, sigma=0.5, transition_penalty=0.0))
        assert len(segmentation.epoch_boundaries) >= 10

    def test_two_regimes_at_intermediate_penalty(self, rng):
        """Test some penalty between the extremes recovers exactly the true boundary."""
        ts = variance_step_series(rng, 500, 500)
        detector = KohlmorgenLemmDetector(epoch_len=50)
        prepared = detector.prepare(ts)
        dm, _ = prepared
        scale = float(np.median(dm.values[~np.eye(dm.n, dtype=bool)]))

        found = [detector.segment(prepared, tau).epoch_boundaries for tau in scale * np.logspace(-3, 3, 61)]
        assert [10] in found

    def test_too_short(self, rng):
        """Test fewer than 2W samples raise TooFewSamples."""
        with pytest.raises(TooFewSamples):
            kohlmorgen_lemm(TimeSeries(rng.standard_normal(60)), KlParams(window=50))


class TestDetectorFactory:
    """Tests for create_detector and the tau interface."""

    def test_known_algorithms(self):
        """Test every algorithm name maps to its detector."""
        assert isinstance(create_detector("slcd", 50), SlcdDetector)
        assert isinstance(create_detector("cusum", 50, window=25), CusumDetector)
        assert isinstance(create_detector("kl", 50, sigma=1.0), KohlmorgenLemmDetector)

    def test_unknown_algorithm(self):
        """Test an unknown name raises InvalidArgument."""
        with pytest.raises(InvalidArgument):
            create_detector("pelt", 50)

    def test_short_epochs_rejected(self):
        """Test epoch_len below 2 is rejected."""
        with pytest.raises(InvalidArgument):
            create_detector("slcd", 1)

    def test_slcd_sweep(self, rng):
        """Test the SLCD sweep matches direct detection for every k."""
        ts = variance_step_series(rng, 1000, 1000)
        detector = SlcdDetector(epoch_len=100)
        prepared = detector.prepare(ts)
        taus = detector.default_taus(prepared)

        assert taus == [float(k) for k in range(2, 11)]
        for tau, segmentation in zip(taus, detector.sweep(ts, taus)):
            assert segmentation.epoch_boundaries == slcd_detect(ts, 20, int(tau)).epoch_boundaries

    def test_cusum_default_grid(self, rng):
        """Test the default grid is 49 evenly spaced multiples of the first window's variance."""
        ts = variance_step_series(rng)
        grid = CusumDetector(epoch_len=50).grid_for(ts)
        theta0 = float(np.var(ts.data[0, :50], ddof=1))

        assert len(grid) == 49
        assert grid[0] == pytest.approx(0.2 * theta0)
        assert grid[-1] == pytest.approx(5.0 * theta0)
        np.testing.assert_allclose(np.diff(grid), 0.1 * theta0)

    def test_configured_grid_wins(self, rng):
        """Test an explicit grid is used as given."""
        detector = CusumDetector(epoch_len=50, theta_grid=CUSUM_GRID)
        assert detector.grid_for(variance_step_series(rng)) == CUSUM_GRID


class TestCusumPrefix:
    """Tests that CUSUM detections only depend on samples already seen."""

    def test_default_grid_ignores_later_samples(self, rng):
        """Test appending samples after the first window leaves the default grid unchanged."""
        ts = variance_step_series(rng, 500, 1500, high=9.0)
        detector = CusumDetector(epoch_len=50)
        assert detector.grid_for(ts.subset(np.arange(1000))) == detector.grid_for(ts)

    @pytest.mark.parametrize("tau", [2.0, 5.0, 20.0])
    def test_prefix_detections_match(self, rng, tau):
        """Test a prefix of the series reproduces the full run's detections inside the prefix."""
        ts = variance_step_series(rng, 500, 1500, high=9.0)
        prefix = ts.subset(np.arange(1000))
        detector = CusumDetector(epoch_len=50)

        full = detector.detect(ts, tau)
        partial = detector.detect(prefix, tau)

        assert partial.n_epochs == 20
        assert partial.epoch_boundaries == [b for b in full.epoch_boundaries if b < partial.n_epochs]


class TestDetectorInvariants:
    """Tests for monotone sweeps and invariance under rescaling the data."""

    def test_slcd_boundaries_grow_with_k(self, small_cpd_dataset):
        """Test the SLCD boundary count never drops as k grows and boundaries stay nested."""
        ts, truth = small_cpd_dataset
        detector = SlcdDetector(epoch_len=ts.length // truth.n_epochs)
        segmentations = detector.sweep(ts, [float(k) for k in range(1, 16)])

        for fewer, more in zip(segmentations, segmentations[1:]):
            assert len(fewer.epoch_boundaries) <= len(more.epoch_boundaries)
            assert set(fewer.epoch_boundaries) <= set(more.epoch_boundaries)

    def test_cusum_detections_shrink_with_threshold(self, rng):
        """Test the CUSUM detection count never rises as h grows."""
        x = variance_step_series(rng).data[0]
        counts = [len(cusum_scan(x, CusumParams(window=50, threshold=h, theta_grid=CUSUM_GRID)))
                  for h in (0.5, 2.0, 5.0, 10.0, 25.0, 50.0)]
        assert counts == sorted(counts, reverse=True)
        assert counts[0] > counts[-1]

    def test_slcd_scale_invariant(self, small_cpd_dataset):
        """Test multiplying the data by 3 leaves every SLCD segmentation unchanged."""
        ts, truth = small_cpd_dataset
        detector = SlcdDetector(epoch_len=ts.length // truth.n_epochs)
        taus = [float(k) for k in range(2, 9)]

        original = detector.sweep(ts, taus)
        scaled = detector.sweep(ts.with_data(3.0 * ts.data), taus)
        assert [s.epoch_boundaries for s in scaled] == [s.epoch_boundaries for s in original]

    def test_cusum_scale_invariant(self, rng):
        """Test scaling the data by s and the grid by s^2 shifts every log ratio by -log s^2."""
        x = variance_step_series(rng).data[0]
        grid = np.asarray(CUSUM_GRID)
        for h in (2.0, 5.0, 10.0):
            original = cusum_scan(x, CusumParams(window=50, threshold=h, theta_grid=grid))
            scaled = cusum_scan(2.0 * x, CusumParams(window=50, threshold=h - math.log(4.0),
                                                     theta_grid=4.0 * grid))
            assert [t for t, _ in scaled] == [t for t, _ in original]
            np.testing.assert_allclose([s for _, s in scaled], [s - math.log(4.0) for _, s in original],
                                       atol=1e-9)

    def test_cusum_default_grid_follows_scale(self, rng):
        """Test the default grid scales by s^2 with the data."""
        ts = variance_step_series(rng)
        detector = CusumDetector(epoch_len=50)
        np.testing.assert_allclose(detector.grid_for(ts.with_data(2.0 * ts.data)),
                                   4.0 * np.asarray(detector.grid_for(ts)))

    def test_kl_scale_invariant(self, rng):
        """Test scaling the data by 2 with the automatic width leaves the default sweep unchanged."""
        ts = variance_step_series(rng, 500, 500)
        detector = KohlmorgenLemmDetector(epoch_len=50)
        prepared = detector.prepare(ts)
        prepared_scaled = detector.prepare(ts.with_data(2.0 * ts.data))

        assert prepared_scaled[1] == pytest.approx(2.0 * prepared[1])
        for tau, tau_scaled in zip(detector.default_taus(prepared), detector.default_taus(prepared_scaled)):
            assert tau_scaled == pytest.approx(0.5 * tau)
            assert (detector.segment(prepared_scaled, tau_scaled).epoch_boundaries
                    == detector.segment(prepared, tau).epoch_boundaries)
