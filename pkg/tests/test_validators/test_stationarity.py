"""Tests for the likelihood-ratio test, d_s selection and BNISE."""
import math

import numpy as np
import pytest

from src.exceptions import DimensionMismatch, DomainError, InvalidArgument, InvalidDimension
from src.models import EpochStats, SsaConfig, TimeSeries
from src.ssa import random_projection, ssa_loss
from src.stats import epoch_moments, partition_epochs, whiten
from src.validators import (
    bnise,
    bnise_report,
    chi2_sf,
    dof,
    held_out_losses,
    lr_statistic,
    lr_test,
    select_ds,
)


def standard_epochs(n_epochs, d, count=100):
    return [EpochStats(mean=np.zeros(d), cov=np.eye(d), count=count) for _ in range(n_epochs)]


class TestLrStatistic:
    """Tests for lr_statistic."""

    def test_exact_null_is_zero(self):
        """Test standardized epochs give Lambda = 0."""
        assert lr_statistic(standard_epochs(5, 2), 2) == pytest.approx(0.0, abs=1e-9)

    def test_single_epoch_variance_two(self):
        """Test N=100, mean 0, variance 2 gives 100 (1 - ln 2)."""
        stats = [EpochStats(mean=np.zeros(1), cov=np.array([[2.0]]), count=100)]
        value = lr_statistic(stats, 1)
        assert value == pytest.approx(100 * (1 - math.log(2)))
        assert value == pytest.approx(30.685, abs=1e-3)

    def test_displayed_constant(self):
        """Test the displayed form subtracts d times the epoch count."""
        stats = standard_epochs(1, 1)
        assert lr_statistic(stats, 1, constant="displayed") == pytest.approx(99.0)

    def test_unknown_constant(self):
        """Test an unknown constant form is rejected."""
        with pytest.raises(InvalidArgument):
            lr_statistic(standard_epochs(2, 1), 1, constant="other")

    def test_dimension_mismatch(self):
        """Test moments of the wrong dimension are rejected."""
        with pytest.raises(DimensionMismatch):
            lr_statistic(standard_epochs(2, 2), 1)

    def test_epoch_order_irrelevant(self, rng):
        """Test reordering the epochs leaves Lambda unchanged."""
        stats = []
        for count in (80, 100, 120, 90, 110):
            a = rng.standard_normal((2, 2))
            stats.append(EpochStats(mean=0.3 * rng.standard_normal(2), cov=a @ a.T + 0.5 * np.eye(2), count=count))

        value = lr_statistic(stats, 2)
        assert lr_statistic(stats[::-1], 2) == pytest.approx(value, rel=1e-12)
        assert lr_statistic([stats[i] for i in (2, 0, 4, 1, 3)], 2) == pytest.approx(value, rel=1e-12)


class TestDof:
    """Tests for dof."""

    @pytest.mark.parametrize("n_epochs, d_n, expected", [(200, 1, 400), (2, 2, 10), (30, 6, 810)])
    def test_values(self, n_epochs, d_n, expected):
        """Test N d (d + 3) / 2."""
        assert dof(n_epochs, d_n) == expected

    def test_non_positive(self):
        """Test zero epochs are rejected."""
        with pytest.raises(InvalidArgument):
            dof(0, 1)


class TestChi2Sf:
    """Tests for chi2_sf."""

    def test_zero(self):
        """Test the survival function at 0 is 1."""
        assert chi2_sf(0.0, 3) == pytest.approx(1.0)

    def test_five_percent_point(self):
        """Test chi2_sf(3.841, 1) is 0.05."""
        assert chi2_sf(3.841, 1) == pytest.approx(0.05, abs=5e-4)

    def test_large_dof_median(self):
        """Test the survival function near the mean of a 400-dof chi-square is about one half."""
        assert chi2_sf(400.0, 400) == pytest.approx(0.49, abs=0.01)

    def test_domain(self):
        """Test negative or infinite x and zero dof are rejected."""
        with pytest.raises(DomainError):
            chi2_sf(-1.0, 2)
        with pytest.raises(DomainError):
            chi2_sf(float("inf"), 2)
        with pytest.raises(DomainError):
            chi2_sf(1.0, 0)

    @pytest.mark.parametrize("k", [1, 2, 5, 10, 50, 100])
    def test_sf_at_dof(self, k):
        """Test chi2_sf(k, k) lies in (0.3, 0.6)."""
        assert 0.3 < chi2_sf(float(k), k) < 0.6


class TestLrTest:
    """Tests for lr_test."""

    def test_null_accepts(self):
        """Test standardized epochs give p = 1."""
        result = lr_test(standard_epochs(10, 2), 2)
        assert result.statistic == pytest.approx(0.0, abs=1e-9)
        assert result.dof == 50
        assert result.p_value == pytest.approx(1.0)

    def test_strong_variance_change_rejects(self):
        """Test alternating variances 0.2 and 5 are rejected at 1%."""
        stats = [
            EpochStats(mean=np.zeros(1), cov=np.array([[0.2 if i % 2 else 5.0]]), count=100)
            for i in range(10)
        ]
        result = lr_test(stats, 1)
        assert result.rejects(0.01)


class TestSelectDs:
    """Tests for select_ds."""

    def test_zero_threshold_keeps_everything(self, iid_series, fast_ssa_config):
        """Test p_threshold = 0 chooses D - 1."""
        selection = select_ds(iid_series, fast_ssa_config, p_threshold=0.0)
        assert selection.chosen_ds == iid_series.dim - 1
        assert [ds for ds, _ in selection.per_ds_pvalues] == [1, 2]

    def test_iid_keeps_all_but_one_at_default_threshold(self, iid_series, fast_ssa_config):
        """Test i.i.d. data at the default 1% threshold chooses D - 1."""
        selection = select_ds(iid_series, fast_ssa_config)
        assert selection.chosen_ds == iid_series.dim - 1

    def test_nonstationary_source_is_excluded(self, nonstationary_series, fast_ssa_config):
        """Test no stationary dimension above the true one is accepted."""
        selection = select_ds(nonstationary_series, fast_ssa_config, p_threshold=0.01)
        assert selection.chosen_ds <= 3
        assert all(0.0 <= p <= 1.0 for _, p in selection.per_ds_pvalues)
        assert selection.to_dict()['chosen_ds'] == selection.chosen_ds

    def test_invalid_threshold(self, iid_series, fast_ssa_config):
        """Test thresholds outside [0, 1) are rejected."""
        with pytest.raises(InvalidArgument):
            select_ds(iid_series, fast_ssa_config, p_threshold=1.0)


class TestBnise:
    """Tests for the baseline-normalized stationary error."""

    def test_single_permutation_rejected(self, nonstationary_series, fast_ssa_config):
        """Test n_permutations = 1 raises InvalidArgument."""
        with pytest.raises(InvalidArgument):
            bnise(nonstationary_series, 2, 1, fast_ssa_config)

    def test_dimension_rejected(self, nonstationary_series, fast_ssa_config):
        """Test d = D raises InvalidDimension."""
        with pytest.raises(InvalidDimension):
            bnise(nonstationary_series, 4, 3, fast_ssa_config)

    def test_held_out_losses_shape(self, nonstationary_series, fast_ssa_config):
        """Test one non-negative loss per stationary dimension."""
        cfg = SsaConfig(n_epochs=10, n_restarts=1, max_iterations=100)
        losses = held_out_losses(nonstationary_series, 2, cfg)
        assert losses.shape == (2,)
        assert np.all(np.isfinite(losses))

    def test_report(self, nonstationary_series):
        """Test the value is the sum of the z-scores and is reproducible."""
        cfg = SsaConfig(n_epochs=10, n_restarts=1, max_iterations=100, seed=4)
        report = bnise_report(nonstationary_series, 2, 3, cfg)

        assert report.dims == [1, 2]
        assert report.value == pytest.approx(sum(report.z_scores))
        assert bnise(nonstationary_series, 2, 3, cfg) == report.value
        assert report.to_dict()['bnise'] == report.value

    def test_held_out_losses_ignore_affine_change_of_second_half(self, nonstationary_series):
        """Test rescaling and shifting the held-out half leaves its losses unchanged."""
        cfg = SsaConfig(n_epochs=10, n_restarts=1, max_iterations=100, seed=2)
        half = nonstationary_series.length // 2
        data = nonstationary_series.data.copy()
        data[:, half:] = 3.0 * data[:, half:] + np.array([1.0, -2.0, 0.5, 4.0])[:, None]

        expected = held_out_losses(nonstationary_series, 2, cfg)
        shifted = held_out_losses(nonstationary_series.with_data(data), 2, cfg)
        np.testing.assert_allclose(shifted, expected, rtol=1e-6, atol=1e-12)

    @pytest.mark.slow
    def test_iid_stays_within_three(self):
        """Test BNISE on i.i.d. data lies in [-3, 3] for most seeds."""
        values = []
        for seed in range(5):
            ts = TimeSeries(np.random.default_rng(seed).standard_normal((3, 2000)))
            cfg = SsaConfig(n_epochs=10, n_restarts=1, max_iterations=100, seed=seed)
            values.append(bnise(ts, 1, 10, cfg))
        assert sum(-3.0 <= v <= 3.0 for v in values) >= 4

    @pytest.mark.slow
    def test_too_many_stationary_dimensions_is_large(self):
        """Test asking for two stationary sources when only one exists gives BNISE >= 5."""
        rng = np.random.default_rng(11)
        n_blocks, block_len = 20, 200
        blocks = np.arange(n_blocks)
        sources = rng.standard_normal((3, n_blocks * block_len))
        sources[1] *= np.repeat(np.where(blocks % 2 == 0, np.sqrt(0.2), np.sqrt(5.0)), block_len)
        sources[2] *= np.repeat(np.where(blocks % 3 == 2, np.sqrt(3.0), np.sqrt(0.3)), block_len)
        mixing = np.linalg.qr(rng.standard_normal((3, 3)))[0]

        cfg = SsaConfig(n_epochs=10, n_restarts=2, max_iterations=200, seed=0)
        assert bnise(TimeSeries(mixing @ sources), 2, 5, cfg) >= 5.0


class TestLossAgreement:
    """Tests relating the test statistic to the SSA loss."""

    def test_same_argmax_over_rotations(self, nonstationary_series):
        """Test Lambda and the SSA loss rank 20 random projections identically."""
        part = partition_epochs(nonstationary_series, 20)
        white, _ = whiten(nonstationary_series, part)
        stats = epoch_moments(white, part)

        losses, statistics = [], []
        for seed in range(20):
            B = random_projection(4, 2, seed).matrix
            losses.append(ssa_loss(B, stats))
            statistics.append(lr_statistic([s.project(B) for s in stats], 2))

        assert int(np.argmax(losses)) == int(np.argmax(statistics))
        assert int(np.argmin(losses)) == int(np.argmin(statistics))
