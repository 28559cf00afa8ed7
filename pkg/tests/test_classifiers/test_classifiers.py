"""Tests for LDA, rLDA and the stationarity-penalized classifier family."""
import math

import numpy as np
import pytest

from src.analytics import subspace_angle_degrees
from src.classifiers import (
    ascend,
    build_class_epoch_stats,
    cross_validate_alpha,
    fisher_ratio,
    grad_lda_train,
    lda_from_moments,
    lda_train,
    phi_ns,
    rand_lda_train,
    rlda_train,
    slda_cv_train,
    slda_gradient,
    slda_loss,
    slda_train,
    train_classifier,
    with_epoch_ids,
)
from src.exceptions import DegenerateSeparation, InvalidArgument, TooFewSamples
from src.models import ClassEpochStats, ClassifSynthSpec, TimeSeries, TradeoffConfig
from src.synth import gen_classif_dataset

ONE = np.array([[1.0]])


def one_dim_stats(epoch_means, pooled_means=(0.0, 1.0)):
    """Single-epoch 1-D class moments with unit variances."""
    return ClassEpochStats(
        epoch_means=[[np.array([m]) for m in epoch_means]],
        epoch_covs=[[ONE, ONE]],
        pooled_means=[np.array([m]) for m in pooled_means],
        pooled_covs=[ONE, ONE],
    )


def random_class_stats(rng, dim, n_epochs):
    def spd():
        a = rng.standard_normal((dim, dim))
        return a @ a.T + 0.5 * np.eye(dim)

    return ClassEpochStats(
        epoch_means=[[rng.standard_normal(dim), rng.standard_normal(dim)] for _ in range(n_epochs)],
        epoch_covs=[[spd(), spd()] for _ in range(n_epochs)],
        pooled_means=[rng.standard_normal(dim), rng.standard_normal(dim)],
        pooled_covs=[spd(), spd()],
    )


def central_differences(fn, w, h=1e-6):
    grad = np.zeros_like(w)
    for i in range(w.shape[0]):
        step = np.zeros_like(w)
        step[i] = h
        grad[i] = (fn(w + step) - fn(w - step)) / (2 * h)
    return grad


def held_out_error(classifier, dataset):
    return classifier.error_rate(dataset.test.data.T, dataset.test.labels)


def fails_after_first_call(value):
    """Objective returning `value` once, then overflowing on every later evaluation."""
    calls = []

    def objective(w):
        calls.append(w)
        if len(calls) > 1:
            raise FloatingPointError("overflow")
        return value

    return objective


def drifting_nuisance_series(seed, n_nuisance=24, n_epochs=7, per_class=9, gap=2.0, drift=2.0):
    """
    Source 0 separates the classes by `gap` and is stationary; every other source
    is pure nuisance whose mean jumps by N(0, drift^2) in each epoch, for both classes.
    """
    rng = np.random.default_rng(seed)
    blocks, labels, epoch_ids = [], [], []
    for epoch in range(n_epochs):
        offsets = np.concatenate([[0.0], drift * rng.standard_normal(n_nuisance)])
        for label, shift in ((1, 0.0), (2, gap)):
            block = rng.standard_normal((n_nuisance + 1, per_class)) + offsets[:, np.newaxis]
            block[0] += shift
            blocks.append(block)
            labels += [label] * per_class
            epoch_ids += [epoch] * per_class
    return TimeSeries(np.hstack(blocks), labels=np.array(labels), epoch_ids=np.array(epoch_ids))



class TestLda:
    """Tests for closed-form LDA."""

    def test_population_moments(self):
        """Test N(0, 1) vs N(1, 1) gives w = -0.5, b = 0.25."""
        clf = lda_from_moments(np.array([0.0]), np.array([1.0]), ONE, ONE)
        np.testing.assert_allclose(clf.w, [-0.5])
        assert clf.b == pytest.approx(0.25)
        # boundary at x = 0.5
        assert clf.decision_function(np.array([[0.5]]))[0] == pytest.approx(0.0)

    def test_identical_means(self):
        """Test coinciding class means raise DegenerateSeparation."""
        with pytest.raises(DegenerateSeparation):
            lda_from_moments(np.zeros(2), np.zeros(2), np.eye(2), np.eye(2))

    def test_isotropic_classes(self):
        """Test isotropic covariances give w along the mean difference."""
        clf = lda_from_moments(np.array([1.0, 2.0, 0.0]), np.array([0.0, 0.0, 1.0]), np.eye(3), np.eye(3))
        assert subspace_angle_degrees(clf.w, np.array([1.0, 2.0, -1.0])) < 1e-6

    def test_too_few_samples(self):
        """Test a class with one sample is rejected."""
        with pytest.raises(TooFewSamples):
            lda_train(np.zeros((1, 2)), np.ones((5, 2)))

    def test_simple_error(self, simple_dataset):
        """Test LDA on the simple family stays below 30% test error."""
        train = simple_dataset.train
        clf = lda_train(train.class_samples(1), train.class_samples(2))
        assert held_out_error(clf, simple_dataset) < 0.3


class TestRlda:
    """Tests for shrinkage LDA."""

    def test_zero_shrinkage_is_lda(self, simple_dataset):
        """Test gamma = 0 reproduces LDA."""
        class1, class2 = simple_dataset.train.class_samples(1), simple_dataset.train.class_samples(2)
        np.testing.assert_allclose(rlda_train(class1, class2, 0.0).w, lda_train(class1, class2).w)

    def test_full_shrinkage_is_mean_difference(self, simple_dataset):
        """Test gamma = 1 gives w along the mean difference."""
        class1, class2 = simple_dataset.train.class_samples(1), simple_dataset.train.class_samples(2)
        clf = rlda_train(class1, class2, 1.0)
        gap = class1.mean(axis=0) - class2.mean(axis=0)
        assert subspace_angle_degrees(clf.w, gap) < 1e-6
        assert clf.method == "rlda"

    def test_small_samples(self):
        """Test automatic shrinkage beats LDA on 6 samples per class in 6 dimensions."""
        wins = 0
        for seed in range(30):
            data = gen_classif_dataset(ClassifSynthSpec(variant="simple", seed=seed, n_train=6))
            class1, class2 = data.train.class_samples(1), data.train.class_samples(2)
            shrunk = held_out_error(rlda_train(class1, class2, "auto"), data)
            wins += shrunk <= held_out_error(lda_train(class1, class2), data)
        assert wins >= 21


class TestFisherAndPenalty:
    """Tests for fisher_ratio, phi_ns and slda_loss."""

    def test_fisher_one_dim(self):
        """Test means 0 and 1 with unit variances give 1/2."""
        assert fisher_ratio(np.array([1.0]), one_dim_stats([0.0, 1.0])) == pytest.approx(0.5)

    def test_fisher_orthogonal_direction(self):
        """Test a direction orthogonal to the mean gap gives 0."""
        stats = ClassEpochStats(
            epoch_means=[[np.array([1.0, 0.0]), np.zeros(2)]],
            epoch_covs=[[np.eye(2), np.eye(2)]],
            pooled_means=[np.array([1.0, 0.0]), np.zeros(2)],
            pooled_covs=[np.eye(2), np.eye(2)],
        )
        assert fisher_ratio(np.array([0.0, 1.0]), stats) == pytest.approx(0.0)

    def test_phi_at_equality(self):
        """Test an epoch equal to the pooled moments has zero divergence."""
        moments = (np.array([0.3, -0.2]), np.array([[2.0, 0.5], [0.5, 1.0]]))
        assert phi_ns(np.array([0.6, 0.8]), moments, moments) == pytest.approx(0.0, abs=1e-12)

    def test_phi_mean_shift(self):
        """Test a projected mean shift of 1 at unit variance gives 0.5."""
        assert phi_ns(np.array([1.0]), (np.array([1.0]), ONE), (np.array([0.0]), ONE)) == pytest.approx(0.5)

    def test_phi_variance_ratio(self):
        """Test r = 2 without a mean shift gives (1 - ln 2) / 2."""
        value = phi_ns(np.array([1.0]), (np.array([0.0]), 2 * ONE), (np.array([0.0]), ONE))
        assert value == pytest.approx(0.5 * (1 - math.log(2)))
        assert value == pytest.approx(0.153427, abs=1e-6)

    def test_phi_unknown_form(self):
        """Test an unknown divergence form is rejected."""
        with pytest.raises(InvalidArgument):
            phi_ns(np.array([1.0]), (np.zeros(1), ONE), (np.zeros(1), ONE), form="js")

    def test_loss_at_alpha_one(self, rng):
        """Test alpha = 1 gives the square root of the Fisher ratio."""
        stats = random_class_stats(rng, 4, 3)
        w = rng.standard_normal(4)
        assert slda_loss(w, 1.0, stats) == pytest.approx(math.sqrt(fisher_ratio(w, stats)))

    def test_loss_at_alpha_zero_stationary(self):
        """Test alpha = 0 on stationary epochs gives 0."""
        assert slda_loss(np.array([1.0]), 0.0, one_dim_stats([0.0, 1.0])) == pytest.approx(0.0, abs=1e-12)

    def test_loss_hand_example(self):
        """Test alpha = 0.5 with Fisher 0.5 and total penalty 0.2 gives 0.25355."""
        stats = one_dim_stats([math.sqrt(0.4), 1.0])
        assert slda_loss(np.array([1.0]), 0.5, stats) == pytest.approx(0.5 * math.sqrt(0.5) - 0.5 * 0.2)
        assert slda_loss(np.array([1.0]), 0.5, stats) == pytest.approx(0.25355, abs=1e-5)


class TestSldaGradient:
    """Tests for slda_gradient."""

    def test_matches_finite_differences(self, rng):
        """Test the analytic gradient on 50 random instances."""
        for _ in range(50):
            dim = int(rng.integers(2, 7))
            stats = random_class_stats(rng, dim, int(rng.integers(1, 4)))
            alpha = float(rng.uniform(0.0, 1.0))
            w = rng.standard_normal(dim)
            w /= np.linalg.norm(w)

            analytic = slda_gradient(w, alpha, stats)
            numeric = central_differences(lambda v: slda_loss(v, alpha, stats), w)
            assert np.linalg.norm(analytic - numeric) <= 1e-5 * max(np.linalg.norm(numeric), 1.0)

    def test_verbatim_form(self, rng):
        """Test the displayed-coefficient form has a matching gradient too."""
        stats = random_class_stats(rng, 3, 2)
        w = np.array([0.6, 0.0, 0.8])
        analytic = slda_gradient(w, 0.3, stats, form="verbatim")
        numeric = central_differences(lambda v: slda_loss(v, 0.3, stats, form="verbatim"), w)
        np.testing.assert_allclose(analytic, numeric, rtol=1e-5, atol=1e-7)

    def test_zero_at_stationary_unseparated_point(self):
        """Test no separation and no non-stationarity give a zero gradient."""
        moments = [np.zeros(2), np.zeros(2)]
        stats = ClassEpochStats(
            epoch_means=[moments, moments],
            epoch_covs=[[np.eye(2), np.eye(2)], [np.eye(2), np.eye(2)]],
            pooled_means=moments,
            pooled_covs=[np.eye(2), np.eye(2)],
        )
        np.testing.assert_allclose(slda_gradient(np.array([0.6, 0.8]), 0.4, stats), 0.0, atol=1e-12)


class TestEpochStats:
    """Tests for per-class epoch construction."""

    def test_class_sorted_series(self):
        """Test a series listing class 1 before class 2 still fills every epoch with both."""
        data = np.arange(40.0).reshape(2, 20)
        labels = [1] * 10 + [2] * 10
        stats = build_class_epoch_stats(TimeSeries(data, labels=labels), n_epochs=2)
        assert stats.n_epochs == 2
        np.testing.assert_allclose(stats.epoch_means[0][0], [2.0, 22.0])
        np.testing.assert_allclose(stats.epoch_means[1][1], [17.0, 37.0])

    def test_existing_ids_kept(self, rng):
        """Test generator epoch ids are not overwritten."""
        data = gen_classif_dataset(ClassifSynthSpec(variant="subspace_simple", seed=1)).train
        assert with_epoch_ids(data, 7) is data

    def test_needs_labels(self, rng):
        """Test unlabeled data is rejected."""
        with pytest.raises(InvalidArgument):
            build_class_epoch_stats(TimeSeries(rng.standard_normal((2, 20))), n_epochs=2)


class TestGradientFamily:
    """Tests for gradLDA, sLDA and randLDA training."""

    def test_alpha_one_matches_lda(self, simple_dataset, fast_tradeoff_config):
        """Test sLDA at alpha = 1 is within 2 points of LDA test error."""
        train = simple_dataset.train
        lda = lda_train(train.class_samples(1), train.class_samples(2))
        slda = slda_train(train, 1.0, fast_tradeoff_config)

        assert abs(held_out_error(slda, simple_dataset) - held_out_error(lda, simple_dataset)) <= 0.02
        assert np.linalg.norm(slda.w) == pytest.approx(1.0)

    def test_single_grid_value_is_gradlda(self, simple_dataset, fast_tradeoff_config):
        """Test the grid {1.0} reproduces gradLDA."""
        cfg = TradeoffConfig(alpha_grid=(1.0,), k_folds=3, restarts=2)
        clf, alpha = slda_cv_train(simple_dataset.train, cfg)
        grad = grad_lda_train(simple_dataset.train, cfg)

        assert alpha == 1.0
        np.testing.assert_allclose(clf.w, grad.w, atol=1e-8)
        assert clf.b == pytest.approx(grad.b, abs=1e-8)

    def test_randlda_alpha_one_is_gradlda(self, simple_dataset, fast_tradeoff_config):
        """Test randLDA at alpha = 1 follows the gradLDA path."""
        rand = rand_lda_train(simple_dataset.train, 1.0, 7, fast_tradeoff_config)
        grad = grad_lda_train(simple_dataset.train, fast_tradeoff_config)
        np.testing.assert_allclose(rand.w, grad.w)

    def test_randlda_deterministic(self, simple_dataset, fast_tradeoff_config):
        """Test the same penalty seed gives the same classifier."""
        first = rand_lda_train(simple_dataset.train, 0.6, 3, fast_tradeoff_config)
        second = rand_lda_train(simple_dataset.train, 0.6, 3, fast_tradeoff_config)
        np.testing.assert_array_equal(first.w, second.w)

    def test_randlda_on_easy_data(self, simple_dataset, fast_tradeoff_config):
        """Test alpha = 0.6 stays within 5 points of LDA on separable data."""
        train = simple_dataset.train
        lda = lda_train(train.class_samples(1), train.class_samples(2))
        rand = rand_lda_train(train, 0.6, 0, fast_tradeoff_config)
        assert held_out_error(rand, simple_dataset) <= held_out_error(lda, simple_dataset) + 0.05

    def test_class_one_on_positive_side(self, simple_dataset, fast_tradeoff_config):
        """Test the trained hyperplane puts the class 1 mean on the positive side."""
        clf = slda_train(simple_dataset.train, 0.5, fast_tradeoff_config)
        class1_mean = simple_dataset.train.class_samples(1).mean(axis=0)
        assert clf.decision_function(class1_mean[np.newaxis, :])[0] > 0

    def test_invalid_alpha(self, simple_dataset, fast_tradeoff_config):
        """Test alpha outside [0, 1] is rejected."""
        with pytest.raises(InvalidArgument):
            slda_train(simple_dataset.train, 1.5, fast_tradeoff_config)

    def test_cross_validation(self, fast_tradeoff_config):
        """Test every grid value gets a held-out error and the choice comes from the grid."""
        data = gen_classif_dataset(ClassifSynthSpec(variant="subspace_simple", seed=2)).train
        chosen, errors = cross_validate_alpha(
            data, fast_tradeoff_config, lambda train, alpha: slda_train(train, alpha, fast_tradeoff_config))

        assert set(errors) == set(fast_tradeoff_config.alpha_grid)
        assert chosen in fast_tradeoff_config.alpha_grid
        assert all(0.0 <= e <= 1.0 for e in errors.values())

    @pytest.mark.slow
    def test_ignores_drifting_source(self, fast_tradeoff_config):
        """Test alpha = 0.1 under strong drift stays within 20 degrees of the stationary direction."""
        angles = []
        for seed in range(5):
            data = gen_classif_dataset(ClassifSynthSpec(variant="subspace_simple", seed=seed, a_ns=6.0, n_train=200))
            clf = slda_train(data.train, 0.1, fast_tradeoff_config)
            angles.append(subspace_angle_degrees(clf.w, data.truth.discriminative_direction))
        assert np.median(angles) <= 20.0

    @pytest.mark.slow
    def test_cross_validation_penalizes_drift(self):
        """Test CV picks alpha < 1 in most seeds when many nuisance sources drift between epochs."""
        cfg = TradeoffConfig(alpha_grid=(0.1, 0.5, 1.0), k_folds=3, restarts=2, seed=0)
        chosen = [slda_cv_train(drifting_nuisance_series(seed), cfg)[1] for seed in range(5)]
        assert sum(alpha < 1.0 for alpha in chosen) >= 3


class TestSphereAscent:
    """Tests for the stopping status of the sphere ascent."""

    def test_stationary_start_converges(self):
        """Test a start with zero tangent gradient converges at once."""
        e0 = np.array([1.0, 0.0, 0.0])
        result = ascend(lambda w: float(w[0]), lambda w: e0, e0)

        assert result.converged
        assert not result.stalled
        assert result.iterations == 0

    def test_failed_line_search_is_not_converged(self):
        """Test a line search that rejects every step is reported as stalled, not converged."""
        start = np.array([0.0, 1.0, 0.0])
        result = ascend(fails_after_first_call(0.5), lambda w: np.array([1.0, 0.0, 0.0]), start)

        assert result.stalled
        assert not result.converged
        np.testing.assert_allclose(result.direction, start)
        assert result.value == 0.5


class TestTrainClassifier:
    """Tests for method dispatch."""

    @pytest.mark.parametrize("method", ["lda", "rlda", "gradlda", "randlda", "slda"])
    def test_every_method(self, method, simple_dataset, fast_tradeoff_config):
        """Test every method trains a classifier of the data's dimension."""
        clf, alpha = train_classifier(method, simple_dataset.train, fast_tradeoff_config, alpha=0.5)
        assert clf.dim == simple_dataset.train.dim
        if method in ("lda", "rlda"):
            assert alpha is None

    def test_unknown_method(self, simple_dataset):
        """Test an unknown method raises InvalidArgument."""
        with pytest.raises(InvalidArgument):
            train_classifier("svm", simple_dataset.train)

    def test_unlabeled_data(self, rng):
        """Test training data without labels is rejected."""
        with pytest.raises(InvalidArgument):
            train_classifier("lda", TimeSeries(rng.standard_normal((2, 10))))
