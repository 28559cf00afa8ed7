"""Pytest configuration and fixtures."""
import numpy as np
import pytest

from src.models import ClassifSynthSpec, CpdSynthSpec, SsaConfig, TimeSeries, TradeoffConfig
from src.synth import gen_classif_dataset, gen_cpd_dataset


@pytest.fixture
def rng():
    """Deterministic numpy generator for test data."""
    return np.random.default_rng(1234)


@pytest.fixture
def iid_series(rng):
    """Three channels of i.i.d. correlated Gaussian noise."""
    mixing = np.array([[1.0, 0.3, 0.0], [0.2, 2.0, 0.1], [0.0, 0.5, 0.7]])
    return TimeSeries(mixing @ rng.standard_normal((3, 3000)))


@pytest.fixture
def nonstationary_series(rng):
    """
    Four channels: three stationary sources and one whose variance switches every epoch.

    The fourth source alternates between variance 0.2 and 5 over 20 epochs of 150 samples.
    """
    epochs, epoch_len = 20, 150
    sources = rng.standard_normal((4, epochs * epoch_len))
    scale = np.repeat(np.where(np.arange(epochs) % 2 == 0, np.sqrt(0.2), np.sqrt(5.0)), epoch_len)
    sources[3] *= scale
    mixing = np.linalg.qr(rng.standard_normal((4, 4)))[0]
    return TimeSeries(mixing @ sources)


@pytest.fixture
def small_cpd_spec():
    """Small change-point generator setting that runs in well under a second."""
    return CpdSynthSpec(D=5, d_s=3, d_n=2, q=3.0, n_epochs=40, epoch_len=60, seed=3)


@pytest.fixture
def small_cpd_dataset(small_cpd_spec):
    """Generated series and ground truth for small_cpd_spec."""
    return gen_cpd_dataset(small_cpd_spec)


@pytest.fixture
def simple_dataset():
    """Simple sanity classification dataset."""
    return gen_classif_dataset(ClassifSynthSpec(variant="simple", seed=5))


@pytest.fixture
def fast_ssa_config():
    """Optimizer settings small enough for unit tests."""
    return SsaConfig(n_epochs=20, n_restarts=2, max_iterations=200, seed=0)


@pytest.fixture
def fast_tradeoff_config():
    """sLDA settings small enough for unit tests."""
    return TradeoffConfig(alpha_grid=(0.1, 1.0), k_folds=3, restarts=2, seed=0)
