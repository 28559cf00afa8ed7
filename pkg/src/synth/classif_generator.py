"""Two-class simulation families for the linear classifiers."""
import logging
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from ..models.synth import ClassifDataset, ClassifSynthSpec, ClassifVariant, GroundTruth
from ..models.time_series import TimeSeries
from .rng import Stream, make_rng, random_orthogonal_matrix

logger = logging.getLogger(__name__)

SANITY_DIM = 6
OUTLIER_SCALE = 20.0
TAPERED_TOP_GAP = 1.1
WEAK_GAP = 0.2


def marginalized_mean_samples(alpha: float, beta: float, sigma0: float, n: int,
                              rng: np.random.Generator) -> np.ndarray:
    """
    Draw theta ~ N(alpha, beta^2) per sample, then x ~ N(theta, sigma0^2).

    Marginally x ~ N(alpha, sigma0^2 + beta^2).
    """
    theta = rng.normal(alpha, beta, size=n)
    return rng.normal(theta, sigma0)


def _class_block(gaps: np.ndarray, n: int, rng: np.random.Generator,
                 offsets: Optional[np.ndarray] = None) -> Tuple[np.ndarray, np.ndarray]:
    """Unit-variance sources, class 1 centred at offsets and class 2 at offsets + gaps."""
    offsets = np.zeros_like(gaps) if offsets is None else offsets
    class1 = rng.standard_normal((gaps.shape[0], n)) + offsets[:, np.newaxis]
    class2 = rng.standard_normal((gaps.shape[0], n)) + (offsets + gaps)[:, np.newaxis]
    return np.hstack([class1, class2]), np.repeat([1, 2], n)


def _unit(vector: np.ndarray) -> np.ndarray:
    return vector / np.linalg.norm(vector)


def _sanity_gaps(spec: ClassifSynthSpec, params: dict) -> np.ndarray:
    if spec.variant in (ClassifVariant.SIMPLE, ClassifVariant.OUTLIERS):
        return np.full(SANITY_DIM, params['separation'])
    if spec.variant == ClassifVariant.HARD:
        return np.array([params['separation']] + [WEAK_GAP] * (SANITY_DIM - 1))
    # tapered: one strong source, two swept, the rest weak
    return np.array([TAPERED_TOP_GAP, params['separation'], params['separation']]
                    + [WEAK_GAP] * (SANITY_DIM - 3))


def _add_outliers(sources: np.ndarray, labels: np.ndarray, rate: float, seed: int) -> np.ndarray:
    """Add N(0, (20 * data scale)^2 I) to a fraction `rate` of each class's samples."""
    if rate <= 0:
        return sources
    rng = make_rng(seed, Stream.OUTLIERS, 0)
    scale = OUTLIER_SCALE * float(np.std(sources))
    sources = sources.copy()
    for label in (1, 2):
        members = np.flatnonzero(labels == label)
        count = int(round(rate * members.size))
        if count == 0:
            continue
        chosen = rng.choice(members, size=count, replace=False)
        sources[:, chosen] += rng.normal(0.0, scale, size=(sources.shape[0], count))
    return sources


def _gen_sanity(spec: ClassifSynthSpec, params: dict, rng: np.random.Generator) -> ClassifDataset:
    gaps = _sanity_gaps(spec, params)
    mixing = random_orthogonal_matrix(SANITY_DIM, rng)
    train, train_labels = _class_block(gaps, params['n_train'], rng)
    test, test_labels = _class_block(gaps, params['n_test'], rng)
    if spec.variant == ClassifVariant.OUTLIERS:
        train = _add_outliers(train, train_labels, params['outlier_rate'], spec.seed)

    truth = GroundTruth(mixing=mixing, discriminative_direction=_unit(mixing @ gaps))
    return ClassifDataset(
        train=TimeSeries(mixing @ train, labels=train_labels),
        test=TimeSeries(mixing @ test, labels=test_labels),
        truth=truth,
    )


def _epochs(blocks: List[Tuple[np.ndarray, np.ndarray]]) -> TimeSeries:
    data = np.hstack([block for block, _ in blocks])
    labels = np.concatenate([labels for _, labels in blocks])
    epoch_ids = np.concatenate([np.full(labels.shape[0], i) for i, (_, labels) in enumerate(blocks)])
    return TimeSeries(data, labels=labels, epoch_ids=epoch_ids)


def _gen_subspace_simple(spec: ClassifSynthSpec, params: dict, rng: np.random.Generator) -> ClassifDataset:
    """
    Three sources: stationary without separation, stationary with separation, and
    separated but with a drifting inner epoch whose class means are drawn from
    U[-a_ns - 1, 0] and U[1, a_ns].
    """
    n, n_epochs = params['n_train'], params['n_epochs']
    mixing = random_orthogonal_matrix(3, rng)
    gaps = np.array([0.0, params['separation'], 1.0])
    inner = n_epochs // 2

    blocks = []
    for epoch in range(n_epochs):
        if epoch == inner and n_epochs > 2:
            low = rng.uniform(-spec.a_ns - 1.0, 0.0)
            high = rng.uniform(1.0, spec.a_ns)
            blocks.append(_class_block(np.array([0.0, params['separation'], high - low]), n, rng,
                                       offsets=np.array([0.0, 0.0, low])))
        else:
            blocks.append(_class_block(gaps, n, rng))
    test, test_labels = _class_block(gaps, params['n_test'], rng)

    truth = GroundTruth(
        mixing=mixing,
        stationary_projection=mixing[:, :2].T,
        discriminative_direction=mixing[:, 1].copy(),
    )
    return ClassifDataset(
        train=_epochs([(mixing @ block, labels) for block, labels in blocks]),
        test=TimeSeries(mixing @ test, labels=test_labels),
        truth=truth,
    )


def _gen_realistic(spec: ClassifSynthSpec, params: dict, rng: np.random.Generator) -> ClassifDataset:
    """
    Six sources: source 1 carries a per-epoch mean offset a_i ~ N(0, kappa) on both
    classes with gap tau, source 2 is stationary with gap b, sources 3-6 are
    stationary with gap c. The large transfer setup replaces source 6 with a
    second copy of source 2. Transfer setups test on an extra epoch with offset a8;
    the realistic setup tests on a fresh epoch.
    """
    n, n_epochs = params['n_train'], params['n_epochs']
    large = spec.variant == ClassifVariant.TRANSFER_LARGE
    transfer = spec.variant in (ClassifVariant.TRANSFER_SMALL, ClassifVariant.TRANSFER_LARGE)

    gaps = np.array([params['tau'], params['b']] + [params['c']] * 4)
    separable = [1, 5] if large else [1]
    if large:
        gaps[5] = params['b']
    mixing = random_orthogonal_matrix(6, rng)

    def offsets(shift: float) -> np.ndarray:
        values = np.zeros(6)
        values[0] = shift
        return values

    spread = np.sqrt(params['kappa'])
    blocks = [_class_block(gaps, n, rng, offsets(rng.normal(0.0, spread))) for _ in range(n_epochs)]
    test_shift = spec.a8 if transfer else rng.normal(0.0, spread)
    test, test_labels = _class_block(gaps, params['n_test'], rng, offsets(test_shift))

    direction = np.zeros(6)
    direction[separable] = 1.0
    truth = GroundTruth(
        mixing=mixing,
        stationary_projection=mixing[:, 1:].T,
        discriminative_direction=_unit(mixing @ direction),
    )
    return ClassifDataset(
        train=_epochs([(mixing @ block, labels) for block, labels in blocks]),
        test=TimeSeries(mixing @ test, labels=test_labels),
        truth=truth,
    )


GENERATORS: Dict[ClassifVariant, Callable] = {
    ClassifVariant.SIMPLE: _gen_sanity,
    ClassifVariant.OUTLIERS: _gen_sanity,
    ClassifVariant.HARD: _gen_sanity,
    ClassifVariant.TAPERED: _gen_sanity,
    ClassifVariant.SUBSPACE_SIMPLE: _gen_subspace_simple,
    ClassifVariant.SUBSPACE_REALISTIC: _gen_realistic,
    ClassifVariant.TRANSFER_SMALL: _gen_realistic,
    ClassifVariant.TRANSFER_LARGE: _gen_realistic,
}


def gen_classif_dataset(spec: ClassifSynthSpec) -> ClassifDataset:
    """
    Generate labeled training and test data for one simulation family.

    Sources are mixed by a random orthogonal matrix. Multi-epoch families carry
    epoch ids on the training series; the ground truth holds the mixing matrix,
    the stationary sources' span and the stationary discriminative direction.
    """
    params = spec.resolved()
    rng = make_rng(spec.seed, Stream.CLASSIF_GENERATOR, 0)
    dataset = GENERATORS[spec.variant](spec, params, rng)
    logger.debug(f"Generated {spec.variant.value}: {dataset.train.length} training and "
                 f"{dataset.test.length} test samples")
    return dataset
