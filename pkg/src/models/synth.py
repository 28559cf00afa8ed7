"""Synthetic data specification models."""
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional

import numpy as np

from ..exceptions import InvalidArgument, InvalidVariantParams
from .time_series import TimeSeries

MARKOV_STATES = 5
MARKOV_STAY = 0.9
MARKOV_SWITCH = 0.025


@dataclass(frozen=True)
class CpdSynthSpec:
    """
    Mixture of stationary sources and Markov-switching non-stationary sources.

    Attributes:
        D: Total number of sources/channels
        d_s: Stationary sources
        d_n: Non-stationary sources
        q: Power change; variances lie on a log grid between 1/q and q
        n_epochs: Number of epochs
        epoch_len: Samples per epoch
        seed: Base seed
    """
    D: int
    d_s: int
    d_n: int
    q: float = 2.0
    n_epochs: int = 200
    epoch_len: int = 100
    seed: int = 0

    def __post_init__(self):
        if self.d_s < 0 or self.d_n < 0 or self.d_s + self.d_n != self.D:
            raise InvalidArgument(f"d_s + d_n must equal D (got {self.d_s} + {self.d_n} != {self.D})")
        if self.D < 1:
            raise InvalidArgument("D must be positive")
        if self.q < 1:
            raise InvalidArgument("q must be >= 1")
        if self.n_epochs < 1 or self.epoch_len < 2:
            raise InvalidArgument("need n_epochs >= 1 and epoch_len >= 2")

    @property
    def length(self) -> int:
        return self.n_epochs * self.epoch_len

    def to_dict(self) -> dict:
        return {
            'D': self.D, 'd_s': self.d_s, 'd_n': self.d_n, 'q': self.q,
            'n_epochs': self.n_epochs, 'epoch_len': self.epoch_len, 'seed': self.seed,
        }


@dataclass
class MarkovModelState:
    """Current active model and the fixed five-state transition matrix."""
    current: int = 0
    transition: np.ndarray = field(default_factory=lambda: (
        np.full((MARKOV_STATES, MARKOV_STATES), MARKOV_SWITCH)
        + np.eye(MARKOV_STATES) * (MARKOV_STAY - MARKOV_SWITCH)
    ))

    def step(self, rng: np.random.Generator) -> int:
        """Advance the chain by one epoch and return the new state."""
        self.current = int(rng.choice(MARKOV_STATES, p=self.transition[self.current]))
        return self.current


class ClassifVariant(Enum):
    """Classification simulation families."""
    SIMPLE = "simple"
    OUTLIERS = "outliers"
    HARD = "hard"
    TAPERED = "tapered"
    SUBSPACE_SIMPLE = "subspace_simple"
    SUBSPACE_REALISTIC = "subspace_realistic"
    TRANSFER_SMALL = "transfer_small"
    TRANSFER_LARGE = "transfer_large"


@dataclass(frozen=True)
class ClassifSynthSpec:
    """
    Classification simulation setup.

    Attributes:
        variant: Simulation family
        seed: Base seed
        separation: Simple class-mean gap; Hard single-source gap; Tapered 2nd/3rd source gap
        outlier_rate: Fraction of training samples per class receiving an outlier
        a_ns: Non-stationarity level for the subspace simple setup (>= 1)
        kappa: Variance of the per-epoch mean offsets a_i
        tau: Class gap on the non-stationary source
        b: Class gap on the stationary separable source
        c: Class gap on the noise sources
        a8: Fixed offset of the held-out test epoch (transfer setups)
        n_train: Training points per class (sanity setups) or per class per epoch
        n_test: Test points per class
        n_epochs: Training epochs (subspace and transfer setups)
    """
    variant: ClassifVariant
    seed: int = 0
    separation: Optional[float] = None
    outlier_rate: Optional[float] = None
    a_ns: float = 2.0
    kappa: Optional[float] = None
    tau: Optional[float] = None
    b: Optional[float] = None
    c: Optional[float] = None
    a8: float = 1.0
    n_train: Optional[int] = None
    n_test: int = 150
    n_epochs: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, 'variant', ClassifVariant(self.variant))
        for name, value in self.resolved().items():
            if value is None:
                continue
            if name in ('separation', 'kappa') and value < 0:
                raise InvalidVariantParams(f"{name} must be non-negative")
            if name == 'outlier_rate' and not 0 <= value <= 1:
                raise InvalidVariantParams("outlier_rate must lie in [0, 1]")
            if name in ('n_train', 'n_test', 'n_epochs') and value < 2:
                raise InvalidVariantParams(f"{name} must be at least 2")
        if self.variant == ClassifVariant.SUBSPACE_SIMPLE and self.a_ns < 1:
            raise InvalidVariantParams("a_ns must be >= 1")
        if self.variant in (ClassifVariant.TRANSFER_SMALL, ClassifVariant.TRANSFER_LARGE):
            if not 0 <= self.a8 <= 3.0:
                raise InvalidVariantParams("a8 must lie in [0, 3]")

    def resolved(self) -> dict:
        """Variant defaults filled in for every unset parameter."""
        defaults = VARIANT_DEFAULTS[ClassifVariant(self.variant)]
        values = {
            'separation': self.separation, 'outlier_rate': self.outlier_rate,
            'kappa': self.kappa, 'tau': self.tau, 'b': self.b, 'c': self.c,
            'n_train': self.n_train, 'n_test': self.n_test, 'n_epochs': self.n_epochs,
        }
        return {k: (defaults.get(k) if v is None else v) for k, v in values.items()}

    def to_dict(self) -> dict:
        return {'variant': self.variant.value, 'seed': self.seed, 'a_ns': self.a_ns,
                'a8': self.a8, **self.resolved()}


VARIANT_DEFAULTS = {
    ClassifVariant.SIMPLE: {'separation': 0.7, 'outlier_rate': 0.0, 'n_train': 75},
    ClassifVariant.OUTLIERS: {'separation': 0.7, 'outlier_rate': 0.02, 'n_train': 75},
    ClassifVariant.HARD: {'separation': 1.0, 'n_train': 75},
    ClassifVariant.TAPERED: {'separation': 0.1, 'n_train': 75},
    ClassifVariant.SUBSPACE_SIMPLE: {'separation': 0.7, 'n_train': 50, 'n_epochs': 3},
    ClassifVariant.SUBSPACE_REALISTIC: {'kappa': 1.0, 'tau': 2.0, 'b': 1.2, 'c': 0.2,
                                        'n_train': 11, 'n_epochs': 7},
    ClassifVariant.TRANSFER_SMALL: {'kappa': 0.5, 'tau': 2.0, 'b': 1.2, 'c': 0.2,
                                    'n_train': 11, 'n_epochs': 7},
    ClassifVariant.TRANSFER_LARGE: {'kappa': 0.5, 'tau': 1.0, 'b': 2.0, 'c': 0.0,
                                    'n_train': 11, 'n_epochs': 7},
}


@dataclass(frozen=True)
class GroundTruth:
    """
    Generator ground truth.

    Attributes:
        mixing: Orthogonal mixing matrix A (columns: stationary sources first)
        change_epochs: Epoch boundaries where the active model changes
        stationary_projection: Rows spanning the true stationary sources, if defined
        states: Active Markov model per epoch, if defined
        discriminative_direction: True stationary-discriminative direction, if defined
    """
    mixing: np.ndarray
    change_epochs: List[int] = field(default_factory=list)
    stationary_projection: Optional[np.ndarray] = None
    states: Optional[List[int]] = None
    discriminative_direction: Optional[np.ndarray] = None

    def to_dict(self) -> dict:
        def listify(value):
            return value.tolist() if isinstance(value, np.ndarray) else value

        return {
            'mixing': listify(self.mixing),
            'change_epochs': list(self.change_epochs),
            'stationary_projection': listify(self.stationary_projection),
            'states': list(self.states) if self.states is not None else None,
            'discriminative_direction': listify(self.discriminative_direction),
        }


@dataclass(frozen=True)
class ClassifDataset:
    """Labeled training and test series of one classification simulation."""
    train: TimeSeries
    test: TimeSeries
    truth: GroundTruth
