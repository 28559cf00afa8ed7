"""Experiment, ROC and run configuration models."""
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from ..exceptions import InvalidArgument
from .synth import CpdSynthSpec

ALGORITHMS = ("slcd", "cusum", "kl")
ARMS = ("none", "ssa_max", "random_projection")


@dataclass(frozen=True)
class RocCurve:
    """
    ROC points sorted by FPR, with (0, 0) and (1, 1) included.

    Attributes:
        points: (FPR, TPR) pairs
        tau_values: Trade-off parameter per point (None for the endpoints)
    """
    points: List[Tuple[float, float]]
    tau_values: List[Optional[float]] = field(default_factory=list)

    def __post_init__(self):
        for fpr, tpr in self.points:
            if not (0.0 <= fpr <= 1.0 and 0.0 <= tpr <= 1.0):
                raise InvalidArgument("ROC rates must lie in [0, 1]")

    @property
    def fpr(self) -> List[float]:
        return [p[0] for p in self.points]

    @property
    def tpr(self) -> List[float]:
        return [p[1] for p in self.points]

    def to_dict(self) -> dict:
        return {'points': [list(p) for p in self.points], 'tau': list(self.tau_values)}


@dataclass(frozen=True)
class ExperimentSpec:
    """
    Change-point experiment over realizations of the synthetic generator.

    Attributes:
        generator: Synthetic dataset specification (its seed is the base seed)
        algorithm: One of slcd, cusum, kl
        arms: Preprocessing arms compared per realization
        tau_sweep: Trade-off values; empty selects the default grid
        n_realizations: Number of independent datasets
        seed: Base seed for realization streams
        detector_params: Extra detector settings (window, theta grid, ...)
        ssa_restarts: Restarts of the non-stationary projection search
        ssa_epochs: Epochs for the projection search; None uses the generator's epochs
    """
    generator: CpdSynthSpec
    algorithm: str = "slcd"
    arms: Tuple[str, ...] = ARMS
    tau_sweep: Sequence[float] = ()
    n_realizations: int = 10
    seed: int = 0
    detector_params: Dict = field(default_factory=dict)
    ssa_restarts: int = 3
    ssa_epochs: Optional[int] = None

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise InvalidArgument(f"unknown algorithm '{self.algorithm}'")
        arms = tuple(self.arms)
        if not arms or any(arm not in ARMS for arm in arms):
            raise InvalidArgument(f"arms must be drawn from {ARMS}")
        if self.n_realizations < 1:
            raise InvalidArgument("n_realizations must be positive")
        object.__setattr__(self, 'arms', arms)
        object.__setattr__(self, 'tau_sweep', tuple(self.tau_sweep))

    def to_dict(self) -> dict:
        return {
            'generator': self.generator.to_dict(),
            'algorithm': self.algorithm,
            'arms': list(self.arms),
            'tau_sweep': list(self.tau_sweep),
            'n_realizations': self.n_realizations,
            'seed': self.seed,
            'detector_params': dict(self.detector_params),
            'ssa_restarts': self.ssa_restarts,
            'ssa_epochs': self.ssa_epochs,
        }


@dataclass
class RunConfig:
    """Fully resolved configuration of one CLI run, written next to its outputs."""
    command: str
    seed: int
    out_dir: str
    jobs: int = 1
    inputs: Dict[str, Optional[str]] = field(default_factory=dict)
    options: Dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            'command': self.command,
            'seed': self.seed,
            'out_dir': self.out_dir,
            'jobs': self.jobs,
            'inputs': dict(self.inputs),
            'options': dict(self.options),
        }
