"""Load and manage experiment suite configurations."""
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional

import yaml

from .settings import EXPERIMENT_SUITES_DIR

logger = logging.getLogger(__name__)

SUITE_KINDS = ("cpd", "p_values", "classif")


class SuiteConfig:
    """Represents one experiment suite declared in YAML."""

    def __init__(self, config_dict: dict, suite_name: str):
        """Initialize suite config from dictionary."""
        self.suite_name = suite_name
        self._config = config_dict

    @property
    def kind(self) -> str:
        """Runner family: cpd, p_values or classif."""
        return self._config.get('kind', 'cpd')

    @property
    def description(self) -> str:
        return self._config.get('description', '')

    @property
    def generator(self) -> Dict[str, Any]:
        """Base generator parameters shared by every sweep point."""
        return dict(self._config.get('generator', {}))

    @property
    def algorithm(self) -> Optional[str]:
        return self._config.get('algorithm')

    @property
    def arms(self) -> List[str]:
        return list(self._config.get('arms', ['none', 'ssa_max', 'random_projection']))

    @property
    def detector(self) -> Dict[str, Any]:
        """Detector settings (window, theta grid, epochs, ...)."""
        return dict(self._config.get('detector', {}))

    @property
    def sweep(self) -> Optional[Dict[str, Any]]:
        """First swept parameter, or None."""
        sweeps = self.sweeps
        return sweeps[0] if sweeps else None

    @property
    def sweeps(self) -> List[Dict[str, Any]]:
        """
        Swept parameters as {'param', 'values', 'hold'} dicts.

        'hold' names the dimension kept fixed when d_s or d_n is swept (D by default).
        Accepts a single 'sweep' mapping or a 'sweeps' list.
        """
        raw = self._config.get('sweeps')
        if raw is None:
            raw = [self._config['sweep']] if self._config.get('sweep') else []
        return [
            {'param': s['param'], 'values': list(s['values']), 'hold': s.get('hold', 'D')}
            for s in raw
        ]

    @property
    def realizations(self) -> int:
        return int(self._config.get('realizations', 10))

    @property
    def methods(self) -> List[str]:
        return list(self._config.get('methods', []))

    @property
    def variants(self) -> List[str]:
        """Classification variants; a single 'variant' key is accepted too."""
        if 'variants' in self._config:
            return list(self._config['variants'])
        variant = self._config.get('variant')
        return [variant] if variant else []

    @property
    def alpha(self) -> float:
        return float(self._config.get('alpha', 0.1))

    @property
    def p_threshold(self) -> float:
        return float(self._config.get('p_threshold', 0.01))

    @property
    def tradeoff(self) -> Dict[str, Any]:
        """TradeoffConfig overrides for the gradient classifiers."""
        return dict(self._config.get('tradeoff', {}))

    @property
    def ssa(self) -> Dict[str, Any]:
        """Overrides for the subspace optimizer (restarts, epochs, ...)."""
        return dict(self._config.get('ssa', {}))

    def get(self, key: str, default=None):
        """Get any config value by key."""
        return self._config.get(key, default)

    def to_dict(self) -> dict:
        return {'name': self.suite_name, **self._config}


class SuiteConfigLoader:
    """Loads and manages experiment suite configurations."""

    def __init__(self, config_dir: Path = EXPERIMENT_SUITES_DIR):
        """
        Initialize suite loader.

        Args:
            config_dir: Directory containing suite YAML files
        """
        self.config_dir = config_dir
        self._configs: Dict[str, SuiteConfig] = {}
        self._load_all_configs()

    def _load_all_configs(self) -> None:
        """Load all suite configuration files."""
        if not self.config_dir.exists():
            logger.warning(f"Suite directory not found: {self.config_dir}")
            return

        yaml_files = sorted(self.config_dir.glob("*.yaml")) + sorted(self.config_dir.glob("*.yml"))

        if not yaml_files:
            logger.warning(f"No suite files found in {self.config_dir}")
            return

        for yaml_file in yaml_files:
            try:
                self._load_config(yaml_file)
            except Exception as e:
                logger.error(f"Failed to load suite {yaml_file}: {e}")

        logger.debug(f"Loaded {len(self._configs)} experiment suites")

    def _load_config(self, yaml_file: Path) -> None:
        """
        Load a single suite file.

        Args:
            yaml_file: Path to YAML suite file
        """
        with open(yaml_file, 'r', encoding='utf-8') as f:
            data = yaml.safe_load(f)

        # Top-level key names the suite, e.g. linkage_panels: {...}
        for suite_name, config_dict in (data or {}).items():
            if not isinstance(config_dict, dict):
                continue
            if config_dict.get('kind', 'cpd') not in SUITE_KINDS:
                logger.error(f"Suite {suite_name} has unknown kind {config_dict.get('kind')}")
                continue
            self._configs[suite_name.lower()] = SuiteConfig(config_dict, suite_name)
            logger.debug(f"Loaded suite {suite_name}")

    def get_config(self, suite_name: str) -> Optional[SuiteConfig]:
        """
        Get configuration for a suite.

        Args:
            suite_name: Suite name (case-insensitive)

        Returns:
            SuiteConfig or None if not found
        """
        return self._configs.get(suite_name.lower())

    def get_all_suites(self) -> List[str]:
        """Get sorted list of all suite names."""
        return sorted(self._configs.keys())


# Singleton instance
_loader: Optional[SuiteConfigLoader] = None


def get_suite_config_loader() -> SuiteConfigLoader:
    """Get singleton instance of SuiteConfigLoader."""
    global _loader
    if _loader is None:
        _loader = SuiteConfigLoader()
    return _loader
