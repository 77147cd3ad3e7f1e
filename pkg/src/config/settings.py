"""
Configuration management module for cskit.

This module handles loading, saving, and validating toolkit configurations,
including numeric tolerances, quadrature defaults, calibration levels and the
verification-suite ranges.
"""

import os
import yaml
from pathlib import Path
from typing import List, Optional
from dataclasses import dataclass, asdict, field
from rich.console import Console
from rich.logging import RichHandler
import logging

# Configure logging
logging.basicConfig(
    level=logging.INFO,
    format="%(message)s",
    handlers=[RichHandler(console=Console(stderr=True), rich_tracebacks=True)]
)
logger = logging.getLogger("config")

CALIBRATION_ENV_VAR = "CSKIT_CALIBRATION"


@dataclass
class ToleranceConfig:
    """Numeric tolerances used by checks."""
    matrix: float = 1e-10
    numeric_fallback: float = 1e-10
    integrality: float = 1e-6
    quadrature_drift: float = 1e-8
    weyl: float = 1e-6
    gram_condition: float = 1e8
    embed: float = 1e-12


@dataclass
class QuadratureConfig:
    """Default quadrature settings for the Toeplitz computations."""
    grid: int = 64
    refinement: int = 2
    theta_eps: float = 1e-14
    weight_scale: float = 4.0


@dataclass
class CalibrationConfig:
    """Convention calibration settings."""
    levels: List[int] = field(default_factory=lambda: list(range(3, 11)))
    matrix_bound: int = 3
    nc_bound: int = 3
    kappa_ladder: int = 5
    path: Optional[str] = None


@dataclass
class SuiteConfig:
    """Ranges used by the one-shot verification suite."""
    level_max: int = 64
    correspondence_levels: List[int] = field(default_factory=lambda: [8, 16, 32, 64])
    random_seed: int = 20240607
    skein_triples: int = 50
    random_b4_words: int = 100
    phase_bound: int = 4
    sign_bound: int = 5
    sign_level_max: int = 8
    workers: Optional[int] = None
    memory_warning_percent: float = 90.0


@dataclass
class ToolkitConfig:
    """Main configuration class for cskit."""
    tolerances: ToleranceConfig = field(default_factory=ToleranceConfig)
    quadrature: QuadratureConfig = field(default_factory=QuadratureConfig)
    calibration: CalibrationConfig = field(default_factory=CalibrationConfig)
    suite: SuiteConfig = field(default_factory=SuiteConfig)

    @classmethod
    def get_config_dir(cls) -> Path:
        """Get the configuration directory, creating it if needed."""
        config_dir = Path.home() / ".config" / "cskit"
        config_dir.mkdir(parents=True, exist_ok=True)
        return config_dir

    @classmethod
    def get_default_config_path(cls) -> Path:
        """Get the default configuration file path."""
        return cls.get_config_dir() / "config.yaml"

    def calibration_path(self, override: Optional[Path] = None) -> Path:
        """
        Resolve where the calibration record lives.

        Args:
            override: Explicit path from the command line, if any.

        Returns:
            Path: the flag value, else $CSKIT_CALIBRATION, else the configured
            path, else ~/.config/cskit/calibration.json.
        """
        if override is not None:
            return Path(override)
        from_env = os.environ.get(CALIBRATION_ENV_VAR)
        if from_env:
            return Path(from_env)
        if self.calibration.path:
            return Path(self.calibration.path).expanduser()
        return self.get_config_dir() / "calibration.json"

    def save(self, config_path: Optional[Path] = None) -> None:
        """
        Save the current configuration to a YAML file.

        Args:
            config_path: Optional path to save the configuration file.
                       If not provided, uses the default path.
        """
        try:
            config_path = config_path or self.get_default_config_path()
            with open(config_path, 'w') as f:
                yaml.safe_dump(asdict(self), f, default_flow_style=False)
            logger.info(f"Configuration saved to {config_path}")
        except Exception as e:
            logger.error(f"Failed to save configuration: {e}")
            raise

    @classmethod
    def load(cls, config_path: Optional[Path] = None) -> 'ToolkitConfig':
        """
        Load configuration from a YAML file.

        Args:
            config_path: Optional path to load the configuration file from.
                       If not provided, uses the default path.

        Returns:
            ToolkitConfig: Loaded configuration object.
        """
        try:
            config_path = config_path or cls.get_default_config_path()
            if not config_path.exists():
                logger.debug("No configuration file found, using defaults")
                return cls()

            with open(config_path) as f:
                config_data = yaml.safe_load(f) or {}

            return cls(
                tolerances=ToleranceConfig(**config_data.get('tolerances', {})),
                quadrature=QuadratureConfig(**config_data.get('quadrature', {})),
                calibration=CalibrationConfig(**config_data.get('calibration', {})),
                suite=SuiteConfig(**config_data.get('suite', {}))
            )
        except Exception as e:
            logger.error(f"Failed to load configuration: {e}")
            logger.info("Using default configuration")
            return cls()

    def validate(self) -> bool:
        """
        Validate the current configuration settings.

        Returns:
            bool: True if configuration is valid, False otherwise.
        """
        try:
            tolerances = asdict(self.tolerances)
            for name, value in tolerances.items():
                if value <= 0:
                    logger.error(f"Tolerance {name} must be positive, got {value}")
                    return False

            if self.quadrature.grid < 32:
                logger.error("Quadrature grid must have at least 32 points per axis")
                return False
            if self.quadrature.refinement < 2:
                logger.error("Quadrature refinement factor must be at least 2")
                return False
            if self.quadrature.weight_scale <= 0:
                logger.error("Quadrature weight scale must be positive")
                return False

            if not self.calibration.levels or min(self.calibration.levels) < 2:
                logger.error("Calibration levels must be a nonempty list of integers >= 2")
                return False
            if self.calibration.matrix_bound < 1 or self.calibration.nc_bound < 1:
                logger.error("Calibration bounds must be positive")
                return False
            if self.calibration.kappa_ladder < 3:
                logger.error("The kappa ladder needs at least 3 levels")
                return False

            levels = self.suite.correspondence_levels
            if len(levels) < 2 or levels != sorted(levels) or levels[0] < 3:
                logger.error(f"Correspondence levels must be ascending and >= 3: {levels}")
                return False
            if self.suite.level_max < 2:
                logger.error("Suite level_max must be at least 2")
                return False
            if self.suite.skein_triples < 1 or self.suite.random_b4_words < 0:
                logger.error("Suite sample sizes must be positive")
                return False
            if self.suite.phase_bound < 1 or self.suite.sign_bound < 1:
                logger.error("Suite calibration bounds must be positive")
                return False
            if self.suite.sign_level_max < 3:
                logger.error("Suite sign_level_max must be at least 3")
                return False
            if not 0 < self.suite.memory_warning_percent <= 100:
                logger.error("Memory warning threshold must be a percentage")
                return False
            if self.suite.workers is not None and self.suite.workers < 1:
                logger.error("Suite workers must be positive when set")
                return False

            return True
        except Exception as e:
            logger.error(f"Configuration validation failed: {e}")
            return False


def load_or_create_config(config_path: Optional[Path] = None) -> ToolkitConfig:
    """
    Load existing configuration or create a new one with default values.

    Args:
        config_path: Optional path to the configuration file.

    Returns:
        ToolkitConfig: Loaded or newly created configuration object.
    """
    config = ToolkitConfig.load(config_path)
    if not config.validate():
        logger.warning("Invalid configuration detected, using defaults")
        config = ToolkitConfig()
    return config
