"""
Configuration management for trace-rearrange.
One document (JSON or YAML) with a section per module; CLI flags override it.
"""

import json
import logging
import os
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any, Dict, List, Optional

import yaml

from .errors import ConfigError
from .integral_rep import QuadratureConfig

logger = logging.getLogger(__name__)

OUTPUT_DIR_ENV = "TRACE_REARRANGE_OUTPUT_DIR"


def default_output_dir() -> str:
    return os.environ.get(OUTPUT_DIR_ENV, "results")


@dataclass
class TolerancesConfig:
    """Relative tolerances."""
    verdict: float = 1e-8
    hermitian: float = 1e-10
    confirm: float = 1e-10
    replay: float = 1e-12


@dataclass
class EnsemblesConfig:
    """Random ensemble settings."""
    scale: float = 1.0


@dataclass
class VerifyConfig:
    """Verification suite settings."""
    samples: int = 500
    dims: List[int] = field(default_factory=lambda: [2, 3, 4, 5, 6])
    seed: int = 1
    workers: int = 1


@dataclass
class HuntDefaults:
    """Defaults for hunt configs that leave a field out."""
    restarts: int = 50
    steps_per_restart: int = 40
    initial_magnitude: float = 0.3
    shrink_factor: float = 0.5
    rejection_streak: int = 10
    workers: int = 1


@dataclass
class ReportingConfig:
    """Output locations."""
    output_dir: str = field(default_factory=default_output_dir)
    results_log: str = "hunts.ndjson"


@dataclass
class AppConfig:
    """Main application configuration container."""
    tolerances: TolerancesConfig = field(default_factory=TolerancesConfig)
    quadrature: QuadratureConfig = field(default_factory=QuadratureConfig)
    ensembles: EnsemblesConfig = field(default_factory=EnsemblesConfig)
    verify: VerifyConfig = field(default_factory=VerifyConfig)
    hunt: HuntDefaults = field(default_factory=HuntDefaults)
    reporting: ReportingConfig = field(default_factory=ReportingConfig)
    log_level: str = "INFO"
    log_file: str = ""


SECTIONS = {
    "tolerances": TolerancesConfig,
    "quadrature": QuadratureConfig,
    "ensembles": EnsemblesConfig,
    "verify": VerifyConfig,
    "hunt": HuntDefaults,
    "reporting": ReportingConfig,
}
TOP_LEVEL = ("log_level", "log_file")


def _coerce(where: str, value: Any, default: Any) -> Any:
    """Check a file value against the type of its default."""
    if isinstance(default, bool):
        if not isinstance(value, bool):
            raise ConfigError(f"{where}: expected true/false, got {value!r}")
        return value
    if isinstance(default, int):
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"{where}: expected an integer, got {value!r}")
        return value
    if isinstance(default, float):
        if isinstance(value, str):
            # YAML 1.1 reads 1e-8 (no dot) as a string
            try:
                return float(value)
            except ValueError:
                pass
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{where}: expected a number, got {value!r}")
        return float(value)
    if isinstance(default, str):
        if not isinstance(value, str):
            raise ConfigError(f"{where}: expected a string, got {value!r}")
        return value
    if isinstance(default, list):
        if not isinstance(value, list) or not value:
            raise ConfigError(f"{where}: expected a nonempty list, got {value!r}")
        return [_coerce(f"{where}[{i}]", item, default[0]) for i, item in enumerate(value)]
    return value


def _build_section(name: str, cls, data: Any):
    if data is None:
        return cls()
    if not isinstance(data, dict):
        raise ConfigError(f"{name}: expected a mapping")
    defaults = cls()
    known = {f.name for f in fields(cls)}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ConfigError(f"{name}.{unknown[0]}: unknown configuration key")
    values = {key: _coerce(f"{name}.{key}", value, getattr(defaults, key)) for key, value in data.items()}
    return cls(**values)


class ConfigManager:
    """
    Manages application configuration with load/save capabilities.
    Errors in a config file are reported, never replaced by defaults.
    """

    def __init__(self, config_path: Optional[str] = None):
        self.config_path = Path(config_path) if config_path else None
        self._config: Optional[AppConfig] = None

    def load(self) -> AppConfig:
        """Load configuration from file, or defaults when no file is given."""
        if self._config is not None:
            return self._config

        if self.config_path is None:
            self._config = self._create_default_config()
            return self._config

        if not self.config_path.exists():
            raise ConfigError(f"config: file not found: {self.config_path}")
        try:
            with open(self.config_path, "r", encoding="utf-8") as f:
                if self.config_path.suffix == ".json":
                    data = json.load(f)
                else:
                    data = yaml.safe_load(f) or {}
        except (json.JSONDecodeError, yaml.YAMLError) as e:
            raise ConfigError(f"config: cannot parse {self.config_path}: {e}") from e

        self._config = self._dict_to_config(data)
        logger.info(f"Loaded configuration from {self.config_path}")
        return self._config

    def save(self, path: Optional[str] = None) -> str:
        """Save current configuration as JSON."""
        target = Path(path) if path else self.config_path
        if target is None:
            raise ConfigError("config: no path to save to")
        config = self.get()
        target.parent.mkdir(parents=True, exist_ok=True)
        with open(target, "w", encoding="utf-8") as f:
            json.dump(self._config_to_dict(config), f, indent=2)
        return str(target)

    def get(self) -> AppConfig:
        """Get current configuration."""
        if self._config is None:
            return self.load()
        return self._config

    def _create_default_config(self) -> AppConfig:
        """Create default configuration."""
        return AppConfig()

    def _dict_to_config(self, data: Dict[str, Any]) -> AppConfig:
        """Convert dictionary to AppConfig."""
        if not isinstance(data, dict):
            raise ConfigError("config: top level must be a mapping")
        unknown = sorted(set(data) - set(SECTIONS) - set(TOP_LEVEL))
        if unknown:
            raise ConfigError(f"{unknown[0]}: unknown configuration section")

        sections = {name: _build_section(name, cls, data.get(name)) for name, cls in SECTIONS.items()}
        top = {key: _coerce(key, data[key], getattr(AppConfig, key)) for key in TOP_LEVEL if key in data}
        return AppConfig(**sections, **top)

    def _config_to_dict(self, config: AppConfig) -> Dict[str, Any]:
        """Convert AppConfig to dictionary."""
        return {
            "tolerances": asdict(config.tolerances),
            "quadrature": asdict(config.quadrature),
            "ensembles": asdict(config.ensembles),
            "verify": asdict(config.verify),
            "hunt": asdict(config.hunt),
            "reporting": asdict(config.reporting),
            "log_level": config.log_level,
            "log_file": config.log_file
        }

    @property
    def config_path_str(self) -> Optional[str]:
        return str(self.config_path) if self.config_path else None

    def to_dict(self) -> Dict[str, Any]:
        return self._config_to_dict(self.get())


# Global config manager instance
_config_manager: Optional[ConfigManager] = None


def get_config_manager(config_path: Optional[str] = None) -> ConfigManager:
    """Get or create global config manager instance."""
    global _config_manager
    wanted = Path(config_path) if config_path else None
    if _config_manager is None or _config_manager.config_path != wanted:
        _config_manager = ConfigManager(config_path)
    return _config_manager
