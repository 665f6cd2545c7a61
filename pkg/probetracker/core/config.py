"""
Configuration management for ProbeTracker.
Handles loading, saving, and accessing configuration settings.
"""
import json
import logging
import os
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Union

from probetracker.core.errors import ConfigError
from probetracker.core.settings import AnalysisSettings, InstanceConfig, MergeConfig, SimilarityConfig

logger = logging.getLogger(__name__)

# Default configuration settings
DEFAULT_CONFIG = {
    'instance_gap_s': 10.0,
    'sequence_wraparound': True,
    'similarity_metric': 'jaccard',
    'similarity_threshold': 0.5,
    'similarity_comparator': 'strict',
    'merge_gap_s': 600.0,
    'merge_pad_s': 30.0,
    'merge_overlap': 0.5,
    'merge_scope': 'randomized',
    'fcs_mode': 'auto',
    'anonymize': False,
    'output_format': 'records',
}

_TRUE = ('1', 'true', 'yes', 'on')
_FALSE = ('0', 'false', 'no', 'off')


def coerce_value(key: str, value: Any) -> Any:
    """
    Convert a value (possibly a command-line string) to the type of the
    key's default.

    Raises:
        ConfigError: unknown key or value of the wrong type
    """
    if key not in DEFAULT_CONFIG:
        raise ConfigError(f"unknown configuration key (known: {', '.join(sorted(DEFAULT_CONFIG))})", key)
    default = DEFAULT_CONFIG[key]
    try:
        if isinstance(default, bool):
            if isinstance(value, bool):
                return value
            text = str(value).strip().lower()
            if text in _TRUE:
                return True
            if text in _FALSE:
                return False
            raise ValueError(f'expected a boolean, got {value!r}')
        if isinstance(default, float):
            if isinstance(value, bool):
                raise ValueError(f'expected a number, got {value!r}')
            return float(value)
        if not isinstance(value, str):
            raise ValueError(f'expected a string, got {value!r}')
        return value
    except (TypeError, ValueError) as e:
        raise ConfigError(str(e), key) from e


def settings_from_mapping(values: Mapping[str, Any]) -> AnalysisSettings:
    """Build validated analysis settings from a flat configuration mapping."""
    data = dict(DEFAULT_CONFIG)
    data.update({key: coerce_value(key, value) for (key, value) in values.items()})
    return AnalysisSettings(
        instances=InstanceConfig(gap_s=data['instance_gap_s'], wraparound=data['sequence_wraparound']),
        similarity=SimilarityConfig(metric=data['similarity_metric'], threshold=data['similarity_threshold'],
                                    comparator=data['similarity_comparator']),
        merge=MergeConfig(gap_s=data['merge_gap_s'], pad_s=data['merge_pad_s'], overlap=data['merge_overlap'],
                          scope=data['merge_scope']),
        fcs_mode=data['fcs_mode'],
        anonymize=data['anonymize'],
    )


def settings_to_mapping(settings: AnalysisSettings) -> Dict[str, Any]:
    """Flat key/value echo of settings, in the configuration file's vocabulary."""
    return {
        'instance_gap_s': settings.instances.gap_s,
        'sequence_wraparound': settings.instances.wraparound,
        'similarity_metric': settings.similarity.metric,
        'similarity_threshold': settings.similarity.threshold,
        'similarity_comparator': settings.similarity.comparator,
        'merge_gap_s': settings.merge.gap_s,
        'merge_pad_s': settings.merge.pad_s,
        'merge_overlap': settings.merge.overlap,
        'merge_scope': settings.merge.scope,
        'fcs_mode': settings.fcs_mode,
        'anonymize': settings.anonymize,
    }


def default_config_path() -> Path:
    """
    Get the path to the configuration file based on platform.

    Returns:
        Path: Path to the configuration file (not created)
    """
    if os.name == 'nt':
        config_dir = Path(os.environ.get('APPDATA', '')) / 'ProbeTracker'
    else:
        config_dir = Path(os.environ.get('XDG_CONFIG_HOME', Path.home() / '.config')) / 'probetracker'
    return config_dir / 'config.json'


class Config:
    """Configuration manager class."""

    def __init__(self, path: Optional[Union[str, Path]] = None, load: bool = True):
        """
        Initialize the configuration manager.

        Args:
            path: configuration file, the per-user file by default
            load: read the file now if it exists
        """
        self.data = DEFAULT_CONFIG.copy()
        self.config_path = Path(path) if path is not None else default_config_path()
        if load:
            self.load()

    def load(self) -> bool:
        """
        Load configuration from file. A missing file leaves the defaults.

        Returns:
            bool: True if a file was read
        """
        if not self.config_path.exists():
            return False
        self.update_from_file(self.config_path)
        logger.debug('Configuration loaded from %s', self.config_path)
        return True

    def update_from_file(self, path: Union[str, Path]) -> None:
        """
        Overlay values from another JSON file; unknown keys are ignored with a warning.

        Raises:
            ConfigError: unreadable file or badly typed value
        """
        try:
            with open(path, 'r', encoding='utf-8') as f:
                user_config = json.load(f)
        except (OSError, ValueError) as e:
            raise ConfigError(f'cannot read configuration file {path}: {e}') from e
        if not isinstance(user_config, dict):
            raise ConfigError(f'configuration file {path} must hold a JSON object')
        for (key, value) in user_config.items():
            if key in self.data:
                self.data[key] = coerce_value(key, value)
            else:
                logger.warning('Ignoring unknown configuration key %r in %s', key, path)

    def save(self) -> None:
        """
        Save current configuration to file.

        Raises:
            ConfigError: the file could not be written
        """
        try:
            self.config_path.parent.mkdir(parents=True, exist_ok=True)
            with open(self.config_path, 'w', encoding='utf-8') as f:
                json.dump(self.data, f, indent=4, sort_keys=True)
        except OSError as e:
            raise ConfigError(f'cannot write configuration file {self.config_path}: {e}') from e
        logger.info('Configuration saved to %s', self.config_path)

    def get(self, key: str, default: Any = None) -> Any:
        return self.data.get(key, default)

    def set(self, key: str, value: Any) -> Any:
        """
        Set a configuration value, validate it and save.

        Args:
            key: Configuration key
            value: Value to set; strings are converted to the key's type

        Returns:
            The stored value
        """
        coerced = coerce_value(key, value)
        candidate = dict(self.data, **{key: coerced})
        settings_from_mapping(candidate)
        self.data[key] = coerced
        self.save()
        return coerced

    def reset(self) -> None:
        """Reset configuration to defaults and save."""
        self.data = DEFAULT_CONFIG.copy()
        self.save()

    def resolve(self, overrides: Optional[Mapping[str, Any]] = None) -> AnalysisSettings:
        """
        Validated settings with command-line overrides applied on top.

        Args:
            overrides: values from flags; None entries mean "not given"

        Returns:
            AnalysisSettings
        """
        merged = dict(self.data)
        for (key, value) in (overrides or {}).items():
            if value is not None:
                merged[key] = value
        return settings_from_mapping(merged)


# Global config instance; the CLI loads the user file on start-up
config = Config(load=False)
