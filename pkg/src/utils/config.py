"""
Key=value configuration files for strip lab runs.
Parsed with python-dotenv; the process environment is never consulted.
"""

import logging
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Union

from dotenv import dotenv_values

logger = logging.getLogger(__name__)

REPEATABLE_KEYS = {"line", "gamma", "tolerance"}


class ConfigFileError(Exception):
    """Custom exception for unreadable or invalid config files"""
    pass


def normalize_key(key: str) -> str:
    """'beta-index', 'BETA_INDEX' and 'beta_index' all map to 'beta_index'"""
    return key.strip().lower().replace("-", "_")


def _split_list(value: str) -> List[str]:
    return [item.strip() for item in value.split(",") if item.strip()]


def load_config_file(path: Union[str, Path], allowed_keys: Iterable[str]) -> Dict[str, object]:
    """
    Load a key=value config file

    Args:
        path: Path of the file; '#' starts a comment
        allowed_keys: Normalized keys the caller understands

    Returns:
        Normalized key to raw string value; repeatable keys map to lists
        of comma-separated entries

    Raises:
        ConfigFileError: If the file is missing or names an unknown key
    """
    path = Path(path)
    if not path.is_file():
        raise ConfigFileError(f"Config file not found: {path}")

    allowed = set(allowed_keys)
    raw = dotenv_values(path, interpolate=False)
    values: Dict[str, object] = {}
    for key, value in raw.items():
        name = normalize_key(key)
        if name not in allowed:
            raise ConfigFileError(f"Unknown config key '{key}' in {path}")
        if value is None or value.strip() == "":
            raise ConfigFileError(f"Config key '{key}' in {path} has no value")
        values[name] = _split_list(value) if name in REPEATABLE_KEYS else value.strip()

    logger.info(f"Loaded {len(values)} settings from {path}")
    return values


def optional_config(path: Optional[Union[str, Path]], allowed_keys: Iterable[str]) -> Dict[str, object]:
    if path is None:
        return {}
    return load_config_file(path, allowed_keys)
