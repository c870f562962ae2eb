"""
Deterministic hashing of run configurations.
Identical configurations hash identically across runs and machines.
"""

import hashlib
import json
import logging
from typing import Any, Dict

logger = logging.getLogger(__name__)


def canonical_json(data: Dict[str, Any]) -> str:
    """Sorted-key JSON with compact separators"""
    return json.dumps(data, sort_keys=True, separators=(',', ':'))


def compute_config_hash(config_data: Dict[str, Any]) -> str:
    """
    Compute a deterministic hash of a run configuration

    Args:
        config_data: JSON-ready configuration dictionary

    Returns:
        Hex string of the SHA-256 hash
    """
    return hashlib.sha256(canonical_json(config_data).encode()).hexdigest()


def verify_config_hash(config_data: Dict[str, Any], expected: str) -> bool:
    """Check a manifest's config against its recorded hash"""
    actual = compute_config_hash(config_data)
    if actual != expected:
        logger.warning(f"Config hash mismatch: {actual[:12]} != {expected[:12]}")
        return False
    return True
