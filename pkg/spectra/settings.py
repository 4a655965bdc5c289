"""
Centralized numerical defaults read from config/defaults.yaml.
"""

from functools import lru_cache
from pathlib import Path
from typing import Optional

import yaml

CONFIG_PATH = Path(__file__).resolve().parent.parent / "config" / "defaults.yaml"


def load_config(config_path: Optional[str] = None) -> dict:
    """Load configuration from YAML file."""
    path = Path(config_path) if config_path else CONFIG_PATH
    with open(path, "r", encoding="utf-8") as f:
        return yaml.safe_load(f) or {}


@lru_cache(maxsize=1)
def _cached_defaults() -> dict:
    return load_config()


def section(name: str) -> dict:
    """Return one top-level section of the defaults (empty if absent)."""
    return dict(_cached_defaults().get(name, {}) or {})
