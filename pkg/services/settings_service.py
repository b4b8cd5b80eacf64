# services/settings_service.py
from __future__ import annotations
import os
import logging
from dataclasses import dataclass
from typing import Optional

from dotenv import load_dotenv

load_dotenv()

log = logging.getLogger(__name__)

DEFAULT_DIM_CAP = 40
DEFAULT_SEED = 20240607
DEFAULT_SAMPLES = 200


@dataclass(frozen=True)
class Settings:
    threads: int
    dim_cap: int
    seed: int
    samples: int
    log_level: str


def _int_env(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or not raw.strip():
        return default
    try:
        return int(raw.strip())
    except ValueError:
        log.warning("[settings] %s=%r is not an integer, using %d", name, raw, default)
        return default


def _default_threads() -> int:
    return min(8, os.cpu_count() or 1)


def _load() -> Settings:
    return Settings(
        threads=max(1, _int_env("SCHUR_THREADS", _default_threads())),
        dim_cap=max(1, _int_env("SCHUR_DIM_CAP", DEFAULT_DIM_CAP)),
        seed=_int_env("SCHUR_SEED", DEFAULT_SEED),
        samples=max(1, _int_env("SCHUR_SAMPLES", DEFAULT_SAMPLES)),
        log_level=(os.getenv("SCHUR_LOG_LEVEL") or "WARNING").strip().upper(),
    )


_SETTINGS: Optional[Settings] = None


def get_settings() -> Settings:
    global _SETTINGS
    if _SETTINGS is None:
        _SETTINGS = _load()
    return _SETTINGS


def reload_settings() -> Settings:
    """Drop the cached settings (after the environment changed) and reload."""
    global _SETTINGS
    _SETTINGS = None
    return get_settings()
