"""
Configuration Classes for twistlab.

Centralises the run-time limits (dimension cap, cyclotomic conductor cap,
worker count, random seed) into a hierarchy of configuration classes.  The
base ``Config`` class defines the defaults; subclasses override only what
differs per environment.  A local ``.env`` file is loaded first so that
developers can pin overrides without exporting variables.

Key Concepts Demonstrated:
- Class-based configuration with inheritance
- Environment-variable overrides (``TWISTLAB_*``) with ``python-dotenv``
- Separate configuration profiles for development, testing, and production
"""

from __future__ import annotations

import os
from pathlib import Path

from dotenv import load_dotenv

BASE_DIR = Path(__file__).resolve().parent
REPO_ROOT = BASE_DIR.parents[1]

load_dotenv()


def _int_env(name: str, default: int) -> int:
    """Read an integer environment variable, failing loudly on junk."""
    raw = os.environ.get(name, "").strip()
    if not raw:
        return default
    try:
        return int(raw)
    except ValueError as exc:
        raise RuntimeError(f"{name} must be an integer, got {raw!r}") from exc


class Config:
    """
    Base configuration.

    Attributes:
        MAX_DIM: Refuse instances with dim A above this cap.
        CONDUCTOR_LIMIT: Largest cyclotomic conductor the scalar layer builds.
        QCHECK_MAX_N: Default bound for the q-binomial sweep.
        RANDOM_TRIPLES: Random full-basis triples in each dual associativity check.
        SEED: Seed for every sampled check.
        WORKERS: Thread-pool size for independent checks.
        CONTRACTS_DIR: Directory holding the YAML JSON schemas.
        LOG_LEVEL: Optional override of the root log level.
    """

    MAX_DIM: int = _int_env("TWISTLAB_MAX_DIM", 2000)
    CONDUCTOR_LIMIT: int = _int_env("TWISTLAB_CONDUCTOR_LIMIT", 360)
    QCHECK_MAX_N: int = 12
    RANDOM_TRIPLES: int = 6
    SEED: int = _int_env("TWISTLAB_SEED", 0)
    WORKERS: int = _int_env("TWISTLAB_WORKERS", 4)
    CONTRACTS_DIR: Path = Path(os.environ.get("TWISTLAB_CONTRACTS_DIR", REPO_ROOT / "contracts"))
    LOG_LEVEL: str | None = os.environ.get("TWISTLAB_LOG_LEVEL") or None
    DEBUG: bool = False
    TESTING: bool = False


class DevelopmentConfig(Config):
    """Development profile: debug logging of cache sizes and per-check detail."""

    DEBUG: bool = True


class TestingConfig(Config):
    """
    Testing profile.

    Fewer random triples and quieter logs keep the suite fast; every
    exhaustive check still runs in full.
    """

    TESTING: bool = True
    RANDOM_TRIPLES: int = 2
    LOG_LEVEL: str | None = os.environ.get("TWISTLAB_LOG_LEVEL") or "WARNING"


class ProductionConfig(Config):
    """Production profile: no debug detail; limits come from the base defaults or TWISTLAB_* overrides."""

    DEBUG: bool = False


config = {
    "development": DevelopmentConfig,
    "testing": TestingConfig,
    "production": ProductionConfig,
    "default": DevelopmentConfig,
}


def get_config(env: str | None = None) -> type[Config]:
    """
    Look up and return the configuration class for the given environment.

    Args:
        env: ``"development"``, ``"testing"`` or ``"production"``.  When
            ``None``, falls back to ``TWISTLAB_ENV``, defaulting to
            ``"development"``.

    Returns:
        The configuration class (not an instance).
    """
    if env is None:
        env = os.environ.get("TWISTLAB_ENV", "development")
    return config.get(env, config["default"])
