"""
twistlab: exact construction and verification of twisted bosonizations.

``configure`` plays the part of an application factory: it resolves a
configuration profile and applies the limits that live in module state
(the cyclotomic conductor cap, the root log level).

Key Concepts Demonstrated:
- Configuration factory pattern (``configure``)
- One logging setup for the package, per-module loggers everywhere else
"""

from __future__ import annotations

import logging

try:
    from services.twist.config import Config, get_config
except ModuleNotFoundError:  # pragma: no cover - fallback for service-local execution
    from config import Config, get_config

from .scalar import set_conductor_limit

logging.basicConfig(
    level=logging.INFO,
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
)
logger = logging.getLogger(__name__)

__version__ = "1.0.0"


def configure(config_name: str | None = None) -> type[Config]:
    """
    Resolve and apply a configuration profile.

    Args:
        config_name: ``"development"``, ``"testing"`` or ``"production"``.
            When *None*, ``TWISTLAB_ENV`` decides, defaulting to development.

    Returns:
        The configuration class.
    """
    config_class = get_config(config_name)
    set_conductor_limit(config_class.CONDUCTOR_LIMIT)
    if config_class.LOG_LEVEL:
        logging.getLogger().setLevel(config_class.LOG_LEVEL.upper())
    elif config_class.DEBUG:
        logging.getLogger(__name__).setLevel(logging.DEBUG)
    logger.info("Configuring twistlab with config: %s", config_class.__name__)
    return config_class
