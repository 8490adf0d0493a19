# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.

"""
Configuration settings for nplcs-check.
"""

import os
from typing import Dict, Optional, Type

from dotenv import load_dotenv

load_dotenv()


class Config:
    """Base configuration class."""

    # Logging settings
    LOG_LEVEL = os.environ.get("NPLCS_LOG", "WARNING")
    LOG_FORMAT = os.environ.get(
        "NPLCS_LOG_FORMAT", "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
    )

    # Enumeration and saturation bounds
    SUBWORD_LIMIT = int(os.environ.get("NPLCS_SUBWORD_LIMIT", 2**16))
    MAX_TARGETS = int(os.environ.get("NPLCS_MAX_TARGETS", 10))
    MAX_GENERATORS = int(os.environ.get("NPLCS_MAX_GENERATORS", 10**6))
    CHECK_INVARIANTS = True

    # Oracle settings
    EXPLORE_CAP = int(os.environ.get("NPLCS_EXPLORE_CAP", 10**4))

    # Simulation settings
    DEFAULT_SEED = int(os.environ.get("NPLCS_DEFAULT_SEED", 0))
    DEFAULT_TRIALS = int(os.environ.get("NPLCS_DEFAULT_TRIALS", 10**4))
    SIM_WORKERS = int(os.environ.get("NPLCS_SIM_WORKERS", 1))
    ADAPTIVE_HORIZON_START = 64
    ADAPTIVE_HORIZON_MAX = 2**14
    ADAPTIVE_TOLERANCE = 0.005
    CONFIDENCE = 0.95


class DevelopmentConfig(Config):
    """Development configuration."""

    LOG_LEVEL = os.environ.get("NPLCS_LOG", "INFO")


class TestingConfig(Config):
    """Testing configuration."""

    LOG_LEVEL = "DEBUG"
    MAX_GENERATORS = 10**5
    EXPLORE_CAP = 10**4


class ProductionConfig(Config):
    """Production configuration."""

    CHECK_INVARIANTS = False
    LOG_LEVEL = os.environ.get("NPLCS_LOG", "WARNING")


# Configuration mapping
config_map: Dict[str, Type[Config]] = {
    "development": DevelopmentConfig,
    "testing": TestingConfig,
    "production": ProductionConfig,
    "default": Config,
}

_active: Optional[Type[Config]] = None


def get_config(config_name: Optional[str] = None) -> Type[Config]:
    """
    Get configuration class based on environment.

    Args:
        config_name: Configuration name to use

    Returns:
        Configuration class
    """
    if config_name is None:
        if _active is not None:
            return _active
        config_name = os.environ.get("NPLCS_ENV", "default")

    return config_map.get(config_name, Config)


def set_active_config(config_name: Optional[str]) -> Type[Config]:
    """Select the configuration used when no explicit one is passed."""
    global _active
    _active = None if config_name is None else get_config(config_name)
    return get_config()
