# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.

"""
Logging configuration for nplcs-check.
"""

import logging
import sys
from typing import Optional

from nplcs.config import get_config


def configure_logging(app_name: str = "nplcs", log_level: Optional[str] = None) -> None:
    """
    Configure logging for the checker.

    Diagnostics go to stderr so that verdict and estimate JSON on stdout stays
    machine readable.

    Args:
        app_name: Top-level logger name
        log_level: Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL);
            defaults to the active configuration's LOG_LEVEL (env NPLCS_LOG)
    """
    config = get_config()
    if log_level is None:
        log_level = config.LOG_LEVEL

    # Convert string level to logging constant
    numeric_level = getattr(logging, log_level.upper(), logging.WARNING)

    formatter = logging.Formatter(config.LOG_FORMAT)

    root_logger = logging.getLogger()
    root_logger.setLevel(numeric_level)

    # Remove existing handlers
    for handler in root_logger.handlers[:]:
        root_logger.removeHandler(handler)

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(numeric_level)
    console_handler.setFormatter(formatter)
    root_logger.addHandler(console_handler)

    logging.getLogger(app_name).setLevel(numeric_level)


def get_logger(name: Optional[str] = None) -> logging.Logger:
    """
    Get a logger instance.

    Args:
        name: Logger name (defaults to the package logger)

    Returns:
        Logger instance
    """
    return logging.getLogger(name or "nplcs")
