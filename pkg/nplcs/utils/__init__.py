# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.

"""
Utility helpers for nplcs-check.
"""

from nplcs.utils.logging import configure_logging, get_logger

__all__ = ["configure_logging", "get_logger"]
