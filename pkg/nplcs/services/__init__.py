# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.

"""
Services package for nplcs-check.
"""

from nplcs.services.omega import omega_check
from nplcs.services.qualitative import QualitativeChecker

__all__ = [
    "QualitativeChecker",
    "omega_check",
]
