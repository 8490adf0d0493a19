# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.

"""
nplcs-check - qualitative model checking of probabilistic lossy channel systems

Decides eventuality, Büchi, Streett and ω-regular properties against the
thresholds =1, =0, <1 and >0, and synthesizes witness schedulers.
"""

__version__ = "0.1.0"
__author__ = "nplcs-check developers"
__license__ = "Apache-2.0"

from nplcs.models.core import Configuration, Lcs, Nplcs
from nplcs.services.qualitative import QualitativeChecker

__all__ = ["Configuration", "Lcs", "Nplcs", "QualitativeChecker"]
