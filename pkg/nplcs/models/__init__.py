# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.

"""
Data model for nplcs-check.
"""

from nplcs.models.core import (
    Configuration,
    Lcs,
    LocationSet,
    Nplcs,
    Operation,
    OpKind,
    TransitionRule,
)
from nplcs.models.dsa import Dsa
from nplcs.models.query import Answer, Query, QueryKind, SchedulerClass, Threshold, Verdict
from nplcs.models.scheduler import Decision, SchedulerKind, WitnessScheduler
from nplcs.models.upsets import UpSet

__all__ = [
    # Systems and configurations
    "Configuration",
    "Lcs",
    "LocationSet",
    "Nplcs",
    "Operation",
    "OpKind",
    "TransitionRule",
    "UpSet",

    # Queries
    "Answer",
    "Dsa",
    "Query",
    "QueryKind",
    "SchedulerClass",
    "Threshold",
    "Verdict",

    # Schedulers
    "Decision",
    "SchedulerKind",
    "WitnessScheduler",
]
