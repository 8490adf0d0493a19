# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.

"""
Qualitative queries and their verdicts.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, FrozenSet, Optional, Tuple

from nplcs.models.dsa import Dsa
from nplcs.models.scheduler import WitnessScheduler


class QueryKind(str, Enum):
    EVENTUALITY = "EV"
    BUCHI = "BUCHI"
    STREETT = "STREETT-FM"
    OMEGA = "OMEGA-FM"


class Threshold(str, Enum):
    ONE = "=1"
    ZERO = "=0"
    BELOW_ONE = "<1"
    POSITIVE = ">0"


class SchedulerClass(str, Enum):
    ALL = "all"
    FINITE_MEMORY = "fm"


class Answer(str, Enum):
    YES = "yes"
    NO = "no"
    UNDECIDABLE = "undecidable"


@dataclass(frozen=True)
class Query:
    """Does some scheduler from (start, ε) meet the threshold for the property?"""

    kind: QueryKind
    threshold: Threshold
    scheduler_class: SchedulerClass
    start: str
    targets: Tuple[FrozenSet[str], ...] = ()
    pairs: Tuple[Tuple[FrozenSet[str], FrozenSet[str]], ...] = ()
    dsa: Optional[Dsa] = None

    def __str__(self) -> str:
        if self.kind is QueryKind.OMEGA:
            body = "dsa"
        elif self.kind is QueryKind.STREETT:
            body = ";".join(f"({_braces(a)},{_braces(b)})" for a, b in self.pairs)
        else:
            body = ";".join(_braces(a) for a in self.targets)
        return (
            f"{self.kind.value}{{{self.threshold.value}}}[{self.scheduler_class.value}]"
            f" from {self.start} {body}"
        )


def _braces(locations: FrozenSet[str]) -> str:
    return "{" + ",".join(sorted(locations)) + "}"


@dataclass
class Verdict:
    """Answer to a query plus the evidence that produced it."""

    answer: Answer
    threshold: Threshold
    scheduler_class: SchedulerClass
    citation: str
    certificate: Dict[str, Any] = field(default_factory=dict)
    witness: Optional[WitnessScheduler] = None

    @property
    def is_yes(self) -> bool:
        return self.answer is Answer.YES

    @property
    def exit_code(self) -> int:
        return {Answer.YES: 0, Answer.NO: 1, Answer.UNDECIDABLE: 2}[self.answer]

    def __repr__(self) -> str:
        return f"<Verdict {self.answer.value} {self.threshold.value} ({self.citation})>"
