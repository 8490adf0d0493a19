# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.

"""
Exceptions raised by nplcs-check.
"""

from dataclasses import dataclass
from typing import List, Optional, Sequence


class NplcsError(Exception):
    """Base class for every checker error."""


@dataclass(frozen=True)
class ValidationIssue:
    """One violation found by ``Lcs.validate``."""

    kind: str
    subject: str
    message: str
    rule_index: Optional[int] = None

    def __str__(self) -> str:
        return f"{self.kind}({self.subject}): {self.message}"


class ValidationError(NplcsError):
    """The model violates a structural invariant."""

    def __init__(self, issues: Sequence[ValidationIssue]):
        self.issues: List[ValidationIssue] = list(issues)
        super().__init__("; ".join(str(issue) for issue in self.issues))


class NotEnabledError(NplcsError):
    """A rule was fired in a configuration where it is not enabled."""


class TooLargeError(NplcsError):
    """An enumeration exceeded its configured bound."""


class EmptyRemainderError(NplcsError):
    """restrict_with_fail was asked to remove every location."""


class TooManyTargetsError(NplcsError):
    """More target sets than the subset tables allow."""


class PartialDeltaError(NplcsError):
    """A DSA transition function is not total over the model's locations."""


class SaturationLimitError(NplcsError):
    """Backward saturation produced more generators than allowed."""


class EmptySafeError(NplcsError):
    """No location is safe for the requested set."""


class EmptyPromError(NplcsError):
    """No location is promising for the requested set."""


class EmptyCoreError(NplcsError):
    """The almost-sure generalized Büchi core is empty."""


class UndefinedDecisionError(NplcsError):
    """A witness scheduler has no enabled decision for a configuration."""


class UnknownFixtureError(NplcsError):
    """Requested fixture name is not known."""


class ModelSyntaxError(NplcsError):
    """Text input could not be parsed."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")
