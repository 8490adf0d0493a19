# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.

"""
Built-in example models.
"""

from fractions import Fraction
from typing import Callable, Dict, Sequence

from nplcs.exceptions import UnknownFixtureError, ValidationError, ValidationIssue
from nplcs.models.core import Lcs, Nplcs, Operation

GADGET_MARKER = "$"

send = Operation.send
recv = Operation.recv
nop = Operation.internal


def run6() -> Nplcs:
    """Six-location running example over one channel and messages a, b, c."""
    rules = [
        ("1", "2", send("c", "a")),
        ("1", "2", recv("c", "b")),
        ("2", "2", send("c", "b")),
        ("2", "1", send("c", "c")),
        ("2", "6", recv("c", "a")),
        ("2", "3", recv("c", "c")),
        ("3", "3", nop()),
        ("4", "4", send("c", "b")),
        ("4", "5", recv("c", "b")),
        ("5", "4", send("c", "b")),
        ("5", "6", recv("c", "b")),
        ("6", "6", nop()),
    ]
    lcs = Lcs.build([str(i) for i in range(1, 7)], ["c"], ["a", "b", "c"], rules)
    return Nplcs(lcs.check(), Fraction(1, 2))


def gadget(alphabet: Sequence[str]) -> Nplcs:
    """
    Cleaning gadget over messages M: entered at ``in``, left at ``out`` with
    an empty channel, never with a non-empty one.

    Raises:
        ValidationError: if M is empty or already contains the marker
    """
    messages = list(dict.fromkeys(alphabet))
    if not messages:
        raise ValidationError(
            [ValidationIssue("EmptyAlphabet", "M", "the gadget needs at least one message")]
        )
    if GADGET_MARKER in messages:
        raise ValidationError(
            [ValidationIssue("ReservedMessage", GADGET_MARKER, "the marker must be fresh")]
        )
    letter = messages[0]
    rules = [
        ("in", "1", send("c", GADGET_MARKER)),
        ("1", "out", recv("c", GADGET_MARKER)),
        ("1", "2", nop()),
    ]
    rules += [("2", "2", recv("c", m)) for m in messages]
    rules += [
        ("2", "2", send("c", GADGET_MARKER)),
        ("2", "3", recv("c", GADGET_MARKER)),
        ("3", "3", recv("c", GADGET_MARKER)),
        ("3", "3", send("c", letter)),
        ("3", "in", recv("c", letter)),
        ("out", "out", nop()),
    ]
    lcs = Lcs.build(
        ["in", "1", "2", "3", "out"], ["c"], messages + [GADGET_MARKER], rules
    )
    return Nplcs(lcs.check(), Fraction(1, 2))


FIXTURES: Dict[str, Callable[..., Nplcs]] = {
    "run6": lambda *params: run6(),
    "gadget": lambda *params: gadget([m for p in params for m in p.split(",") if m]),
}


def fixture(name: str, *params: str) -> Nplcs:
    """
    Raises:
        UnknownFixtureError: for names other than run6 and gadget
    """
    if name not in FIXTURES:
        raise UnknownFixtureError(f"unknown fixture {name!r}; choose from {sorted(FIXTURES)}")
    return FIXTURES[name](*params)
