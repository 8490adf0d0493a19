# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.

"""
Random model generator for differential and property tests.
"""

import logging
from enum import Enum
from fractions import Fraction
from typing import List, Optional, Tuple

import numpy as np

from nplcs.models.core import Lcs, Nplcs, Operation

logger = logging.getLogger(__name__)

MESSAGE_NAMES = "abcdefgh"


class Profile(str, Enum):
    """
    FINITE_ONLY gives every location a level: sends strictly raise the level and
    no rule lowers it, so a run sends fewer messages than there are levels and
    every reachable state space is finite. UNRESTRICTED draws rules freely.
    """

    FINITE_ONLY = "finite-only"
    UNRESTRICTED = "unrestricted"


def random_model(
    rng: np.random.Generator,
    profile: Profile = Profile.FINITE_ONLY,
    locations: int = 4,
    messages: int = 2,
    channels: int = 1,
    extra_rules: Optional[int] = None,
    levels: int = 3,
) -> Nplcs:
    """Draw a valid model: every location gets at least one non-receive rule."""
    profile = Profile(profile)
    names = [str(i + 1) for i in range(locations)]
    alphabet = list(MESSAGE_NAMES[:messages])
    channel_names = ["c"] if channels == 1 else [f"c{i + 1}" for i in range(channels)]
    level = {q: 0 for q in names}
    if profile is Profile.FINITE_ONLY:
        drawn = sorted(int(x) for x in rng.integers(0, levels, size=locations))
        level = dict(zip(names, drawn))

    def targets(source: str, strictly_higher: bool) -> List[str]:
        if profile is Profile.UNRESTRICTED:
            return names
        if strictly_higher:
            return [q for q in names if level[q] > level[source]]
        return [q for q in names if level[q] >= level[source]]

    def pick(options: List[str]) -> str:
        return options[int(rng.integers(len(options)))]

    def message_op(kind: str) -> Operation:
        channel = pick(channel_names)
        message = pick(alphabet)
        if kind == "send":
            return Operation.send(channel, message)
        return Operation.recv(channel, message)

    rules: List[Tuple[str, str, Operation]] = []
    for q in names:
        upward = targets(q, strictly_higher=True)
        if upward and rng.random() < 0.5:
            rules.append((q, pick(upward), message_op("send")))
        else:
            rules.append((q, pick(targets(q, strictly_higher=False)), Operation.internal()))

    count = int(rng.integers(locations, 2 * locations + 1)) if extra_rules is None else extra_rules
    for _ in range(count):
        q = pick(names)
        kind = pick(["send", "recv", "nop"])
        if kind == "send":
            upward = targets(q, strictly_higher=True)
            if upward:
                rules.append((q, pick(upward), message_op("send")))
                continue
            kind = "nop"
        target = pick(targets(q, strictly_higher=False))
        op = Operation.internal() if kind == "nop" else message_op("recv")
        rules.append((q, target, op))

    unique = list(dict.fromkeys(rules))
    lcs = Lcs.build(names, channel_names, alphabet, unique)
    logger.debug(f"random {profile.value} model: {lcs!r}")
    return Nplcs(lcs.check(), Fraction(1, 2))
