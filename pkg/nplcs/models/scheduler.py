# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.

"""
Finitely represented witness schedulers.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, FrozenSet, Optional, Tuple

from nplcs.exceptions import UndefinedDecisionError
from nplcs.models.core import Configuration, Lcs, TransitionRule


class SchedulerKind(str, Enum):
    SAFE_BLIND = "SafeBlind"
    STUBBORN = "Stubborn"
    ROUND_ROBIN = "RoundRobinBuchi"
    EVENTUALITY_CHAIN = "EventualityChain"


@dataclass(frozen=True)
class Decision:
    """Rule to fire, mode afterwards, and the intended lossy outcome on a stored path."""

    rule: int
    next_mode: str
    expected: Optional[Configuration] = None


@dataclass(frozen=True)
class WitnessScheduler:
    """
    A finite-memory scheduler.

    A decision in ``(mode, s)`` is looked up after applying the mode switches
    registered for ``s.location``: first the stored path table ``on_path``
    keyed by the exact configuration, then ``recovery`` keyed by location,
    then the blind ``fallback`` rule of the location.
    """

    kind: SchedulerKind
    modes: Tuple[str, ...]
    initial_mode: str
    on_path: Dict[Tuple[str, Configuration], Decision] = field(default_factory=dict)
    recovery: Dict[Tuple[str, str], Decision] = field(default_factory=dict)
    switches: Dict[Tuple[str, str], str] = field(default_factory=dict)
    fallback: Dict[str, int] = field(default_factory=dict)
    targets: Tuple[FrozenSet[str], ...] = ()

    def resolve_mode(self, mode: str, location: str) -> str:
        """Follow goal switches for ``location`` until a mode repeats or none applies."""
        seen = {mode}
        while (mode, location) in self.switches:
            mode = self.switches[(mode, location)]
            if mode in seen:
                break
            seen.add(mode)
        return mode

    def lookup(self, mode: str, s: Configuration) -> Tuple[str, Decision]:
        mode = self.resolve_mode(mode, s.location)
        decision = self.on_path.get((mode, s)) or self.recovery.get((mode, s.location))
        if decision is None and s.location in self.fallback:
            decision = Decision(self.fallback[s.location], mode)
        if decision is None:
            raise UndefinedDecisionError(f"no decision in mode {mode} at ({s})")
        return mode, decision

    def decide(self, lcs: Lcs, mode: str, s: Configuration) -> Tuple[TransitionRule, str]:
        """
        Rule chosen in configuration ``s`` under memory ``mode`` and the next mode.

        Raises:
            UndefinedDecisionError: when no enabled decision is stored
        """
        mode, decision = self.lookup(mode, s)
        rule = lcs.rule(decision.rule)
        if not lcs.is_enabled(s, rule):
            raise UndefinedDecisionError(
                f"{rule.name} chosen in mode {mode} is disabled at ({s})"
            )
        return rule, decision.next_mode

    @property
    def table_size(self) -> int:
        return len(self.on_path)

    def __repr__(self) -> str:
        return (
            f"<WitnessScheduler {self.kind.value} modes={len(self.modes)} "
            f"paths={len(self.on_path)} recovery={len(self.recovery)}>"
        )
