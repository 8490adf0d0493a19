# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.

"""
Backward reachability by saturation of upward-closed sets.
"""

import logging
from collections import deque
from dataclasses import dataclass
from enum import Enum
from typing import Deque, Dict, FrozenSet, Iterable, List, Optional, Tuple

from nplcs.config import get_config
from nplcs.exceptions import SaturationLimitError
from nplcs.models.core import Configuration, Lcs, TransitionRule
from nplcs.models.upsets import UpSet, insert_into_bucket, pre_generator

logger = logging.getLogger(__name__)

Parent = Optional[Tuple[TransitionRule, Configuration]]


class Mode(str, Enum):
    """Location constraint of a reachability question."""

    CLOSED = "closed"
    HALF_OPEN = "half-open"
    FREE = "free"


@dataclass(frozen=True)
class ReachQuery:
    target: UpSet
    allowed: FrozenSet[str]
    mode: Mode = Mode.FREE


@dataclass
class Saturation:
    """
    Result of a backward saturation.

    ``parents`` maps every generator ever created to the rule and successor
    generator it was computed from (None for generators of the target), so a
    concrete path to the target can be replayed from any generator.
    """

    upset: UpSet
    parents: Dict[Configuration, Parent]
    rounds: int

    def witness_path(self, start: Configuration) -> List[Tuple[Configuration, TransitionRule]]:
        """
        Steps ``(configuration, rule)`` leading from generator ``start`` to the target.

        Firing each rule from its configuration and losing down to the next
        configuration of the list is a lossy step of positive probability.
        """
        if start not in self.parents:
            raise KeyError(f"({start}) is not a generator of this saturation")
        steps: List[Tuple[Configuration, TransitionRule]] = []
        current = start
        parent = self.parents[current]
        while parent is not None:
            rule, successor = parent
            steps.append((current, rule))
            current = successor
            parent = self.parents[current]
        return steps

    def path_end(self, start: Configuration) -> Configuration:
        """Target generator at the end of the witness path from ``start``."""
        current = start
        while self.parents[current] is not None:
            current = self.parents[current][1]
        return current


def saturate(
    lcs: Lcs,
    target: UpSet,
    allowed: Iterable[str],
    max_generators: Optional[int] = None,
) -> Saturation:
    """
    Least fixed point of ``U ∪ pre(U)`` over rules whose source lies in ``allowed``.

    Raises:
        SaturationLimitError: if the antichain grows beyond ``max_generators``
    """
    if max_generators is None:
        max_generators = get_config().MAX_GENERATORS
    allowed_set = frozenset(allowed)
    rules = [r for r in lcs.rules if r.source in allowed_set]
    rules_into: Dict[str, List[TransitionRule]] = {}
    for rule in rules:
        rules_into.setdefault(rule.target, []).append(rule)

    buckets: Dict[str, List[Configuration]] = {}
    parents: Dict[Configuration, Parent] = {}
    worklist: Deque[Configuration] = deque()
    for g in target:
        if insert_into_bucket(buckets.setdefault(g.location, []), g):
            parents[g] = None
            worklist.append(g)

    rounds = 0
    while worklist:
        rounds += 1
        batch, worklist = worklist, deque()
        added = 0
        for g in batch:
            if g not in buckets.get(g.location, ()):
                continue
            for rule in rules_into.get(g.location, ()):
                p = pre_generator(g, rule)
                if p is None or p in parents:
                    continue
                if insert_into_bucket(buckets.setdefault(p.location, []), p):
                    parents[p] = (rule, g)
                    worklist.append(p)
                    added += 1
        size = sum(len(b) for b in buckets.values())
        logger.debug(
            f"saturation round {rounds}: {added} generators added, antichain size {size}"
        )
        if size > max_generators:
            raise SaturationLimitError(
                f"antichain exceeded {max_generators} generators after {rounds} rounds"
            )

    upset = UpSet(g for bucket in buckets.values() for g in bucket)
    return Saturation(upset=upset, parents=parents, rounds=rounds)


def backward_reach(lcs: Lcs, target: UpSet, allowed: Iterable[str]) -> UpSet:
    """Configurations reaching ``target`` through steps whose sources lie in ``allowed``."""
    return saturate(lcs, target, allowed).upset


def query_saturation(lcs: Lcs, query: ReachQuery) -> Saturation:
    """Saturation answering ``query`` from configurations reached after a step."""
    if query.mode is Mode.FREE:
        return saturate(lcs, query.target, lcs.locations)
    if query.mode is Mode.CLOSED:
        return saturate(lcs, query.target.restrict(query.allowed), query.allowed)
    return saturate(lcs, query.target, query.allowed)


def reaches(lcs: Lcs, s: Configuration, query: ReachQuery) -> bool:
    """
    Exact constrained reachability from an arbitrary configuration.

    Zero steps count when ``s`` itself is in the target (and, in closed mode,
    located in ``allowed``). Otherwise some enabled first step must land, before
    losses, inside the saturated set; the losses of that step then reach any of
    its subwords.
    """
    constrained = query.mode is not Mode.FREE
    if query.mode is Mode.CLOSED and s.location not in query.allowed:
        return False
    if query.target.contains(s):
        return True
    if constrained and s.location not in query.allowed:
        return False
    saturation = query_saturation(lcs, query)
    if s.is_empty:
        return saturation.upset.contains(s)
    return any(
        saturation.upset.contains(lcs.perfect_step(s, rule))
        for rule in lcs.enabled_rules(s)
    )


def control_reach(lcs: Lcs, q: str, locations: Iterable[str]) -> bool:
    """True iff (q, ε) reaches some location of ``locations``."""
    target = UpSet.from_locations(lcs, locations)
    return backward_reach(lcs, target, lcs.locations).contains(lcs.empty(q))


def reach_with_empty(lcs: Lcs, q: str, locations: Iterable[str]) -> bool:
    """
    True iff (q, ε) reaches (x, ε) for some x in ``locations``.

    Every step may lose all messages, so this coincides with ``control_reach``;
    with invariant checks on, the replayed witness path must end empty.
    """
    targets = lcs.locations_of(locations)
    saturation = saturate(lcs, UpSet.from_locations(lcs, targets), lcs.locations)
    start = lcs.empty(q)
    answer = saturation.upset.contains(start)
    if answer and get_config().CHECK_INVARIANTS:
        end = saturation.path_end(start)
        assert end.is_empty and end.location in targets, f"witness ends in ({end})"
    return answer
