# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.

"""
Set-valued fixed points over control locations: safe and promising sets, the
eventuality table X_I, the almost-sure Büchi core and the Streett sets.
"""

import itertools
import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from nplcs.config import get_config
from nplcs.exceptions import TooManyTargetsError
from nplcs.models.core import Lcs, LocationSet
from nplcs.models.upsets import UpSet
from nplcs.services.reach import Saturation, backward_reach, saturate

logger = logging.getLogger(__name__)

IndexSet = FrozenSet[int]


def check_target_count(count: int, max_targets: Optional[int] = None) -> None:
    if max_targets is None:
        max_targets = get_config().MAX_TARGETS
    if count > max_targets:
        raise TooManyTargetsError(f"{count} target sets exceed the bound of {max_targets}")


def index_subsets(n: int) -> List[IndexSet]:
    """Subsets of {0..n-1} by increasing size, then lexicographically."""
    return [
        frozenset(combo)
        for size in range(n + 1)
        for combo in itertools.combinations(range(n), size)
    ]


def safe(lcs: Lcs, locations: Iterable[str]) -> LocationSet:
    """
    Largest X ⊆ A such that every x in X has a non-receive rule into X.

    Pruning on the control graph: receive edges are ignored and locations
    without an edge back into the set are removed until nothing changes.
    """
    current = lcs.locations_of(locations)
    while True:
        keep = frozenset(
            x
            for x in current
            if any(rule.target in current for rule in lcs.non_receive_rules(x))
        )
        if keep == current:
            return current
        current = keep


def promising(
    lcs: Lcs, locations: Iterable[str], within: Optional[Iterable[str]] = None
) -> Tuple[LocationSet, Saturation]:
    """
    Greatest promising set for A (inside ``within`` when given) and the final
    round's saturation, whose parent pointers give the witness paths.
    """
    current = lcs.location_set if within is None else lcs.locations_of(within)
    goal = lcs.locations_of(locations) & current
    target = UpSet.from_locations(lcs, goal)
    rounds = 0
    while True:
        rounds += 1
        saturation = saturate(lcs, target, current)
        refined = frozenset(
            x for x in current if saturation.upset.contains(lcs.empty(x))
        )
        logger.debug(f"prom round {rounds}: {len(current)} -> {len(refined)} locations")
        if refined == current:
            return current, saturation
        current = refined


def prom(
    lcs: Lcs, locations: Iterable[str], within: Optional[Iterable[str]] = None
) -> LocationSet:
    """Locations from which A is reached almost surely by some scheduler."""
    return promising(lcs, locations, within)[0]


def buchi_core(
    lcs: Lcs, targets: Sequence[Iterable[str]], within: Optional[Iterable[str]] = None
) -> LocationSet:
    """
    Locations from which every target is visited infinitely often almost surely.

    Greatest Y (inside ``within``) such that Y is safe and each A_i ∩ Y is
    reached almost surely from every location of Y by paths staying in Y.
    With no targets this is ``safe(within)``.
    """
    current = lcs.location_set if within is None else lcs.locations_of(within)
    goals = [lcs.locations_of(a) for a in targets]
    while True:
        refined = safe(lcs, current)
        for goal in goals:
            if not refined:
                break
            refined &= prom(lcs, goal & current, within=current)
        if refined == current:
            return current
        current = refined


def eventuality_sets(
    lcs: Lcs, targets: Sequence[Iterable[str]], max_targets: Optional[int] = None
) -> Dict[IndexSet, LocationSet]:
    """
    The table X_I: X_∅ = Q and X_I = ⋃_{i∈I} Prom(A_i ∩ X_{I∖{i}}).

    X_I holds the locations from which the targets indexed by I can all be
    visited almost surely.
    """
    check_target_count(len(targets), max_targets)
    goals = [lcs.locations_of(a) for a in targets]
    table: Dict[IndexSet, LocationSet] = {}
    for subset in index_subsets(len(goals)):
        if not subset:
            table[subset] = lcs.location_set
            continue
        value: FrozenSet[str] = frozenset()
        for i in sorted(subset):
            value |= prom(lcs, goals[i] & table[subset - {i}])
        table[subset] = value
    return table


@dataclass
class StreettSets:
    """The set C together with its per-subset parts and the transformed systems."""

    union: LocationSet
    parts: Dict[IndexSet, LocationSet]
    removed: Dict[IndexSet, LocationSet] = field(default_factory=dict)


def core_avoiding(
    lcs: Lcs, removed: Iterable[str], targets: Sequence[Iterable[str]]
) -> LocationSet:
    """
    Büchi core of the system with ``removed`` replaced by a ``fail`` sink.

    fail never belongs to the result; removing every location leaves nothing.
    """
    removed = lcs.locations_of(removed)
    survivors = lcs.location_set - removed
    if not survivors:
        return frozenset()
    system = lcs.restrict_with_fail(removed)
    goals = [frozenset(a) & survivors for a in targets]
    return buchi_core(system, goals, within=survivors)


def streett_sets(
    lcs: Lcs,
    pairs: Sequence[Tuple[Iterable[str], Iterable[str]]],
    max_targets: Optional[int] = None,
) -> StreettSets:
    """
    C = ⋃_I C_I where C_I holds the locations from which, with every A_i
    (i ∉ I) removed, each B_i (i ∈ I) is visited infinitely often almost surely.
    """
    check_target_count(len(pairs), max_targets)
    firsts = [lcs.locations_of(a) for a, _ in pairs]
    seconds = [lcs.locations_of(b) for _, b in pairs]
    parts: Dict[IndexSet, LocationSet] = {}
    removed_sets: Dict[IndexSet, LocationSet] = {}
    for subset in index_subsets(len(pairs)):
        removed = frozenset().union(
            *(firsts[i] for i in range(len(pairs)) if i not in subset)
        )
        removed_sets[subset] = removed
        parts[subset] = core_avoiding(lcs, removed, [seconds[i] for i in sorted(subset)])
    union = frozenset().union(*parts.values())
    return StreettSets(union=union, parts=parts, removed=removed_sets)


def streett_positive_set(
    lcs: Lcs, first: Iterable[str], second: Iterable[str]
) -> LocationSet:
    """
    Locations p such that, with B replaced by ``fail``, (p, ε) can reach the
    Büchi core of A: there A is then visited infinitely often while B is avoided.
    """
    removed = lcs.locations_of(second)
    core = core_avoiding(lcs, removed, [first])
    if not core:
        return frozenset()
    system = lcs.restrict_with_fail(removed)
    survivors = lcs.location_set - removed
    reach = backward_reach(system, UpSet.from_locations(system, core), system.locations)
    return frozenset(p for p in survivors if reach.contains(system.empty(p)))
