# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.

"""
Witness scheduler synthesis: blind safe schedulers, stubborn schedulers for
almost-sure reachability, round-robin schedulers for generalized Büchi
conditions and chained stubborn schedulers for several eventualities.
"""

import logging
from typing import Dict, FrozenSet, Iterable, List, Sequence, Tuple

from nplcs.exceptions import EmptyCoreError, EmptyPromError, EmptySafeError
from nplcs.models.core import Configuration, Lcs, LocationSet
from nplcs.models.scheduler import Decision, SchedulerKind, WitnessScheduler
from nplcs.models.upsets import UpSet
from nplcs.services.fixpoints import (
    IndexSet,
    buchi_core,
    eventuality_sets,
    promising,
    safe,
)
from nplcs.services.reach import Saturation, saturate

logger = logging.getLogger(__name__)

SINGLE_MODE = "m0"


def blind_fallback(lcs: Lcs) -> Dict[str, int]:
    """Lowest-index non-receive rule of every location."""
    return {
        q: lcs.non_receive_rules(q)[0].index
        for q in lcs.locations
        if lcs.non_receive_rules(q)
    }


def staying_rule(lcs: Lcs, location: str, region: FrozenSet[str]) -> int:
    """Lowest-index non-receive rule of ``location`` whose target lies in ``region``."""
    for rule in lcs.non_receive_rules(location):
        if rule.target in region:
            return rule.index
    raise ValueError(f"location {location} has no non-receive rule into the region")


def fuse_paths(
    lcs: Lcs,
    saturation: Saturation,
    sources: Iterable[str],
    mode: str,
    on_path: Dict[Tuple[str, Configuration], Decision],
    recovery: Dict[Tuple[str, str], Decision],
) -> None:
    """
    Store the witness path of every source location into the path table.

    Paths are inserted in canonical location order; a path stops as soon as it
    meets a configuration stored earlier, so paths may join but never diverge.
    The recovery rule of a location is the first rule of its own path.
    """
    for x in sorted(sources):
        steps = saturation.witness_path(lcs.empty(x))
        if not steps:
            continue
        recovery[(mode, x)] = Decision(steps[0][1].index, mode)
        for config, rule in steps:
            if (mode, config) in on_path:
                break
            parent = saturation.parents[config]
            assert parent is not None
            on_path[(mode, config)] = Decision(rule.index, mode, expected=parent[1])


def synth_safe(lcs: Lcs, locations: Iterable[str]) -> WitnessScheduler:
    """
    Blind memoryless scheduler keeping the run inside A forever from Safe(A).

    Raises:
        EmptySafeError: if Safe(A) is empty
    """
    region = safe(lcs, locations)
    if not region:
        raise EmptySafeError(f"Safe({sorted(lcs.locations_of(locations))}) is empty")
    recovery = {
        (SINGLE_MODE, x): Decision(staying_rule(lcs, x, region), SINGLE_MODE)
        for x in sorted(region)
    }
    logger.info(f"synthesized blind safe scheduler over {len(region)} locations")
    return WitnessScheduler(
        kind=SchedulerKind.SAFE_BLIND,
        modes=(SINGLE_MODE,),
        initial_mode=SINGLE_MODE,
        recovery=recovery,
        fallback=blind_fallback(lcs),
        targets=(frozenset(locations),),
    )


def synth_stubborn(lcs: Lcs, locations: Iterable[str]) -> WitnessScheduler:
    """
    Memoryless scheduler reaching A almost surely from every location of Prom(A).

    In normal mode it follows the stored path table; any other configuration is
    handled by the recovery rule of its location until a stored configuration
    shows up again, which the finite attractor makes almost sure.

    Raises:
        EmptyPromError: if Prom(A) is empty
    """
    goal = lcs.locations_of(locations)
    region, saturation = promising(lcs, goal)
    if not region:
        raise EmptyPromError(f"Prom({sorted(goal)}) is empty")
    on_path: Dict[Tuple[str, Configuration], Decision] = {}
    recovery: Dict[Tuple[str, str], Decision] = {}
    fuse_paths(lcs, saturation, region - goal, SINGLE_MODE, on_path, recovery)
    logger.info(
        f"synthesized stubborn scheduler for {sorted(goal)}: "
        f"{len(on_path)} path entries over {len(region)} locations"
    )
    return WitnessScheduler(
        kind=SchedulerKind.STUBBORN,
        modes=(SINGLE_MODE,),
        initial_mode=SINGLE_MODE,
        on_path=on_path,
        recovery=recovery,
        fallback=blind_fallback(lcs),
        targets=(goal,),
    )


def round_robin_mode(i: int) -> str:
    return f"rr{i}"


def synth_buchi_roundrobin(lcs: Lcs, targets: Sequence[Iterable[str]]) -> WitnessScheduler:
    """
    Finite-memory scheduler visiting every A_i infinitely often almost surely.

    Mode i runs the stubborn scheduler for A_i inside the Büchi core Y; visiting
    A_i advances to mode i+1 (mod n).

    Raises:
        EmptyCoreError: if the core Y is empty
    """
    goals = [lcs.locations_of(a) for a in targets]
    core = buchi_core(lcs, goals)
    if not core:
        raise EmptyCoreError(f"no location visits {[sorted(g) for g in goals]} almost surely")
    n = len(goals)
    modes = tuple(round_robin_mode(i) for i in range(n))
    on_path: Dict[Tuple[str, Configuration], Decision] = {}
    recovery: Dict[Tuple[str, str], Decision] = {}
    switches: Dict[Tuple[str, str], str] = {}
    for i, goal in enumerate(goals):
        mode = modes[i]
        reached = goal & core
        saturation = saturate(lcs, UpSet.from_locations(lcs, reached), core)
        fuse_paths(lcs, saturation, core - reached, mode, on_path, recovery)
        for a in sorted(reached):
            switches[(mode, a)] = modes[(i + 1) % n]
            recovery[(mode, a)] = Decision(staying_rule(lcs, a, core), mode)
    logger.info(f"synthesized round-robin scheduler with {n} modes over core {sorted(core)}")
    return WitnessScheduler(
        kind=SchedulerKind.ROUND_ROBIN,
        modes=modes,
        initial_mode=modes[0],
        on_path=on_path,
        recovery=recovery,
        switches=switches,
        fallback=blind_fallback(lcs),
        targets=tuple(goals),
    )


def chain_mode(remaining: IndexSet) -> str:
    if not remaining:
        return "done"
    return "todo:" + ",".join(str(i) for i in sorted(remaining))


def synth_eventuality_chain(lcs: Lcs, targets: Sequence[Iterable[str]]) -> WitnessScheduler:
    """
    Finite-memory scheduler visiting every A_i almost surely from X_{1..n}.

    The mode is the set I of targets still to visit. In mode I the scheduler is
    stubborn for ⋃_{i∈I} (A_i ∩ X_{I∖{i}}); reaching a location of
    A_i ∩ X_{I∖{i}} (lowest such i) drops i from the mode.

    Raises:
        EmptyPromError: if X_{1..n} is empty
    """
    goals = [lcs.locations_of(a) for a in targets]
    table = eventuality_sets(lcs, goals)
    everything: IndexSet = frozenset(range(len(goals)))
    if not table[everything]:
        raise EmptyPromError("no location visits every target almost surely")
    on_path: Dict[Tuple[str, Configuration], Decision] = {}
    recovery: Dict[Tuple[str, str], Decision] = {}
    switches: Dict[Tuple[str, str], str] = {}
    modes: List[str] = []
    for remaining in sorted(table, key=lambda s: (-len(s), sorted(s))):
        mode = chain_mode(remaining)
        modes.append(mode)
        if not remaining or not table[remaining]:
            continue
        exits: Dict[str, IndexSet] = {}
        for i in sorted(remaining, reverse=True):
            for a in goals[i] & table[remaining - {i}]:
                exits[a] = remaining - {i}
        region, saturation = promising(lcs, exits)
        fuse_paths(lcs, saturation, region - set(exits), mode, on_path, recovery)
        for a, rest in exits.items():
            switches[(mode, a)] = chain_mode(rest)
    logger.info(f"synthesized eventuality chain with {len(modes)} modes")
    return WitnessScheduler(
        kind=SchedulerKind.EVENTUALITY_CHAIN,
        modes=tuple(modes),
        initial_mode=chain_mode(everything),
        on_path=on_path,
        recovery=recovery,
        switches=switches,
        fallback=blind_fallback(lcs),
        targets=tuple(goals),
    )


def scheduler_region(lcs: Lcs, sched: WitnessScheduler) -> LocationSet:
    """Locations the scheduler is built to start from."""
    if sched.kind is SchedulerKind.SAFE_BLIND:
        return safe(lcs, sched.targets[0])
    if sched.kind is SchedulerKind.STUBBORN:
        return promising(lcs, sched.targets[0])[0]
    if sched.kind is SchedulerKind.ROUND_ROBIN:
        return buchi_core(lcs, sched.targets)
    return eventuality_sets(lcs, sched.targets)[frozenset(range(len(sched.targets)))]
