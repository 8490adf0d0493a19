# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.

"""
Tests for backward saturation and constrained reachability.
"""

import re
from collections import deque

import numpy as np
import pytest

from nplcs.exceptions import SaturationLimitError
from nplcs.models.core import enumerate_words
from nplcs.models.upsets import UpSet
from nplcs.services.generator import Profile, random_model
from nplcs.services.reach import (
    Mode,
    ReachQuery,
    backward_reach,
    control_reach,
    reach_with_empty,
    reaches,
    saturate,
)


@pytest.mark.unit
class TestBackwardReach:
    def test_run6_into_three_through_one_and_two(self, run6_lcs):
        upset = backward_reach(run6_lcs, UpSet.from_locations(run6_lcs, {"3"}), {"1", "2"})
        for location, word in [("2", "c"), ("1", "bc"), ("2", ""), ("1", "")]:
            assert run6_lcs.configuration(location, {"c": word}) in upset
        assert run6_lcs.empty("4") not in upset

    def test_gadget_entry_reaches_exit(self):
        from nplcs.cli.fixtures import gadget

        lcs = gadget(["a"]).lcs
        upset = backward_reach(lcs, UpSet.from_locations(lcs, {"out"}), lcs.locations)
        assert lcs.empty("in") in upset

    def test_result_is_a_fixpoint(self, run6_lcs):
        target = UpSet.from_locations(run6_lcs, {"6"})
        saturation = saturate(run6_lcs, target, run6_lcs.locations)
        again = saturate(run6_lcs, saturation.upset, run6_lcs.locations)
        assert again.upset.equals(saturation.upset)

    def test_generator_limit(self, gadget_model):
        lcs = gadget_model.lcs
        target = UpSet(lcs.configuration("out", {"c": m}) for m in lcs.messages)
        with pytest.raises(SaturationLimitError):
            saturate(lcs, target, lcs.locations, max_generators=1)


@pytest.mark.unit
class TestWitnessPath:
    def test_path_replays_to_target(self, run6_lcs):
        saturation = saturate(run6_lcs, UpSet.from_locations(run6_lcs, {"3"}), {"1", "2"})
        steps = saturation.witness_path(run6_lcs.empty("2"))
        assert steps
        for (config, rule), following in zip(steps, steps[1:] + [(None, None)]):
            perfect = run6_lcs.perfect_step(config, rule)
            successor = following[0] or saturation.path_end(run6_lcs.empty("2"))
            assert successor.leq(perfect)
        assert saturation.path_end(run6_lcs.empty("2")).location == "3"

    def test_non_generator(self, run6_lcs):
        saturation = saturate(run6_lcs, UpSet.from_locations(run6_lcs, {"3"}), {"1", "2"})
        with pytest.raises(KeyError):
            saturation.witness_path(run6_lcs.empty("5"))


@pytest.mark.unit
class TestReaches:
    def test_half_open(self, run6_lcs):
        target = UpSet.from_locations(run6_lcs, {"3"})
        query = ReachQuery(target, frozenset({"1", "2"}), Mode.HALF_OPEN)
        assert reaches(run6_lcs, run6_lcs.empty("1"), query)

    def test_closed_needs_final_location_inside(self, run6_lcs):
        target = UpSet.from_locations(run6_lcs, {"6"})
        query = ReachQuery(target, frozenset({"4", "5"}), Mode.CLOSED)
        assert not reaches(run6_lcs, run6_lcs.empty("4"), query)

    def test_zero_steps(self, run6_lcs):
        query = ReachQuery(UpSet.from_locations(run6_lcs, {"3"}), frozenset(), Mode.HALF_OPEN)
        assert reaches(run6_lcs, run6_lcs.empty("3"), query)

    def test_non_empty_start(self, run6_lcs):
        query = ReachQuery(UpSet.from_locations(run6_lcs, {"3"}), run6_lcs.location_set)
        assert reaches(run6_lcs, run6_lcs.configuration("2", {"c": "c"}), query)
        assert not reaches(run6_lcs, run6_lcs.configuration("6", {"c": "a"}), query)


@pytest.mark.unit
class TestControlReach:
    @pytest.mark.parametrize(
        "q, targets, expected",
        [("1", {"6"}, True), ("6", {"3"}, False), ("4", {"6"}, True), ("3", {"1"}, False)],
    )
    def test_run6(self, run6_lcs, q, targets, expected):
        assert control_reach(run6_lcs, q, targets) is expected

    @pytest.mark.parametrize(
        "q, targets, expected", [("1", {"6"}, True), ("3", {"1"}, False)]
    )
    def test_with_empty_channel(self, run6_lcs, q, targets, expected):
        assert reach_with_empty(run6_lcs, q, targets) is expected


@pytest.mark.unit
class TestGadgetInvariant:
    def test_clean_entries_never_leave_with_messages(self, gadget_model):
        lcs = gadget_model.lcs
        dirty_exit = UpSet(lcs.configuration("out", {"c": m}) for m in lcs.messages)
        upset = backward_reach(lcs, dirty_exit, lcs.locations)
        for word in enumerate_words(["a", "b"], 4):
            assert lcs.configuration("in", {"c": word}) not in upset

    def test_invariant_is_closed_under_steps(self, gadget_model):
        lcs = gadget_model.lcs
        shapes = {
            "in": r"[ab]*",
            "1": r"[ab]*\$?",
            "2": r"[ab]*\$*",
            "3": r"\$*a*",
            "out": r"",
        }
        frontier = [lcs.configuration("in", {"c": w}) for w in enumerate_words(["a", "b"], 2)]
        seen = set(frontier)
        while frontier:
            s = frontier.pop()
            word = "".join(s.word("c"))
            assert re.fullmatch(shapes[s.location], word), f"({s}) leaves the invariant"
            for rule in lcs.enabled_rules(s):
                for t in lcs.lossy_successors(s, rule):
                    if t not in seen and t.size <= 4:
                        seen.add(t)
                        frontier.append(t)


def random_upset(rng, lcs, size=2, longest=2):
    generators = []
    for _ in range(size):
        q = lcs.locations[int(rng.integers(len(lcs.locations)))]
        length = int(rng.integers(longest + 1))
        word = [lcs.messages[int(i)] for i in rng.integers(len(lcs.messages), size=length)]
        generators.append(lcs.configuration(q, {"c": word}))
    return UpSet(generators)


def random_locations(rng, lcs):
    return frozenset(q for q in lcs.locations if rng.random() < 0.6)


def forward_reaches(lcs, s, query):
    """Breadth-first search over lossy steps; the start is the zeroth step."""

    def may_visit(c):
        return query.mode is not Mode.CLOSED or c.location in query.allowed

    def may_leave(c):
        return query.mode is Mode.FREE or c.location in query.allowed

    if not may_visit(s):
        return False
    seen, queue = {s}, deque([s])
    while queue:
        c = queue.popleft()
        if query.target.contains(c):
            return True
        if not may_leave(c):
            continue
        for rule in lcs.enabled_rules(c):
            for t in lcs.lossy_successors(c, rule):
                if may_visit(t) and t not in seen:
                    seen.add(t)
                    queue.append(t)
    return False


@pytest.mark.unit
class TestBackwardReachMonotone:
    @pytest.mark.parametrize("seed", range(8))
    def test_larger_target_and_region_reach_more(self, seed):
        rng = np.random.default_rng(500 + seed)
        lcs = random_model(rng, Profile.UNRESTRICTED, locations=3, messages=2).lcs
        smaller = random_upset(rng, lcs)
        larger = smaller.union(random_upset(rng, lcs))
        narrow = random_locations(rng, lcs)
        wide = narrow | random_locations(rng, lcs)
        base = backward_reach(lcs, smaller, narrow)
        assert smaller.is_subset(base)
        assert base.is_subset(backward_reach(lcs, larger, narrow))
        assert base.is_subset(backward_reach(lcs, smaller, wide))


@pytest.mark.unit
class TestReachesAgainstForwardSearch:
    @pytest.mark.parametrize("mode", list(Mode))
    @pytest.mark.parametrize("seed", range(12))
    def test_agrees_on_finite_models(self, seed, mode):
        rng = np.random.default_rng(600 + seed)
        lcs = random_model(rng, Profile.FINITE_ONLY, locations=4, messages=2).lcs
        query = ReachQuery(random_upset(rng, lcs), random_locations(rng, lcs), mode)
        for q in lcs.locations:
            for word in enumerate_words(lcs.messages, 2):
                s = lcs.configuration(q, {"c": word})
                assert reaches(lcs, s, query) == forward_reaches(lcs, s, query), (seed, s)
