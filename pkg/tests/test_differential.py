# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.

"""
Differential tests: symbolic verdicts against the exhaustive oracle on
random models with finite reachable state spaces.
"""

import numpy as np
import pytest

from nplcs.models.dsa import Dsa
from nplcs.models.query import Answer, Query, QueryKind, SchedulerClass, Threshold
from nplcs.services.generator import Profile, random_model
from nplcs.services.oracle import Exceeded, explore, oracle_qualitative
from nplcs.services.qualitative import QualitativeChecker

FM = SchedulerClass.FINITE_MEMORY
ALL = SchedulerClass.ALL


def random_subset(rng, locations):
    return frozenset(q for q in locations if rng.random() < 0.4)


def random_dsa(rng, locations):
    states = ["z0", "z1"]
    delta = {
        (z, q): states[int(rng.integers(2))] for z in states for q in locations
    }
    first = frozenset(z for z in states if rng.random() < 0.5)
    second = frozenset(z for z in states if rng.random() < 0.5)
    return Dsa.build(states, "z0", delta, [(first, second)])


def queries(rng, locations, q):
    """One query of every decidable shape, with freshly drawn targets."""
    n = int(rng.integers(1, 3))
    targets = tuple(random_subset(rng, locations) for _ in range(n))
    pairs = tuple(
        (random_subset(rng, locations), random_subset(rng, locations)) for _ in range(n)
    )
    dsa = random_dsa(rng, locations)
    for threshold in Threshold:
        yield Query(QueryKind.EVENTUALITY, threshold, ALL, q, targets=targets)
        buchi_class = FM if threshold is Threshold.POSITIVE else ALL
        yield Query(QueryKind.BUCHI, threshold, buchi_class, q, targets=targets)
        yield Query(QueryKind.STREETT, threshold, FM, q, pairs=pairs)
        yield Query(QueryKind.OMEGA, threshold, FM, q, dsa=dsa)


def disagreements(seed, models):
    rng = np.random.default_rng(seed)
    found = []
    for _ in range(models):
        nplcs = random_model(
            rng,
            Profile.FINITE_ONLY,
            locations=int(rng.integers(2, 7)),
            messages=int(rng.integers(1, 4)),
        )
        lcs = nplcs.lcs
        checker = QualitativeChecker(lcs, synthesize=False)
        for q in lcs.locations:
            mdp = explore(nplcs, lcs.empty(q))
            assert not isinstance(mdp, Exceeded)
            for query in queries(rng, lcs.locations, q):
                symbolic = checker.check(query).answer
                assert symbolic is not Answer.UNDECIDABLE
                exact = oracle_qualitative(mdp, query)
                if symbolic is not exact:
                    found.append((lcs, str(query), symbolic, exact))
    return found


@pytest.mark.integration
class TestDifferential:
    def test_small_batch(self):
        assert disagreements(seed=101, models=8) == []

    @pytest.mark.slow
    def test_hundred_models(self):
        assert disagreements(seed=2024, models=120) == []
