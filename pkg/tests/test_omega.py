# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.

"""
Tests for deterministic Streett automata and the product construction.
"""

import pytest

from nplcs.exceptions import PartialDeltaError, ValidationError
from nplcs.models.dsa import Dsa
from nplcs.models.query import Answer, SchedulerClass, Threshold
from nplcs.services.omega import build_product, omega_check
from nplcs.services.qualitative import QualitativeChecker

LOCATIONS = [str(i) for i in range(1, 7)]


def toggle_on_six():
    delta = {}
    for location in LOCATIONS:
        delta[("z0", location)] = "z1" if location == "6" else "z0"
        delta[("z1", location)] = "z0" if location == "6" else "z1"
    return Dsa.build(["z0", "z1"], "z0", delta, [({"z0"}, {"z1"})])


def infinitely_often_six():
    delta = {(z, location): "s" if location == "6" else "n" for z in "ns" for location in LOCATIONS}
    return Dsa.build(["n", "s"], "n", delta, [({"n", "s"}, {"s"})])


@pytest.mark.unit
class TestDsa:
    def test_run(self):
        dsa = toggle_on_six()
        assert dsa.run(["1", "6", "6", "2", "6"]) == ["z0", "z0", "z1", "z0", "z0", "z1"]

    def test_partial_delta(self):
        dsa = Dsa.build(["z"], "z", {("z", "1"): "z"}, [({"z"}, {"z"})])
        with pytest.raises(PartialDeltaError):
            dsa.check(LOCATIONS)

    def test_undeclared_state(self):
        dsa = Dsa.build(["z"], "y", {}, [({"z"}, {"w"})])
        with pytest.raises(ValidationError) as info:
            dsa.check(LOCATIONS)
        assert {issue.subject for issue in info.value.issues} == {"y", "w"}

    def test_lasso_acceptance(self):
        dsa = toggle_on_six()
        assert dsa.accepts_lasso(["z0", "z1"])
        assert dsa.accepts_lasso(["z1"])
        assert not dsa.accepts_lasso(["z0"])


@pytest.mark.unit
class TestProduct:
    def test_source_location_is_read(self, run6_lcs):
        product = build_product(run6_lcs, toggle_on_six(), "4")
        assert product.start == "4|z0"
        assert len(product.lcs.locations) <= 12
        into_six = [
            rule
            for rule in product.lcs.rules
            if rule.source == "5|z0" and rule.target.startswith("6|")
        ]
        assert [rule.target for rule in into_six] == ["6|z0"]
        assert product.lcs.validate() == []

    def test_pairs_are_lifted(self, run6_lcs):
        product = build_product(run6_lcs, toggle_on_six(), "4")
        first, second = product.pairs[0]
        assert all(name.endswith("|z0") for name in first)
        assert all(name.endswith("|z1") for name in second)
        assert product.origin["6|z1"] == ("6", "z1")

    def test_incomplete_automaton(self, run6_lcs):
        dsa = Dsa.build(["z"], "z", {("z", "1"): "z"}, [({"z"}, {"z"})])
        with pytest.raises(PartialDeltaError):
            build_product(run6_lcs, dsa, "1")


@pytest.mark.unit
class TestOmegaCheck:
    @pytest.mark.parametrize("q", LOCATIONS)
    def test_agrees_with_buchi(self, run6_lcs, q):
        expected = QualitativeChecker(run6_lcs).buchi_as(q, [{"6"}]).answer
        verdict = omega_check(run6_lcs, q, infinitely_often_six(), Threshold.ONE)
        assert verdict.answer is expected
        assert "product" in verdict.certificate

    def test_all_schedulers_is_refused(self, run6_lcs):
        verdict = omega_check(
            run6_lcs, "1", infinitely_often_six(), Threshold.ONE, SchedulerClass.ALL
        )
        assert verdict.answer is Answer.UNDECIDABLE

    @pytest.mark.parametrize(
        "threshold, q, expected",
        [
            (Threshold.POSITIVE, "1", Answer.YES),
            (Threshold.POSITIVE, "3", Answer.NO),
            (Threshold.BELOW_ONE, "1", Answer.YES),
            (Threshold.ZERO, "3", Answer.YES),
        ],
    )
    def test_other_thresholds(self, run6_lcs, threshold, q, expected):
        assert omega_check(run6_lcs, q, infinitely_often_six(), threshold).answer is expected
