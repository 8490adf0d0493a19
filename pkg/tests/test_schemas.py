# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.

"""
Tests for the serialization schemas.
"""

import json

import pytest

from nplcs.models.query import Answer, SchedulerClass, Threshold, Verdict
from nplcs.schemas import (
    ConfigurationSchema,
    EstimateSchema,
    VerdictSchema,
    WitnessSchedulerSchema,
    scheduler_id,
    to_json,
)
from nplcs.services.qualitative import QualitativeChecker
from nplcs.services.sched import synth_buchi_roundrobin, synth_stubborn
from nplcs.services.sim import Estimate


@pytest.mark.unit
class TestConfigurationSchema:
    def test_dump(self, run6_lcs):
        config = run6_lcs.configuration("2", {"c": "ab"})
        assert ConfigurationSchema().dump(config) == {
            "location": "2",
            "contents": {"c": ["a", "b"]},
        }

    def test_load(self, run6_lcs):
        config = run6_lcs.configuration("5", {"c": "b"})
        assert ConfigurationSchema().load(ConfigurationSchema().dump(config)) == config


@pytest.mark.unit
class TestWitnessSchedulerSchema:
    @pytest.mark.parametrize(
        "build",
        [
            lambda lcs: synth_stubborn(lcs, {"6"}),
            lambda lcs: synth_buchi_roundrobin(lcs, [{"4"}, {"5"}]),
        ],
    )
    def test_load_restores_tables(self, run6_lcs, build):
        sched = build(run6_lcs)
        document = json.loads(to_json(WitnessSchedulerSchema().dump(sched)))
        loaded = WitnessSchedulerSchema().load(document)
        assert loaded.kind is sched.kind
        assert loaded.on_path == sched.on_path
        assert loaded.recovery == sched.recovery
        assert loaded.switches == sched.switches
        assert loaded.fallback == sched.fallback

    def test_id_is_content_derived(self, run6_lcs):
        data = WitnessSchedulerSchema().dump(synth_stubborn(run6_lcs, {"6"}))
        assert data["id"] == scheduler_id(data)
        changed = dict(data, initial_mode="other")
        assert scheduler_id(changed) != data["id"]

    def test_stale_id_is_ignored(self, run6_lcs):
        data = WitnessSchedulerSchema().dump(synth_stubborn(run6_lcs, {"3"}))
        data["id"] = "000000000000"
        assert WitnessSchedulerSchema().load(data).kind.value == "Stubborn"

    def test_json_is_byte_stable(self, run6_lcs):
        first = to_json(WitnessSchedulerSchema().dump(synth_stubborn(run6_lcs, {"6"})))
        second = to_json(WitnessSchedulerSchema().dump(synth_stubborn(run6_lcs, {"6"})))
        assert first == second


@pytest.mark.unit
class TestVerdictSchema:
    def test_class_key(self):
        verdict = Verdict(Answer.NO, Threshold.ZERO, SchedulerClass.ALL, "citation")
        data = VerdictSchema().dump(verdict)
        assert data["class"] == "all"
        assert data["witness"] is None
        assert "scheduler_class" not in data

    def test_load_with_witness(self, run6_lcs):
        verdict = QualitativeChecker(run6_lcs).eventually_as("1", [{"3"}])
        loaded = VerdictSchema().load(json.loads(to_json(VerdictSchema().dump(verdict))))
        assert loaded.answer is Answer.YES
        assert loaded.witness.on_path == verdict.witness.on_path


@pytest.mark.unit
class TestEstimateSchema:
    def test_dump(self):
        estimate = Estimate(
            trials=10, successes=5, point=0.5, ci_low=0.2, ci_high=0.8,
            seed=1, horizon=64, event="Reach({3},h=64)",
        )
        data = EstimateSchema().dump(estimate)
        assert data["event"] == "Reach({3},h=64)"
        assert EstimateSchema().load(data) == estimate
