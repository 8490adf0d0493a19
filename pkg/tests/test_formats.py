# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.

"""
Tests for the model, automaton, query and event text formats.
"""

import pytest

from nplcs.cli.formats import (
    config_to_text,
    dsa_to_text,
    model_to_text,
    parse_dsa,
    parse_event,
    parse_model,
    parse_query,
    parse_start,
    parse_targets,
)
from nplcs.exceptions import ModelSyntaxError, PartialDeltaError, ValidationError
from nplcs.models.query import QueryKind, SchedulerClass, Threshold
from nplcs.services.sim import SimEventKind

MODEL = """\
# two locations, one channel
lcs tiny
channels c
messages a b
locations p q
fault_rate 1/3
rule p -> q : c ! a
rule q -> p : c ? a   # receive
rule q -> q : nop
rule p -> p : nop
"""

RUN6_LOCATIONS = ["1", "2", "3", "4", "5", "6"]

SIX_DSA = """\
dsa
states z z'
initial z
trans z --1--> z
trans z --2--> z
trans z --3--> z
trans z --4--> z
trans z --5--> z
trans z --6--> z'
trans z' --1--> z
trans z' --2--> z
trans z' --3--> z
trans z' --4--> z
trans z' --5--> z
trans z' --6--> z'
pair A={z,z'} B={z'}   # location 6 infinitely often
"""


@pytest.mark.unit
class TestModelFormat:
    def test_parse(self):
        nplcs = parse_model(MODEL)
        assert nplcs.lcs.locations == ("p", "q")
        assert len(nplcs.lcs.rules) == 4
        assert nplcs.fault_rate.denominator == 3
        assert str(nplcs.lcs.rule(2).op) == "c ? a"

    def test_canonical_text_reads_back(self, run6_model):
        again = parse_model(model_to_text(run6_model, "run6"))
        assert again.lcs == run6_model.lcs
        assert again.fault_rate == run6_model.fault_rate

    def test_syntax_error_names_the_line(self):
        text = MODEL.replace("rule q -> q : nop", "rule q => q : nop")
        with pytest.raises(ModelSyntaxError) as info:
            parse_model(text)
        assert info.value.line == 9

    def test_missing_header(self):
        with pytest.raises(ModelSyntaxError):
            parse_model("locations p\nrule p -> p : nop\n")

    def test_validation_issues_carry_line_numbers(self):
        text = MODEL.replace("rule p -> q : c ! a", "rule p -> q : d ! a")
        with pytest.raises(ValidationError) as info:
            parse_model(text)
        assert any("line 7" in str(issue) for issue in info.value.issues)

    def test_bad_fault_rate(self):
        with pytest.raises(ValidationError):
            parse_model(MODEL.replace("1/3", "3/2"))


@pytest.mark.unit
class TestDsaFormat:
    def test_literal_syntax(self):
        dsa = parse_dsa(SIX_DSA, RUN6_LOCATIONS)
        assert dsa.states == ("z", "z'")
        assert dsa.step("z", "6") == "z'"
        assert dsa.step("z'", "3") == "z"
        assert dsa.pairs == ((frozenset({"z", "z'"}), frozenset({"z'"})),)
        assert len(dsa.delta) == 12

    def test_canonical_text_reads_back(self):
        dsa = parse_dsa(SIX_DSA, RUN6_LOCATIONS)
        text = dsa_to_text(dsa)
        assert "trans z --6--> z'" in text
        assert "pair A={z,z'} B={z'}" in text
        assert parse_dsa(text, RUN6_LOCATIONS) == dsa

    def test_missing_transition_is_not_completed(self):
        text = SIX_DSA.replace("trans z' --5--> z\n", "")
        dsa = parse_dsa(text)
        assert len(dsa.delta) == 11
        with pytest.raises(PartialDeltaError):
            parse_dsa(text, RUN6_LOCATIONS)

    def test_wildcard_is_rejected(self):
        with pytest.raises(ModelSyntaxError) as info:
            parse_dsa("dsa\nstates z\ninitial z\ntrans z --*--> z\n")
        assert info.value.line == 4

    def test_old_pair_syntax_is_rejected(self):
        with pytest.raises(ModelSyntaxError):
            parse_dsa("dsa\nstates z\ninitial z\npair {z} {z}\n")

    def test_repeated_transition(self):
        with pytest.raises(ModelSyntaxError):
            parse_dsa(SIX_DSA + "trans z --6--> z\n")

    def test_missing_initial(self):
        with pytest.raises(ModelSyntaxError):
            parse_dsa("dsa\nstates z\n")


@pytest.mark.unit
class TestQueryFormat:
    def test_targets(self):
        query = parse_query("EV{=1}[all] from 1 {4};{6}")
        assert query.kind is QueryKind.EVENTUALITY
        assert query.threshold is Threshold.ONE
        assert query.scheduler_class is SchedulerClass.ALL
        assert query.targets == (frozenset({"4"}), frozenset({"6"}))

    def test_pairs(self):
        query = parse_query("STREETT-FM{>0}[fm] from 2 ({3},{}) ; ({4,5},{6})")
        assert query.pairs == (
            (frozenset({"3"}), frozenset()),
            (frozenset({"4", "5"}), frozenset({"6"})),
        )

    def test_text_reads_back(self):
        text = "BUCHI{<1}[all] from 1 {1,2};{6}"
        assert parse_query(str(parse_query(text))) == parse_query(text)

    def test_omega_uses_the_loader(self, run6_lcs):
        seen = []

        def loader(path):
            seen.append(path)
            return parse_dsa(SIX_DSA, run6_lcs.locations)

        query = parse_query("OMEGA-FM{=1}[fm] from 1 dsa=aut.dsa", loader)
        assert seen == ["aut.dsa"]
        assert query.dsa.states == ("z", "z'")

    @pytest.mark.parametrize(
        "text",
        [
            "EV{=2}[all] from 1 {3}",
            "EV{=1}[some] from 1 {3}",
            "EV{=1}[all] 1 {3}",
            "STREETT-FM{=1}[fm] from 1 {3}",
            "OMEGA-FM{=1}[fm] from 1 dsa=x.dsa",
        ],
    )
    def test_rejected(self, text):
        with pytest.raises(ModelSyntaxError):
            parse_query(text)


@pytest.mark.unit
class TestStartAndEvents:
    def test_start_forms(self, run6_lcs):
        assert parse_start("3", run6_lcs) == run6_lcs.empty("3")
        assert parse_start('2:"ab"', run6_lcs).word("c") == ("a", "b")
        assert parse_start("2:c='ba'", run6_lcs).word("c") == ("b", "a")

    def test_start_text_reads_back(self, run6_lcs):
        config = run6_lcs.configuration("2", {"c": "abc"})
        assert parse_start(config_to_text(config), run6_lcs) == config

    @pytest.mark.parametrize("text", ['2:"xy"', '2:d="a"', "9", "2:"])
    def test_start_rejected(self, run6_lcs, text):
        with pytest.raises(Exception) as info:
            parse_start(text, run6_lcs)
        assert isinstance(info.value, (ModelSyntaxError, ValidationError))

    def test_events(self):
        assert parse_event("reach {3}", 64).kind is SimEventKind.REACH
        assert parse_event("reachseq {4};{6}", 64).kind is SimEventKind.REACH_SEQ
        assert parse_event("stay {1,2}", 64).kind is SimEventKind.STAY_IN
        visits = parse_event("visits {4} 3", 64)
        assert visits.kind is SimEventKind.VISIT_COUNT
        assert parse_event("reach-nonempty {out}", 64).nonempty

    @pytest.mark.parametrize("text", ["reach {3};{4}", "visits {4}", "leave {3}"])
    def test_events_rejected(self, text):
        with pytest.raises(ModelSyntaxError):
            parse_event(text, 64)

    def test_targets(self):
        assert parse_targets(["{1,2}", "3", "{}"]) == [
            frozenset({"1", "2"}),
            frozenset({"3"}),
            frozenset(),
        ]
