# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.

"""
Text formats for models, automata, queries and start configurations.
"""

import dataclasses
import logging
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import pyparsing as pp

from nplcs.exceptions import ModelSyntaxError, ValidationError, ValidationIssue
from nplcs.models.core import Configuration, Lcs, Nplcs, Operation, OpKind, RuleSpec
from nplcs.models.dsa import Dsa
from nplcs.models.query import Query, QueryKind, SchedulerClass, Threshold
from nplcs.models.words import word_text
from nplcs.services.sim import SimEvent

logger = logging.getLogger(__name__)

COMMENT = "#"

IDENT = pp.Word(pp.alphanums + "_$")
NAMES = pp.Group(pp.OneOrMore(IDENT + pp.Optional(pp.Suppress(","))))
SET = pp.Group(
    pp.Suppress("{") + pp.Optional(pp.DelimitedList(IDENT)) + pp.Suppress("}")
)

OPERATION = pp.Keyword("nop")("nop") | (
    IDENT("channel") + pp.one_of("! ?")("direction") + IDENT("message")
)
RULE = (
    pp.Keyword("rule")
    + IDENT("source")
    + pp.Suppress("->")
    + IDENT("target")
    + pp.Suppress(":")
    + OPERATION
)
MODEL_STATEMENT = (
    (pp.Keyword("lcs") + pp.Optional(IDENT("name")))("header")
    | (pp.Keyword("channels") + NAMES("names"))("channels")
    | (pp.Keyword("messages") + NAMES("names"))("messages")
    | (pp.Keyword("locations") + NAMES("names"))("locations")
    | (pp.Keyword("fault_rate") + pp.Regex(r"\d+\s*/\s*\d+|\d*\.\d+")("rate"))("fault_rate")
    | RULE("rule")
)

STATE = pp.Word(pp.alphanums + "_$'")
STATE_NAMES = pp.Group(pp.OneOrMore(STATE + pp.Optional(pp.Suppress(","))))
STATE_SET = pp.Group(
    pp.Suppress("{") + pp.ZeroOrMore(STATE + pp.Optional(pp.Suppress(","))) + pp.Suppress("}")
)
DSA_STATEMENT = (
    pp.Keyword("dsa")("header")
    | (pp.Keyword("states") + STATE_NAMES("names"))("states")
    | (pp.Keyword("initial") + STATE("state"))("initial")
    | (
        pp.Keyword("trans")
        + STATE("state")
        + pp.Suppress("--")
        + IDENT("location")
        + pp.Suppress("-->")
        + STATE("successor")
    )("trans")
    | (
        pp.Keyword("pair")
        + pp.Suppress(pp.Literal("A") + "=")
        + STATE_SET("first")
        + pp.Suppress(pp.Literal("B") + "=")
        + STATE_SET("second")
    )("pair")
)

KIND = pp.one_of([k.value for k in QueryKind])
THRESHOLD = pp.Suppress("{") + pp.one_of([t.value for t in Threshold]) + pp.Suppress("}")
CLASS = pp.Suppress("[") + pp.one_of([c.value for c in SchedulerClass]) + pp.Suppress("]")
PAIR = pp.Group(pp.Suppress("(") + SET + pp.Suppress(",") + SET + pp.Suppress(")"))
QUERY = (
    KIND("kind")
    + THRESHOLD("threshold")
    + CLASS("scheduler_class")
    + pp.Keyword("from")
    + IDENT("start")
    + (
        (pp.Keyword("dsa") + pp.Suppress("=") + pp.Regex(r"\S+")("dsa_path"))
        | pp.Group(pp.DelimitedList(PAIR, delim=";"))("pairs")
        | pp.Group(pp.DelimitedList(SET, delim=";"))("targets")
    )
    + pp.StringEnd()
)

QUOTED = pp.QuotedString('"', unquote_results=True) | pp.QuotedString("'")
CONTENT = pp.Group(IDENT("channel") + pp.Suppress("=") + QUOTED("word"))
START = (
    IDENT("location")
    + pp.Optional(
        pp.Suppress(":")
        + (pp.Group(pp.DelimitedList(CONTENT))("contents") | QUOTED("only"))
    )
    + pp.StringEnd()
)


def _statements(text: str) -> List[Tuple[int, str]]:
    lines = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split(COMMENT, 1)[0].strip()
        if line:
            lines.append((number, line))
    return lines


def _parse_line(grammar: pp.ParserElement, line: str, number: int) -> pp.ParseResults:
    try:
        return grammar.parse_string(line, parse_all=True)
    except pp.ParseException as e:
        raise ModelSyntaxError(f"cannot parse {line!r}", number, e.col) from e


def parse_fraction(text: str) -> Fraction:
    return Fraction(text.replace(" ", ""))


def parse_model(text: str) -> Nplcs:
    """
    Parse and validate a model file.

    Raises:
        ModelSyntaxError: on the first line that does not parse
        ValidationError: when the parsed system is not valid
    """
    channels: List[str] = []
    messages: List[str] = []
    locations: List[str] = []
    rules: List[RuleSpec] = []
    rule_lines: List[int] = []
    fault_rate = Fraction(1, 2)
    seen_header = False
    for number, line in _statements(text):
        result = _parse_line(MODEL_STATEMENT, line, number)
        keyword = result[0]
        if keyword == "lcs":
            seen_header = True
        elif keyword == "channels":
            channels.extend(result["names"])
        elif keyword == "messages":
            messages.extend(result["names"])
        elif keyword == "locations":
            locations.extend(result["names"])
        elif keyword == "fault_rate":
            fault_rate = parse_fraction(result["rate"])
        else:
            if "nop" in result:
                op = Operation.internal()
            elif result["direction"] == "!":
                op = Operation.send(result["channel"], result["message"])
            else:
                op = Operation.recv(result["channel"], result["message"])
            rules.append((result["source"], result["target"], op))
            rule_lines.append(number)
    if not seen_header:
        raise ModelSyntaxError("missing 'lcs' header", 1, 1)

    lcs = Lcs.build(locations, channels, messages, rules)
    issues = [
        issue
        if issue.rule_index is None
        else dataclasses.replace(
            issue, message=f"{issue.message} (line {rule_lines[issue.rule_index - 1]})"
        )
        for issue in lcs.validate()
    ]
    if issues:
        raise ValidationError(issues)
    try:
        return Nplcs(lcs, fault_rate)
    except ValueError as e:
        raise ValidationError([ValidationIssue("FaultRate", str(fault_rate), str(e))]) from e


def model_to_text(nplcs: Nplcs, name: Optional[str] = None) -> str:
    """Canonical model file; ``parse_model`` reads it back to an equal model."""
    lcs = nplcs.lcs
    lines = [f"lcs {name}" if name else "lcs"]
    if lcs.channels:
        lines.append("channels " + " ".join(lcs.channels))
    if lcs.messages:
        lines.append("messages " + " ".join(lcs.messages))
    lines.append("locations " + " ".join(lcs.locations))
    lines.append(f"fault_rate {nplcs.fault_rate.numerator}/{nplcs.fault_rate.denominator}")
    for rule in lcs.rules:
        op = rule.op
        if op.kind is OpKind.INTERNAL:
            body = "nop"
        else:
            body = f"{op.channel} {'!' if op.kind is OpKind.SEND else '?'} {op.message}"
        lines.append(f"rule {rule.source} -> {rule.target} : {body}")
    return "\n".join(lines) + "\n"


def parse_dsa(text: str, locations: Sequence[str] = ()) -> Dsa:
    """
    Parse an automaton file. Every (state, location) pair needs its own
    ``trans`` line; when ``locations`` is given the result is checked against it.

    Raises:
        ModelSyntaxError: on malformed lines or a repeated transition
        PartialDeltaError: when ``locations`` is given and some pair has no successor
    """
    states: List[str] = []
    initial: Optional[str] = None
    delta: Dict[Tuple[str, str], str] = {}
    pairs = []
    for number, line in _statements(text):
        result = _parse_line(DSA_STATEMENT, line, number)
        keyword = result[0]
        if keyword == "states":
            states.extend(result["names"])
        elif keyword == "initial":
            initial = result["state"]
        elif keyword == "trans":
            key = (result["state"], result["location"])
            if key in delta:
                raise ModelSyntaxError(f"second transition for {key[0]} on {key[1]}", number, 1)
            delta[key] = result["successor"]
        elif keyword == "pair":
            pairs.append((list(result["first"]), list(result["second"])))
    if initial is None:
        raise ModelSyntaxError("missing 'initial' declaration", 1, 1)
    dsa = Dsa.build(states, initial, delta, pairs)
    return dsa.check(locations) if locations else dsa


def dsa_to_text(dsa: Dsa) -> str:
    lines = ["dsa", "states " + " ".join(dsa.states), f"initial {dsa.initial}"]
    for (state, location), successor in dsa.delta:
        lines.append(f"trans {state} --{location}--> {successor}")
    for first, second in dsa.pairs:
        lines.append(f"pair A={{{','.join(sorted(first))}}} B={{{','.join(sorted(second))}}}")
    return "\n".join(lines) + "\n"


def parse_query(text: str, load_dsa: Optional[Callable[[str], Dsa]] = None) -> Query:
    """
    Parse ``KIND{threshold}[class] from LOC`` followed by target sets,
    Streett pairs or ``dsa=PATH``.

    Raises:
        ModelSyntaxError: if the text does not match the grammar or the
            body does not fit the kind
    """
    try:
        result = QUERY.parse_string(text.strip())
    except pp.ParseException as e:
        raise ModelSyntaxError(f"cannot parse query {text!r}", 1, e.col) from e
    kind = QueryKind(result["kind"])
    fields: Dict[str, object] = {}
    if kind is QueryKind.OMEGA:
        if "dsa_path" not in result:
            raise ModelSyntaxError("OMEGA-FM queries need dsa=PATH", 1, 1)
        if load_dsa is None:
            raise ModelSyntaxError("no automaton loader available", 1, 1)
        fields["dsa"] = load_dsa(result["dsa_path"])
    elif kind is QueryKind.STREETT:
        if "pairs" not in result:
            raise ModelSyntaxError("STREETT-FM queries need pairs ({A},{B});...", 1, 1)
        fields["pairs"] = tuple(
            (frozenset(first), frozenset(second)) for first, second in result["pairs"]
        )
    else:
        if "targets" not in result:
            raise ModelSyntaxError(f"{kind.value} queries need target sets", 1, 1)
        fields["targets"] = tuple(frozenset(a) for a in result["targets"])
    return Query(
        kind=kind,
        threshold=Threshold(result["threshold"]),
        scheduler_class=SchedulerClass(result["scheduler_class"]),
        start=result["start"],
        **fields,
    )


def parse_start(text: str, lcs: Lcs) -> Configuration:
    """
    Parse ``LOC``, ``LOC:"word"`` (single channel) or ``LOC:c1="w",c2="v"``.

    Raises:
        ModelSyntaxError: on malformed text or unknown channels
    """
    try:
        result = START.parse_string(text.strip())
    except pp.ParseException as e:
        raise ModelSyntaxError(f"cannot parse configuration {text!r}", 1, e.col) from e
    lcs.locations_of([result["location"]])
    contents: Dict[str, str] = {}
    if "only" in result:
        if result["only"] and len(lcs.channels) != 1:
            raise ModelSyntaxError("name the channel when there are several", 1, 1)
        if result["only"]:
            contents[lcs.channels[0]] = result["only"]
    elif "contents" in result:
        for entry in result["contents"]:
            if entry["channel"] not in lcs.channels:
                raise ModelSyntaxError(f"unknown channel {entry['channel']}", 1, 1)
            contents[entry["channel"]] = entry["word"]
    config = lcs.configuration(result["location"], contents)
    for _, word in config.contents:
        unknown = set(word) - set(lcs.messages)
        if unknown:
            raise ModelSyntaxError(f"unknown messages {sorted(unknown)}", 1, 1)
    return config


def config_to_text(config: Configuration) -> str:
    words = ",".join(f'{name}="{word_text(word)}"' for name, word in config.contents)
    return f"{config.location}:{words}" if words else config.location



EVENT = (
    pp.one_of("reach-nonempty reachseq reach stay visits")("kind")
    + pp.Group(pp.DelimitedList(SET, delim=";"))("targets")
    + pp.Optional(pp.Word(pp.nums)("count"))
    + pp.StringEnd()
)


def parse_event(text: str, horizon: int) -> SimEvent:
    """
    Parse ``reach {A}``, ``reach-nonempty {A}``, ``reachseq {A};{B}``,
    ``stay {A}`` or ``visits {A} K``.

    Raises:
        ModelSyntaxError: on malformed text
    """
    try:
        result = EVENT.parse_string(text.strip())
    except pp.ParseException as e:
        raise ModelSyntaxError(f"cannot parse event {text!r}", 1, e.col) from e
    targets = [frozenset(a) for a in result["targets"]]
    kind = result["kind"]
    if kind == "reachseq":
        return SimEvent.reach_seq(targets, horizon)
    if len(targets) != 1:
        raise ModelSyntaxError(f"{kind} takes exactly one target set", 1, 1)
    if kind == "visits":
        if "count" not in result:
            raise ModelSyntaxError("visits needs a count", 1, 1)
        return SimEvent.visit_count(targets[0], horizon, int(result["count"]))
    if kind == "stay":
        return SimEvent.stay_in(targets[0], horizon)
    return SimEvent.reach(targets[0], horizon, nonempty=kind == "reach-nonempty")


def parse_targets(texts: Sequence[str]) -> List[frozenset]:
    """Target sets written ``{1,2}`` or ``1,2``."""
    targets = []
    for text in texts:
        body = text.strip()
        if body.startswith("{") and body.endswith("}"):
            body = body[1:-1]
        targets.append(frozenset(part.strip() for part in body.split(",") if part.strip()))
    return targets
