# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.

"""
Serialization schemas for nplcs-check.
"""

import hashlib
import json
from typing import Any, Dict, List

from marshmallow import EXCLUDE, Schema, fields, post_load

from nplcs.models.core import Configuration
from nplcs.models.query import Answer, SchedulerClass, Threshold, Verdict
from nplcs.models.scheduler import Decision, SchedulerKind, WitnessScheduler
from nplcs.services.sim import Estimate


def to_json(data: Any) -> str:
    """Byte-stable JSON text."""
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False)


class ConfigurationSchema(Schema):
    location = fields.String(required=True)
    contents = fields.Method("dump_contents", deserialize="load_contents")

    def dump_contents(self, config: Configuration) -> Dict[str, List[str]]:
        return {name: list(word) for name, word in config.contents}

    def load_contents(self, value: Dict[str, List[str]]) -> Dict[str, List[str]]:
        return {str(name): [str(m) for m in word] for name, word in value.items()}

    @post_load
    def make_configuration(self, data: Dict[str, Any], **kwargs) -> Configuration:
        contents = data.get("contents") or {}
        return Configuration(
            data["location"],
            tuple(sorted((name, tuple(word)) for name, word in contents.items())),
        )


class DecisionSchema(Schema):
    rule = fields.Integer(required=True)
    next_mode = fields.String(required=True)
    expected = fields.Nested(ConfigurationSchema, allow_none=True, load_default=None)

    @post_load
    def make_decision(self, data: Dict[str, Any], **kwargs) -> Decision:
        return Decision(**data)


class PathEntrySchema(Schema):
    mode = fields.String(required=True)
    config = fields.Nested(ConfigurationSchema, required=True)
    decision = fields.Nested(DecisionSchema, required=True)


class RecoveryEntrySchema(Schema):
    mode = fields.String(required=True)
    location = fields.String(required=True)
    decision = fields.Nested(DecisionSchema, required=True)


class SwitchEntrySchema(Schema):
    mode = fields.String(required=True)
    location = fields.String(required=True)
    next_mode = fields.String(required=True)


class WitnessSchedulerSchema(Schema):
    """
    Scheduler tables as sorted entry lists; ``id`` is derived from the rest of
    the document and ignored on load.
    """

    class Meta:
        unknown = EXCLUDE

    id = fields.String(dump_only=True)
    kind = fields.Enum(SchedulerKind, by_value=True, required=True)
    modes = fields.List(fields.String(), required=True)
    initial_mode = fields.String(required=True)
    on_path = fields.List(fields.Nested(PathEntrySchema), load_default=list)
    recovery = fields.List(fields.Nested(RecoveryEntrySchema), load_default=list)
    switches = fields.List(fields.Nested(SwitchEntrySchema), load_default=list)
    fallback = fields.Dict(keys=fields.String(), values=fields.Integer(), load_default=dict)
    targets = fields.List(fields.List(fields.String()), load_default=list)

    def dump(self, obj: WitnessScheduler, **kwargs) -> Dict[str, Any]:
        tables = {
            "kind": obj.kind,
            "modes": list(obj.modes),
            "initial_mode": obj.initial_mode,
            "on_path": [
                {"mode": mode, "config": config, "decision": decision}
                for (mode, config), decision in sorted(obj.on_path.items())
            ],
            "recovery": [
                {"mode": mode, "location": location, "decision": decision}
                for (mode, location), decision in sorted(obj.recovery.items())
            ],
            "switches": [
                {"mode": mode, "location": location, "next_mode": target}
                for (mode, location), target in sorted(obj.switches.items())
            ],
            "fallback": dict(obj.fallback),
            "targets": [sorted(a) for a in obj.targets],
        }
        data = super().dump(tables, **kwargs)
        data["id"] = scheduler_id(data)
        return data

    @post_load
    def make_scheduler(self, data: Dict[str, Any], **kwargs) -> WitnessScheduler:
        return WitnessScheduler(
            kind=data["kind"],
            modes=tuple(data["modes"]),
            initial_mode=data["initial_mode"],
            on_path={(e["mode"], e["config"]): e["decision"] for e in data["on_path"]},
            recovery={(e["mode"], e["location"]): e["decision"] for e in data["recovery"]},
            switches={(e["mode"], e["location"]): e["next_mode"] for e in data["switches"]},
            fallback=dict(data["fallback"]),
            targets=tuple(frozenset(a) for a in data["targets"]),
        )


def scheduler_id(document: Dict[str, Any]) -> str:
    """First 12 hex digits of the SHA-1 of the canonical scheduler document."""
    body = {key: value for key, value in document.items() if key != "id"}
    canonical = json.dumps(body, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
    return hashlib.sha1(canonical.encode("utf-8")).hexdigest()[:12]


class VerdictSchema(Schema):
    answer = fields.Enum(Answer, by_value=True, required=True)
    threshold = fields.Enum(Threshold, by_value=True, required=True)
    scheduler_class = fields.Enum(SchedulerClass, by_value=True, data_key="class")
    citation = fields.String(required=True)
    certificate = fields.Dict(keys=fields.String(), load_default=dict)
    witness = fields.Method("dump_witness", deserialize="load_witness", allow_none=True)

    def dump_witness(self, verdict: Verdict) -> Any:
        if verdict.witness is None:
            return None
        return WitnessSchedulerSchema().dump(verdict.witness)

    def load_witness(self, value: Any) -> Any:
        if value is None:
            return None
        return WitnessSchedulerSchema().load(value)

    @post_load
    def make_verdict(self, data: Dict[str, Any], **kwargs) -> Verdict:
        return Verdict(**data)


class EstimateSchema(Schema):
    event = fields.String(required=True)
    trials = fields.Integer(required=True)
    successes = fields.Integer(required=True)
    point = fields.Float(required=True)
    ci_low = fields.Float(required=True)
    ci_high = fields.Float(required=True)
    seed = fields.Integer(required=True)
    horizon = fields.Integer(required=True)

    @post_load
    def make_estimate(self, data: Dict[str, Any], **kwargs) -> Estimate:
        return Estimate(**data)
