# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.

"""
Core lossy channel system models for nplcs-check.
"""

import itertools
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import cached_property
from typing import (
    Dict,
    FrozenSet,
    Iterable,
    List,
    Mapping,
    Optional,
    Sequence,
    Tuple,
    Union,
)

from nplcs.exceptions import (
    EmptyRemainderError,
    NotEnabledError,
    ValidationError,
    ValidationIssue,
)
from nplcs.models.words import (
    EMPTY,
    Word,
    WordLike,
    as_word,
    is_subword,
    subwords,
    word_text,
)

LocationSet = FrozenSet[str]


class OpKind(str, Enum):
    """Operation carried by a transition rule."""

    SEND = "send"
    RECV = "recv"
    INTERNAL = "nop"


@dataclass(frozen=True)
class Operation:
    """c!m, c?m or the internal action."""

    kind: OpKind
    channel: Optional[str] = None
    message: Optional[str] = None

    @classmethod
    def send(cls, channel: str, message: str) -> "Operation":
        return cls(OpKind.SEND, channel, message)

    @classmethod
    def recv(cls, channel: str, message: str) -> "Operation":
        return cls(OpKind.RECV, channel, message)

    @classmethod
    def internal(cls) -> "Operation":
        return cls(OpKind.INTERNAL)

    @property
    def is_receive(self) -> bool:
        return self.kind is OpKind.RECV

    def __str__(self) -> str:
        if self.kind is OpKind.SEND:
            return f"{self.channel} ! {self.message}"
        if self.kind is OpKind.RECV:
            return f"{self.channel} ? {self.message}"
        return "nop"


@dataclass(frozen=True)
class TransitionRule:
    """A rule ``source --op--> target``; ``index`` is its 1-based declaration number."""

    index: int
    source: str
    target: str
    op: Operation

    @property
    def name(self) -> str:
        return f"r{self.index}"

    def __repr__(self) -> str:
        return f"<TransitionRule {self.name}: {self.source} -> {self.target} : {self.op}>"


@dataclass(frozen=True, order=True)
class Configuration:
    """A control location together with the content of every channel."""

    location: str
    contents: Tuple[Tuple[str, Word], ...] = ()

    @classmethod
    def make(
        cls,
        location: str,
        contents: Optional[Mapping[str, WordLike]] = None,
        channels: Iterable[str] = (),
    ) -> "Configuration":
        entries: Dict[str, Word] = {channel: EMPTY for channel in channels}
        for channel, value in (contents or {}).items():
            entries[channel] = as_word(value)
        return cls(location, tuple(sorted(entries.items())))

    def word(self, channel: str) -> Word:
        for name, word in self.contents:
            if name == channel:
                return word
        raise KeyError(channel)

    def with_word(self, channel: str, word: Word) -> "Configuration":
        return Configuration(
            self.location,
            tuple((name, word if name == channel else old) for name, old in self.contents),
        )

    def with_location(self, location: str) -> "Configuration":
        return Configuration(location, self.contents)

    @property
    def size(self) -> int:
        return sum(len(word) for _, word in self.contents)

    @property
    def is_empty(self) -> bool:
        return self.size == 0

    def leq(self, other: "Configuration") -> bool:
        """Subword order on configurations (equal locations, channel-wise subwords)."""
        if self.location != other.location:
            return False
        return all(
            is_subword(mine, theirs)
            for (_, mine), (_, theirs) in zip(self.contents, other.contents)
        )

    def __str__(self) -> str:
        words = " ".join(f'{name}="{word_text(word)}"' for name, word in self.contents)
        return f"{self.location} : {words}".rstrip()


def config_leq(s: Configuration, t: Configuration) -> bool:
    return s.leq(t)


RuleSpec = Union[TransitionRule, Tuple[str, str, Operation]]


@dataclass(frozen=True)
class Lcs:
    """A lossy channel system (Q, C, M, Δ)."""

    locations: Tuple[str, ...]
    channels: Tuple[str, ...]
    messages: Tuple[str, ...]
    rules: Tuple[TransitionRule, ...]

    @classmethod
    def build(
        cls,
        locations: Iterable[str],
        channels: Iterable[str],
        messages: Iterable[str],
        rules: Iterable[RuleSpec],
    ) -> "Lcs":
        """Create a system with canonical ordering and rules numbered from 1."""
        numbered = []
        for index, spec in enumerate(rules, start=1):
            if isinstance(spec, TransitionRule):
                source, target, op = spec.source, spec.target, spec.op
            else:
                source, target, op = spec
            numbered.append(TransitionRule(index, source, target, op))
        return cls(
            tuple(sorted(set(locations))),
            tuple(sorted(set(channels))),
            tuple(sorted(set(messages))),
            tuple(numbered),
        )

    @cached_property
    def location_set(self) -> LocationSet:
        return frozenset(self.locations)

    @cached_property
    def rules_from(self) -> Dict[str, Tuple[TransitionRule, ...]]:
        table: Dict[str, List[TransitionRule]] = {q: [] for q in self.locations}
        for rule in self.rules:
            table.setdefault(rule.source, []).append(rule)
        return {q: tuple(rules) for q, rules in table.items()}

    @cached_property
    def rules_into(self) -> Dict[str, Tuple[TransitionRule, ...]]:
        table: Dict[str, List[TransitionRule]] = {q: [] for q in self.locations}
        for rule in self.rules:
            table.setdefault(rule.target, []).append(rule)
        return {q: tuple(rules) for q, rules in table.items()}

    def rule(self, index: int) -> TransitionRule:
        return self.rules[index - 1]

    def non_receive_rules(self, location: str) -> Tuple[TransitionRule, ...]:
        return tuple(r for r in self.rules_from.get(location, ()) if not r.op.is_receive)

    def locations_of(self, names: Iterable[str]) -> LocationSet:
        """Checked conversion of a collection of names into a LocationSet."""
        result = frozenset(names)
        unknown = result - self.location_set
        if unknown:
            raise ValidationError(
                [
                    ValidationIssue("UndeclaredSymbol", name, "unknown location")
                    for name in sorted(unknown)
                ]
            )
        return result

    def complement(self, names: Iterable[str]) -> LocationSet:
        return self.location_set - frozenset(names)

    def empty(self, location: str) -> Configuration:
        return Configuration.make(location, channels=self.channels)

    def configuration(
        self, location: str, contents: Optional[Mapping[str, WordLike]] = None
    ) -> Configuration:
        return Configuration.make(location, contents, channels=self.channels)

    def validate(self) -> List[ValidationIssue]:
        """Report every structural violation; an empty list means the model is valid."""
        issues: List[ValidationIssue] = []
        for rule in self.rules:
            for endpoint in (rule.source, rule.target):
                if endpoint not in self.location_set:
                    issues.append(
                        ValidationIssue(
                            "UndeclaredSymbol",
                            endpoint,
                            f"rule {rule.name} uses an undeclared location",
                            rule.index,
                        )
                    )
            if rule.op.kind is not OpKind.INTERNAL:
                if rule.op.channel not in self.channels:
                    issues.append(
                        ValidationIssue(
                            "UndeclaredSymbol",
                            str(rule.op.channel),
                            f"rule {rule.name} uses an undeclared channel",
                            rule.index,
                        )
                    )
                if rule.op.message not in self.messages:
                    issues.append(
                        ValidationIssue(
                            "UndeclaredSymbol",
                            str(rule.op.message),
                            f"rule {rule.name} uses an undeclared message",
                            rule.index,
                        )
                    )
        for location in self.locations:
            if not self.non_receive_rules(location):
                issues.append(
                    ValidationIssue(
                        "TerminalLocation",
                        location,
                        "every rule leaving this location is a receive",
                    )
                )
        return issues

    def check(self) -> "Lcs":
        issues = self.validate()
        if issues:
            raise ValidationError(issues)
        return self

    def is_enabled(self, s: Configuration, rule: TransitionRule) -> bool:
        if rule.source != s.location:
            return False
        if rule.op.kind is OpKind.RECV:
            word = s.word(rule.op.channel)
            return bool(word) and word[0] == rule.op.message
        return True

    def enabled_rules(self, s: Configuration) -> List[TransitionRule]:
        """Rules enabled in ``s``, in declaration order."""
        return [r for r in self.rules_from.get(s.location, ()) if self.is_enabled(s, r)]

    def perfect_step(self, s: Configuration, rule: TransitionRule) -> Configuration:
        """Fire ``rule`` without losses."""
        if not self.is_enabled(s, rule):
            raise NotEnabledError(f"{rule.name} is not enabled in ({s})")
        op = rule.op
        result = s.with_location(rule.target)
        if op.kind is OpKind.SEND:
            result = result.with_word(op.channel, s.word(op.channel) + (op.message,))
        elif op.kind is OpKind.RECV:
            result = result.with_word(op.channel, s.word(op.channel)[1:])
        return result

    def lossy_successors(
        self, s: Configuration, rule: TransitionRule, limit: Optional[int] = None
    ) -> List[Configuration]:
        """Every configuration reachable by firing ``rule`` and then losing messages."""
        perfect = self.perfect_step(s, rule)
        per_channel = [subwords(word, limit) for _, word in perfect.contents]
        names = [name for name, _ in perfect.contents]
        return [
            Configuration(perfect.location, tuple(zip(names, choice)))
            for choice in itertools.product(*per_channel)
        ]

    def fresh_location(self, stem: str) -> str:
        name = stem
        while name in self.location_set:
            name += "_"
        return name

    def restrict_with_fail(self, remove: Iterable[str]) -> "Lcs":
        """
        Delete ``remove`` and redirect rules entering it to a fresh sink ``fail``.

        Raises:
            EmptyRemainderError: if every location would be removed
        """
        removed = self.locations_of(remove)
        if removed == self.location_set:
            raise EmptyRemainderError("cannot remove every location")
        fail = self.fresh_location("fail")
        kept = [q for q in self.locations if q not in removed]
        rules: List[RuleSpec] = []
        for rule in self.rules:
            if rule.source in removed:
                continue
            target = fail if rule.target in removed else rule.target
            rules.append((rule.source, target, rule.op))
        rules.append((fail, fail, Operation.internal()))
        return Lcs.build(kept + [fail], self.channels, self.messages, rules)

    def control_successors(self, location: str) -> Tuple[str, ...]:
        return tuple(dict.fromkeys(r.target for r in self.rules_from.get(location, ())))

    def __repr__(self) -> str:
        return (
            f"<Lcs |Q|={len(self.locations)} |C|={len(self.channels)} "
            f"|M|={len(self.messages)} |Δ|={len(self.rules)}>"
        )


@dataclass(frozen=True)
class Nplcs:
    """A lossy channel system with a fault rate 0 < τ < 1."""

    lcs: Lcs
    fault_rate: Fraction = field(default=Fraction(1, 2))

    def __post_init__(self) -> None:
        rate = Fraction(self.fault_rate)
        if not 0 < rate < 1:
            raise ValueError(f"fault rate must lie strictly between 0 and 1, got {rate}")
        object.__setattr__(self, "fault_rate", rate)

    def __repr__(self) -> str:
        return f"<Nplcs {self.lcs!r} τ={self.fault_rate}>"


def enumerate_words(alphabet: Sequence[str], max_length: int) -> List[Word]:
    """All words of length at most ``max_length`` (shortest first)."""
    words: List[Word] = []
    for length in range(max_length + 1):
        words.extend(itertools.product(alphabet, repeat=length))
    return [tuple(w) for w in words]
