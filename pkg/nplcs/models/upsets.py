# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.

"""
Upward-closed sets of configurations kept as antichains of minimal elements.
"""

from typing import Dict, Iterable, Iterator, List, Optional, Tuple

from nplcs.config import get_config
from nplcs.models.core import Configuration, Lcs, OpKind, TransitionRule


def insert_into_bucket(bucket: List[Configuration], g: Configuration) -> bool:
    """
    Insert ``g`` into a single-location antichain in place.

    Returns:
        False when ``g`` is dominated by an element already present
    """
    for existing in bucket:
        if existing.leq(g):
            return False
    bucket[:] = [existing for existing in bucket if not g.leq(existing)]
    bucket.append(g)
    return True


class UpSet:
    """
    An upward-closed set of configurations.

    Generators are bucketed by location; each bucket is an antichain under the
    subword order and is kept sorted for deterministic output.
    """

    __slots__ = ("_buckets",)

    def __init__(self, generators: Iterable[Configuration] = ()):
        buckets: Dict[str, List[Configuration]] = {}
        for g in generators:
            insert_into_bucket(buckets.setdefault(g.location, []), g)
        self._buckets: Dict[str, Tuple[Configuration, ...]] = {
            location: tuple(sorted(bucket))
            for location, bucket in sorted(buckets.items())
            if bucket
        }
        if get_config().CHECK_INVARIANTS:
            self._check_antichain()

    @classmethod
    def from_locations(cls, lcs: Lcs, locations: Iterable[str]) -> "UpSet":
        """All configurations whose location lies in ``locations``."""
        return cls(lcs.empty(q) for q in sorted(lcs.locations_of(locations)))

    def _check_antichain(self) -> None:
        for bucket in self._buckets.values():
            for i, g in enumerate(bucket):
                for h in bucket[i + 1 :]:
                    assert not g.leq(h) and not h.leq(g), f"{g} and {h} are comparable"

    def contains(self, s: Configuration) -> bool:
        return any(g.leq(s) for g in self._buckets.get(s.location, ()))

    __contains__ = contains

    def insert_minimized(self, g: Configuration) -> "UpSet":
        return UpSet([*self, g])

    def union(self, other: "UpSet") -> "UpSet":
        return UpSet([*self, *other])

    def is_subset(self, other: "UpSet") -> bool:
        return all(other.contains(g) for g in self)

    def equals(self, other: "UpSet") -> bool:
        return self.is_subset(other) and other.is_subset(self)

    def restrict(self, locations: Iterable[str]) -> "UpSet":
        """Keep only generators located in ``locations``."""
        keep = frozenset(locations)
        return UpSet(g for g in self if g.location in keep)

    def bucket(self, location: str) -> Tuple[Configuration, ...]:
        return self._buckets.get(location, ())

    @property
    def locations(self) -> Tuple[str, ...]:
        return tuple(self._buckets)

    def __iter__(self) -> Iterator[Configuration]:
        for bucket in self._buckets.values():
            yield from bucket

    def __len__(self) -> int:
        return sum(len(bucket) for bucket in self._buckets.values())

    def __bool__(self) -> bool:
        return bool(self._buckets)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, UpSet):
            return NotImplemented
        return self._buckets == other._buckets

    def __hash__(self) -> int:
        return hash(tuple(self))

    def to_text(self) -> str:
        """Canonical serialization: one ``loc : c="word"`` line per generator."""
        return "\n".join(str(g) for g in self)

    def __repr__(self) -> str:
        return f"<UpSet {len(self)} generators over {list(self.locations)}>"


def pre_generator(g: Configuration, rule: TransitionRule) -> Optional[Configuration]:
    """Minimal predecessor of ``↑g`` under ``rule`` (None when the rule targets elsewhere)."""
    if rule.target != g.location:
        return None
    op = rule.op
    result = g.with_location(rule.source)
    if op.kind is OpKind.SEND:
        word = g.word(op.channel)
        if word and word[-1] == op.message:
            result = result.with_word(op.channel, word[:-1])
    elif op.kind is OpKind.RECV:
        result = result.with_word(op.channel, (op.message,) + g.word(op.channel))
    return result


def pre_rule(lcs: Lcs, upset: UpSet, rule: TransitionRule) -> UpSet:
    """
    Configurations with a ``rule``-step into ``upset``, closed upward.

    Channel contents may be shortened before the step is taken, which matches
    lossy semantics everywhere except at a non-empty initial configuration.
    """
    found = (pre_generator(g, rule) for g in upset.bucket(rule.target))
    return UpSet(p for p in found if p is not None)
