# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.

"""
Deterministic Streett automata over control locations.
"""

from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Sequence, Tuple

from nplcs.exceptions import PartialDeltaError, ValidationError, ValidationIssue

StatePair = Tuple[FrozenSet[str], FrozenSet[str]]


@dataclass(frozen=True)
class Dsa:
    """
    A deterministic Streett automaton reading location names.

    ``delta`` maps (state, location) to the next state; a run satisfies pair
    (A, B) when visiting A infinitely often implies visiting B infinitely often.
    """

    states: Tuple[str, ...]
    initial: str
    delta: Tuple[Tuple[Tuple[str, str], str], ...]
    pairs: Tuple[StatePair, ...]

    @classmethod
    def build(
        cls,
        states: Iterable[str],
        initial: str,
        delta: Dict[Tuple[str, str], str],
        pairs: Sequence[Tuple[Iterable[str], Iterable[str]]],
    ) -> "Dsa":
        return cls(
            tuple(sorted(set(states))),
            initial,
            tuple(sorted(delta.items())),
            tuple((frozenset(a), frozenset(b)) for a, b in pairs),
        )

    @property
    def table(self) -> Dict[Tuple[str, str], str]:
        return dict(self.delta)

    def step(self, state: str, location: str) -> str:
        return self.table[(state, location)]

    def run(self, locations: Iterable[str]) -> List[str]:
        """States visited while reading ``locations`` (initial state first)."""
        table = self.table
        states = [self.initial]
        for location in locations:
            states.append(table[(states[-1], location)])
        return states

    def check(self, locations: Iterable[str]) -> "Dsa":
        """
        Raises:
            ValidationError: on undeclared states or an empty pair list
            PartialDeltaError: when some (state, location) has no successor
        """
        issues: List[ValidationIssue] = []
        declared = set(self.states)
        if self.initial not in declared:
            issues.append(
                ValidationIssue("UndeclaredSymbol", self.initial, "unknown initial state")
            )
        if not self.pairs:
            issues.append(
                ValidationIssue("EmptyAcceptance", "pairs", "at least one pair is needed")
            )
        for (state, _), successor in self.delta:
            for name in (state, successor):
                if name not in declared:
                    issues.append(
                        ValidationIssue("UndeclaredSymbol", name, "unknown state")
                    )
        for first, second in self.pairs:
            for name in sorted((first | second) - declared):
                issues.append(
                    ValidationIssue("UndeclaredSymbol", name, "unknown state in pair")
                )
        if issues:
            raise ValidationError(issues)
        table = self.table
        missing = [
            (state, location)
            for state in self.states
            for location in sorted(set(locations))
            if (state, location) not in table
        ]
        if missing:
            shown = ", ".join(f"({z}, {q})" for z, q in missing[:5])
            raise PartialDeltaError(f"transition function undefined for {shown}")
        return self

    def accepts_lasso(self, states_on_cycle: Iterable[str]) -> bool:
        """Streett acceptance of a run whose infinitely-visited states are given."""
        recurring = frozenset(states_on_cycle)
        return all(not (recurring & a) or bool(recurring & b) for a, b in self.pairs)
