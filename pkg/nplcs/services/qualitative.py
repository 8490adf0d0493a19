# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.

"""
Qualitative decision procedures for eventuality, generalized Büchi and
finite-memory Streett properties of NPLCS.
"""

import logging
from collections import deque
from typing import Any, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from nplcs.config import get_config
from nplcs.exceptions import ValidationError, ValidationIssue
from nplcs.models.core import Lcs, LocationSet, RuleSpec
from nplcs.models.query import (
    Answer,
    Query,
    QueryKind,
    SchedulerClass,
    Threshold,
    Verdict,
)
from nplcs.models.scheduler import WitnessScheduler
from nplcs.models.upsets import UpSet
from nplcs.services.fixpoints import (
    buchi_core,
    check_target_count,
    core_avoiding,
    eventuality_sets,
    prom,
    safe,
    streett_positive_set,
    streett_sets,
)
from nplcs.services.reach import Mode, ReachQuery, control_reach, reaches
from nplcs.services.sched import synth_buchi_roundrobin, synth_eventuality_chain, synth_stubborn

logger = logging.getLogger(__name__)

FINITE_MEMORY_SUFFICES = "finite-memory suffices"

CITE_EV_POS = "generalized eventuality: reachability in the visited-set product"
CITE_EV_ZERO = "generalized eventuality: q in the union of Safe(not A_i)"
CITE_EV_LT1 = "generalized eventuality: (q,ε) reaches Safe(not A_i) inside not A_i"
CITE_EV_AS = "generalized eventuality: q in X_{1..n}"
CITE_BU_AS = "generalized Büchi: q in the almost-sure Büchi core"
CITE_BU_ZERO = "generalized Büchi: q in Prom(union of Safe(not A_i))"
CITE_BU_LT1 = "generalized Büchi: (q,ε) reaches some Safe(not A_i)"
CITE_BU_POS_FM = "Büchi >0, finite-memory: (q,ε) reaches the almost-sure Büchi core"
CITE_BU_POS_ALL = "undecidable: Büchi with positive probability over all schedulers"
CITE_ST_LT1 = "Streett <1, finite-memory: (q,ε) reaches some P_i"
CITE_ST_POS = "Streett >0, finite-memory: (q,ε) reaches C"
CITE_ST_AS = "Streett =1, finite-memory: q in Prom(C)"
CITE_ST_ZERO = "Streett =0, finite-memory: q in Prom(union of D_i)"
CITE_ST_ALL = "undecidable: Streett properties over all schedulers"


def sorted_list(locations: Iterable[str]) -> List[str]:
    return sorted(locations)


def product_location(location: str, visited: FrozenSet[int]) -> str:
    return f"{location}@{','.join(str(i) for i in sorted(visited))}"


def visited_set_product(
    lcs: Lcs, q: str, goals: Sequence[LocationSet]
) -> Tuple[Lcs, str, LocationSet]:
    """
    Product of ``lcs`` with the automaton recording which targets were visited.

    Only pairs reachable in the control graph from (q, S₀) are built.

    Returns:
        The product system, its start location and the locations where every
        target has been visited
    """

    def mark(location: str, visited: FrozenSet[int]) -> FrozenSet[int]:
        return visited | {i for i, goal in enumerate(goals) if location in goal}

    start = (q, mark(q, frozenset()))
    seen = {start}
    queue = deque([start])
    rules: List[RuleSpec] = []
    while queue:
        location, visited = queue.popleft()
        for rule in lcs.rules_from[location]:
            successor = (rule.target, mark(rule.target, visited))
            rules.append(
                (product_location(location, visited), product_location(*successor), rule.op)
            )
            if successor not in seen:
                seen.add(successor)
                queue.append(successor)
    everything = frozenset(range(len(goals)))
    names = [product_location(p, s) for p, s in sorted(seen, key=lambda x: (x[0], sorted(x[1])))]
    complete = frozenset(product_location(p, s) for p, s in seen if s == everything)
    product = Lcs.build(names, lcs.channels, lcs.messages, rules)
    return product, product_location(*start), complete


class QualitativeChecker:
    """Decides qualitative queries on one validated lossy channel system."""

    def __init__(self, lcs: Lcs, max_targets: Optional[int] = None, synthesize: bool = True):
        self.lcs = lcs.check()
        self.max_targets = max_targets if max_targets is not None else get_config().MAX_TARGETS
        self.synthesize = synthesize

    def _goals(self, targets: Sequence[Iterable[str]]) -> List[LocationSet]:
        if not targets:
            raise ValidationError(
                [ValidationIssue("EmptyQuery", "targets", "n must be at least 1")]
            )
        check_target_count(len(targets), self.max_targets)
        return [self.lcs.locations_of(a) for a in targets]

    def _start(self, q: str) -> str:
        self.lcs.locations_of([q])
        return q

    def _verdict(
        self,
        holds: bool,
        threshold: Threshold,
        scheduler_class: SchedulerClass,
        citation: str,
        certificate: Dict[str, Any],
        witness: Optional[WitnessScheduler] = None,
    ) -> Verdict:
        verdict = Verdict(
            answer=Answer.YES if holds else Answer.NO,
            threshold=threshold,
            scheduler_class=scheduler_class,
            citation=citation,
            certificate=certificate,
            witness=witness if holds else None,
        )
        logger.info(f"{citation} -> {verdict.answer.value}")
        return verdict

    @staticmethod
    def _undecidable(threshold: Threshold, citation: str) -> Verdict:
        return Verdict(
            answer=Answer.UNDECIDABLE,
            threshold=threshold,
            scheduler_class=SchedulerClass.ALL,
            citation=citation,
        )

    # Generalized eventuality

    def eventually_pos(
        self, q: str, targets: Sequence[Iterable[str]],
        scheduler_class: SchedulerClass = SchedulerClass.ALL,
    ) -> Verdict:
        """Some scheduler visits every A_i with positive probability."""
        goals = self._goals(targets)
        product, start, complete = visited_set_product(self.lcs, self._start(q), goals)
        holds = bool(complete) and control_reach(product, start, complete)
        certificate = {
            "characterization": "control reachability of a full visited set",
            "product_locations": len(product.locations),
            "complete_locations": sorted_list(complete),
            "note": FINITE_MEMORY_SUFFICES,
        }
        return self._verdict(holds, Threshold.POSITIVE, scheduler_class, CITE_EV_POS, certificate)

    def eventually_zero(
        self, q: str, targets: Sequence[Iterable[str]],
        scheduler_class: SchedulerClass = SchedulerClass.ALL,
    ) -> Verdict:
        """Some scheduler misses at least one A_i almost surely."""
        goals = self._goals(targets)
        safes = [safe(self.lcs, self.lcs.complement(goal)) for goal in goals]
        holds = any(self._start(q) in s for s in safes)
        certificate = {
            "characterization": "q in union of Safe(not A_i)",
            "safe_complements": [sorted_list(s) for s in safes],
            "note": FINITE_MEMORY_SUFFICES,
        }
        return self._verdict(holds, Threshold.ZERO, scheduler_class, CITE_EV_ZERO, certificate)

    def eventually_lt1(
        self, q: str, targets: Sequence[Iterable[str]],
        scheduler_class: SchedulerClass = SchedulerClass.ALL,
    ) -> Verdict:
        """Some scheduler misses at least one A_i with positive probability."""
        goals = self._goals(targets)
        start = self.lcs.empty(self._start(q))
        safes = []
        holds = False
        for goal in goals:
            outside = self.lcs.complement(goal)
            region = safe(self.lcs, outside)
            safes.append(sorted_list(region))
            query = ReachQuery(UpSet.from_locations(self.lcs, region), outside, Mode.CLOSED)
            if reaches(self.lcs, start, query):
                holds = True
                break
        certificate = {
            "characterization": "(q,ε) reaches Safe(not A_i) visiting only not A_i",
            "safe_complements": safes,
            "note": FINITE_MEMORY_SUFFICES,
        }
        return self._verdict(holds, Threshold.BELOW_ONE, scheduler_class, CITE_EV_LT1, certificate)

    def eventually_as(
        self, q: str, targets: Sequence[Iterable[str]],
        scheduler_class: SchedulerClass = SchedulerClass.ALL,
    ) -> Verdict:
        """Some scheduler visits every A_i almost surely."""
        goals = self._goals(targets)
        table = eventuality_sets(self.lcs, goals, self.max_targets)
        full = table[frozenset(range(len(goals)))]
        holds = self._start(q) in full
        witness = None
        if holds and self.synthesize:
            if len(goals) == 1:
                witness = synth_stubborn(self.lcs, goals[0])
            else:
                witness = synth_eventuality_chain(self.lcs, goals)
        certificate = {
            "characterization": "q in X_{1..n}",
            "X": {
                ",".join(str(i) for i in sorted(index)) or "-": sorted_list(value)
                for index, value in table.items()
            },
            "note": FINITE_MEMORY_SUFFICES,
        }
        return self._verdict(
            holds, Threshold.ONE, scheduler_class, CITE_EV_AS, certificate, witness
        )

    # Generalized Büchi

    def buchi_as(
        self, q: str, targets: Sequence[Iterable[str]],
        scheduler_class: SchedulerClass = SchedulerClass.ALL,
    ) -> Verdict:
        """Some scheduler visits every A_i infinitely often almost surely."""
        goals = self._goals(targets)
        core = buchi_core(self.lcs, goals)
        holds = self._start(q) in core
        witness = synth_buchi_roundrobin(self.lcs, goals) if holds and self.synthesize else None
        certificate = {
            "characterization": "q in the almost-sure Büchi core",
            "core": sorted_list(core),
            "safe_prom": [sorted_list(safe(self.lcs, prom(self.lcs, g))) for g in goals],
            "note": FINITE_MEMORY_SUFFICES,
        }
        return self._verdict(
            holds, Threshold.ONE, scheduler_class, CITE_BU_AS, certificate, witness
        )

    def buchi_zero(
        self, q: str, targets: Sequence[Iterable[str]],
        scheduler_class: SchedulerClass = SchedulerClass.ALL,
    ) -> Verdict:
        """Some scheduler visits some A_i only finitely often almost surely."""
        goals = self._goals(targets)
        safes = [safe(self.lcs, self.lcs.complement(goal)) for goal in goals]
        union = frozenset().union(*safes)
        region = prom(self.lcs, union)
        holds = self._start(q) in region
        certificate = {
            "characterization": "q in Prom(union of Safe(not A_i))",
            "safe_complements": [sorted_list(s) for s in safes],
            "prom": sorted_list(region),
            "note": FINITE_MEMORY_SUFFICES,
        }
        return self._verdict(holds, Threshold.ZERO, scheduler_class, CITE_BU_ZERO, certificate)

    def buchi_lt1(
        self, q: str, targets: Sequence[Iterable[str]],
        scheduler_class: SchedulerClass = SchedulerClass.ALL,
    ) -> Verdict:
        """Some scheduler visits some A_i only finitely often with positive probability."""
        goals = self._goals(targets)
        start = self._start(q)
        safes = [safe(self.lcs, self.lcs.complement(goal)) for goal in goals]
        holds = any(s and control_reach(self.lcs, start, s) for s in safes)
        certificate = {
            "characterization": "(q,ε) reaches some Safe(not A_i)",
            "safe_complements": [sorted_list(s) for s in safes],
            "note": FINITE_MEMORY_SUFFICES,
        }
        return self._verdict(
            holds, Threshold.BELOW_ONE, scheduler_class, CITE_BU_LT1, certificate
        )

    def buchi_pos(
        self, q: str, targets: Sequence[Iterable[str]], scheduler_class: SchedulerClass
    ) -> Verdict:
        """Positive-probability generalized Büchi; decidable only for finite memory."""
        goals = self._goals(targets)
        start = self._start(q)
        if scheduler_class is SchedulerClass.ALL:
            return self._undecidable(Threshold.POSITIVE, CITE_BU_POS_ALL)
        core = buchi_core(self.lcs, goals)
        holds = bool(core) and control_reach(self.lcs, start, core)
        certificate = {
            "characterization": "(q,ε) reaches the almost-sure Büchi core",
            "core": sorted_list(core),
        }
        return self._verdict(
            holds, Threshold.POSITIVE, scheduler_class, CITE_BU_POS_FM, certificate
        )

    # Finite-memory Streett

    def streett_fm(
        self,
        q: str,
        pairs: Sequence[Tuple[Iterable[str], Iterable[str]]],
        threshold: Threshold,
        scheduler_class: SchedulerClass = SchedulerClass.FINITE_MEMORY,
    ) -> Verdict:
        """Streett condition ⋀ (□◇A_i → □◇B_i) against a threshold."""
        if not pairs:
            raise ValidationError([ValidationIssue("EmptyQuery", "pairs", "n must be at least 1")])
        check_target_count(len(pairs), self.max_targets)
        checked = [
            (self.lcs.locations_of(a), self.lcs.locations_of(b)) for a, b in pairs
        ]
        start = self._start(q)
        if scheduler_class is SchedulerClass.ALL:
            return self._undecidable(threshold, CITE_ST_ALL)

        if threshold is Threshold.BELOW_ONE:
            positives = [streett_positive_set(self.lcs, a, b) for a, b in checked]
            holds = any(p and control_reach(self.lcs, start, p) for p in positives)
            certificate = {
                "characterization": "(q,ε) reaches some P_i",
                "P": [sorted_list(p) for p in positives],
            }
            return self._verdict(holds, threshold, scheduler_class, CITE_ST_LT1, certificate)

        if threshold is Threshold.ZERO:
            cores = [core_avoiding(self.lcs, b, [a]) for a, b in checked]
            region = prom(self.lcs, frozenset().union(*cores))
            holds = start in region
            certificate = {
                "characterization": "q in Prom(union of D_i)",
                "D": [sorted_list(d) for d in cores],
                "prom": sorted_list(region),
            }
            return self._verdict(holds, threshold, scheduler_class, CITE_ST_ZERO, certificate)

        sets = streett_sets(self.lcs, checked, self.max_targets)
        certificate = {
            "C": sorted_list(sets.union),
            "C_I": {
                ",".join(str(i) for i in sorted(index)) or "-": sorted_list(part)
                for index, part in sets.parts.items()
            },
            "systems": {
                ",".join(str(i) for i in sorted(index)) or "-":
                    f"restrict_with_fail(removed={sorted_list(removed)})"
                for index, removed in sets.removed.items()
            },
        }
        if threshold is Threshold.POSITIVE:
            holds = bool(sets.union) and control_reach(self.lcs, start, sets.union)
            certificate["characterization"] = "(q,ε) reaches C"
            return self._verdict(holds, threshold, scheduler_class, CITE_ST_POS, certificate)

        region = prom(self.lcs, sets.union)
        certificate["characterization"] = "q in Prom(C)"
        certificate["prom"] = sorted_list(region)
        return self._verdict(start in region, threshold, scheduler_class, CITE_ST_AS, certificate)

    # Dispatch

    def check(self, query: Query) -> Verdict:
        """Answer any eventuality, Büchi or Streett query."""
        if query.kind is QueryKind.OMEGA:
            from nplcs.services.omega import omega_check

            if query.dsa is None:
                raise ValidationError([ValidationIssue("EmptyQuery", "dsa", "missing automaton")])
            return omega_check(
                self.lcs, query.start, query.dsa, query.threshold, query.scheduler_class
            )
        if query.kind is QueryKind.STREETT:
            return self.streett_fm(
                query.start, query.pairs, query.threshold, query.scheduler_class
            )
        targets = query.targets
        if query.kind is QueryKind.EVENTUALITY:
            handler = {
                Threshold.POSITIVE: self.eventually_pos,
                Threshold.ZERO: self.eventually_zero,
                Threshold.BELOW_ONE: self.eventually_lt1,
                Threshold.ONE: self.eventually_as,
            }[query.threshold]
            return handler(query.start, targets, query.scheduler_class)
        if query.threshold is Threshold.POSITIVE:
            return self.buchi_pos(query.start, targets, query.scheduler_class)
        handler = {
            Threshold.ZERO: self.buchi_zero,
            Threshold.BELOW_ONE: self.buchi_lt1,
            Threshold.ONE: self.buchi_as,
        }[query.threshold]
        return handler(query.start, targets, query.scheduler_class)


def check_query(lcs: Lcs, query: Query, synthesize: bool = True) -> Verdict:
    """Convenience wrapper around ``QualitativeChecker.check``."""
    return QualitativeChecker(lcs, synthesize=synthesize).check(query)
