# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.

"""
Finite-memory ω-regular properties through a product with a deterministic
Streett automaton.
"""

import logging
from collections import deque
from dataclasses import dataclass
from typing import Dict, List, Set, Tuple

from nplcs.models.core import Lcs, LocationSet, RuleSpec
from nplcs.models.dsa import Dsa
from nplcs.models.query import Answer, SchedulerClass, Threshold, Verdict

logger = logging.getLogger(__name__)

CITE_OMEGA_ALL = "undecidable: ω-regular properties over all schedulers"


def product_name(location: str, state: str) -> str:
    return f"{location}|{state}"


@dataclass
class Product:
    """
    The system ``lcs × dsa``.

    Location ``p|z`` means the automaton is in state z when p is read; a rule
    p -> p' leads to p'|σ(z, p). Only pairs reachable in the control graph
    from q|z₀ are built.
    """

    lcs: Lcs
    start: str
    pairs: List[Tuple[LocationSet, LocationSet]]
    origin: Dict[str, Tuple[str, str]]


def build_product(lcs: Lcs, dsa: Dsa, q: str) -> Product:
    """
    Raises:
        ValidationError: for unknown states or locations
        PartialDeltaError: when the automaton is not complete on ``lcs``
    """
    dsa.check(lcs.locations)
    lcs.locations_of([q])
    table = dsa.table
    start = (q, dsa.initial)
    seen: Set[Tuple[str, str]] = {start}
    queue = deque([start])
    rules: List[RuleSpec] = []
    while queue:
        location, state = queue.popleft()
        for rule in lcs.rules_from[location]:
            successor = (rule.target, table[(state, location)])
            rules.append((product_name(location, state), product_name(*successor), rule.op))
            if successor not in seen:
                seen.add(successor)
                queue.append(successor)
    origin = {product_name(p, z): (p, z) for p, z in seen}
    pairs = [
        (
            frozenset(name for name, (_, z) in origin.items() if z in first),
            frozenset(name for name, (_, z) in origin.items() if z in second),
        )
        for first, second in dsa.pairs
    ]
    system = Lcs.build(origin, lcs.channels, lcs.messages, rules)
    logger.debug(f"product with the automaton has {len(system.locations)} locations")
    return Product(system, product_name(*start), pairs, origin)


def omega_check(
    lcs: Lcs,
    q: str,
    dsa: Dsa,
    threshold: Threshold,
    scheduler_class: SchedulerClass = SchedulerClass.FINITE_MEMORY,
) -> Verdict:
    """Decide whether some scheduler meets ``threshold`` for the automaton's language."""
    from nplcs.services.qualitative import QualitativeChecker

    product = build_product(lcs, dsa, q)
    if scheduler_class is SchedulerClass.ALL:
        return Verdict(
            answer=Answer.UNDECIDABLE,
            threshold=threshold,
            scheduler_class=scheduler_class,
            citation=CITE_OMEGA_ALL,
        )
    checker = QualitativeChecker(product.lcs)
    verdict = checker.streett_fm(product.start, product.pairs, threshold, scheduler_class)
    verdict.citation = f"ω-regular via product: {verdict.citation}"
    verdict.certificate["product"] = {
        "start": product.start,
        "locations": list(product.lcs.locations),
    }
    return verdict
