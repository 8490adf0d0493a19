# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.

"""
Exhaustive finite-MDP oracle used to cross-check the symbolic procedures.

States are enumerated with exact rational probabilities; qualitative answers
come from graph algorithms only (attractors, reachability and maximal end
components). Nothing here is used on the verdict path.
"""

import itertools
import logging
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import (
    Callable,
    Deque,
    Dict,
    FrozenSet,
    Hashable,
    Iterable,
    List,
    Optional,
    Sequence,
    Set,
    Tuple,
    Union,
)

import networkx as nx

from nplcs.config import get_config
from nplcs.models.core import Configuration, Nplcs, OpKind, TransitionRule
from nplcs.models.dsa import Dsa
from nplcs.models.query import Answer, Query, QueryKind, Threshold
from nplcs.models.words import loss_distribution

logger = logging.getLogger(__name__)

Node = Hashable
Distribution = Tuple[Tuple[Configuration, Fraction], ...]


@dataclass
class FiniteMdp:
    """The reachable part of the Markov decision process of an NPLCS."""

    start: Configuration
    states: Tuple[Configuration, ...]
    actions: Dict[Configuration, Tuple[int, ...]]
    transitions: Dict[Tuple[Configuration, int], Distribution]

    def __len__(self) -> int:
        return len(self.states)

    def successors(self, s: Configuration, rule: int) -> FrozenSet[Configuration]:
        return frozenset(t for t, _ in self.transitions[(s, rule)])

    def graph(self) -> "ActionGraph":
        return ActionGraph(
            start=self.start,
            actions={
                s: [self.successors(s, r) for r in self.actions[s]] for s in self.states
            },
            label={s: s.location for s in self.states},
        )


@dataclass(frozen=True)
class Exceeded:
    """Exploration stopped after more than ``cap`` states."""

    cap: int
    explored: int


def lossy_distribution(nplcs: Nplcs, s: Configuration, rule: TransitionRule) -> Distribution:
    """Exact distribution over the lossy successors of firing ``rule`` in ``s``."""
    perfect = nplcs.lcs.perfect_step(s, rule)
    names = [name for name, _ in perfect.contents]
    per_channel = [
        loss_distribution(nplcs.fault_rate, word).support for _, word in perfect.contents
    ]
    outcome: Dict[Configuration, Fraction] = {}
    for choice in itertools.product(*per_channel):
        successor = Configuration(
            perfect.location, tuple(zip(names, (word for word, _ in choice)))
        )
        probability = Fraction(1)
        for _, p in choice:
            probability *= p
        outcome[successor] = outcome.get(successor, Fraction(0)) + probability
    return tuple(sorted(outcome.items()))


def _fits(nplcs: Nplcs, s: Configuration, rule: TransitionRule, capacity: Optional[int]) -> bool:
    if capacity is None or rule.op.kind is not OpKind.SEND:
        return True
    return len(s.word(rule.op.channel)) < capacity


def explore(
    nplcs: Nplcs,
    start: Configuration,
    cap: Optional[int] = None,
    capacity: Optional[int] = None,
) -> Union[FiniteMdp, Exceeded]:
    """
    Breadth-first closure of ``start`` under lossy steps.

    With ``capacity`` set, sends that would make a channel longer than it are
    disabled.
    """
    if cap is None:
        cap = get_config().EXPLORE_CAP
    lcs = nplcs.lcs
    states: List[Configuration] = [start]
    seen = {start}
    actions: Dict[Configuration, Tuple[int, ...]] = {}
    transitions: Dict[Tuple[Configuration, int], Distribution] = {}
    queue: Deque[Configuration] = deque([start])
    while queue:
        s = queue.popleft()
        enabled = [r for r in lcs.enabled_rules(s) if _fits(nplcs, s, r, capacity)]
        actions[s] = tuple(r.index for r in enabled)
        for rule in enabled:
            distribution = lossy_distribution(nplcs, s, rule)
            transitions[(s, rule.index)] = distribution
            for t, _ in distribution:
                if t not in seen:
                    seen.add(t)
                    states.append(t)
                    queue.append(t)
                    if len(states) > cap:
                        logger.debug(f"exploration from ({start}) exceeded {cap} states")
                        return Exceeded(cap=cap, explored=len(states))
    return FiniteMdp(start=start, states=tuple(states), actions=actions, transitions=transitions)


@dataclass
class ActionGraph:
    """
    The qualitative skeleton of an MDP: per node, the support of every action.

    ``label`` maps each node to the name its target sets are written in
    (a control location, or an automaton state for products).
    """

    start: Node
    actions: Dict[Node, List[FrozenSet[Node]]]
    label: Dict[Node, str] = field(default_factory=dict)

    @property
    def nodes(self) -> FrozenSet[Node]:
        return frozenset(self.actions)

    def marked(self, names: Iterable[str]) -> FrozenSet[Node]:
        wanted = frozenset(names)
        return frozenset(n for n in self.actions if self.label[n] in wanted)


def forward(graph: ActionGraph, allowed: Optional[FrozenSet[Node]] = None) -> Set[Node]:
    """Nodes reachable from the start through nodes of ``allowed``."""
    if allowed is not None and graph.start not in allowed:
        return set()
    seen = {graph.start}
    queue = deque([graph.start])
    while queue:
        n = queue.popleft()
        for support in graph.actions[n]:
            for m in support:
                if m not in seen and (allowed is None or m in allowed):
                    seen.add(m)
                    queue.append(m)
    return seen


def almost_sure(graph: ActionGraph, target: FrozenSet[Node]) -> FrozenSet[Node]:
    """Nodes from which some scheduler reaches ``target`` with probability 1."""
    region = graph.nodes
    while True:
        safe_actions = {
            n: [a for a in graph.actions[n] if a <= region] for n in region
        }
        good = set(target & region)
        changed = True
        while changed:
            changed = False
            for n in region - good:
                if any(a & good for a in safe_actions[n]):
                    good.add(n)
                    changed = True
        if good == region:
            return frozenset(region)
        region = frozenset(good)


def forced_positive(graph: ActionGraph, target: FrozenSet[Node]) -> FrozenSet[Node]:
    """Nodes from which every scheduler reaches ``target`` with positive probability."""
    forced = set(target)
    changed = True
    while changed:
        changed = False
        for n in graph.nodes - forced:
            if graph.actions[n] and all(a & forced for a in graph.actions[n]):
                forced.add(n)
                changed = True
    return frozenset(forced)


EndComponent = Tuple[FrozenSet[Node], Dict[Node, List[FrozenSet[Node]]]]


def end_components(
    graph: ActionGraph,
    nodes: Iterable[Node],
    actions: Optional[Dict[Node, List[FrozenSet[Node]]]] = None,
) -> List[EndComponent]:
    """Maximal end components of the sub-MDP induced by ``nodes``."""
    region = set(nodes)
    source = graph.actions if actions is None else actions
    available = {n: [a for a in source[n] if a <= region] for n in region}
    while True:
        digraph = nx.DiGraph()
        digraph.add_nodes_from(available)
        for n, supports in available.items():
            for support in supports:
                digraph.add_edges_from((n, m) for m in support)
        component_of: Dict[Node, int] = {}
        components = list(nx.strongly_connected_components(digraph))
        for i, component in enumerate(components):
            for n in component:
                component_of[n] = i
        changed = False
        for n in list(available):
            kept = [
                a for a in available[n]
                if all(m in available and component_of[m] == component_of[n] for m in a)
            ]
            if len(kept) != len(available[n]):
                changed = True
            if kept:
                available[n] = kept
            else:
                del available[n]
                changed = True
        if not changed:
            result = []
            for component in components:
                members = frozenset(n for n in component if n in available)
                if members:
                    result.append((members, {n: available[n] for n in members}))
            return result


def streett_good(
    graph: ActionGraph,
    component: EndComponent,
    pairs: Sequence[Tuple[FrozenSet[Node], FrozenSet[Node]]],
) -> Set[Node]:
    """Nodes of end components inside ``component`` satisfying every Streett pair."""
    members, actions = component
    for first, second in pairs:
        if members & first and not members & second:
            good: Set[Node] = set()
            for sub in end_components(graph, members - first, actions):
                good |= streett_good(graph, sub, pairs)
            return good
    return set(members)


def _threshold(
    graph: ActionGraph,
    threshold: Threshold,
    winning: FrozenSet[Node],
    losing: FrozenSet[Node],
) -> bool:
    """
    ``winning``: nodes where the objective can be met surely from then on;
    ``losing``: the same for the negated objective.
    """
    if threshold is Threshold.POSITIVE:
        return bool(forward(graph) & winning)
    if threshold is Threshold.ONE:
        return graph.start in almost_sure(graph, winning)
    if threshold is Threshold.BELOW_ONE:
        return bool(forward(graph) & losing)
    return graph.start in almost_sure(graph, losing)


def visited_product(graph: ActionGraph, targets: Sequence[FrozenSet[str]]) -> ActionGraph:
    """Product of ``graph`` with the set of target indices visited so far."""

    def mark(n: Node, visited: FrozenSet[int]) -> FrozenSet[int]:
        return visited | {i for i, a in enumerate(targets) if graph.label[n] in a}

    start = (graph.start, mark(graph.start, frozenset()))
    actions: Dict[Node, List[FrozenSet[Node]]] = {}
    queue = deque([start])
    while queue:
        node = queue.popleft()
        if node in actions:
            continue
        n, visited = node
        actions[node] = [frozenset((m, mark(m, visited)) for m in a) for a in graph.actions[n]]
        for support in actions[node]:
            queue.extend(m for m in support if m not in actions)
    everything = frozenset(range(len(targets)))
    label = {node: "done" if node[1] == everything else "open" for node in actions}
    return ActionGraph(start=start, actions=actions, label=label)


def dsa_product(graph: ActionGraph, dsa: Dsa) -> ActionGraph:
    """Product with a Streett automaton reading labels; nodes are labelled by state."""
    table = dsa.table
    start = (graph.start, dsa.initial)
    actions: Dict[Node, List[FrozenSet[Node]]] = {}
    queue = deque([start])
    while queue:
        node = queue.popleft()
        if node in actions:
            continue
        n, state = node
        actions[node] = [
            frozenset((m, table[(state, graph.label[n])]) for m in a) for a in graph.actions[n]
        ]
        for support in actions[node]:
            queue.extend(m for m in support if m not in actions)
    return ActionGraph(start=start, actions=actions, label={node: node[1] for node in actions})


def _eventuality(
    graph: ActionGraph, targets: Sequence[FrozenSet[str]], threshold: Threshold
) -> bool:
    product = visited_product(graph, targets)
    done = product.marked(["done"])
    if threshold is Threshold.POSITIVE:
        return bool(forward(product) & done)
    if threshold is Threshold.ONE:
        return product.start in almost_sure(product, done)
    if threshold is Threshold.ZERO:
        return product.start not in forced_positive(product, done)
    outside = product.nodes - done
    avoiding = frozenset().union(*(c for c, _ in end_components(product, outside)))
    return bool(forward(product, outside) & avoiding)


def _buchi(graph: ActionGraph, targets: Sequence[FrozenSet[str]], threshold: Threshold) -> bool:
    marked = [graph.marked(a) for a in targets]
    winning = frozenset().union(
        *(c for c, _ in end_components(graph, graph.nodes) if all(c & m for m in marked))
    )
    losing = frozenset().union(
        *(c for m in marked for c, _ in end_components(graph, graph.nodes - m))
    )
    return _threshold(graph, threshold, winning, losing)


def _streett(
    graph: ActionGraph,
    pairs: Sequence[Tuple[FrozenSet[str], FrozenSet[str]]],
    threshold: Threshold,
) -> bool:
    marked = [(graph.marked(a), graph.marked(b)) for a, b in pairs]
    winning: Set[Node] = set()
    for component in end_components(graph, graph.nodes):
        winning |= streett_good(graph, component, marked)
    losing = frozenset().union(
        *(
            c
            for first, second in marked
            for c, _ in end_components(graph, graph.nodes - second)
            if c & first
        )
    )
    return _threshold(graph, threshold, frozenset(winning), losing)


def oracle_qualitative(mdp: FiniteMdp, query: Query) -> Answer:
    """
    Exact answer to ``query`` on a finite MDP, from the MDP's start state.

    Finite-memory and general schedulers agree on finite MDPs, so the
    scheduler class of the query is not consulted.
    """
    graph = mdp.graph()
    if query.kind is QueryKind.EVENTUALITY:
        holds = _eventuality(graph, query.targets, query.threshold)
    elif query.kind is QueryKind.BUCHI:
        holds = _buchi(graph, query.targets, query.threshold)
    elif query.kind is QueryKind.STREETT:
        holds = _streett(graph, query.pairs, query.threshold)
    else:
        assert query.dsa is not None
        holds = _streett(dsa_product(graph, query.dsa), query.dsa.pairs, query.threshold)
    return Answer.YES if holds else Answer.NO


class BoundedAnswer(str, Enum):
    YES = "yes"
    UNKNOWN = "unknown"


def bounded_positive_reach(
    nplcs: Nplcs,
    start: Configuration,
    locations: Iterable[str],
    capacity: int,
    cap: Optional[int] = None,
) -> BoundedAnswer:
    """
    One-sided reachability check: explore with channels bounded by ``capacity``.

    Every path found is a path of the unbounded system, so YES is sound; the
    check never answers no.
    """
    if capacity < 0:
        raise ValueError(f"capacity must be non-negative, got {capacity}")
    targets = frozenset(locations)
    if start.location in targets:
        return BoundedAnswer.YES
    if cap is None:
        cap = get_config().EXPLORE_CAP
    lcs = nplcs.lcs
    seen = {start}
    queue: Deque[Configuration] = deque([start])
    while queue and len(seen) <= cap:
        s = queue.popleft()
        for rule in lcs.enabled_rules(s):
            if not _fits(nplcs, s, rule, capacity):
                continue
            for t in lcs.lossy_successors(s, rule):
                if t.location in targets:
                    return BoundedAnswer.YES
                if t not in seen:
                    seen.add(t)
                    queue.append(t)
    return BoundedAnswer.UNKNOWN


def _keeps_inside(
    mdp: FiniteMdp,
    region: FrozenSet[str],
    choice: Callable[[str], Optional[int]],
) -> bool:
    seen = {mdp.start}
    queue = deque([mdp.start])
    while queue:
        s = queue.popleft()
        rule = choice(s.location)
        if s.location not in region or rule is None or rule not in mdp.actions[s]:
            return False
        for t in mdp.successors(s, rule):
            if t not in seen:
                seen.add(t)
                queue.append(t)
    return True


def oracle_safe_blind(nplcs: Nplcs, mdp: FiniteMdp, locations: Iterable[str]) -> bool:
    """
    True iff some blind memoryless scheduler keeps every run from the start
    inside ``locations`` forever.

    Brute force over one rule per location; meant for small test models.
    """
    region = frozenset(locations)
    lcs = nplcs.lcs
    names = sorted(region)
    options: List[List[Optional[int]]] = [
        [r.index for r in lcs.rules_from[q] if r.target in region] or [None] for q in names
    ]
    for picks in itertools.product(*options):
        table = dict(zip(names, picks))
        if _keeps_inside(mdp, region, table.get):
            return True
    return False
