# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.

"""
Monte Carlo simulation of the Markov chain a witness scheduler induces on an
NPLCS, with bounded-horizon events and Wilson confidence intervals.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from enum import Enum
from typing import Iterable, Iterator, Optional, Sequence, Tuple

import numpy as np
from scipy.stats import norm

from nplcs.config import get_config
from nplcs.models.core import Configuration, Nplcs, TransitionRule
from nplcs.models.scheduler import WitnessScheduler
from nplcs.models.words import Word

logger = logging.getLogger(__name__)


class SimEventKind(str, Enum):
    REACH = "Reach"
    REACH_SEQ = "ReachSeq"
    STAY_IN = "StayIn"
    VISIT_COUNT = "VisitCount"


@dataclass(frozen=True)
class SimEvent:
    """
    A bounded-horizon event over the locations of a trajectory.

    The start configuration is observed at step 0. With ``nonempty`` set, a
    location only counts as a target while some channel holds a message.
    """

    kind: SimEventKind
    targets: Tuple[frozenset, ...]
    horizon: int
    count: int = 1
    nonempty: bool = False

    def __post_init__(self) -> None:
        if self.horizon < 1:
            raise ValueError(f"horizon must be at least 1, got {self.horizon}")
        if self.count < 1:
            raise ValueError(f"visit count must be at least 1, got {self.count}")
        if not self.targets:
            raise ValueError("an event needs at least one target set")

    @classmethod
    def reach(cls, locations: Iterable[str], horizon: int, nonempty: bool = False) -> "SimEvent":
        return cls(SimEventKind.REACH, (frozenset(locations),), horizon, nonempty=nonempty)

    @classmethod
    def reach_seq(cls, targets: Sequence[Iterable[str]], horizon: int) -> "SimEvent":
        return cls(SimEventKind.REACH_SEQ, tuple(frozenset(a) for a in targets), horizon)

    @classmethod
    def stay_in(cls, locations: Iterable[str], horizon: int) -> "SimEvent":
        return cls(SimEventKind.STAY_IN, (frozenset(locations),), horizon)

    @classmethod
    def visit_count(cls, locations: Iterable[str], horizon: int, count: int) -> "SimEvent":
        return cls(SimEventKind.VISIT_COUNT, (frozenset(locations),), horizon, count)

    def with_horizon(self, horizon: int) -> "SimEvent":
        return replace(self, horizon=horizon)

    def __str__(self) -> str:
        sets = ";".join("{" + ",".join(sorted(a)) + "}" for a in self.targets)
        extra = f",k={self.count}" if self.kind is SimEventKind.VISIT_COUNT else ""
        return f"{self.kind.value}({sets},h={self.horizon}{extra})"


class EventMonitor:
    """Tracks one event along a trajectory; ``settled`` is set once the outcome is fixed."""

    def __init__(self, event: SimEvent):
        self.event = event
        self.progress = 0
        self.settled: Optional[bool] = None

    def _hit(self, s: Configuration, locations: frozenset) -> bool:
        if s.location not in locations:
            return False
        return not self.event.nonempty or not s.is_empty

    def observe(self, s: Configuration) -> Optional[bool]:
        kind = self.event.kind
        if kind is SimEventKind.REACH:
            if self._hit(s, self.event.targets[0]):
                self.settled = True
        elif kind is SimEventKind.REACH_SEQ:
            while (
                self.progress < len(self.event.targets)
                and self._hit(s, self.event.targets[self.progress])
            ):
                self.progress += 1
            if self.progress == len(self.event.targets):
                self.settled = True
        elif kind is SimEventKind.STAY_IN:
            if not self._hit(s, self.event.targets[0]):
                self.settled = False
        elif self._hit(s, self.event.targets[0]):
            self.progress += 1
            if self.progress >= self.event.count:
                self.settled = True
        return self.settled

    def finish(self) -> bool:
        if self.settled is not None:
            return self.settled
        return self.event.kind is SimEventKind.STAY_IN


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """Counter-based generator keyed by (seed, trial index)."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(trial,))))


def sample_losses(tau: float, w: Word, rng: np.random.Generator) -> Word:
    """Delete every letter of ``w`` independently with probability ``tau``."""
    if not w:
        return w
    kept = rng.random(len(w)) >= float(tau)
    return tuple(letter for letter, keep in zip(w, kept) if keep)


def step(
    nplcs: Nplcs, s: Configuration, rule: TransitionRule, rng: np.random.Generator
) -> Configuration:
    """
    Fire ``rule`` perfectly, then apply losses to every channel.

    Raises:
        NotEnabledError: if ``rule`` is not enabled in ``s``
    """
    perfect = nplcs.lcs.perfect_step(s, rule)
    tau = float(nplcs.fault_rate)
    return Configuration(
        perfect.location,
        tuple((name, sample_losses(tau, word, rng)) for name, word in perfect.contents),
    )


def trajectory(
    nplcs: Nplcs,
    sched: WitnessScheduler,
    start: Configuration,
    steps: int,
    rng: np.random.Generator,
) -> Iterator[Configuration]:
    """Configurations s₀ … s_steps of one simulated run (no losses at time 0)."""
    s, mode = start, sched.initial_mode
    yield s
    for _ in range(steps):
        rule, mode = sched.decide(nplcs.lcs, mode, s)
        s = step(nplcs, s, rule, rng)
        yield s


def run(
    nplcs: Nplcs,
    sched: WitnessScheduler,
    start: Configuration,
    event: SimEvent,
    rng: np.random.Generator,
) -> bool:
    """
    Simulate at most ``event.horizon`` steps and report whether the event held.

    Raises:
        UndefinedDecisionError: propagated from the scheduler
    """
    monitor = EventMonitor(event)
    for s in trajectory(nplcs, sched, start, event.horizon, rng):
        if monitor.observe(s) is not None:
            break
    return monitor.finish()


def wilson_interval(
    successes: int, trials: int, confidence: Optional[float] = None
) -> Tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if confidence is None:
        confidence = get_config().CONFIDENCE
    z = float(norm.ppf(1 - (1 - confidence) / 2))
    p = successes / trials
    denominator = 1 + z * z / trials
    center = (p + z * z / (2 * trials)) / denominator
    half = z / denominator * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials))
    low = min(max(center - half, 0.0), p)
    high = max(min(center + half, 1.0), p)
    return low, high


@dataclass(frozen=True)
class Estimate:
    trials: int
    successes: int
    point: float
    ci_low: float
    ci_high: float
    seed: int
    horizon: int
    event: str

    @classmethod
    def from_counts(cls, successes: int, trials: int, seed: int, event: SimEvent) -> "Estimate":
        low, high = wilson_interval(successes, trials)
        return cls(
            trials=trials,
            successes=successes,
            point=successes / trials,
            ci_low=low,
            ci_high=high,
            seed=seed,
            horizon=event.horizon,
            event=str(event),
        )


def _count_successes(
    nplcs: Nplcs,
    sched: WitnessScheduler,
    start: Configuration,
    event: SimEvent,
    seed: int,
    trials: range,
) -> int:
    return sum(
        run(nplcs, sched, start, event, trial_rng(seed, trial)) for trial in trials
    )


def estimate(
    nplcs: Nplcs,
    sched: WitnessScheduler,
    start: Configuration,
    event: SimEvent,
    trials: Optional[int] = None,
    seed: Optional[int] = None,
    workers: Optional[int] = None,
) -> Estimate:
    """
    Success frequency of ``event`` over independent trials.

    Trial t always draws from ``trial_rng(seed, t)``, so the result does not
    depend on the number of workers.
    """
    config = get_config()
    trials = config.DEFAULT_TRIALS if trials is None else trials
    seed = config.DEFAULT_SEED if seed is None else seed
    workers = config.SIM_WORKERS if workers is None else workers
    if trials < 1:
        raise ValueError(f"trials must be at least 1, got {trials}")
    workers = max(1, min(workers, trials))
    chunk = math.ceil(trials / workers)
    ranges = [range(i, min(i + chunk, trials)) for i in range(0, trials, chunk)]
    if workers == 1:
        successes = _count_successes(nplcs, sched, start, event, seed, ranges[0])
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            successes = sum(
                pool.map(
                    lambda r: _count_successes(nplcs, sched, start, event, seed, r), ranges
                )
            )
    result = Estimate.from_counts(successes, trials, seed, event)
    logger.info(
        f"{event} from ({start}): {successes}/{trials} "
        f"[{result.ci_low:.4f}, {result.ci_high:.4f}]"
    )
    return result


def estimate_adaptive(
    nplcs: Nplcs,
    sched: WitnessScheduler,
    start: Configuration,
    event: SimEvent,
    trials: Optional[int] = None,
    seed: Optional[int] = None,
    workers: Optional[int] = None,
) -> Estimate:
    """
    Double the horizon from the configured start value until the success
    frequency moves by less than the tolerance or the maximum is reached.
    """
    config = get_config()
    horizon = config.ADAPTIVE_HORIZON_START
    previous = estimate(nplcs, sched, start, event.with_horizon(horizon), trials, seed, workers)
    while horizon < config.ADAPTIVE_HORIZON_MAX:
        horizon *= 2
        current = estimate(
            nplcs, sched, start, event.with_horizon(horizon), trials, seed, workers
        )
        if abs(current.point - previous.point) < config.ADAPTIVE_TOLERANCE:
            return current
        previous = current
    return previous
