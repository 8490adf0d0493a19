# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.

"""
CLI command implementations for nplcs-check.
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

from tabulate import tabulate

from nplcs.config import get_config
from nplcs.exceptions import (
    EmptyCoreError,
    EmptyPromError,
    EmptySafeError,
    NplcsError,
)
from nplcs.cli.formats import (
    parse_dsa,
    parse_event,
    parse_model,
    parse_query,
    parse_start,
)
from nplcs.models.core import Nplcs
from nplcs.models.query import Verdict
from nplcs.models.scheduler import WitnessScheduler
from nplcs.schemas import EstimateSchema, VerdictSchema, WitnessSchedulerSchema, to_json
from nplcs.services.fixpoints import safe
from nplcs.services.oracle import Exceeded, explore
from nplcs.services.qualitative import QualitativeChecker
from nplcs.services.sched import (
    synth_buchi_roundrobin,
    synth_eventuality_chain,
    synth_safe,
    synth_stubborn,
)
from nplcs.services.sim import Estimate, SimEventKind, estimate, estimate_adaptive

logger = logging.getLogger(__name__)

EXIT_ERROR = 3

SYNTHESIZERS = {
    "safe": lambda lcs, targets: synth_safe(lcs, targets[0]),
    "stubborn": lambda lcs, targets: synth_stubborn(lcs, targets[0]),
    "roundrobin": synth_buchi_roundrobin,
    "chain": synth_eventuality_chain,
}


def load_model(path: str) -> Nplcs:
    return parse_model(Path(path).read_text(encoding="utf-8"))


def check_query(
    model_path: str, query_text: str
) -> Tuple[bool, Optional[Verdict], Optional[str]]:
    """
    Decide a query given in the query grammar.

    Returns:
        Tuple of (success, verdict, error_message)
    """
    try:
        nplcs = load_model(model_path)
        base = Path(model_path).parent

        def load_dsa(path: str):
            dsa_path = Path(path) if Path(path).is_absolute() else base / path
            if not dsa_path.exists():
                dsa_path = Path(path)
            return parse_dsa(dsa_path.read_text(encoding="utf-8"), nplcs.lcs.locations)

        query = parse_query(query_text, load_dsa)
        verdict = QualitativeChecker(nplcs.lcs).check(query)
        logger.info(f"{query} -> {verdict.answer.value}")
        return True, verdict, None
    except (NplcsError, OSError) as e:
        logger.error(f"check failed: {e}")
        return False, None, str(e)


def synthesize(
    model_path: str, kind: str, targets: Sequence[frozenset]
) -> Tuple[bool, Optional[WitnessScheduler], Optional[str], bool]:
    """
    Build a witness scheduler of the given kind.

    Returns:
        Tuple of (success, scheduler, error_message, precondition_failed)
    """
    try:
        nplcs = load_model(model_path)
        if not targets:
            return False, None, "at least one target set is needed", False
        sched = SYNTHESIZERS[kind](nplcs.lcs, list(targets))
        return True, sched, None, False
    except (EmptySafeError, EmptyPromError, EmptyCoreError) as e:
        logger.warning(f"synthesis precondition failed: {e}")
        return False, None, f"{type(e).__name__}: {e}", True
    except (NplcsError, OSError) as e:
        logger.error(f"synthesis failed: {e}")
        return False, None, str(e), False


def load_scheduler(path: str) -> WitnessScheduler:
    document = json.loads(Path(path).read_text(encoding="utf-8"))
    return WitnessSchedulerSchema().load(document)


def simulate(
    model_path: str,
    start_text: str,
    event_text: str,
    scheduler_path: Optional[str] = None,
    builtin: Optional[str] = None,
    targets: Sequence[frozenset] = (),
    trials: Optional[int] = None,
    seed: Optional[int] = None,
    horizon: Optional[int] = None,
    workers: Optional[int] = None,
) -> Tuple[bool, Optional[Estimate], Optional[str]]:
    """
    Estimate an event under a stored or freshly synthesized scheduler.

    Without ``horizon`` reach events use the adaptive horizon and the other
    events run for the configured maximum horizon.

    Returns:
        Tuple of (success, estimate, error_message)
    """
    try:
        nplcs = load_model(model_path)
        if scheduler_path is not None:
            sched = load_scheduler(scheduler_path)
        else:
            if builtin is None or not targets:
                return False, None, "give --scheduler or --builtin with --targets"
            sched = SYNTHESIZERS[builtin](nplcs.lcs, list(targets))
        start = parse_start(start_text, nplcs.lcs)
        config = get_config()
        event = parse_event(event_text, horizon or config.ADAPTIVE_HORIZON_START)
        adaptive = horizon is None and event.kind in (
            SimEventKind.REACH,
            SimEventKind.REACH_SEQ,
        )
        if adaptive:
            result = estimate_adaptive(nplcs, sched, start, event, trials, seed, workers)
        else:
            if horizon is None:
                event = event.with_horizon(config.ADAPTIVE_HORIZON_MAX)
            result = estimate(nplcs, sched, start, event, trials, seed, workers)
        return True, result, None
    except (NplcsError, OSError, ValueError) as e:
        logger.error(f"simulation failed: {e}")
        return False, None, str(e)


def model_info(
    model_path: str, with_explore: bool = False, cap: Optional[int] = None
) -> Tuple[bool, Optional[Dict[str, Any]], Optional[str]]:
    """
    Summarize a model file.

    Returns:
        Tuple of (success, info, error_message)
    """
    try:
        nplcs = load_model(model_path)
    except (NplcsError, OSError) as e:
        return False, None, str(e)
    lcs = nplcs.lcs
    info: Dict[str, Any] = {
        "locations": list(lcs.locations),
        "channels": list(lcs.channels),
        "messages": list(lcs.messages),
        "fault_rate": str(nplcs.fault_rate),
        "rules": [
            {"name": r.name, "source": r.source, "target": r.target, "op": str(r.op)}
            for r in lcs.rules
        ],
        "issues": [str(issue) for issue in lcs.validate()],
        "safe": sorted(safe(lcs, lcs.locations)),
    }
    if with_explore:
        reachable: Dict[str, Any] = {}
        for q in lcs.locations:
            mdp = explore(nplcs, lcs.empty(q), cap)
            reachable[q] = "exceeded" if isinstance(mdp, Exceeded) else len(mdp)
        info["reachable_states"] = reachable
    return True, info, None


def render_verdict(verdict: Verdict, fmt: str) -> str:
    data = VerdictSchema().dump(verdict)
    if fmt == "json":
        return to_json(data)
    rows = [
        ["answer", data["answer"]],
        ["threshold", data["threshold"]],
        ["class", data["class"]],
        ["citation", data["citation"]],
    ]
    if data.get("witness"):
        rows.append(["witness", data["witness"]["id"]])
    rows += [[f"certificate.{key}", value] for key, value in sorted(data["certificate"].items())]
    return tabulate(rows, tablefmt="plain")


def render_scheduler(sched: WitnessScheduler) -> Tuple[str, str]:
    """JSON document and a one-line summary for stderr."""
    data = WitnessSchedulerSchema().dump(sched)
    summary = (
        f"scheduler {data['id']}: {sched.kind.value}, {len(sched.modes)} modes, "
        f"{sched.table_size} path entries, {len(sched.recovery)} recovery entries"
    )
    return to_json(data), summary


def render_estimate(result: Estimate, fmt: str) -> str:
    data = EstimateSchema().dump(result)
    if fmt == "json":
        return to_json(data)
    return tabulate([[key, data[key]] for key in sorted(data)], tablefmt="plain")


def render_info(info: Dict[str, Any], fmt: str) -> str:
    if fmt == "json":
        return to_json(info)
    header = tabulate(
        [
            ["locations", " ".join(info["locations"])],
            ["channels", " ".join(info["channels"])],
            ["messages", " ".join(info["messages"])],
            ["fault rate", info["fault_rate"]],
            ["Safe(Q)", " ".join(info["safe"])],
            ["issues", "; ".join(info["issues"]) or "none"],
        ],
        tablefmt="plain",
    )
    rules: List[List[Any]] = [
        [r["name"], r["source"], r["target"], r["op"]] for r in info["rules"]
    ]
    table = tabulate(rules, headers=["rule", "source", "target", "op"])
    text = f"{header}\n\n{table}"
    if "reachable_states" in info:
        rows = sorted(info["reachable_states"].items())
        text += "\n\n" + tabulate(rows, headers=["start", "reachable states"])
    return text
