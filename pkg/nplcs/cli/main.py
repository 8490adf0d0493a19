# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.

"""
Command-line interface for nplcs-check.
"""

import logging
import sys
from pathlib import Path

import click

from nplcs.cli.commands import (
    EXIT_ERROR,
    SYNTHESIZERS,
    check_query,
    model_info,
    render_estimate,
    render_info,
    render_scheduler,
    render_verdict,
    simulate,
    synthesize,
)
from nplcs.cli.fixtures import fixture
from nplcs.cli.formats import model_to_text, parse_targets
from nplcs.config import config_map, set_active_config
from nplcs.exceptions import NplcsError
from nplcs.utils.logging import configure_logging

logger = logging.getLogger(__name__)

FORMAT = click.Choice(["json", "text"])


def fail(message: str, code: int = EXIT_ERROR) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


class CheckerGroup(click.Group):
    """Command group whose usage errors exit with EXIT_ERROR; 2 means undecidable."""

    def main(self, *args, **kwargs):
        kwargs.pop("standalone_mode", None)
        try:
            code = super().main(*args, standalone_mode=False, **kwargs)
        except click.ClickException as e:
            e.show()
            sys.exit(EXIT_ERROR)
        except click.Abort:
            click.echo("Aborted!", err=True)
            sys.exit(1)
        sys.exit(code if isinstance(code, int) else 0)


@click.group(cls=CheckerGroup)
@click.option(
    "--config",
    default=None,
    type=click.Choice(sorted(config_map)),
    help="Configuration to use (defaults to NPLCS_ENV)",
)
@click.option("--log-level", default=None, help="Log level (defaults to NPLCS_LOG)")
@click.pass_context
def nplcs(ctx, config, log_level):
    """Qualitative model checker for probabilistic lossy channel systems."""
    ctx.ensure_object(dict)
    ctx.obj["config"] = set_active_config(config)
    configure_logging(log_level=log_level)


@nplcs.command()
@click.argument("model", type=click.Path(exists=True, dir_okay=False))
@click.argument("query")
@click.option("--format", "fmt", type=FORMAT, default="json", help="Output format")
def check(model, query, fmt):
    """Decide QUERY, e.g. 'BUCHI{=1}[all] from 1 {6}', on MODEL."""
    success, verdict, error = check_query(model, query)
    if not success:
        fail(error)
    click.echo(render_verdict(verdict, fmt))
    sys.exit(verdict.exit_code)


@nplcs.command()
@click.argument("model", type=click.Path(exists=True, dir_okay=False))
@click.argument("kind", type=click.Choice(sorted(SYNTHESIZERS)))
@click.argument("targets", nargs=-1, required=True)
@click.option("--output", "-o", default=None, help="Write the scheduler to this file")
def synth(model, kind, targets, output):
    """Synthesize a witness scheduler of KIND for the TARGETS sets."""
    success, sched, error, precondition = synthesize(model, kind, parse_targets(targets))
    if not success:
        fail(error, 1 if precondition else EXIT_ERROR)
    document, summary = render_scheduler(sched)
    if output:
        Path(output).write_text(document + "\n", encoding="utf-8")
    else:
        click.echo(document)
    click.echo(summary, err=True)


@nplcs.command("simulate")
@click.argument("model", type=click.Path(exists=True, dir_okay=False))
@click.option("--scheduler", "scheduler_path", default=None, help="Scheduler JSON file")
@click.option(
    "--builtin",
    type=click.Choice(sorted(SYNTHESIZERS)),
    default=None,
    help="Synthesize the scheduler instead of loading one",
)
@click.option("--targets", multiple=True, help="Target set for --builtin, e.g. {3}")
@click.option("--start", required=True, help='Start configuration, e.g. in:""')
@click.option("--event", required=True, help="Event, e.g. 'reach {out}'")
@click.option("--trials", type=click.IntRange(min=1), default=None, help="Number of trials")
@click.option("--seed", type=int, default=None, help="Random seed")
@click.option("--horizon", type=click.IntRange(min=1), default=None, help="Step bound")
@click.option("--workers", type=click.IntRange(min=1), default=None, help="Worker threads")
@click.option("--format", "fmt", type=FORMAT, default="json", help="Output format")
def simulate_command(
    model, scheduler_path, builtin, targets, start, event, trials, seed, horizon, workers, fmt
):
    """Estimate the probability of an event by simulation."""
    success, result, error = simulate(
        model,
        start,
        event,
        scheduler_path=scheduler_path,
        builtin=builtin,
        targets=parse_targets(targets),
        trials=trials,
        seed=seed,
        horizon=horizon,
        workers=workers,
    )
    if not success:
        fail(error)
    click.echo(render_estimate(result, fmt))


@nplcs.command()
@click.argument("model", type=click.Path(exists=True, dir_okay=False))
@click.option("--explore", "with_explore", is_flag=True, help="Count reachable states")
@click.option("--cap", type=click.IntRange(min=1), default=None, help="Exploration cap")
@click.option("--format", "fmt", type=FORMAT, default="text", help="Output format")
def info(model, with_explore, cap, fmt):
    """Describe MODEL."""
    success, details, error = model_info(model, with_explore, cap)
    if not success:
        fail(error)
    click.echo(render_info(details, fmt))


@nplcs.command()
@click.argument("name")
@click.argument("params", nargs=-1)
def fixtures(name, params):
    """Print the model file of fixture NAME (run6, or gadget with an alphabet)."""
    try:
        model = fixture(name, *params)
    except NplcsError as e:
        fail(str(e))
    click.echo(model_to_text(model, name), nl=False)


if __name__ == "__main__":
    nplcs()
