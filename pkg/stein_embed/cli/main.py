"""
Entry point of the ``stein-embed`` command.

Usage:
    stein-embed graph-moments  --n N --p P [--enumerate]
    stein-embed graph-verify   --n N --p P [--graphs G] [--graph FILE]
    stein-embed graph-bound    --n N --p P [--h NAME]
    stein-embed ustat-verify   [--kernel NAME|path:FILE] [--n N]
    stein-embed ustat-bound    [--kernel NAME|path:FILE] --n N [--h NAME]
    stein-embed chaos-verify   --d D [--coeffs FILE] [--law NAME] [--h NAME]
    stein-embed stein-eval     --abc A B C --d D --signorm S [...]

Monte Carlo commands also take --samples, --seed and --workers; all take
--format json|csv, --no-timestamp and --verbose.
"""
import logging.config

import click

from stein_embed import __version__
from stein_embed.cli.commands import (
    chaos_verify,
    graph_bound,
    graph_moments,
    graph_verify,
    stein_eval,
    ustat_bound,
    ustat_verify,
)
from stein_embed.config import settings

COMMANDS = [graph_moments, graph_verify, graph_bound, ustat_verify, ustat_bound, chaos_verify, stein_eval]


@click.group()
@click.version_option(__version__, prog_name='stein-embed')
def main():
    """Exchangeable-pair normal approximation for embedded statistics."""
    logging.config.dictConfig(settings.LOGGING)


for module in COMMANDS:
    main.add_command(module.Command().as_click())


if __name__ == '__main__':
    main()
