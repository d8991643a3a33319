"""
Evaluate the smooth and non-smooth bounds from given statistics.

Usage:
    stein-embed stein-eval --abc A B C --d 3 --signorm S [--h1 X --h2 Y --h3 Z | --h NAME]
                           [--nonsmooth A' B' C' a gamma]

The non-smooth value is reported up to the unspecified constant γ(d)²
(the given gamma is used as that constant).
"""
import math

import click

from stein_embed.cli.base import ReportCommand
from stein_embed.mc import get_test_function, test_function_names
from stein_embed.stein import (
    GAMMA_LABEL,
    AbcStats,
    DerivBounds,
    NonSmoothInputs,
    nonsmooth_bound,
    nonsmooth_terms,
    smooth_bound,
)
from stein_embed.stein.types import PROVENANCE_EXACT


class Command(ReportCommand):
    name = 'stein-eval'
    help = 'Evaluate the approximation bounds for given A, B, C and derivative bounds'
    uses_mc = False

    def add_arguments(self):
        return [
            click.Option(['--abc'], type=float, nargs=3, required=True, help='A B C'),
            click.Option(['--d'], type=click.IntRange(min=1), required=True, help='Dimension'),
            click.Option(['--signorm'], type=float, required=True, help='Supremum norm of Sigma'),
            click.Option(['--h1'], type=float, default=math.inf, help='sup |dh|  [default: inf]'),
            click.Option(['--h2'], type=float, default=0.0, show_default=True, help='sup |d2h|'),
            click.Option(['--h3'], type=float, default=0.0, show_default=True, help='sup |d3h|'),
            click.Option(['--h', 'h_name'], type=click.Choice(test_function_names()), default=None,
                         help='Take h1, h2, h3 from a registered test function'),
            click.Option(['--nonsmooth'], type=float, nargs=5, default=None,
                         help="A' B' C' a gamma for the non-smooth bound"),
        ]

    def handle(self, report, abc, d, signorm, h1=math.inf, h2=0.0, h3=0.0, h_name=None,
               nonsmooth=None, **options):
        db = get_test_function(h_name).bounds(d) if h_name else DerivBounds(h1, h2, h3)
        stats = AbcStats(*abc)
        value = smooth_bound(stats, db, d, signorm)
        report.bound('smooth', value, PROVENANCE_EXACT, h1=db.h1, h2=db.h2, h3=db.h3)
        report.info('smooth_bound', value, value)

        if nonsmooth:
            ap, bp, cp, a, gamma = nonsmooth
            inp = NonSmoothInputs(ap, bp, cp, d, a, gamma)
            value = nonsmooth_bound(inp)
            dp, tp = nonsmooth_terms(inp)
            report.bound('nonsmooth', value, PROVENANCE_EXACT, label=GAMMA_LABEL, D_prime=dp, T_prime=tp)
            report.info('nonsmooth_bound', value, value)
