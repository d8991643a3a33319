"""
Normal approximation bounds for the rescaled graph counts.

Usage:
    stein-embed graph-bound --n 20 --p 0.5 --h cos111 [--samples N] [--seed S]

Evaluates the closed-form bounds against Σ₁ and Σ₀, estimates the actual
discrepancies and the A/B statistics of the coupling, and checks that every
estimate sits below its bound (up to the Monte Carlo tolerance).
"""
import logging

import click

from stein_embed.cli.base import ReportCommand
from stein_embed.config import settings
from stein_embed.graphs import (
    GraphModel,
    GraphPair,
    a_term_bound,
    b_term_bound,
    corollary_bound,
    exact_moments,
    lambda_graph,
    prop_bound,
    sigma_perturbation_term,
)
from stein_embed.matlite import supnorm, sym_sqrt
from stein_embed.mc import abc_from_pairs, discrepancy, get_test_function, test_function_names
from stein_embed.stein import cov_perturbation_bound, smooth_bound, smooth_bound_interval
from stein_embed.stein.types import PROVENANCE_EXACT, PROVENANCE_MC, PROVENANCE_CLOSED_FORM

logger = logging.getLogger(__name__)


class Command(ReportCommand):
    name = 'graph-bound'
    help = 'Bounds on Eh(W1) - Eh(Sigma^{1/2} Z) for the rescaled graph counts'

    def add_arguments(self):
        return [
            click.Option(['--n'], type=int, required=True, help='Number of vertices (>= 4)'),
            click.Option(['--p'], type=float, required=True, help='Edge probability in (0, 1)'),
            click.Option(['--h', 'h_name'], type=click.Choice(test_function_names()), default='cos111',
                         show_default=True, help='Registered test function'),
            click.Option(['--abc-samples'], type=click.IntRange(min=2), default=20000, show_default=True,
                         help='Samples for the A/B statistics'),
        ]

    def handle(self, report, n, p, h_name='cos111', abc_samples=20000, samples=None, seed=None,
               workers=None, **options):
        model = GraphModel(n, p)
        moments = exact_moments(model)
        pair = GraphPair(model)
        h = get_test_function(h_name)
        db = h.bounds(pair.dim)
        k = settings.SIGMA_TOLERANCE

        bound1 = prop_bound(n, db)
        bound0 = corollary_bound(n, db)
        report.bound('sigma1', bound1, PROVENANCE_CLOSED_FORM, h=h_name, h1=db.h1, h2=db.h2, h3=db.h3)
        report.bound('sigma0', bound0, PROVENANCE_CLOSED_FORM, h=h_name)

        d1 = discrepancy(h, pair.w_sampler, sym_sqrt(moments.sigma1), samples, seed, workers)
        report.value('discrepancy_sigma1', d1.mean, PROVENANCE_MC, stderr=d1.stderr)
        report.at_most('discrepancy_sigma1_within_bound', bound1, abs(d1.mean), k * d1.stderr,
                       provenance=PROVENANCE_MC, stderr=d1.stderr)

        d0 = discrepancy(h, pair.w_sampler, sym_sqrt(moments.sigma0), samples, seed, workers)
        report.value('discrepancy_sigma0', d0.mean, PROVENANCE_MC, stderr=d0.stderr)
        report.at_most('discrepancy_sigma0_within_bound', bound0, abs(d0.mean), k * d0.stderr,
                       provenance=PROVENANCE_MC, stderr=d0.stderr)

        perturbation = cov_perturbation_bound(moments.sigma1, moments.sigma0, db.h2)
        report.value('covariance_perturbation', perturbation, PROVENANCE_EXACT)
        report.at_most('covariance_perturbation_within_bound', 0.5 * db.h2 * sigma_perturbation_term(n),
                       perturbation, settings.IDENTITY_TOLERANCE)

        stats = abc_from_pairs(pair, lambda_graph(model), abc_samples, seed, workers=workers)
        se_a, se_b, _ = stats.stderr
        report.bound('abc', stats.A, PROVENANCE_MC, A=stats.A, B=stats.B, C=stats.C,
                     stderr=stats.stderr, lambdas=stats.lambdas)
        report.at_most('A_within_closed_form', a_term_bound(n), stats.A, k * se_a,
                       provenance=PROVENANCE_MC, stderr=se_a)
        report.at_most('B_within_closed_form', b_term_bound(n), stats.B, k * se_b,
                       provenance=PROVENANCE_MC, stderr=se_b)

        signorm = supnorm(moments.sigma1)
        point = smooth_bound(stats, db, pair.dim, signorm)
        low, high = smooth_bound_interval(stats, db, pair.dim, signorm)
        report.bound('smooth', point, PROVENANCE_MC, interval=[low, high])
        report.at_most('smooth_bound_within_closed_form', bound1, point, point - low,
                       provenance=PROVENANCE_MC)
