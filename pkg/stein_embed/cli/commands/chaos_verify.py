"""
Verify the chaos embedding of a multilinear functional.

Usage:
    stein-embed chaos-verify --d 4 [--coeffs FILE] [--law rademacher] [--h cos-sum] [--samples N] [--seed S]

Without --coeffs, standard normal coefficients are drawn from the seed.
Checks the conditional identity E(J′_n − J_n | X) = −(n/d)J_n, the
unequal diagonal of Λ, orthogonality of the J_n, the pair second moments,
and that the estimated discrepancy sits below the smooth bound.
"""
import logging

import click
import numpy as np

from stein_embed.chaos import (
    ChaosPair,
    chaos_sigma,
    cond_identity_residual,
    eval_j,
    lambda_chaos,
    law_names,
    get_law,
    random_coeffs,
    read_coeffs,
)
from stein_embed.cli.base import ReportCommand
from stein_embed.config import settings
from stein_embed.matlite import as_array, lambda_colsums, lower_inverse, supnorm, sym_sqrt
from stein_embed.mc import abc_from_pairs, discrepancy, estimate, get_test_function, test_function_names
from stein_embed.stein import pair_second_moment_check, second_moment_target, smooth_bound_interval
from stein_embed.stein.types import PROVENANCE_EXACT, PROVENANCE_MC

logger = logging.getLogger(__name__)


class Command(ReportCommand):
    name = 'chaos-verify'
    help = 'Check the chaos-decomposition coupling and its smooth bound'

    def add_arguments(self):
        return [
            click.Option(['--d'], type=click.IntRange(min=1), required=True, help='Number of coordinates'),
            click.Option(['--coeffs', 'coeffs_file'], type=click.Path(exists=True, dir_okay=False),
                         default=None, help='Coefficient file ("n i_1 ... i_n value", 1-based)'),
            click.Option(['--law'], type=click.Choice(law_names()), default='rademacher', show_default=True,
                         help='Base law of the coordinates'),
            click.Option(['--h', 'h_name'], type=click.Choice(test_function_names()), default='cos-sum',
                         show_default=True, help='Registered test function'),
            click.Option(['--trials'], type=click.IntRange(min=1), default=200, show_default=True,
                         help='Random points for the conditional identity'),
            click.Option(['--abc-samples'], type=click.IntRange(min=2), default=20000, show_default=True,
                         help='Samples for the A/B statistics'),
        ]

    def handle(self, report, d, coeffs_file=None, law='rademacher', h_name='cos-sum', trials=200,
               abc_samples=20000, samples=None, seed=None, workers=None, **options):
        rng = np.random.default_rng(seed)
        if coeffs_file:
            c = read_coeffs(coeffs_file, d)
        else:
            c = random_coeffs(d, rng)
            report.notes.append('coefficients drawn as independent standard normals from the seed')
        base = get_law(law)
        lam = lambda_chaos(d)
        pair = ChaosPair(c, base)
        sigma = chaos_sigma(c, base)
        report.value('sigma', as_array(sigma), PROVENANCE_EXACT)

        x = base.sample(rng, (trials, d))
        worst = float(np.max(np.abs(cond_identity_residual(x, c, base, relative=True))))
        report.at_most('conditional_identity_residual', 0.0, worst, settings.IDENTITY_TOLERANCE)

        diagonal = np.diag(as_array(lam))
        report.close('lambda_distinct_diagonal', d, len(np.unique(diagonal)), 0)
        weights = lambda_colsums(lower_inverse(lam))
        report.at_most('lambda_weights_closed_form', 0.0,
                       supnorm(weights - d / np.arange(1, d + 1)), settings.IDENTITY_TOLERANCE * d)

        self.check_orthogonality(report, c, base, as_array(sigma), samples, seed, workers)
        _, est = pair_second_moment_check(pair, lam, sigma, samples, seed, workers)
        self.mc_matrix_close(report, 'pair_second_moment', second_moment_target(lam, sigma), est)

        h = get_test_function(h_name)
        db = h.bounds(d)
        stats = abc_from_pairs(pair, lam, abc_samples, seed, workers=workers)
        low, high = smooth_bound_interval(stats, db, d, supnorm(sigma))
        report.bound('smooth', (low + high) / 2.0, PROVENANCE_MC, interval=[low, high], A=stats.A,
                     B=stats.B, C=stats.C, stderr=stats.stderr, lambdas=stats.lambdas, h=h_name)

        disc = discrepancy(h, pair.w_sampler, sym_sqrt(sigma), samples, seed, workers)
        report.value('discrepancy', disc.mean, PROVENANCE_MC, stderr=disc.stderr)
        report.at_most('discrepancy_within_smooth_bound', high, abs(disc.mean),
                       settings.SIGMA_TOLERANCE * disc.stderr, provenance=PROVENANCE_MC, stderr=disc.stderr)

    def check_orthogonality(self, report, c, base, sigma, samples, seed, workers):
        """E J = 0 and E JJᵗ = diag(...) by Monte Carlo."""
        d = c.d

        def functional(x):
            j = eval_j(x, c)
            return np.concatenate([j, np.einsum('si,sj->sij', j, j).reshape(x.shape[0], d * d)], axis=1)

        est = estimate(functional, lambda r, size: base.sample(r, (size, d)), samples, seed, workers)
        for n in range(d):
            self.mc_close(report, f'mean_J[{n + 1}]', 0.0, est.mean[n], est.stderr[n])
        mean = np.asarray(est.mean)[d:].reshape(d, d)
        se = np.asarray(est.stderr)[d:].reshape(d, d)
        for i in range(d):
            for j in range(i, d):
                self.mc_close(report, f'second_moment_J[{i + 1}][{j + 1}]', sigma[i, j], mean[i, j], se[i, j])
