"""
Normal approximation bound for a U-statistic vector.

Usage:
    stein-embed ustat-bound --kernel sample-variance --n 50 --h cos11 [--samples N] [--seed S]

Evaluates n^{-1/2}(4ρ^{1/2}d⁶h2 + ρ^{3/4}d⁷h3) with ρ = Eψ⁴ (exact or MC),
estimates the discrepancy against N(0, Σ) and the smooth bound from the
coupling statistics. For a non-singular Σ the standardized statistics feed
the non-smooth bound and are checked against the simplified A′ bound.
"""
import logging

import click

from stein_embed.cli.base import ReportCommand
from stein_embed.config import settings
from stein_embed.exceptions import DegenerateInputs, Singular
from stein_embed.matlite import as_array, supnorm, sym_inv_sqrt, sym_sqrt
from stein_embed.mc import abc_from_pairs, discrepancy, get_test_function, test_function_names
from stein_embed.stein import (
    GAMMA_LABEL,
    NonSmoothInputs,
    aprime_simplified,
    nonsmooth_bound,
    smooth_bound,
    smooth_bound_interval,
    standardized_lambda,
)
from stein_embed.stein.types import PROVENANCE_EXACT, PROVENANCE_MC, PROVENANCE_CLOSED_FORM
from stein_embed.ustats import UStatPair, estimate_rho, estimate_sigma, get_kernel, lambda_ustat, thm_bound

logger = logging.getLogger(__name__)


class Command(ReportCommand):
    name = 'ustat-bound'
    help = 'Bound on Eh(W) - Eh(Sigma^{1/2} Z) for a vector of U-statistics'

    def add_arguments(self):
        return [
            click.Option(['--kernel'], default='pm1-mean', show_default=True,
                         help='Registered kernel name or kernel table (path:FILE)'),
            click.Option(['--n'], type=int, required=True, help='Sample size'),
            click.Option(['--h', 'h_name'], type=click.Choice(test_function_names()), default='cos11',
                         show_default=True, help='Registered test function'),
            click.Option(['--abc-samples'], type=click.IntRange(min=2), default=20000, show_default=True,
                         help='Outer samples for the A/B statistics'),
            click.Option(['--inner'], type=click.IntRange(min=2), default=16, show_default=True,
                         help='Inner moves per state when products are estimated'),
        ]

    def handle(self, report, kernel, n, h_name='cos11', abc_samples=20000, inner=16, samples=None,
               seed=None, workers=None, **options):
        km = get_kernel(kernel)
        d = km.d
        h = get_test_function(h_name)
        db = h.bounds(d)
        k = settings.SIGMA_TOLERANCE
        pair = UStatPair(km, n)
        lam = lambda_ustat(n, d)

        if km.rho is not None:
            rho, rho_se, rho_provenance = km.rho, 0.0, PROVENANCE_EXACT
        else:
            est = estimate_rho(km, samples, seed, workers)
            rho, rho_se = est.mean, est.stderr
            rho_provenance = PROVENANCE_EXACT if est.stderr == 0 else PROVENANCE_MC
        report.value('rho', rho, rho_provenance, stderr=rho_se)

        bound = thm_bound(n, d, rho, db)
        bound_high = thm_bound(n, d, rho + k * rho_se, db)
        bound_low = thm_bound(n, d, max(0.0, rho - k * rho_se), db)
        report.bound('theorem', bound, PROVENANCE_CLOSED_FORM, interval=[bound_low, bound_high],
                     rho_provenance=rho_provenance, h=h_name)

        sig = estimate_sigma(km, n, samples, seed, workers)
        report.value('sigma', as_array(sig.sigma), sig.provenance, stderr=sig.stderr)
        disc = discrepancy(h, pair.w_sampler, sym_sqrt(sig.sigma), samples, seed, workers)
        report.value('discrepancy', disc.mean, PROVENANCE_MC, stderr=disc.stderr)
        report.at_most('discrepancy_within_bound', bound_high, abs(disc.mean), k * disc.stderr,
                       provenance=PROVENANCE_MC, stderr=disc.stderr)

        stats = abc_from_pairs(pair, lam, abc_samples, seed, inner_nsamples=inner, workers=workers)
        signorm = supnorm(sig.sigma)
        point = smooth_bound(stats, db, d, signorm)
        low, high = smooth_bound_interval(stats, db, d, signorm)
        report.bound('smooth', point, PROVENANCE_MC, interval=[low, high], A=stats.A, B=stats.B,
                     C=stats.C, stderr=stats.stderr, lambdas=stats.lambdas)
        report.notes.extend(stats.notes)
        report.at_most('smooth_bound_within_theorem', bound_high, point, point - low, provenance=PROVENANCE_MC)

        self.standardized(report, pair, lam, sig.sigma, stats, abc_samples, seed, inner, workers)

    def standardized(self, report, pair, lam, sigma, stats, abc_samples, seed, inner, workers):
        d = pair.dim
        try:
            inv_half = sym_inv_sqrt(sigma)
        except Singular:
            report.notes.append('Sigma is singular; standardized statistics and the non-smooth bound are skipped')
            return
        mode = 'exact' if pair.has_exact_products else 'nested'
        std = abc_from_pairs(pair, lam, abc_samples, seed, inner_nsamples=inner, sigma=sigma,
                             mode=mode, workers=workers)
        report.bound('standardized_abc', std.A, PROVENANCE_MC, A=std.A, B=std.B, C=std.C,
                     stderr=std.stderr, lambdas=std.lambdas)

        if mode == 'exact':
            _, lamhat = standardized_lambda(lam, sigma)
            simplified = aprime_simplified(d, supnorm(inv_half), lamhat, max(stats.cond_sd))
            report.bound('aprime_simplified', simplified, PROVENANCE_MC)
            report.at_most('aprime_within_simplified', simplified, std.A,
                           settings.ORACLE_TOLERANCE * max(1.0, simplified), provenance=PROVENANCE_MC)

        try:
            value = nonsmooth_bound(NonSmoothInputs(std.A, std.B, std.C, d))
        except DegenerateInputs as e:
            report.notes.append(f'non-smooth bound skipped: {e}')
            return
        report.bound('nonsmooth', value, PROVENANCE_MC, label=GAMMA_LABEL)
