"""
Verify the replace-one-coordinate coupling of a U-statistic vector.

Usage:
    stein-embed ustat-verify --kernel pm1-mean --n 12 [--trials T] [--limit-n M] [--samples N] [--seed S]

--kernel takes a registered name or a kernel table file (path:FILE).
Checks the conditional identity on random samples, incremental updates,
the closed forms of Λ⁻¹ and its column sums, ΛΣ = ΣΛᵗ and, when Σ is
exact, E(W′−W)(W′−W)ᵗ = 2ΣΛᵗ. Kernels with a known Var ψ₁ also get Σ at
sample size --limit-n compared with the rank-one limit (k·l·Var ψ₁); 0 skips it.
"""
import logging

import click
import numpy as np

from stein_embed.cli.base import ReportCommand
from stein_embed.config import settings
from stein_embed.matlite import as_array, lambda_colsums, lower_inverse, supnorm
from stein_embed.mc import Estimate, estimate
from stein_embed.stein import consistency_check, pair_second_moment_check, second_moment_target
from stein_embed.stein.types import PROVENANCE_EXACT
from stein_embed.ustats import (
    UStatPair,
    compute_u,
    cond_identity_residual,
    cond_identity_terms,
    cond_mean_by_support,
    estimate_sigma,
    get_kernel,
    incremental_u,
    lambda_ustat,
    pair_step,
    rank_one_limit,
    w_batch,
)

logger = logging.getLogger(__name__)

SUPPORT_CHECKS = 20
INCREMENTAL_STEPS = 100
LIMIT_CHUNK_SIZE = 1000


class Command(ReportCommand):
    name = 'ustat-verify'
    help = 'Check the exact identities of the U-statistic coupling'

    def add_arguments(self):
        return [
            click.Option(['--kernel'], default='pm1-mean', show_default=True,
                         help='Registered kernel name or kernel table (path:FILE)'),
            click.Option(['--n'], type=int, default=12, show_default=True, help='Sample size'),
            click.Option(['--trials'], type=click.IntRange(min=1), default=200, show_default=True,
                         help='Random samples for the exact identity checks'),
            click.Option(['--limit-n'], type=click.IntRange(min=0), default=2000, show_default=True,
                         help='Sample size for the rank-one limit check (0 skips it)'),
        ]

    def handle(self, report, kernel, n=12, trials=200, limit_n=2000, samples=None, seed=None, workers=None, **options):
        km = get_kernel(kernel)
        d = km.d
        lam = lambda_ustat(n, d)
        rng = np.random.default_rng(seed)
        report.value('kernel', km.description or km.name, PROVENANCE_EXACT, d=d)

        x = km.sample(rng, (trials, n))
        worst = max(float(np.max(np.abs(cond_identity_residual(row, km, relative=True)))) for row in x)
        report.at_most('conditional_identity_residual', 0.0, worst, settings.IDENTITY_TOLERANCE)

        if km.support is not None:
            worst = 0.0
            for row in x[:SUPPORT_CHECKS]:
                _, right, scale = cond_identity_terms(row, km)
                worst = max(worst, float(np.max(np.abs(cond_mean_by_support(row, km) - right) / scale)))
            report.at_most('support_enumeration_vs_identity', 0.0, worst, settings.ORACLE_TOLERANCE)

        self.check_incremental(report, km, x[0], rng, min(trials, INCREMENTAL_STEPS))
        self.check_lambda(report, lam, n, d)

        sig = estimate_sigma(km, n, samples, seed, workers)
        sigma = as_array(sig.sigma)
        report.value('sigma', sigma, sig.provenance, stderr=sig.stderr)
        if sig.provenance == PROVENANCE_EXACT:
            report.at_most('lambda_sigma_symmetric', 0.0, consistency_check(lam, sig.sigma),
                           settings.IDENTITY_TOLERANCE * max(1.0, supnorm(sigma)) * supnorm(lam))
            _, est = pair_second_moment_check(UStatPair(km, n), lam, sig.sigma, samples, seed, workers)
            self.mc_matrix_close(report, 'pair_second_moment', second_moment_target(lam, sig.sigma), est)
        else:
            self.check_symmetry_mc(report, km, lam, n, samples, seed, workers)

        if km.var_psi1 is not None and limit_n:
            self.check_rank_one_limit(report, km, limit_n, samples, seed, workers)
            report.notes.append(f'limiting covariance is k*l*Var psi_1 = k*l*{km.var_psi1!r}, '
                                f'not Var psi_1 in every entry')

    def check_incremental(self, report, km, start, rng, steps):
        x = np.array(start)
        u = compute_u(x, km)
        worst = 0.0
        for _ in range(steps):
            x_next, j = pair_step(x, km, rng)
            u = incremental_u(u, x, j, x_next[j], km)
            recount = compute_u(x_next, km)
            worst = max(worst, float(np.max(np.abs(u.U - recount.U))) / max(1.0, float(np.max(np.abs(recount.U)))))
            u, x = recount, x_next
        report.at_most('incremental_update_error', 0.0, worst, settings.ORACLE_TOLERANCE)

    def check_lambda(self, report, lam, n, d):
        linv = as_array(lower_inverse(lam))
        expected = np.tril(np.tile(n / np.arange(1, d + 1), (d, 1)))
        report.value('lambda_inverse', linv, PROVENANCE_EXACT)
        report.at_most('lambda_inverse_closed_form', 0.0, supnorm(linv - expected),
                       settings.IDENTITY_TOLERANCE * n)

        weights = lambda_colsums(linv)
        for l in range(1, d + 1):
            target = (d - l + 1) * n / l
            report.close(f'lambda_weight[{l}]', target, weights[l - 1], settings.IDENTITY_TOLERANCE * n)
        report.at_most('lambda_weight_max', d * n, float(np.max(weights)), settings.IDENTITY_TOLERANCE * n)

    def check_rank_one_limit(self, report, km, limit_n, samples, seed, workers):
        """Σ at limit_n against (k·l·Var ψ₁)_{k,l}, one MC check per upper-triangle entry."""
        limit = rank_one_limit(km)
        report.value('rank_one_limit', limit, PROVENANCE_EXACT)
        sig = estimate_sigma(km, limit_n, samples, seed, workers, chunk_size=LIMIT_CHUNK_SIZE)
        report.value('sigma_at_limit_n', as_array(sig.sigma), sig.provenance, stderr=sig.stderr, n=limit_n)
        est = Estimate(as_array(sig.sigma), sig.stderr, sig.count, seed)
        self.mc_matrix_close(report, 'rank_one_limit', limit, est)

    def check_symmetry_mc(self, report, km, lam, n, samples, seed, workers):
        """E[(ΛW)_i W_j − W_i (ΛW)_j] = 0 for i < j, one functional per pair."""
        L = as_array(lam)
        d = km.d
        upper = [(i, j) for i in range(d) for j in range(i + 1, d)]
        if not upper:
            return

        def functional(x):
            w = w_batch(x, km)
            lw = w @ L.T
            return np.stack([lw[:, i] * w[:, j] - w[:, i] * lw[:, j] for i, j in upper], axis=1)

        est = estimate(functional, lambda r, size: km.sample(r, (size, n)), samples, seed, workers)
        for k, (i, j) in enumerate(upper):
            self.mc_close(report, f'lambda_sigma_symmetric[{i + 1}][{j + 1}]', 0.0, est.mean[k], est.stderr[k])
