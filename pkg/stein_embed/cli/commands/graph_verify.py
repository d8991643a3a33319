"""
Verify the edge-resampling coupling of G(n, p).

Usage:
    stein-embed graph-verify --n 10 --p 0.5 [--samples N] [--seed S] [--graphs G] [--graph FILE]

Checks, on random graphs (and on FILE if given):
  - E[W₁′ − W₁ | g] = −ΛW₁ exactly
  - 3U ≤ V ≤ (n−2)T
  - incremental count updates agree with full recounts
  - closed-form conditional moments agree with brute-force resampling
and by Monte Carlo:
  - E(W′−W)(W′−W)ᵗ = 2Σ₁Λᵗ entrywise
  - the third absolute moments of the count increments
  - the variances of the T row of the conditional second moments
"""
import logging

import click
import numpy as np

from stein_embed.cli.base import ReportCommand
from stein_embed.config import settings
from stein_embed.exceptions import InvalidModel
from stein_embed.graphs import (
    Graph,
    GraphModel,
    GraphPair,
    apply_delta,
    cond_mean,
    cond_products,
    cond_products_batch,
    count,
    counts_batch,
    exact_moments,
    lambda_graph,
    pair_step,
    read_edge_list,
    resampling_moments,
    sample,
    sample_batch,
    t_row_conditional_variances,
    third_moments_exact,
    third_moments_printed,
)
from stein_embed.matlite import as_array, supnorm
from stein_embed.mc import estimate
from stein_embed.stein import consistency_check, pair_second_moment_check, second_moment_target
from stein_embed.stein.types import PROVENANCE_CLOSED_FORM

logger = logging.getLogger(__name__)

COUNT_NAMES = ('T', 'V', 'U')
ORACLE_GRAPHS = 5
INCREMENTAL_STEPS = 200


class Command(ReportCommand):
    name = 'graph-verify'
    help = 'Check the exact identities and Monte Carlo moments of the graph coupling'

    def add_arguments(self):
        return [
            click.Option(['--n'], type=int, required=True, help='Number of vertices (>= 4)'),
            click.Option(['--p'], type=float, required=True, help='Edge probability in (0, 1)'),
            click.Option(['--graphs'], type=click.IntRange(min=1), default=1000, show_default=True,
                         help='Random graphs used for the exact identity checks'),
            click.Option(['--graph', 'graph_file'], type=click.Path(exists=True, dir_okay=False),
                         default=None, help='Edge-list file checked in addition'),
        ]

    def handle(self, report, n, p, graphs=1000, graph_file=None, samples=None, seed=None,
               workers=None, **options):
        model = GraphModel(n, p)
        lam = lambda_graph(model)
        sigma1 = exact_moments(model).sigma1
        pair = GraphPair(model)
        rng = np.random.default_rng(seed)

        extra = None
        if graph_file:
            extra = read_edge_list(graph_file)
            if extra.n != n:
                raise InvalidModel(f'{graph_file} has {extra.n} vertices, expected n={n}')

        adj = sample_batch(model, rng, graphs)
        self.check_linearity(report, pair, lam, adj)
        self.check_count_invariants(report, model, adj)
        self.check_incremental(report, model, rng, min(graphs, INCREMENTAL_STEPS))

        oracle = [Graph.from_adjacency(a) for a in adj[:ORACLE_GRAPHS]]
        if extra is not None:
            oracle.append(extra)
            report.notes.append(f'edge list {graph_file} included in the resampling oracle check')
        self.check_oracle(report, model, oracle)

        report.at_most('lambda_sigma1_symmetric', 0.0, consistency_check(lam, sigma1),
                       settings.IDENTITY_TOLERANCE * max(1.0, supnorm(sigma1)) * supnorm(lam))

        _, est = pair_second_moment_check(pair, lam, sigma1, samples, seed, workers)
        self.mc_matrix_close(report, 'pair_second_moment', second_moment_target(lam, sigma1), est)
        self.check_third_moments(report, model, pair, samples, seed, workers)
        self.check_t_row_variances(report, model, samples, seed, workers)

    def check_linearity(self, report, pair, lam, adj):
        w = pair.embed(adj)
        drift = w @ as_array(lam).T
        residual = pair.cond_mean(adj) + drift
        scale = max(1.0, float(np.max(np.abs(drift))))
        report.at_most('linearity_residual', 0.0, float(np.max(np.abs(residual))) / scale,
                       settings.IDENTITY_TOLERANCE)

    def check_count_invariants(self, report, model, adj):
        c = counts_batch(adj)
        t, v, u = c[:, 0], c[:, 1], c[:, 2]
        violations = int(np.sum((3 * u > v) | (v > (model.n - 2) * t)))
        report.at_most('count_ordering_violations', 0, violations)

    def check_incremental(self, report, model, rng, steps):
        g = sample(model, rng)
        counts = count(g)
        mismatches = 0
        for _ in range(steps):
            g_next, edge = pair_step(g, model, rng)
            counts = apply_delta(counts, g, edge, g_next)
            if counts != count(g_next):
                mismatches += 1
                counts = count(g_next)
            g = g_next
        report.at_most('incremental_update_mismatches', 0, mismatches)

    def check_oracle(self, report, model, oracle):
        worst = 0.0
        for g in oracle:
            first, second, _ = resampling_moments(g, model)
            scale = max(1.0, float(np.max(np.abs(second))))
            worst = max(worst,
                        float(np.max(np.abs(cond_mean(g, model) - first))) / scale,
                        float(np.max(np.abs(cond_products(g, model) - second))) / scale)
        report.at_most('conditional_moments_vs_recount', 0.0, worst, settings.ORACLE_TOLERANCE)

    def check_third_moments(self, report, model, pair, samples, seed, workers):
        scales = model.scales

        def functional(batch):
            w, w_next = batch
            return np.abs((w_next - w) / scales) ** 3

        est = estimate(functional, pair.sampler, samples, seed, workers)
        exact = third_moments_exact(model)
        printed = third_moments_printed(model)
        for k, name in enumerate(COUNT_NAMES):
            self.mc_close(report, f'third_moment_{name}', exact[k], est.mean[k], est.stderr[k])
            report.info(f'third_moment_{name}_series_expansion', printed[k], est.mean[k],
                        provenance=PROVENANCE_CLOSED_FORM, stderr=float(est.stderr[k]))

    def check_t_row_variances(self, report, model, samples, seed, workers):
        """Var E[ΔT ΔX | g] by MC of the squared deviation from its exact mean."""
        n, p, pairs = model.n, model.p, model.pairs
        rows = np.array([
            [1.0 - 2.0 * p, 0.0, 0.0],
            [2.0 * p * (n - 2), 2.0 * (1.0 - 2.0 * p), 0.0],
            [0.0, p, 3.0 * (1.0 - 2.0 * p)],
        ]) / pairs
        means = rows @ model.means + np.array([p, 0.0, 0.0])

        def functional(adj):
            return np.square(cond_products_batch(adj, model)[:, 0, :] - means)

        est = estimate(functional, lambda rng, size: sample_batch(model, rng, size), samples, seed, workers)
        exact = t_row_conditional_variances(model)
        for k, name in enumerate(COUNT_NAMES):
            self.mc_close(report, f't_row_conditional_variance_T{name}', exact[k], est.mean[k], est.stderr[k])
