"""
Edge-resampling coupling on single graphs.

Pick a potential edge {i, j} uniformly and replace its indicator by an
independent Bernoulli(p) copy. The embedded vector W₁ then satisfies
E[W₁′ − W₁ | g] = −ΛW₁ exactly.
"""
from typing import Tuple

import numpy as np

from stein_embed.graphs.models import CountVector, Graph, GraphModel, count, edge_toggle_delta
from stein_embed.matlite import LowerMatrix


def lambda_graph(model: GraphModel) -> LowerMatrix:
    """Λ = (1/C(n,2))·[[1, 0, 0], [−2p, 2, 0], [0, −p, 3]]."""
    p = model.p
    return LowerMatrix(np.array([
        [1.0, 0.0, 0.0],
        [-2.0 * p, 2.0, 0.0],
        [0.0, -p, 3.0],
    ]) / model.pairs)


def pair_step(g: Graph, model: GraphModel, rng: np.random.Generator) -> Tuple[Graph, Tuple[int, int]]:
    """
    One move of the coupling.

    Returns:
        (g′, (i, j)) with i < j the resampled pair; use edge_toggle_delta for
        the count change
    """
    k = int(rng.integers(model.pairs))
    # unrank k among pairs i < j in row-major order
    i = 0
    row = model.n - 1
    while k >= row:
        k -= row
        i += 1
        row -= 1
    j = i + 1 + k
    present = bool(rng.random() < model.p)
    return g.with_edge(i, j, present), (i, j)


def cond_mean(g: Graph, model: GraphModel) -> np.ndarray:
    """
    E[ΔC | g] in raw coordinates:
    (p − T/C, (2p(n−2)T − 2V)/C, (pV − 3U)/C) with C = C(n,2).
    """
    c = count(g)
    n, p, pairs = model.n, model.p, model.pairs
    return np.array([
        p - c.T / pairs,
        (2.0 * p * (n - 2) * c.T - 2.0 * c.V) / pairs,
        (p * c.V - 3.0 * c.U) / pairs,
    ])


def cond_products(g: Graph, model: GraphModel) -> np.ndarray:
    """
    E[ΔC ΔCᵗ | g] in raw coordinates.

    Sum over all potential edges of (p + (1−2p)I_ij)·c cᵗ with
    c = (1, N_i + N_j − 2I_ij, M_ij), divided by C(n,2).
    """
    p = model.p
    degrees = [row.bit_count() for row in g.adj]
    out = np.zeros((3, 3))
    for i in range(g.n):
        for j in range(i + 1, g.n):
            ind = g.has_edge(i, j)
            weight = p + (1.0 - 2.0 * p) * ind
            c = np.array([1.0, degrees[i] + degrees[j] - 2.0 * ind, float(g.common_neighbours(i, j))])
            out += weight * np.outer(c, c)
    return out / model.pairs


def resampling_moments(g: Graph, model: GraphModel) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Conditional moments of ΔC by direct averaging with full recounts.

    Visits every potential edge and both redraw values, recounting the
    resulting graph from scratch.

    Returns:
        (E[ΔC | g], E[ΔC ΔCᵗ | g], E[|ΔC|³ | g]) in raw coordinates
    """
    base = count(g).as_array()
    first = np.zeros(3)
    second = np.zeros((3, 3))
    third = np.zeros(3)
    for i in range(g.n):
        for j in range(i + 1, g.n):
            for present, prob in ((True, model.p), (False, 1.0 - model.p)):
                delta = count(g.with_edge(i, j, present)).as_array() - base
                first += prob * delta
                second += prob * np.outer(delta, delta)
                third += prob * np.abs(delta) ** 3
    return first / model.pairs, second / model.pairs, third / model.pairs


def apply_delta(counts: CountVector, g: Graph, edge: Tuple[int, int], g_next: Graph) -> CountVector:
    """Counts of g_next from the counts of g after one pair_step."""
    i, j = edge
    return counts + edge_toggle_delta(g, i, j, g_next.has_edge(i, j))
