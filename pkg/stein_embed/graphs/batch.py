"""
Vectorised graph batches for Monte Carlo and enumeration.

A batch is an int8 array of shape (size, n, n) holding symmetric
zero-diagonal adjacency matrices.
"""
import numpy as np

from stein_embed.graphs.models import GraphModel
from stein_embed.mc.pairs import ExchangeablePair


def sample_batch(model: GraphModel, rng: np.random.Generator, size: int) -> np.ndarray:
    """``size`` independent G(n, p) adjacency matrices."""
    n = model.n
    iu, ju = np.triu_indices(n, k=1)
    bits = (rng.random((size, iu.size)) < model.p).astype(np.int8)
    adj = np.zeros((size, n, n), dtype=np.int8)
    adj[:, iu, ju] = bits
    adj[:, ju, iu] = bits
    return adj


def counts_batch(adj: np.ndarray) -> np.ndarray:
    """Raw (T, V, U) per graph, shape (size, 3)."""
    a = adj.astype(np.float64)
    deg = a.sum(axis=2)
    t = deg.sum(axis=1) / 2.0
    v = (deg * (deg - 1.0) / 2.0).sum(axis=1)
    u = (np.matmul(a, a) * a).sum(axis=(1, 2)) / 6.0
    return np.stack([t, v, u], axis=1)


def _pair_terms(adj: np.ndarray):
    """Per potential edge {i<j}: indicator I, D = N_i + N_j − 2I and M = |N(i) ∩ N(j)|."""
    a = adj.astype(np.float64)
    n = a.shape[1]
    iu, ju = np.triu_indices(n, k=1)
    deg = a.sum(axis=2)
    ind = a[:, iu, ju]
    dv = deg[:, iu] + deg[:, ju] - 2.0 * ind
    mu = np.matmul(a, a)[:, iu, ju]
    return ind, dv, mu


def cond_mean_batch(adj: np.ndarray, model: GraphModel) -> np.ndarray:
    """E[ΔC | g] in raw count coordinates, shape (size, 3)."""
    c = counts_batch(adj)
    n, p, pairs = model.n, model.p, model.pairs
    t, v, u = c[:, 0], c[:, 1], c[:, 2]
    return np.stack([
        p - t / pairs,
        (2.0 * p * (n - 2) * t - 2.0 * v) / pairs,
        (p * v - 3.0 * u) / pairs,
    ], axis=1)


def cond_products_batch(adj: np.ndarray, model: GraphModel) -> np.ndarray:
    """
    E[ΔC ΔCᵗ | g] in raw count coordinates, shape (size, 3, 3).

    Resampling {i, j} changes the counts by ±(1, D_ij, M_ij) with
    probability p(1 − I_ij) + (1 − p)I_ij = p + (1 − 2p)I_ij.
    """
    ind, dv, mu = _pair_terms(adj)
    p = model.p
    weight = p + (1.0 - 2.0 * p) * ind
    vec = np.stack([np.ones_like(dv), dv, mu], axis=2)
    return np.einsum('sp,spk,spl->skl', weight, vec, vec) / model.pairs


def step_batch(adj: np.ndarray, model: GraphModel, rng: np.random.Generator) -> np.ndarray:
    """Resample one uniformly chosen potential edge in every graph of the batch."""
    size, n = adj.shape[0], adj.shape[1]
    iu, ju = np.triu_indices(n, k=1)
    pick = rng.integers(iu.size, size=size)
    values = (rng.random(size) < model.p).astype(np.int8)
    out = adj.copy()
    rows = np.arange(size)
    out[rows, iu[pick], ju[pick]] = values
    out[rows, ju[pick], iu[pick]] = values
    return out


class GraphPair(ExchangeablePair):
    """
    Edge-resampling coupling embedded as W₁ = rescaled centered (T, V, U).

    Conditional means and products are exact closed forms; R = 0.
    """

    def __init__(self, model: GraphModel):
        self.model = model

    @property
    def dim(self) -> int:
        return 3

    @property
    def certifies_linear(self) -> bool:
        return True

    def draw_states(self, rng, size):
        return sample_batch(self.model, rng, size)

    def step(self, states, rng):
        return step_batch(states, self.model, rng)

    def embed(self, states):
        return self.model.scales * (counts_batch(states) - self.model.means)

    def cond_mean(self, states):
        return self.model.scales * cond_mean_batch(states, self.model)

    def cond_products(self, states):
        s = self.model.scales
        return cond_products_batch(states, self.model) * np.outer(s, s)

    def w_sampler(self, rng, size):
        return self.embed(self.draw_states(rng, size))
