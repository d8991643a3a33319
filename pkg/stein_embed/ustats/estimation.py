"""
Covariance and fourth-moment estimation for U-statistic embeddings, and the
coupling object consumed by mc.abc_from_pairs.
"""
import itertools
import logging
from dataclasses import dataclass

import numpy as np

from stein_embed.config import settings
from stein_embed.matlite import SymMatrix
from stein_embed.mc.engine import Estimate, estimate
from stein_embed.mc.pairs import ExchangeablePair
from stein_embed.stein.types import PROVENANCE_EXACT, PROVENANCE_MC
from stein_embed.ustats.kernels import KernelModel
from stein_embed.ustats.statistics import check_budget, compute_u_batch, scale_w, u_increment

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class SigmaEstimate:
    """Σ = E WWᵗ with entrywise standard errors (zeros when exact)."""

    sigma: SymMatrix
    stderr: np.ndarray
    provenance: str
    count: int


def _enumerable(km: KernelModel, n: int) -> bool:
    return km.support is not None and km.support.size ** n <= settings.ENUMERATION_BUDGET


def w_batch(x: np.ndarray, km: KernelModel) -> np.ndarray:
    return scale_w(compute_u_batch(x, km, method='auto'), x.shape[1])


def estimate_sigma(km: KernelModel, n: int, nsamples: int, seed: int,
                   workers: int = None, chunk_size: int = None) -> SigmaEstimate:
    """
    Covariance of W = (W_1..W_d) for samples of size n.

    Finite-support kernels with at most settings.ENUMERATION_BUDGET sample
    configurations are summed exactly; everything else is estimated by MC.

    Raises:
        BudgetExceeded: C(n, d) above the subset budget (direct path only)
    """
    d = km.d
    if km.u_fast is None:
        check_budget(n, d)
    if _enumerable(km, n):
        support = km.support
        idx = np.array(list(itertools.product(range(support.size), repeat=n)), dtype=np.int64)
        x = support.values[idx]
        weights = np.prod(support.probs[idx], axis=1)
        w = w_batch(x, km)
        sigma = np.einsum('s,si,sj->ij', weights, w, w)
        logger.debug(f'Sigma for {km.name}, n={n}: exact over {idx.shape[0]} configurations')
        return SigmaEstimate(SymMatrix.symmetrized(sigma), np.zeros((d, d)), PROVENANCE_EXACT, idx.shape[0])

    def sampler(rng, size):
        return km.sample(rng, (size, n))

    def functional(x):
        w = w_batch(x, km)
        return np.einsum('si,sj->sij', w, w).reshape(x.shape[0], d * d)

    est = estimate(functional, sampler, nsamples, seed, workers, chunk_size)
    mean = np.asarray(est.mean).reshape(d, d)
    se = np.asarray(est.stderr).reshape(d, d)
    return SigmaEstimate(SymMatrix.symmetrized(mean), se, PROVENANCE_MC, est.count)


def estimate_rho(km: KernelModel, nsamples: int, seed: int, workers: int = None) -> Estimate:
    """
    ρ = E ψ⁴: exact by support enumeration when possible, MC otherwise.

    Exact results carry stderr 0 and the grid size as count.
    """
    fn = km.psi_k(km.d)
    if km.support is not None:
        grid, weights = km.support.grid(km.d)
        return Estimate(float(weights @ fn(grid) ** 4), 0.0, int(weights.size), int(seed))
    return estimate(lambda x: fn(x) ** 4, lambda rng, size: km.sample(rng, (size, km.d)),
                    nsamples, seed, workers)


class UStatPair(ExchangeablePair):
    """
    Replace-one-coordinate coupling embedded as W = (W_1..W_d).

    R = 0 for every kernel. Conditional products are exact when the base law
    has finite support; otherwise abc_from_pairs falls back to nested mode.
    """

    def __init__(self, km: KernelModel, n: int):
        if km.u_fast is None:
            check_budget(n, km.d)
        self.km = km
        self.n = n

    @property
    def dim(self) -> int:
        return self.km.d

    @property
    def certifies_linear(self) -> bool:
        return True

    @property
    def has_exact_products(self) -> bool:
        return self.km.support is not None

    def draw_states(self, rng, size):
        return self.km.sample(rng, (size, self.n))

    def step(self, states, rng):
        size = states.shape[0]
        j = rng.integers(self.n, size=size)
        out = states.copy()
        out[np.arange(size), j] = self.km.sample(rng, (size,))
        return out

    def embed(self, states):
        return w_batch(states, self.km)

    def _increments(self, states):
        """ΔW for every (coordinate, support value), shape (size, n, m, d)."""
        support = self.km.support
        size = states.shape[0]
        out = np.zeros((size, self.n, support.size, self.km.d))
        for j in range(self.n):
            for v, value in enumerate(support.values):
                out[:, j, v, :] = u_increment(states, j, np.full(size, value), self.km)
        return scale_w(out, self.n)

    def cond_products(self, states):
        if self.km.support is None:
            return None
        inc = self._increments(states)
        return np.einsum('v,sjvk,sjvl->skl', self.km.support.probs, inc, inc) / self.n

    def cond_mean(self, states):
        if self.km.support is None:
            return None
        inc = self._increments(states)
        return np.einsum('v,sjvk->sk', self.km.support.probs, inc) / self.n

    def w_sampler(self, rng, size):
        return self.embed(self.draw_states(rng, size))
