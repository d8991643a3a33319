"""
Seeded, reproducible Monte Carlo engine.

Work is split into replicas of at most ``chunk_size`` draws. Replica r draws
from a Philox stream keyed by (seed, r), so the set of draws does not depend
on how replicas are scheduled. Per-replica (count, mean, M2) summaries are
merged in replica order, which makes every Estimate bit-identical for a
given seed whatever the worker count.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, List, Tuple, Union

import numpy as np

from stein_embed.config import settings
from stein_embed.exceptions import DimensionMismatch
from stein_embed.matlite import as_array

logger = logging.getLogger(__name__)

Sampler = Callable[[np.random.Generator, int], object]
Functional = Callable[[object], np.ndarray]


@dataclass(frozen=True, eq=False)
class Estimate:
    """
    Monte Carlo mean with its standard error.

    ``mean`` and ``stderr`` are floats for scalar functionals and arrays for
    vector-valued ones. stderr = sample std / √count.
    """

    mean: Union[float, np.ndarray]
    stderr: Union[float, np.ndarray]
    count: int
    seed: int

    @property
    def variance(self):
        """Sample variance of the functional (ddof=1)."""
        return np.square(self.stderr) * self.count

    def zscore(self, target):
        """(mean − target)/stderr; 0 where both vanish, ±inf where only stderr does."""
        diff = np.asarray(self.mean, dtype=np.float64) - np.asarray(target, dtype=np.float64)
        se = np.asarray(self.stderr, dtype=np.float64)
        with np.errstate(divide='ignore', invalid='ignore'):
            z = np.where(se > 0, diff / np.where(se > 0, se, 1.0),
                         np.where(diff == 0, 0.0, np.copysign(np.inf, diff)))
        return float(z) if z.ndim == 0 else z

    def __getitem__(self, index) -> 'Estimate':
        return Estimate(float(np.asarray(self.mean)[index]), float(np.asarray(self.stderr)[index]),
                        self.count, self.seed)


def replica_generator(seed: int, replica: int) -> np.random.Generator:
    """Counter-based stream for one replica."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(replica,))))


def chunk_sizes(nsamples: int, chunk_size: int = None) -> List[int]:
    if chunk_size is None:
        chunk_size = settings.MC_CHUNK_SIZE
    chunk_size = max(1, int(chunk_size))
    full, rest = divmod(int(nsamples), chunk_size)
    return [chunk_size] * full + ([rest] if rest else [])


def _summarize(values: np.ndarray) -> Tuple[int, np.ndarray, np.ndarray]:
    count = values.shape[0]
    mean = values.mean(axis=0)
    m2 = np.square(values - mean).sum(axis=0)
    return count, mean, m2


def _merge(a, b):
    """Chan et al. pairwise merge of (count, mean, M2) summaries."""
    na, ma, m2a = a
    nb, mb, m2b = b
    n = na + nb
    delta = mb - ma
    mean = ma + delta * (nb / n)
    m2 = m2a + m2b + np.square(delta) * (na * nb / n)
    return n, mean, m2


def estimate(functional: Functional, sampler: Sampler, nsamples: int, seed: int,
             workers: int = None, chunk_size: int = None) -> Estimate:
    """
    Estimate E functional(sample) from ``nsamples`` independent draws.

    Args:
        functional: maps a batch from ``sampler`` to values of shape (size,)
            or (size, k); must be pure
        sampler: ``sampler(rng, size)`` returns a batch of ``size`` draws
        nsamples: total number of draws (>= 2)
        seed: RNG seed
        workers: thread count (None = settings.MC_WORKERS)
        chunk_size: draws per replica (None = settings.MC_CHUNK_SIZE)

    Returns:
        Estimate with scalar fields for scalar functionals, arrays otherwise
    """
    if nsamples < 2:
        raise ValueError(f'nsamples must be >= 2, got {nsamples}')
    sizes = chunk_sizes(nsamples, chunk_size)
    workers = settings.resolve_workers(workers)

    def run(replica: int):
        rng = replica_generator(seed, replica)
        values = np.asarray(functional(sampler(rng, sizes[replica])), dtype=np.float64)
        if values.shape[0] != sizes[replica]:
            raise DimensionMismatch(
                f'functional returned {values.shape[0]} values for a batch of {sizes[replica]}')
        return _summarize(values)

    logger.debug(f'MC estimate: {nsamples} draws in {len(sizes)} replicas, {workers} workers, seed={seed}')
    if workers == 1 or len(sizes) == 1:
        summaries = [run(r) for r in range(len(sizes))]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            summaries = list(pool.map(run, range(len(sizes))))

    total = summaries[0]
    for summary in summaries[1:]:
        total = _merge(total, summary)
    count, mean, m2 = total
    stderr = np.sqrt(m2 / (count - 1)) / np.sqrt(count)
    if np.ndim(mean) == 0:
        return Estimate(float(mean), float(stderr), int(count), int(seed))
    return Estimate(mean, stderr, int(count), int(seed))


def discrepancy(h, w_sampler: Sampler, Sigma_half, nsamples: int, seed: int,
                workers: int = None, chunk_size: int = None) -> Estimate:
    """
    Estimate Eh(W) − Eh(Σ^{1/2}Z).

    Each draw pairs one W from ``w_sampler`` with a fresh standard normal Z,
    so the standard error covers both arms.

    Args:
        h: TestFunction
        w_sampler: ``w_sampler(rng, size)`` returning W of shape (size, d)
        Sigma_half: symmetric square root of Σ
        nsamples: number of draws
        seed: RNG seed

    Raises:
        DimensionMismatch: W and Σ^{1/2} disagree in dimension
    """
    root = as_array(Sigma_half)
    d = root.shape[0]
    h.check_dimension(d)

    def sampler(rng, size):
        w = np.asarray(w_sampler(rng, size), dtype=np.float64)
        z = rng.standard_normal((size, d))
        return w, z

    def functional(batch):
        w, z = batch
        if w.ndim != 2 or w.shape[1] != d:
            raise DimensionMismatch(f'W has shape {w.shape}, Sigma_half is {d}x{d}')
        return h(w) - h(z @ root)

    return estimate(functional, sampler, nsamples, seed, workers, chunk_size)
