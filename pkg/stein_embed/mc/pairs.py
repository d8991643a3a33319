"""
Exchangeable-pair couplings and the Monte Carlo A/B/C statistics.

An application module describes its coupling by subclassing
ExchangeablePair. States are numpy arrays whose first axis indexes
independent draws, so the engine can replicate and batch them freely.
"""
import logging
from abc import ABC, abstractmethod
from typing import Optional

import numpy as np

from stein_embed.matlite import as_array, lambda_colsums, lower_inverse, sym_inv_sqrt, sym_sqrt
from stein_embed.mc.engine import estimate
from stein_embed.stein.types import PROVENANCE_MC, AbcStats

logger = logging.getLogger(__name__)

NESTED_NOTE = ('nested estimation: conditional variances debiased by subtracting '
               'the mean inner-sample variance divided by inner_nsamples')


class ExchangeablePair(ABC):
    """
    Base class for a coupling (W, W′).

    Subclasses supply a state sampler, the one-step move and the embedding of
    a state into ℝ^d. Exact per-state conditional moments are optional.
    """

    @property
    @abstractmethod
    def dim(self) -> int:
        """Dimension d of the embedded statistic W."""
        pass

    @property
    def certifies_linear(self) -> bool:
        """True when E[W′ − W | state] = −ΛW holds exactly (R = 0)."""
        return False

    @abstractmethod
    def draw_states(self, rng: np.random.Generator, size: int) -> np.ndarray:
        """
        Draw ``size`` independent states from the stationary law.

        Args:
            rng: Generator for this replica
            size: Number of states
        """
        pass

    @abstractmethod
    def step(self, states: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        """Apply one move to every state; returns new states."""
        pass

    @abstractmethod
    def embed(self, states: np.ndarray) -> np.ndarray:
        """W for every state, shape (size, d)."""
        pass

    def cond_products(self, states: np.ndarray) -> Optional[np.ndarray]:
        """E[(W′−W)(W′−W)ᵗ | state], shape (size, d, d); None if unavailable."""
        return None

    def cond_mean(self, states: np.ndarray) -> Optional[np.ndarray]:
        """E[W′ − W | state], shape (size, d); None if unavailable."""
        return None

    @property
    def has_exact_products(self) -> bool:
        return type(self).cond_products is not ExchangeablePair.cond_products

    def sampler(self, rng: np.random.Generator, size: int):
        """Batch of (W, W′) draws, usable directly with mc.estimate."""
        states = self.draw_states(rng, size)
        moved = self.step(states, rng)
        return self.embed(states), self.embed(moved)


def _triples(dw: np.ndarray) -> np.ndarray:
    """|ΔW_i ΔW_j ΔW_k| flattened over (i, j, k)."""
    d = dw.shape[-1]
    t = np.abs(np.einsum('...i,...j,...k->...ijk', dw, dw, dw))
    return t.reshape(t.shape[:-3] + (d ** 3,))


def abc_from_pairs(pair: ExchangeablePair, Lambda, nsamples: int, seed: int,
                   inner_nsamples: int = None, sigma=None, mode: str = 'auto',
                   workers: int = None, chunk_size: int = None) -> AbcStats:
    """
    Monte Carlo estimates of the A, B, C statistics of a coupling.

    Args:
        pair: the coupling
        Lambda: LowerMatrix Λ of the linearity condition
        nsamples: outer sample count
        seed: RNG seed
        inner_nsamples: inner moves per outer state in nested mode (>= 2)
        sigma: if given, statistics are computed for Σ^{-1/2}W with weights
            λ̂ (the A′, B′, C′ of the non-smooth bound)
        mode: 'exact' (per-state conditional products), 'nested' or 'auto'

    Returns:
        AbcStats tagged 'mc' with approximate standard errors
    """
    d = pair.dim
    linv = as_array(lower_inverse(Lambda))
    lam = as_array(Lambda)
    if sigma is None:
        transform = np.eye(d)
        lambdas = lambda_colsums(linv)
    else:
        transform = as_array(sym_inv_sqrt(sigma))
        lambdas = lambda_colsums(transform @ linv @ as_array(sym_sqrt(sigma)))

    if mode == 'auto':
        mode = 'exact' if pair.has_exact_products else 'nested'
    if mode == 'nested' and (inner_nsamples is None or inner_nsamples < 2):
        raise ValueError('nested estimation needs inner_nsamples >= 2')
    linear = pair.certifies_linear
    logger.debug(f'abc_from_pairs: mode={mode}, d={d}, nsamples={nsamples}, linear={linear}')

    if mode == 'exact':
        est, notes = _exact_mode(pair, lam, transform, linear, nsamples, seed, workers, chunk_size)
    else:
        est, notes = _nested_mode(pair, lam, transform, linear, nsamples, inner_nsamples,
                                  seed, workers, chunk_size)
    return _aggregate(est, d, lambdas, linear, mode, inner_nsamples, notes)


def _exact_mode(pair, lam, transform, linear, nsamples, seed, workers, chunk_size):
    d = pair.dim

    def sampler(rng, size):
        states = pair.draw_states(rng, size)
        moved = pair.step(states, rng)
        w = pair.embed(states)
        dw = (pair.embed(moved) - w) @ transform.T
        cp = np.einsum('ik,skl,jl->sij', transform, pair.cond_products(states), transform)
        parts = [cp.reshape(size, d * d), _triples(dw)]
        if not linear:
            cm = pair.cond_mean(states)
            if cm is None:
                raise ValueError('exact mode needs cond_mean for couplings without R = 0')
            r = (cm + w @ lam.T) @ transform.T
            parts.append(np.square(r))
        return np.concatenate(parts, axis=1)

    return estimate(lambda batch: batch, sampler, nsamples, seed, workers, chunk_size), ()


def _nested_mode(pair, lam, transform, linear, nsamples, inner, seed, workers, chunk_size):
    d = pair.dim

    def sampler(rng, size):
        states = pair.draw_states(rng, size)
        w = pair.embed(states)
        rep = np.repeat(states, inner, axis=0)
        moved = pair.step(rep, rng)
        dw = ((pair.embed(moved) - np.repeat(w, inner, axis=0)) @ transform.T).reshape(size, inner, d)
        prods = np.einsum('sti,stj->stij', dw, dw).reshape(size, inner, d * d)
        parts = [prods.mean(axis=1), prods.var(axis=1, ddof=1), _triples(dw).mean(axis=1)]
        if not linear:
            mean_dw = dw.mean(axis=1)
            r = mean_dw + (w @ lam.T) @ transform.T
            parts.append(np.square(r) - dw.var(axis=1, ddof=1) / inner)
        return np.concatenate(parts, axis=1)

    return estimate(lambda batch: batch, sampler, nsamples, seed, workers, chunk_size), (NESTED_NOTE,)


def _aggregate(est, d, lambdas, linear, mode, inner, notes) -> AbcStats:
    n = est.count
    mean = np.asarray(est.mean)
    se = np.asarray(est.stderr)
    var = np.asarray(est.variance)
    d2, d3 = d * d, d ** 3
    lam_i = np.asarray(lambdas)

    offset = 0
    cond_var = var[offset:offset + d2].reshape(d, d)
    offset += d2
    if mode == 'nested':
        inner_var = mean[offset:offset + d2].reshape(d, d)
        offset += d2
        cond_var = cond_var - inner_var / inner
    cond_var = np.maximum(cond_var, 0.0)
    sd = np.sqrt(cond_var)
    a_value = float(np.sum(lam_i[:, None] * sd))
    a_se = float(np.sum(lam_i[:, None] * sd)) / np.sqrt(2.0 * (n - 1))

    trip_mean = mean[offset:offset + d3].reshape(d, d, d)
    trip_se = se[offset:offset + d3].reshape(d, d, d)
    offset += d3
    b_value = float(np.sum(lam_i[:, None, None] * trip_mean))
    b_se = float(np.sum(lam_i[:, None, None] * trip_se))

    if linear:
        c_value, c_se = 0.0, 0.0
    else:
        r2 = np.maximum(mean[offset:offset + d], 0.0)
        r2_se = se[offset:offset + d]
        root = np.sqrt(r2)
        c_value = float(np.sum(lam_i * root))
        with np.errstate(divide='ignore', invalid='ignore'):
            c_se = float(np.sum(lam_i * np.where(root > 0, r2_se / (2.0 * np.where(root > 0, root, 1.0)),
                                                 np.sqrt(r2_se))))

    return AbcStats(
        A=a_value, B=b_value, C=c_value,
        provenance=PROVENANCE_MC,
        stderr=(a_se, b_se, c_se),
        lambdas=tuple(float(x) for x in lam_i),
        notes=tuple(notes),
        cond_sd=tuple(float(x) for x in sd.reshape(-1)),
    )
