"""
Embedding of a multilinear functional F = Σ_n J_n(f_n) into the vector
(J_1, …, J_d), with the replace-one-coordinate coupling.
"""
import logging
from typing import Tuple

import numpy as np

from stein_embed.chaos.coeffs import ChaosCoeffs
from stein_embed.chaos.laws import BaseLaw
from stein_embed.matlite import LowerMatrix, SymMatrix
from stein_embed.mc.pairs import ExchangeablePair

logger = logging.getLogger(__name__)


def _as_batch(x) -> Tuple[np.ndarray, bool]:
    x = np.asarray(x, dtype=np.float64)
    return (x[None, :], True) if x.ndim == 1 else (x, False)


def eval_j(x, c: ChaosCoeffs) -> np.ndarray:
    """(J_1, …, J_d) at x of shape (d,) or (size, d)."""
    xb, single = _as_batch(x)
    out = np.zeros((xb.shape[0], c.d))
    for n in range(1, c.d + 1):
        idx, coef = c.order(n)
        if coef.size:
            out[:, n - 1] = xb[:, idx].prod(axis=2) @ coef
    return out[0] if single else out


def gradients(x, c: ChaosCoeffs) -> np.ndarray:
    """G[s, n−1, i] = ∂J_n/∂x_i at each row of x, shape (size, d_orders, d)."""
    xb, _ = _as_batch(x)
    size = xb.shape[0]
    out = np.zeros((size, c.d, c.d))
    for n in range(1, c.d + 1):
        idx, coef = c.order(n)
        if not coef.size:
            continue
        for pos in range(n):
            rest = np.delete(idx, pos, axis=1)
            partial = xb[:, rest].prod(axis=2) * coef
            incidence = np.zeros((coef.size, c.d))
            incidence[np.arange(coef.size), idx[:, pos]] = 1.0
            out[:, n - 1, :] += partial @ incidence
    return out


def pair_step(x, base: BaseLaw, rng: np.random.Generator) -> Tuple[np.ndarray, int]:
    """Redraw one uniformly chosen coordinate; returns (x′, I)."""
    out = np.array(x, dtype=np.float64)
    i = int(rng.integers(out.size))
    out[i] = base.sample(rng, ())
    return out, i


def cond_mean(x, c: ChaosCoeffs, base: BaseLaw) -> np.ndarray:
    """E(J′ − J | x) = (1/d) Σ_i (μ − x_i) ∂J/∂x_i, using the law's exact mean μ."""
    xb, single = _as_batch(x)
    grads = gradients(xb, c)
    out = np.einsum('si,sni->sn', base.mean - xb, grads) / c.d
    return out[0] if single else out


def cond_identity_residual(x, c: ChaosCoeffs, base: BaseLaw, relative: bool = False) -> np.ndarray:
    """
    E(J′_n − J_n | x) + (n/d) J_n(x) for n = 1..d.

    Args:
        relative: divide by the magnitude of the summed terms
    """
    xb, single = _as_batch(x)
    left = cond_mean(xb, c, base)
    j = eval_j(xb, c)
    ns = np.arange(1, c.d + 1)
    residual = left + ns / c.d * j
    if relative:
        grads = gradients(xb, c)
        scale = 1.0 + np.einsum('si,sni->sn', np.abs(base.mean - xb), np.abs(grads)) / c.d
        scale += np.abs(ns / c.d * j)
        residual = residual / scale
    return residual[0] if single else residual


def lambda_chaos(d: int) -> LowerMatrix:
    """diag(1/d, 2/d, …, d/d)."""
    if d < 1:
        raise ValueError(f'd must be >= 1, got {d}')
    return LowerMatrix.diag(*(n / d for n in range(1, d + 1)))


def chaos_sigma(c: ChaosCoeffs, base: BaseLaw) -> SymMatrix:
    """E JJᵗ = diag((n!)² Σ f_n² σ^{2n}) for independent mean-zero coordinates."""
    if base.mean != 0.0:
        raise ValueError('closed-form covariance needs a mean-zero base law')
    diag = np.zeros(c.d)
    for n in range(1, c.d + 1):
        _, coef = c.order(n)
        diag[n - 1] = float(np.sum(coef ** 2)) * base.variance ** n
    return SymMatrix(np.diag(diag), psd=True)


class ChaosPair(ExchangeablePair):
    """
    Replace-one-coordinate coupling on (J_1, …, J_d).

    J is multilinear, so ΔJ_n = (x′_I − x_I) ∂J_n/∂x_I and
    E[ΔJ_n ΔJ_m | x] = (1/d) Σ_i G_n^{(i)} G_m^{(i)} (σ² + (x_i − μ)²).
    """

    def __init__(self, c: ChaosCoeffs, base: BaseLaw):
        self.c = c
        self.base = base

    @property
    def dim(self) -> int:
        return self.c.d

    @property
    def certifies_linear(self) -> bool:
        return self.base.mean == 0.0

    def draw_states(self, rng, size):
        return self.base.sample(rng, (size, self.c.d))

    def step(self, states, rng):
        size = states.shape[0]
        i = rng.integers(self.c.d, size=size)
        out = states.copy()
        out[np.arange(size), i] = self.base.sample(rng, (size,))
        return out

    def embed(self, states):
        return eval_j(states, self.c)

    def cond_products(self, states):
        grads = gradients(states, self.c)
        spread = self.base.variance + np.square(states - self.base.mean)
        return np.einsum('sni,smi,si->snm', grads, grads, spread) / self.c.d

    def cond_mean(self, states):
        return cond_mean(states, self.c, self.base)

    def w_sampler(self, rng, size):
        return self.embed(self.draw_states(rng, size))
