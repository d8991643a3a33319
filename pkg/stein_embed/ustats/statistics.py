"""
Complete U-statistics U_k = Σ_{|α|=k} ψ_k(α), their scaled vector W and the
replace-one-coordinate coupling.
"""
import itertools
import logging
import math
from dataclasses import dataclass
from math import comb
from typing import Tuple

import numpy as np

from stein_embed.config import settings
from stein_embed.exceptions import BudgetExceeded, InvalidModel
from stein_embed.matlite import LowerMatrix
from stein_embed.stein.types import DerivBounds
from stein_embed.ustats.kernels import KernelModel

logger = logging.getLogger(__name__)

BLOCK_ELEMENTS = 1 << 21


@dataclass(frozen=True, eq=False)
class UVector:
    """U₁..U_d of one sample and W_k = √n · C(n,k)⁻¹ · U_k."""

    n: int
    U: np.ndarray

    @property
    def W(self) -> np.ndarray:
        return scale_w(self.U, self.n)


def scale_w(u: np.ndarray, n: int) -> np.ndarray:
    """W_k = √n U_k / C(n, k) along the last axis."""
    d = np.shape(u)[-1]
    factors = np.array([math.sqrt(n) / comb(n, k) for k in range(1, d + 1)])
    return np.asarray(u) * factors


def check_budget(n: int, d: int, budget: int = None):
    if budget is None:
        budget = settings.SUBSET_BUDGET
    if n < d:
        raise InvalidModel(f'sample size n={n} below kernel order d={d}')
    if comb(n, d) > budget:
        raise BudgetExceeded(f'C({n},{d}) = {comb(n, d)} subsets exceed the budget {budget}')


def _subset_blocks(indices, k: int, block: int):
    """Blocks of k-subsets of ``indices`` as (m, k) integer arrays, lexicographic order."""
    it = itertools.combinations(indices, k)
    while True:
        chunk = list(itertools.islice(it, block))
        if not chunk:
            return
        yield np.array(chunk, dtype=np.int64).reshape(len(chunk), k)


def subset_sum(x: np.ndarray, fn, k: int, indices=None) -> np.ndarray:
    """Σ over k-subsets α of ``indices`` of fn(x[..., α]); x has shape (size, n)."""
    size, n = x.shape
    if indices is None:
        indices = range(n)
    total = np.zeros(size)
    if k == 0:
        return total + fn(np.zeros((size, 0)))
    block = max(1, BLOCK_ELEMENTS // max(1, size * k))
    for combos in _subset_blocks(indices, k, block):
        total += fn(x[:, combos]).sum(axis=1)
    return total


def compute_u_batch(x: np.ndarray, km: KernelModel, method: str = 'direct', budget: int = None) -> np.ndarray:
    """
    U₁..U_d for every row of x (shape (size, n)), returned as (size, d).

    Args:
        method: 'direct' sums over all subsets, 'fast' uses the kernel's
            closed form, 'auto' prefers the closed form when available
    """
    x = np.asarray(x, dtype=np.float64)
    if method == 'auto':
        method = 'fast' if km.u_fast is not None else 'direct'
    if method == 'fast':
        if km.u_fast is None:
            raise ValueError(f'kernel {km.name} has no closed-form U')
        return km.u_fast(x)
    check_budget(x.shape[1], km.d, budget)
    return np.stack([subset_sum(x, km.psi_k(k), k) for k in range(1, km.d + 1)], axis=1)


def compute_u(sample, km: KernelModel, method: str = 'direct', budget: int = None) -> UVector:
    """
    Exact U-statistics of one sample.

    Raises:
        BudgetExceeded: C(n, d) above the subset budget
    """
    x = np.asarray(sample, dtype=np.float64)
    return UVector(n=x.size, U=compute_u_batch(x[None, :], km, method, budget)[0])


def lambda_ustat(n: int, d: int) -> LowerMatrix:
    """Λ = (1/n)·bidiag(diagonal k, subdiagonal −k), k = 1..d."""
    if not n >= d >= 1:
        raise InvalidModel(f'need n >= d >= 1, got n={n}, d={d}')
    lam = np.zeros((d, d))
    for k in range(1, d + 1):
        lam[k - 1, k - 1] = k / n
        if k > 1:
            lam[k - 1, k - 2] = -k / n
    return LowerMatrix(lam)


def pair_step(sample, km: KernelModel, rng: np.random.Generator) -> Tuple[np.ndarray, int]:
    """Redraw one uniformly chosen coordinate; returns (sample′, J)."""
    x = np.array(sample, dtype=np.float64)
    j = int(rng.integers(x.size))
    x[j] = km.sample(rng, ())
    return x, j


def u_increment(x: np.ndarray, j: int, new_values: np.ndarray, km: KernelModel) -> np.ndarray:
    """
    ΔU when coordinate j of every row of x takes ``new_values``, shape (size, d).

    Only subsets containing j change: Σ_{β ⊂ others, |β| = k−1}
    ψ_k(β ∪ {new}) − ψ_k(β ∪ {old}).
    """
    size, n = x.shape
    others = [i for i in range(n) if i != j]
    old = x[:, j]
    new = np.broadcast_to(np.asarray(new_values, dtype=np.float64), (size,))
    out = np.zeros((size, km.d))
    for k in range(1, km.d + 1):
        fn = km.psi_k(k)

        def diff(sub, fn=fn):
            shape = sub.shape[:-1] + (1,)
            with_new = np.concatenate([sub, np.broadcast_to(new[:, None, None], shape)], axis=-1)
            with_old = np.concatenate([sub, np.broadcast_to(old[:, None, None], shape)], axis=-1)
            return fn(with_new) - fn(with_old)

        if k == 1:
            out[:, 0] = km.psi_k(1)(new[:, None]) - km.psi_k(1)(old[:, None])
        else:
            out[:, k - 1] = subset_sum(x, diff, k - 1, others)
    return out


def incremental_u(u: UVector, sample, j: int, new_value: float, km: KernelModel) -> UVector:
    """U of the sample after X_j := new_value, updated over subsets containing j."""
    x = np.asarray(sample, dtype=np.float64)[None, :]
    return UVector(n=u.n, U=u.U + u_increment(x, j, np.array([new_value]), km)[0])


def cond_identity_terms(sample, km: KernelModel) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Both sides of E[U′_k − U_k | X] = −(k/n)U_k + ((n−k+1)/n)U_{k−1}.

    The left side is evaluated as (1/n)Σ_j Σ_{α∋j}(ψ_{k−1}(α∖{j}) − ψ_k(α)).

    Returns:
        (left, right, scale) with scale the magnitude of the summed terms

    Raises:
        MissingConditionalKernel: some ψ_{k−1} is unavailable
    """
    x = np.asarray(sample, dtype=np.float64)[None, :]
    n = x.shape[1]
    check_budget(n, km.d)
    u = np.zeros(km.d + 1)
    left = np.zeros(km.d)
    scale = np.ones(km.d)
    for k in range(1, km.d + 1):
        fk = km.psi_k(k)
        fprev = km.psi_k(k - 1)
        u[k] = subset_sum(x, fk, k)[0]

        def removed(alpha, fk=fk, fprev=fprev, k=k):
            drop = sum(fprev(np.delete(alpha, pos, axis=-1)) for pos in range(k))
            return drop - k * fk(alpha)

        def magnitude(alpha, fk=fk, fprev=fprev, k=k):
            drop = sum(np.abs(fprev(np.delete(alpha, pos, axis=-1))) for pos in range(k))
            return drop + k * np.abs(fk(alpha))

        left[k - 1] = subset_sum(x, removed, k)[0] / n
        scale[k - 1] += subset_sum(x, magnitude, k)[0] / n
    ks = np.arange(1, km.d + 1)
    right = -ks / n * u[1:] + (n - ks + 1) / n * u[:-1]
    scale += np.abs(ks / n * u[1:]) + np.abs((n - ks + 1) / n * u[:-1])
    return left, right, scale


def cond_identity_residual(sample, km: KernelModel, relative: bool = False) -> np.ndarray:
    """
    Residual of the conditional identity for every k = 1..d (U₀ := 0).

    Args:
        relative: divide each component by the magnitude of its summed terms
    """
    left, right, scale = cond_identity_terms(sample, km)
    residual = left - right
    return residual / scale if relative else residual


def cond_mean_by_support(sample, km: KernelModel) -> np.ndarray:
    """
    E[U′ − U | X] by enumerating the redraw over the finite support.

    Uses no conditional-expectation identity, only the definition of U.
    """
    if km.support is None:
        raise ValueError(f'kernel {km.name} has no finite support')
    x = np.asarray(sample, dtype=np.float64)[None, :]
    n = x.shape[1]
    total = np.zeros(km.d)
    for j in range(n):
        for value, prob in zip(km.support.values, km.support.probs):
            total += prob * u_increment(x, j, np.array([value]), km)[0]
    return total / n


def thm_bound(n: int, d: int, rho: float, db: DerivBounds) -> float:
    """n^{−1/2}(4ρ^{1/2}d⁶h2 + ρ^{3/4}d⁷h3)."""
    if rho < 0:
        raise ValueError(f'rho must be >= 0, got {rho}')
    return (4.0 * math.sqrt(rho) * d ** 6 * db.h2 + rho ** 0.75 * d ** 7 * db.h3) / math.sqrt(n)


def rank_one_limit(km: KernelModel) -> np.ndarray:
    """Limiting covariance (k·l·Var ψ₁)_{k,l} of W."""
    if km.var_psi1 is None:
        raise ValueError(f'kernel {km.name} has no exact Var psi_1')
    ks = np.arange(1, km.d + 1, dtype=np.float64)
    return np.outer(ks, ks) * km.var_psi1
