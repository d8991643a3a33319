"""
Exact moments of (T, V, U) in G(n, p).

Closed forms for means, variances and covariances, the limiting covariance
Σ₀, third absolute moments of the coupling increments, and an exhaustive
enumeration oracle for n ≤ 6.
"""
import logging
from dataclasses import dataclass
from math import comb
from typing import Optional, Tuple

import numpy as np

from stein_embed.config import settings
from stein_embed.exceptions import TooLarge
from stein_embed.graphs.batch import counts_batch
from stein_embed.graphs.models import GraphModel
from stein_embed.matlite import SymMatrix

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class GraphMoments:
    """Means and covariance of raw (T, V, U), and Σ of the rescaled W₁."""

    means: np.ndarray
    cov: np.ndarray
    sigma1: SymMatrix
    sigma0: Optional[SymMatrix] = None


def raw_covariance(model: GraphModel) -> np.ndarray:
    """Covariance matrix of (T, V, U)."""
    n, p = model.n, model.p
    q = 1.0 - p
    c2, c3 = comb(n, 2), comb(n, 3)
    var_t = c2 * p * q
    var_v = 3 * c3 * p ** 2 * q * (1.0 - p + 4 * (n - 2) * p)
    var_u = c3 * p ** 3 * (q ** 2 + 3 * p * q + 3 * (n - 2) * p ** 2)
    cov_tv = 6 * c3 * p ** 2 * q
    cov_tu = 3 * c3 * p ** 3 * q
    cov_vu = 3 * c3 * p ** 3 * q * (1.0 + p + 2 * (n - 3) * p)
    return np.array([
        [var_t, cov_tv, cov_tu],
        [cov_tv, var_v, cov_vu],
        [cov_tu, cov_vu, var_u],
    ])


def sigma1_formula(model: GraphModel) -> SymMatrix:
    """Covariance of W₁ in the factored form 3(n−2)C(n,3)/n⁴ · p(1−p) · M."""
    n, p = model.n, model.p
    q = 1.0 - p
    k = 3.0 * (n - 2) * comb(n, 3) / float(n) ** 4 * p * q
    m23 = 2 * p ** 3 + p ** 2 * q / (n - 2)
    mat = np.array([
        [1.0, 2 * p, p ** 2],
        [2 * p, 4 * p ** 2 + p * q / (n - 2), m23],
        [p ** 2, m23, p ** 4 + p ** 2 * (1 + p - 2 * p ** 2) / (3 * (n - 2))],
    ])
    return SymMatrix(k * mat)


def sigma0(p: float) -> SymMatrix:
    """Limiting covariance (p(1−p)/2)·vvᵗ with v = (1, 2p, p²); rank one."""
    v = np.array([1.0, 2 * p, p ** 2])
    return SymMatrix(0.5 * p * (1.0 - p) * np.outer(v, v), psd=True)


def exact_moments(model: GraphModel) -> GraphMoments:
    """Closed-form means, raw covariance, Σ₁ and Σ₀."""
    return GraphMoments(
        means=model.means,
        cov=raw_covariance(model),
        sigma1=sigma1_formula(model),
        sigma0=sigma0(model.p),
    )


def _all_graphs(n: int) -> np.ndarray:
    iu, ju = np.triu_indices(n, k=1)
    m = iu.size
    codes = np.arange(1 << m, dtype=np.int64)
    bits = ((codes[:, None] >> np.arange(m)) & 1).astype(np.int8)
    adj = np.zeros((codes.size, n, n), dtype=np.int8)
    adj[:, iu, ju] = bits
    adj[:, ju, iu] = bits
    return adj


def _weights(adj: np.ndarray, model: GraphModel) -> np.ndarray:
    edges = adj.sum(axis=(1, 2)) // 2
    return model.p ** edges * (1.0 - model.p) ** (model.pairs - edges)


def _check_enumerable(model: GraphModel):
    if model.n > settings.MAX_ENUMERATION_N:
        raise TooLarge(f'enumeration is capped at n={settings.MAX_ENUMERATION_N}, got n={model.n}')


def enumerate_exact(model: GraphModel) -> GraphMoments:
    """
    Moments of (T, V, U) by summing over all 2^C(n,2) graphs.

    Raises:
        TooLarge: n above settings.MAX_ENUMERATION_N
    """
    _check_enumerable(model)
    adj = _all_graphs(model.n)
    logger.debug(f'Enumerating {adj.shape[0]} graphs for n={model.n}, p={model.p}')
    w = _weights(adj, model)
    counts = counts_batch(adj)
    means = w @ counts
    centered = counts - means
    cov = np.einsum('s,si,sj->ij', w, centered, centered)
    s = model.scales
    return GraphMoments(means=means, cov=cov, sigma1=SymMatrix.symmetrized(cov * np.outer(s, s)))


def enumerate_pair_moments(model: GraphModel) -> Tuple[np.ndarray, np.ndarray]:
    """
    Exact E[ΔC ΔCᵗ] and E|ΔC|³ of the edge-resampling coupling, raw coordinates.

    Averages over every graph, every potential edge and both redraw values.

    Raises:
        TooLarge: n above settings.MAX_ENUMERATION_N
    """
    _check_enumerable(model)
    adj = _all_graphs(model.n)
    w = _weights(adj, model)
    a = adj.astype(np.float64)
    iu, ju = np.triu_indices(model.n, k=1)
    deg = a.sum(axis=2)
    ind = a[:, iu, ju]
    dv = deg[:, iu] + deg[:, ju] - 2.0 * ind
    mu = np.matmul(a, a)[:, iu, ju]
    toggle = model.p + (1.0 - 2.0 * model.p) * ind
    vec = np.stack([np.ones_like(dv), dv, mu], axis=2)
    second = np.einsum('s,sp,spk,spl->kl', w, toggle, vec, vec) / model.pairs
    third = np.einsum('s,sp,spk->k', w, toggle, np.abs(vec) ** 3) / model.pairs
    return second, third


def _binomial_third_moment(m: int, q: float) -> float:
    return m * q + 3 * m * (m - 1) * q ** 2 + m * (m - 1) * (m - 2) * q ** 3


def third_moments_exact(model: GraphModel) -> Tuple[float, float, float]:
    """
    (E|T′−T|³, E|V′−V|³, E|U′−U|³) for the edge-resampling coupling.

    The resampled indicator changes with probability 2p(1−p); given a change,
    |ΔV| ~ Bin(2(n−2), p) and |ΔU| ~ Bin(n−2, p²), independent of the indicator.
    """
    n, p = model.n, model.p
    change = 2.0 * p * (1.0 - p)
    return (
        change,
        change * _binomial_third_moment(2 * (n - 2), p),
        change * _binomial_third_moment(n - 2, p ** 2),
    )


def third_moments_printed(model: GraphModel) -> Tuple[float, float, float]:
    """
    Series expansions of the same three moments, kept for comparison.

    These omit cross terms of the binomial third moments and undercount
    the exact values (e.g. 4.0 vs 7.0 for V at n=4, p=0.5); kept for reports.
    """
    n, p = model.n, model.p
    base = 2.0 * p * (1.0 - p)
    v = base * (n - 2) * (8 * p ** 2 + 2 * p * (1 - p) + 2 * (n - 3) * (2 * p ** 2 + 2 * p ** 3)
                          + 8 * (n - 3) * (n - 4) * p ** 3)
    u = base * (n - 2) * (p ** 2 + (n - 3) * p ** 4 + (n - 3) * (n - 4) * p ** 6)
    return base, v, u


def third_moment_bounds_rescaled(n: int) -> Tuple[float, float, float]:
    """p-uniform bounds on the third absolute moments of ΔW₁."""
    tail = n ** -3 + n ** -4 + n ** -5
    return 0.5 * n ** -3, 64.0 / 27.0 * tail, 27.0 / 128.0 * tail


def t_row_conditional_variances(model: GraphModel) -> Tuple[float, float, float]:
    """
    Var of E[ΔT ΔX | g] for X = T, V, U (raw coordinates).

    These conditional products are affine in (T, V, U):
        E[(ΔT)² | g] = p + (1−2p)T/C,
        E[ΔT ΔV | g] = (2p(n−2)T + 2(1−2p)V)/C,
        E[ΔT ΔU | g] = (pV + 3(1−2p)U)/C,
    so their variances are quadratic forms in the count covariance.
    """
    n, p, pairs = model.n, model.p, model.pairs
    cov = raw_covariance(model)
    rows = np.array([
        [1.0 - 2.0 * p, 0.0, 0.0],
        [2.0 * p * (n - 2), 2.0 * (1.0 - 2.0 * p), 0.0],
        [0.0, p, 3.0 * (1.0 - 2.0 * p)],
    ]) / pairs
    return tuple(float(r @ cov @ r) for r in rows)
