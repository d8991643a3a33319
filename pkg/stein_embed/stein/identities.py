"""
Structural identities every exact linear coupling must satisfy.

For an exchangeable pair with E[W′ − W | W] = −ΛW and E WWᵗ = Σ:
    ΛΣ = ΣΛᵗ   and   E(W′−W)(W′−W)ᵗ = 2ΣΛᵗ.
"""
import logging
from typing import Tuple

import numpy as np

from stein_embed.matlite import (
    as_array,
    check_same_dimension,
    lambda_colsums,
    lower_inverse,
    supnorm,
    sym_inv_sqrt,
    sym_sqrt,
)
from stein_embed.mc.engine import estimate

logger = logging.getLogger(__name__)


def consistency_check(Lambda, Sigma) -> float:
    """supnorm(ΛΣ − ΣΛᵗ)."""
    check_same_dimension(Lambda, Sigma)
    lam = as_array(Lambda)
    sig = as_array(Sigma)
    return supnorm(lam @ sig - sig @ lam.T)


def second_moment_target(Lambda, Sigma, exchangeable: bool = True) -> np.ndarray:
    """
    E(W′−W)(W′−W)ᵗ implied by the linearity condition.

    2ΣΛᵗ for exchangeable pairs; ΛΣ + ΣΛᵗ when only the marginals of W and
    W′ agree. Both coincide whenever ΛΣ = ΣΛᵗ.
    """
    check_same_dimension(Lambda, Sigma)
    lam = as_array(Lambda)
    sig = as_array(Sigma)
    if exchangeable:
        return 2.0 * sig @ lam.T
    return lam @ sig + sig @ lam.T


def standardized_lambda(Lambda, Sigma) -> Tuple[np.ndarray, np.ndarray]:
    """
    (Σ^{-1/2} Λ⁻¹ Σ^{1/2}, λ̂) with λ̂⁽ⁱ⁾ its absolute column sums.

    Raises:
        Singular: Σ is not positive definite
    """
    check_same_dimension(Lambda, Sigma)
    mat = as_array(sym_inv_sqrt(Sigma)) @ as_array(lower_inverse(Lambda)) @ as_array(sym_sqrt(Sigma))
    return mat, lambda_colsums(mat)


def pair_second_moment_check(pair, Lambda, Sigma, nsamples: int, seed: int,
                             workers: int = None, chunk_size: int = None):
    """
    z-scores of the MC estimate of E(W′−W)(W′−W)ᵗ against 2ΣΛᵗ.

    Args:
        pair: ExchangeablePair providing the coupling
        Lambda: Λ of the coupling
        Sigma: covariance of W (exact or estimated)
        nsamples: number of pairs
        seed: RNG seed

    Returns:
        (z-score matrix, Estimate of the flattened second moments)
    """
    d = pair.dim
    target = second_moment_target(Lambda, Sigma)

    def functional(batch):
        w, w_next = batch
        dw = w_next - w
        return np.einsum('si,sj->sij', dw, dw).reshape(dw.shape[0], d * d)

    est = estimate(functional, pair.sampler, nsamples, seed, workers, chunk_size)
    z = np.asarray(est.zscore(target.reshape(-1))).reshape(d, d)
    logger.debug(f'pair second moments: max |z| = {np.max(np.abs(z)):.2f}')
    return z, est
