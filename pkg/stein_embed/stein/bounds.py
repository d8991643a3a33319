"""
Bound evaluators for the exchangeable-pair approximation theorems.

All functions are plain double-precision arithmetic on their inputs.
"""
import logging
import math
from typing import Sequence, Tuple

import numpy as np

from stein_embed.config import settings
from stein_embed.exceptions import DegenerateInputs
from stein_embed.matlite import as_array, check_same_dimension
from stein_embed.stein.types import AbcStats, DerivBounds, NonSmoothInputs

logger = logging.getLogger(__name__)

GAMMA_LABEL = "up to the unspecified constant gamma(d)^2"


def smooth_bound(stats: AbcStats, db: DerivBounds, d: int, signorm: float) -> float:
    """
    |Eh(W) − Eh(Σ^{1/2}Z)| ≤ (h2/4)A + (h3/12)B + (h1 + ½ d ‖Σ‖^{1/2} h2) C.

    Args:
        stats: A, B, C statistics of the coupling
        db: derivative bounds of the test function
        d: dimension
        signorm: supremum norm of Σ

    Returns:
        The bound value (MC stats are used at their point values)
    """
    if signorm < 0:
        raise ValueError(f'signorm must be >= 0, got {signorm}')
    value = db.h2 / 4.0 * stats.A + db.h3 / 12.0 * stats.B
    # h1 may be infinite; a vanishing C term must stay 0
    if stats.C > 0:
        value += (db.h1 + 0.5 * d * math.sqrt(signorm) * db.h2) * stats.C
    return value


def smooth_bound_interval(stats: AbcStats, db: DerivBounds, d: int, signorm: float,
                          k: float = None) -> Tuple[float, float]:
    """[bound(point − kσ), bound(point + kσ)]; a single point for exact stats."""
    if k is None:
        k = settings.SIGMA_TOLERANCE
    if stats.is_exact:
        value = smooth_bound(stats, db, d, signorm)
        return value, value
    low = smooth_bound(stats.shifted(-k), db, d, signorm)
    high = smooth_bound(stats.shifted(k), db, d, signorm)
    return low, high


def nonsmooth_terms(inp: NonSmoothInputs) -> Tuple[float, float]:
    """(D′, T′) of the non-smooth corollary."""
    dp = inp.Ap / 2.0 + inp.Cp * inp.d
    tp = (dp + math.sqrt(inp.a * inp.Bp / 2.0 + dp * dp)) ** 2 / inp.a ** 2
    return dp, tp


def nonsmooth_bound(inp: NonSmoothInputs) -> float:
    """
    γ²(−D′ log T′ + B′/(2√T′) + C′ + a√T′).

    Raises:
        DegenerateInputs: A′ = B′ = C′ = 0, where T′ = 0
    """
    if inp.Ap == 0 and inp.Bp == 0 and inp.Cp == 0:
        raise DegenerateInputs("A', B' and C' are all zero; T' = 0")
    dp, tp = nonsmooth_terms(inp)
    if tp <= 0:
        raise DegenerateInputs(f"T' = {tp} is not positive")
    root = math.sqrt(tp)
    value = -dp * math.log(tp) + inp.Bp / (2.0 * root) + inp.Cp + inp.a * root
    return inp.gamma ** 2 * value


def cov_perturbation_bound(Sigma, Sigma0, h2: float) -> float:
    """½ h2 Σ_{i,j} |σ_ij − σ⁰_ij|."""
    check_same_dimension(Sigma, Sigma0)
    return 0.5 * h2 * float(np.sum(np.abs(as_array(Sigma) - as_array(Sigma0))))


def aprime_simplified(d: int, signorm_invhalf: float, lambdahat: Sequence[float],
                      sup_condvar_sqrt: float) -> float:
    """d³ ‖Σ^{-1/2}‖² Σ_i λ̂⁽ⁱ⁾ · sup_{k,l} √Var E^W(ΔW_k ΔW_l)."""
    return d ** 3 * signorm_invhalf ** 2 * float(np.sum(lambdahat)) * sup_condvar_sqrt
