"""
Closed-form approximation bounds for the rescaled graph counts.
"""
from stein_embed.stein.types import DerivBounds


def a_term_bound(n: int) -> float:
    """Dominating value of the A statistic: 35/n + 36/n²."""
    return 35.0 / n + 36.0 / n ** 2


def b_term_bound(n: int) -> float:
    """Dominating value of the B statistic: 32(1/n + 1/n² + 1/n³)."""
    return 32.0 * (1.0 / n + 1.0 / n ** 2 + 1.0 / n ** 3)


def prop_bound(n: int, db: DerivBounds) -> float:
    """
    Bound on |Eh(W₁) − Eh(Σ₁^{1/2}Z)|:
    (h2/n)(35/4 + 9/n) + (8 h3 / 3n)(1 + 1/n + 1/n²).
    """
    if n < 4:
        raise ValueError(f'n must be >= 4, got {n}')
    return db.h2 / n * (35.0 / 4.0 + 9.0 / n) + 8.0 * db.h3 / (3.0 * n) * (1.0 + 1.0 / n + 1.0 / n ** 2)


def corollary_bound(n: int, db: DerivBounds) -> float:
    """
    Bound on |Eh(W₁) − Eh(Σ₀^{1/2}Z)|:
    (h2/2n)(44 + 21/n + 32/n² + 4/n³) + (8 h3 / 3n)(1 + 1/n + 1/n²).
    """
    if n < 4:
        raise ValueError(f'n must be >= 4, got {n}')
    return (db.h2 / (2.0 * n) * (44.0 + 21.0 / n + 32.0 / n ** 2 + 4.0 / n ** 3)
            + 8.0 * db.h3 / (3.0 * n) * (1.0 + 1.0 / n + 1.0 / n ** 2))


def sigma_perturbation_term(n: int) -> float:
    """26/n + 3/n² + 32/n³ + 4/n⁴, the entrywise |Σ₁ − Σ₀| sum bound."""
    return 26.0 / n + 3.0 / n ** 2 + 32.0 / n ** 3 + 4.0 / n ** 4
