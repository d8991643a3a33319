"""
stein-embed: exchangeable pairs and the embedding method for multivariate
normal approximation.

Subpackages:
    matlite  - small dense symmetric / triangular matrices
    stein    - generic smooth and non-smooth bound evaluators
    graphs   - edge, 2-star and triangle counts in G(n, p)
    ustats   - complete U-statistics and their conditional kernels
    chaos    - multilinear (Rademacher-style) chaos sums
    mc       - seeded Monte Carlo engine and certified test functions
    cli      - command-line verification and bound reports
"""

__version__ = '1.0.0'
