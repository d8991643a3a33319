from stein_embed.stein.bounds import (
    GAMMA_LABEL,
    aprime_simplified,
    cov_perturbation_bound,
    nonsmooth_bound,
    nonsmooth_terms,
    smooth_bound,
    smooth_bound_interval,
)
from stein_embed.stein.identities import (
    consistency_check,
    pair_second_moment_check,
    second_moment_target,
    standardized_lambda,
)
from stein_embed.stein.types import (
    PROVENANCE_EXACT,
    PROVENANCE_MC,
    PROVENANCE_CLOSED_FORM,
    AbcStats,
    DerivBounds,
    NonSmoothInputs,
)

__all__ = [
    'AbcStats',
    'DerivBounds',
    'GAMMA_LABEL',
    'NonSmoothInputs',
    'PROVENANCE_EXACT',
    'PROVENANCE_MC',
    'PROVENANCE_CLOSED_FORM',
    'aprime_simplified',
    'consistency_check',
    'cov_perturbation_bound',
    'nonsmooth_bound',
    'nonsmooth_terms',
    'pair_second_moment_check',
    'second_moment_target',
    'smooth_bound',
    'smooth_bound_interval',
    'standardized_lambda',
]
