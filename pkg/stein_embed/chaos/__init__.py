from stein_embed.chaos.coeffs import ChaosCoeffs, format_coeffs, parse_coeffs, random_coeffs, read_coeffs
from stein_embed.chaos.embedding import (
    ChaosPair,
    chaos_sigma,
    cond_identity_residual,
    cond_mean,
    eval_j,
    gradients,
    lambda_chaos,
    pair_step,
)
from stein_embed.chaos.laws import BaseLaw, get_law, law_names
