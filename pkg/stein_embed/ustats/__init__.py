from stein_embed.ustats.estimation import SigmaEstimate, UStatPair, estimate_rho, estimate_sigma, w_batch
from stein_embed.ustats.io import format_kernel_table, get_kernel, kernel_names, parse_kernel_table, read_kernel_table
from stein_embed.ustats.kernels import (
    RADEMACHER,
    TERNARY,
    FiniteSupport,
    KernelModel,
    finite_kernel,
    kernel_from_function,
)
from stein_embed.ustats.statistics import (
    UVector,
    check_budget,
    compute_u,
    compute_u_batch,
    cond_identity_residual,
    cond_identity_terms,
    cond_mean_by_support,
    incremental_u,
    lambda_ustat,
    pair_step,
    rank_one_limit,
    scale_w,
    thm_bound,
    u_increment,
)
