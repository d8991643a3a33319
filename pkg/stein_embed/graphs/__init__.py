from stein_embed.graphs.batch import (
    GraphPair,
    cond_mean_batch,
    cond_products_batch,
    counts_batch,
    sample_batch,
    step_batch,
)
from stein_embed.graphs.bounds import (
    a_term_bound,
    b_term_bound,
    corollary_bound,
    prop_bound,
    sigma_perturbation_term,
)
from stein_embed.graphs.coupling import (
    apply_delta,
    cond_mean,
    cond_products,
    lambda_graph,
    pair_step,
    resampling_moments,
)
from stein_embed.graphs.io import format_edge_list, parse_edge_list, read_edge_list, write_edge_list
from stein_embed.graphs.models import (
    CountVector,
    Graph,
    GraphModel,
    ScaledCounts,
    count,
    edge_toggle_delta,
    sample,
    scaled_counts,
)
from stein_embed.graphs.moments import (
    GraphMoments,
    enumerate_exact,
    enumerate_pair_moments,
    exact_moments,
    raw_covariance,
    sigma0,
    sigma1_formula,
    t_row_conditional_variances,
    third_moment_bounds_rescaled,
    third_moments_exact,
    third_moments_printed,
)
