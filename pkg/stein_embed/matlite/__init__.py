from stein_embed.matlite.linalg import (
    jacobi_eigen,
    lambda_colsums,
    lower_inverse,
    psd_eigencheck,
    supnorm,
    sym_inv_sqrt,
    sym_sqrt,
    tag_psd,
)
from stein_embed.matlite.matrices import LowerMatrix, SymMatrix, as_array, check_same_dimension

__all__ = [
    'LowerMatrix',
    'SymMatrix',
    'as_array',
    'check_same_dimension',
    'jacobi_eigen',
    'lambda_colsums',
    'lower_inverse',
    'psd_eigencheck',
    'supnorm',
    'sym_inv_sqrt',
    'sym_sqrt',
    'tag_psd',
]
