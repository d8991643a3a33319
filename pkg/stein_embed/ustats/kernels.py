"""
U-statistic kernel models.

A KernelModel bundles a symmetric, centered kernel ψ of order d with its
conditional kernels ψ_k(x_1..x_k) = E[ψ | X_1..X_k], a sampler for the base
law and, when the base law is finite, the support table that allows every
expectation to be computed by enumeration.

Kernels act on arrays whose last axis holds the k arguments.
"""
import itertools
import logging
from dataclasses import dataclass, field
from math import comb
from typing import Callable, Dict, Optional

import numpy as np

from stein_embed.exceptions import InvalidModel, MissingConditionalKernel
from stein_embed.registry import KERNEL_MODEL, register

logger = logging.getLogger(__name__)

KernelFn = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True, eq=False)
class FiniteSupport:
    """Support values (strictly increasing) and their probabilities."""

    values: np.ndarray
    probs: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        probs = np.asarray(self.probs, dtype=np.float64)
        if values.ndim != 1 or values.shape != probs.shape or values.size == 0:
            raise InvalidModel('support values and probabilities must be equal-length vectors')
        if np.any(np.diff(values) <= 0):
            raise InvalidModel('support values must be strictly increasing')
        if np.any(probs < 0) or abs(probs.sum() - 1.0) > 1e-12:
            raise InvalidModel(f'probabilities must be >= 0 and sum to 1, got sum {probs.sum()!r}')
        object.__setattr__(self, 'values', values)
        object.__setattr__(self, 'probs', probs)

    @property
    def size(self) -> int:
        return self.values.size

    def indices(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        idx = np.clip(np.searchsorted(self.values, x), 0, self.size - 1)
        if not np.array_equal(self.values[idx], x):
            raise ValueError('sample value outside the kernel support')
        return idx

    def sample(self, rng: np.random.Generator, shape) -> np.ndarray:
        return self.values[rng.choice(self.size, size=shape, p=self.probs)]

    def grid(self, k: int):
        """All support k-tuples (as value arrays) with their probabilities."""
        idx = np.array(list(itertools.product(range(self.size), repeat=k)), dtype=np.int64)
        if k == 0:
            return np.zeros((1, 0)), np.ones(1)
        return self.values[idx], np.prod(self.probs[idx], axis=1)


@dataclass(frozen=True, eq=False)
class KernelModel:
    """
    Kernel of order d with its conditional kernels.

    Attributes:
        name: registry name
        d: kernel order
        psi: map k -> ψ_k for the available k (ψ_d = ψ must be present)
        sampler: ``sampler(rng, shape)`` draws i.i.d. base-law values
        rho: exact E ψ⁴ if known
        support: finite support table, if the base law is discrete
        u_fast: optional closed form mapping samples (..., n) to (U_1..U_d)
        var_psi1: exact Var ψ₁(X) if known
    """

    name: str
    d: int
    psi: Dict[int, KernelFn]
    sampler: Callable[[np.random.Generator, tuple], np.ndarray]
    rho: Optional[float] = None
    support: Optional[FiniteSupport] = None
    u_fast: Optional[Callable[[np.ndarray], np.ndarray]] = None
    var_psi1: Optional[float] = None
    description: str = field(default='')

    def __post_init__(self):
        if self.d < 1:
            raise InvalidModel(f'kernel order must be >= 1, got {self.d}')
        if self.d not in self.psi:
            raise InvalidModel(f'kernel {self.name} lacks psi_{self.d}')

    def psi_k(self, k: int) -> KernelFn:
        """ψ_k; ψ_0 is the constant Eψ = 0."""
        if k == 0:
            return lambda x: np.zeros(np.shape(x)[:-1])
        if k not in self.psi:
            raise MissingConditionalKernel(f'kernel {self.name} has no conditional kernel psi_{k}')
        return self.psi[k]

    def has_all_conditionals(self) -> bool:
        return all(k in self.psi for k in range(1, self.d + 1))

    def sample(self, rng: np.random.Generator, shape) -> np.ndarray:
        return np.asarray(self.sampler(rng, shape), dtype=np.float64)

    def check_symmetry(self, rng: np.random.Generator, trials: int = 100) -> float:
        """Largest change of any available ψ_k under random argument permutations."""
        worst = 0.0
        for k, fn in self.psi.items():
            x = self.sample(rng, (trials, k))
            base = fn(x)
            for _ in range(3):
                perm = rng.permutation(k)
                worst = max(worst, float(np.max(np.abs(fn(x[:, perm]) - base))))
        return worst


def _table_kernels(support: FiniteSupport, table: np.ndarray) -> Dict[int, KernelFn]:
    """ψ_k for k = 1..d from a full ψ table by successive expectation over trailing arguments."""
    d = table.ndim
    tables = {d: table}
    for k in range(d - 1, 0, -1):
        tables[k] = np.tensordot(tables[k + 1], support.probs, axes=([-1], [0]))

    def make(tab):
        def fn(x):
            idx = support.indices(x)
            return tab[tuple(idx[..., i] for i in range(idx.shape[-1]))]
        return fn

    return {k: make(tab) for k, tab in tables.items()}


def finite_kernel(name: str, support: FiniteSupport, table, description: str = '') -> KernelModel:
    """
    Kernel model from a full table of ψ on the support grid.

    Raises:
        InvalidModel: table not symmetric, not centered or degenerate
    """
    table = np.asarray(table, dtype=np.float64)
    d = table.ndim
    m = support.size
    if table.shape != (m,) * d:
        raise InvalidModel(f'table shape {table.shape} does not match support size {m} and order {d}')
    for perm in itertools.permutations(range(d)):
        if not np.array_equal(np.transpose(table, perm), table):
            raise InvalidModel('kernel table is not symmetric in its arguments')
    psi = _table_kernels(support, table)
    grid, weights = support.grid(d)
    values = psi[d](grid)
    scale = max(1.0, float(np.max(np.abs(values))))
    mean = float(weights @ values)
    if abs(mean) > 1e-12 * scale:
        raise InvalidModel(f'kernel {name} is not centered: E psi = {mean!r}')
    psi1 = psi[1](support.values[:, None])
    if np.all(psi1[support.probs > 0] == 0.0):
        raise InvalidModel(f'kernel {name} is degenerate: psi_1 vanishes on the support')
    var1 = float(support.probs @ psi1 ** 2)
    return KernelModel(
        name=name, d=d, psi=psi, sampler=support.sample,
        rho=float(weights @ values ** 4), support=support,
        var_psi1=var1, description=description,
    )


def kernel_from_function(name: str, support: FiniteSupport, d: int, fn: KernelFn,
                         description: str = '') -> KernelModel:
    """Tabulate a vectorised ψ on the support grid, then build a finite kernel."""
    grid, _ = support.grid(d)
    table = np.asarray(fn(grid), dtype=np.float64).reshape((support.size,) * d)
    return finite_kernel(name, support, table, description)


# ============================================================================
# Built-in kernels
# ============================================================================

RADEMACHER = FiniteSupport(np.array([-1.0, 1.0]), np.array([0.5, 0.5]))
TERNARY = FiniteSupport(np.array([-1.0, 0.0, 1.0]), np.full(3, 1.0 / 3.0))


@register(KERNEL_MODEL, 'pm1-mean', d=2, finite_support=True)
def pm1_mean() -> KernelModel:
    """ψ(x, y) = (x + y)/2 on symmetric ±1; U₁ = S/2 and U₂ = (n−1)S/2."""

    def u_fast(x):
        n = x.shape[-1]
        s = x.sum(axis=-1)
        return np.stack([s / 2.0, (n - 1) * s / 2.0], axis=-1)

    return KernelModel(
        name='pm1-mean', d=2,
        psi={1: lambda x: x[..., 0] / 2.0, 2: lambda x: (x[..., 0] + x[..., 1]) / 2.0},
        sampler=RADEMACHER.sample, rho=0.5, support=RADEMACHER,
        u_fast=u_fast, var_psi1=0.25,
        description='(x+y)/2 on symmetric +-1',
    )


@register(KERNEL_MODEL, 'sample-variance', d=2, finite_support=False)
def sample_variance() -> KernelModel:
    """ψ(x, y) = (x − y)²/2 − 1 on N(0, 1); ψ₁(x) = (x² − 1)/2."""

    def u_fast(x):
        n = x.shape[-1]
        s = x.sum(axis=-1)
        q = np.square(x).sum(axis=-1)
        return np.stack([(q - n) / 2.0, (n * q - s * s) / 2.0 - comb(n, 2)], axis=-1)

    return KernelModel(
        name='sample-variance', d=2,
        psi={
            1: lambda x: (np.square(x[..., 0]) - 1.0) / 2.0,
            2: lambda x: np.square(x[..., 0] - x[..., 1]) / 2.0 - 1.0,
        },
        sampler=lambda rng, shape: rng.standard_normal(shape),
        # (X−Y)/√2 ~ N(0,1) so ψ = Y² − 1 and E ψ⁴ = 105 − 60 + 18 − 4 + 1
        rho=60.0, u_fast=u_fast, var_psi1=0.5,
        description='(x-y)^2/2 - 1 on standard normal',
    )


@register(KERNEL_MODEL, 'ternary-variance', d=2, finite_support=True)
def ternary_variance() -> KernelModel:
    """ψ(x, y) = (x − y)²/2 − 2/3 on uniform {−1, 0, 1}, conditional kernels by enumeration."""
    return kernel_from_function(
        'ternary-variance', TERNARY, 2,
        lambda g: np.square(g[..., 0] - g[..., 1]) / 2.0 - 2.0 / 3.0,
        description='(x-y)^2/2 - 2/3 on uniform {-1,0,1}',
    )


@register(KERNEL_MODEL, 'pm1-cubic', d=3, finite_support=True)
def pm1_cubic() -> KernelModel:
    """ψ(x, y, z) = (x + y + z)/3 + xyz on symmetric ±1."""

    def u_fast(x):
        n = x.shape[-1]
        s = x.sum(axis=-1)
        p2 = np.square(x).sum(axis=-1)
        p3 = (x ** 3).sum(axis=-1)
        e3 = (s ** 3 - 3.0 * s * p2 + 2.0 * p3) / 6.0
        return np.stack([s / 3.0, (n - 1) * s / 3.0, comb(n - 1, 2) * s / 3.0 + e3], axis=-1)

    psi = {
        1: lambda x: x[..., 0] / 3.0,
        2: lambda x: (x[..., 0] + x[..., 1]) / 3.0,
        3: lambda x: (x[..., 0] + x[..., 1] + x[..., 2]) / 3.0 + x[..., 0] * x[..., 1] * x[..., 2],
    }
    grid, weights = RADEMACHER.grid(3)
    return KernelModel(
        name='pm1-cubic', d=3, psi=psi, sampler=RADEMACHER.sample,
        rho=float(weights @ psi[3](grid) ** 4), support=RADEMACHER,
        u_fast=u_fast, var_psi1=1.0 / 9.0,
        description='(x+y+z)/3 + xyz on symmetric +-1',
    )

