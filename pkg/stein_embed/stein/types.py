"""
Value types shared by the bound evaluators and the application modules.
"""
import math
from dataclasses import dataclass, field
from typing import Optional, Tuple

PROVENANCE_EXACT = 'exact'
PROVENANCE_MC = 'mc'
PROVENANCE_CLOSED_FORM = 'closed-form'


def _nonnegative(name: str, value: float):
    if not value >= 0:  # also rejects NaN
        raise ValueError(f'{name} must be >= 0, got {value}')


@dataclass(frozen=True)
class DerivBounds:
    """
    Suprema of the first three partial derivatives of a test function.

    h1 = sup_i |∂h/∂x_i|, h2 = sup_{i,j} |∂²h/∂x_i∂x_j|,
    h3 = sup_{i,j,k} |∂³h/∂x_i∂x_j∂x_k|.
    h1 may be math.inf when unknown; it only enters through the C term.
    """

    h1: float = math.inf
    h2: float = 0.0
    h3: float = 0.0

    def __post_init__(self):
        for name in ('h1', 'h2', 'h3'):
            _nonnegative(name, getattr(self, name))


@dataclass(frozen=True)
class AbcStats:
    """
    The aggregate statistics A, B, C of the smooth bound.

    ``stderr`` is None for exact statistics and a (sA, sB, sC) triple for
    Monte Carlo ones. ``lambdas`` records the λ⁽ⁱ⁾ weights used.
    ``cond_sd`` holds √Var E(ΔW_k ΔW_l | W) flattened row-major, when known.
    """

    A: float
    B: float
    C: float
    provenance: str = PROVENANCE_EXACT
    stderr: Optional[Tuple[float, float, float]] = None
    lambdas: Tuple[float, ...] = ()
    notes: Tuple[str, ...] = field(default=())
    cond_sd: Tuple[float, ...] = ()

    def __post_init__(self):
        for name in ('A', 'B', 'C'):
            _nonnegative(name, getattr(self, name))
        if self.provenance == PROVENANCE_MC and self.stderr is None:
            raise ValueError('Monte Carlo AbcStats need a stderr triple')

    @property
    def is_exact(self) -> bool:
        return self.stderr is None

    def shifted(self, k: float) -> 'AbcStats':
        """Statistics moved by k standard errors (floored at 0)."""
        if self.stderr is None:
            return self
        a, b, c = (max(0.0, v + k * s) for v, s in zip((self.A, self.B, self.C), self.stderr))
        return AbcStats(a, b, c, PROVENANCE_EXACT, None, self.lambdas, self.notes, self.cond_sd)


@dataclass(frozen=True)
class NonSmoothInputs:
    """Inputs of the non-smooth corollary; gamma is the unspecified γ(d)."""

    Ap: float
    Bp: float
    Cp: float
    d: int
    a: float = 1.0
    gamma: float = 1.0

    def __post_init__(self):
        for name in ('Ap', 'Bp', 'Cp'):
            _nonnegative(name, getattr(self, name))
        if self.d < 1:
            raise ValueError(f'd must be >= 1, got {self.d}')
        if not self.a >= 1.0:
            raise ValueError(f'class constant a must be >= 1, got {self.a}')
        if not self.gamma > 0.0:
            raise ValueError(f'gamma must be > 0, got {self.gamma}')
