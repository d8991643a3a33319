"""
Small dense matrices with invariant-checked constructors.

SymMatrix holds Σ, Σ^{1/2} and friends, LowerMatrix holds Λ and Λ⁻¹.
Both wrap a read-only float64 numpy array; values are immutable after
construction and can be shared freely between threads.
"""
from dataclasses import dataclass, field

import numpy as np

from stein_embed.exceptions import DimensionMismatch, InvalidMatrix, NotSymmetric


def _frozen(entries) -> np.ndarray:
    arr = np.array(entries, dtype=np.float64, copy=True)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        raise DimensionMismatch(f'expected a non-empty square matrix, got shape {arr.shape}')
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class SymMatrix:
    """
    Symmetric d×d matrix.

    Construction rejects inputs that are not exactly symmetric; use
    ``SymMatrix.symmetrized`` for floating-point products such as ΛΣ + ΣΛᵗ.
    ``psd`` is a tag set by constructors that have verified the spectrum
    (see ``matlite.linalg.tag_psd``).
    """

    entries: np.ndarray
    psd: bool = field(default=False)

    def __post_init__(self):
        arr = _frozen(self.entries)
        if not np.array_equal(arr, arr.T):
            raise NotSymmetric('entries[i][j] != entries[j][i]')
        object.__setattr__(self, 'entries', arr)

    @classmethod
    def symmetrized(cls, entries, psd: bool = False) -> 'SymMatrix':
        arr = np.asarray(entries, dtype=np.float64)
        return cls((arr + arr.T) / 2.0, psd=psd)

    @classmethod
    def identity(cls, d: int) -> 'SymMatrix':
        return cls(np.eye(d), psd=True)

    @classmethod
    def diag(cls, *values) -> 'SymMatrix':
        vals = np.asarray(values, dtype=np.float64)
        return cls(np.diag(vals), psd=bool(np.all(vals >= 0)))

    @property
    def d(self) -> int:
        return self.entries.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)

    def __repr__(self):
        return f'SymMatrix(d={self.d}, psd={self.psd}, entries={self.entries.tolist()})'


@dataclass(frozen=True, eq=False)
class LowerMatrix:
    """Lower-triangular d×d matrix (zero strictly above the diagonal)."""

    entries: np.ndarray

    def __post_init__(self):
        arr = _frozen(self.entries)
        if np.any(np.triu(arr, k=1) != 0.0):
            raise InvalidMatrix('LowerMatrix has nonzero entries above the diagonal')
        object.__setattr__(self, 'entries', arr)

    @classmethod
    def identity(cls, d: int) -> 'LowerMatrix':
        return cls(np.eye(d))

    @classmethod
    def diag(cls, *values) -> 'LowerMatrix':
        return cls(np.diag(np.asarray(values, dtype=np.float64)))

    @property
    def d(self) -> int:
        return self.entries.shape[0]

    @property
    def invertible(self) -> bool:
        return bool(np.all(np.diag(self.entries) != 0.0))

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)

    def __repr__(self):
        return f'LowerMatrix(d={self.d}, entries={self.entries.tolist()})'


def as_array(m) -> np.ndarray:
    """Underlying float array of a SymMatrix, LowerMatrix or array-like."""
    if isinstance(m, (SymMatrix, LowerMatrix)):
        return m.entries
    return np.asarray(m, dtype=np.float64)


def check_same_dimension(*mats) -> int:
    dims = {as_array(m).shape for m in mats}
    if len(dims) != 1:
        raise DimensionMismatch(f'matrix shapes differ: {sorted(dims)}')
    return dims.pop()[0]
