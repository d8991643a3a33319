"""
Sparse coefficients of a multilinear chaos expansion

    F = Σ_n Σ_{i_1 < … < i_n} n! f_n(i_1, …, i_n) X_{i_1} ⋯ X_{i_n}.

Subsets are stored 0-based internally; text files use 1-based indices.
"""
import itertools
from dataclasses import dataclass
from math import factorial
from pathlib import Path
from typing import Dict, Tuple, Union

import numpy as np

from stein_embed.exceptions import FormatError, InvalidModel


@dataclass(frozen=True, eq=False)
class ChaosCoeffs:
    """Coefficient map from strictly increasing index tuples to f_n values."""

    d: int
    terms: Dict[Tuple[int, ...], float]

    def __post_init__(self):
        if self.d < 1:
            raise InvalidModel(f'd must be >= 1, got {self.d}')
        clean = {}
        for subset, value in self.terms.items():
            subset = tuple(int(i) for i in subset)
            if not subset:
                raise InvalidModel('empty subset (constant term) is not allowed')
            if any(b <= a for a, b in zip(subset, subset[1:])):
                raise InvalidModel(f'subset {subset} is not strictly increasing')
            if subset[0] < 0 or subset[-1] >= self.d:
                raise InvalidModel(f'subset {subset} out of range for d={self.d}')
            clean[subset] = float(value)
        object.__setattr__(self, 'terms', clean)
        object.__setattr__(self, '_orders', self._group())

    def _group(self):
        orders = {}
        for n in range(1, self.d + 1):
            items = [(s, v) for s, v in sorted(self.terms.items()) if len(s) == n]
            idx = np.array([s for s, _ in items], dtype=np.int64).reshape(len(items), n)
            coef = np.array([v for _, v in items], dtype=np.float64) * factorial(n)
            orders[n] = (idx, coef)
        return orders

    def order(self, n: int) -> Tuple[np.ndarray, np.ndarray]:
        """(subset index array (m, n), n!·f_n values (m,)) for order n."""
        return self._orders[n]


def random_coeffs(d: int, rng: np.random.Generator, density: float = 1.0) -> ChaosCoeffs:
    """Standard normal coefficients on each subset, kept with probability ``density``."""
    terms = {}
    for n in range(1, d + 1):
        for subset in itertools.combinations(range(d), n):
            if density >= 1.0 or rng.random() < density:
                terms[subset] = float(rng.standard_normal())
    return ChaosCoeffs(d, terms)


def parse_coeffs(text: str, d: int) -> ChaosCoeffs:
    """Lines "n i_1 … i_n value" with 1-based indices; '#' starts a comment."""
    terms = {}
    for no, line in enumerate(text.splitlines(), start=1):
        parts = line.split('#', 1)[0].split()
        if not parts:
            continue
        try:
            n = int(parts[0])
            subset = tuple(int(i) - 1 for i in parts[1:-1])
            value = float(parts[-1])
        except ValueError:
            raise FormatError('expected "n i_1 ... i_n value"', no)
        if n < 1 or len(subset) != n:
            raise FormatError(f'order {n} does not match {len(subset)} indices', no)
        if subset in terms:
            raise FormatError(f'duplicate subset {tuple(i + 1 for i in subset)}', no)
        terms[subset] = value
    try:
        return ChaosCoeffs(d, terms)
    except InvalidModel as e:
        raise FormatError(str(e))


def read_coeffs(path: Union[str, Path], d: int) -> ChaosCoeffs:
    return parse_coeffs(Path(path).read_text(), d)


def format_coeffs(c: ChaosCoeffs) -> str:
    lines = []
    for subset, value in sorted(c.terms.items(), key=lambda item: (len(item[0]), item[0])):
        lines.append(' '.join([str(len(subset))] + [str(i + 1) for i in subset] + [repr(value)]))
    return '\n'.join(lines) + '\n'
