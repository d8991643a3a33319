"""
Smooth test functions with hand-derived derivative certificates.

Each function is vectorised over a batch x of shape (size, d) and carries
DerivBounds that are true suprema (not numerical estimates) of the first
three partial derivatives.
"""
import math
from abc import ABC, abstractmethod
from typing import Sequence

import numpy as np
from scipy.special import expit

from stein_embed.exceptions import DimensionMismatch
from stein_embed.registry import TEST_FUNCTION, register, registry
from stein_embed.stein.types import DerivBounds

# sup |σ'|, sup |σ''|, sup |σ'''| of the logistic function
SIGMOID_D1 = 0.25
SIGMOID_D2 = 1.0 / (6.0 * math.sqrt(3.0))
SIGMOID_D3 = 0.125


class TestFunction(ABC):
    """
    Base class for test functions h: ℝ^d → ℝ.

    Subclasses implement ``evaluate`` and ``bounds``.
    """

    __test__ = False  # not a pytest class

    name = 'abstract'
    min_dim = 1

    def __call__(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        if x.ndim == 1:
            x = x[None, :]
        self.check_dimension(x.shape[1])
        return self.evaluate(x)

    def check_dimension(self, d: int):
        if d < self.min_dim:
            raise DimensionMismatch(f'{self.name} needs d >= {self.min_dim}, got {d}')

    @abstractmethod
    def evaluate(self, x: np.ndarray) -> np.ndarray:
        """Values at a (size, d) batch."""
        pass

    @abstractmethod
    def bounds(self, d: int) -> DerivBounds:
        """
        Certified (h1, h2, h3) for the d-dimensional version.

        Args:
            d: Dimension the function is applied in
        """
        pass

    def __repr__(self):
        return f'{type(self).__name__}({self.name!r})'


class CosineTestFunction(TestFunction):
    """
    h(x) = cos(a·x) on the leading len(a) coordinates.

    |h|₁ = max|a_i|, |h|₂ = max|a_i a_j|, |h|₃ = max|a_i a_j a_k|.
    An empty ``a`` means "all ones in every coordinate".
    """

    def __init__(self, name: str, a: Sequence[float] = ()):
        self.name = name
        self.a = np.asarray(a, dtype=np.float64)
        self.min_dim = max(1, self.a.size)

    def _weights(self, d: int) -> np.ndarray:
        if self.a.size == 0:
            return np.ones(d)
        return np.concatenate([self.a, np.zeros(d - self.a.size)])

    def evaluate(self, x):
        return np.cos(x @ self._weights(x.shape[1]))

    def bounds(self, d):
        m = float(np.max(np.abs(self._weights(d))))
        return DerivBounds(m, m ** 2, m ** 3)


class LinearTestFunction(TestFunction):
    """h(x) = a·x; second and third derivatives vanish."""

    def __init__(self, name: str, a: Sequence[float] = ()):
        self.name = name
        self.a = np.asarray(a, dtype=np.float64)
        self.min_dim = max(1, self.a.size)

    def _weights(self, d):
        if self.a.size == 0:
            return np.ones(d)
        return np.concatenate([self.a, np.zeros(d - self.a.size)])

    def evaluate(self, x):
        return x @ self._weights(x.shape[1])

    def bounds(self, d):
        return DerivBounds(float(np.max(np.abs(self._weights(d)))), 0.0, 0.0)


class SigmoidProductTestFunction(TestFunction):
    """h(x) = ∏_i σ(x_i) with the logistic σ; every factor lies in (0, 1)."""

    name = 'sigmoid-product'

    def evaluate(self, x):
        return np.prod(expit(x), axis=1)

    def bounds(self, d):
        h2 = SIGMOID_D2 if d == 1 else max(SIGMOID_D2, SIGMOID_D1 ** 2)
        if d == 1:
            h3 = SIGMOID_D3
        else:
            h3 = max(SIGMOID_D3, SIGMOID_D2 * SIGMOID_D1, SIGMOID_D1 ** 3)
        return DerivBounds(SIGMOID_D1, h2, h3)


@register(TEST_FUNCTION, 'cos111', min_dim=3)
def cos111():
    return CosineTestFunction('cos111', [1.0, 1.0, 1.0])


@register(TEST_FUNCTION, 'cos11', min_dim=2)
def cos11():
    return CosineTestFunction('cos11', [1.0, 1.0])


@register(TEST_FUNCTION, 'cos-sum', min_dim=1)
def cos_sum():
    return CosineTestFunction('cos-sum')


@register(TEST_FUNCTION, 'linear-sum', min_dim=1)
def linear_sum():
    return LinearTestFunction('linear-sum')


@register(TEST_FUNCTION, 'sigmoid-product', min_dim=1)
def sigmoid_product():
    return SigmoidProductTestFunction()


def get_test_function(name: str) -> TestFunction:
    return registry.get(TEST_FUNCTION, name)


def test_function_names():
    return registry.names(TEST_FUNCTION)


test_function_names.__test__ = False
