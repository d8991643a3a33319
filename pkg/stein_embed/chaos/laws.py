"""
Mean-zero base laws for the coordinates X_1..X_d.
"""
from dataclasses import dataclass
from typing import Callable

import numpy as np

from stein_embed.registry import BASE_LAW, register, registry


@dataclass(frozen=True)
class BaseLaw:
    name: str
    sampler: Callable[[np.random.Generator, tuple], np.ndarray]
    variance: float
    mean: float = 0.0

    def sample(self, rng: np.random.Generator, shape) -> np.ndarray:
        return np.asarray(self.sampler(rng, shape), dtype=np.float64)


@register(BASE_LAW, 'rademacher')
def rademacher() -> BaseLaw:
    return BaseLaw('rademacher', lambda rng, shape: rng.choice(np.array([-1.0, 1.0]), size=shape), 1.0)


@register(BASE_LAW, 'uniform')
def uniform() -> BaseLaw:
    return BaseLaw('uniform', lambda rng, shape: rng.uniform(-1.0, 1.0, size=shape), 1.0 / 3.0)


@register(BASE_LAW, 'normal')
def normal() -> BaseLaw:
    return BaseLaw('normal', lambda rng, shape: rng.standard_normal(shape), 1.0)


def get_law(name: str) -> BaseLaw:
    return registry.get(BASE_LAW, name)


def law_names():
    return registry.names(BASE_LAW)
