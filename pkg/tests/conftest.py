"""
Shared fixtures for the stein-embed test suite.
"""

import numpy as np
import pytest
from click.testing import CliRunner

from stein_embed.graphs import Graph, GraphModel
from stein_embed.mc import ExchangeablePair


class StaticPair(ExchangeablePair):
    """Coupling whose move never changes the state: W′ = W ~ N(0, I₂)"""

    @property
    def dim(self):
        return 2

    @property
    def certifies_linear(self):
        return True

    def draw_states(self, rng, size):
        return rng.standard_normal((size, 2))

    def step(self, states, rng):
        return states.copy()

    def embed(self, states):
        return states

    def cond_products(self, states):
        return np.zeros((states.shape[0], 2, 2))


@pytest.fixture
def static_pair():
    return StaticPair()


@pytest.fixture
def rng():
    """Seeded generator; every test gets a fresh stream"""
    return np.random.default_rng(20240611)


@pytest.fixture
def model_small():
    return GraphModel(4, 0.5)


@pytest.fixture
def model_10():
    return GraphModel(10, 0.5)


@pytest.fixture
def triangle():
    return Graph.from_edges(4, [(0, 1), (1, 2), (0, 2)])


@pytest.fixture
def k4():
    return Graph.complete(4)


@pytest.fixture
def runner():
    return CliRunner()
