"""
Bernoulli random graphs and their edge / 2-star / triangle counts.

A Graph stores each adjacency row as a Python int bitset, so
common-neighbour counts are a single AND plus popcount.
"""
import logging
from dataclasses import dataclass
from math import comb
from typing import Iterable, Tuple

import numpy as np

from stein_embed.exceptions import InvalidModel

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GraphModel:
    """G(n, p) with n ≥ 4 and 0 < p < 1."""

    n: int
    p: float

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 4:
            raise InvalidModel(f'GraphModel needs n >= 4, got {self.n}')
        if not 0.0 < self.p < 1.0:
            raise InvalidModel(f'GraphModel needs 0 < p < 1, got {self.p}')

    @property
    def pairs(self) -> int:
        """C(n, 2), the number of potential edges."""
        return comb(self.n, 2)

    @property
    def scales(self) -> np.ndarray:
        """Rescaling (T₁, V₁, U₁) = ((n−2)T/n², V/n², U/n²)."""
        n2 = float(self.n) ** 2
        return np.array([(self.n - 2) / n2, 1.0 / n2, 1.0 / n2])

    @property
    def means(self) -> np.ndarray:
        """(ET, EV, EU) = (C(n,2)p, 3C(n,3)p², C(n,3)p³)."""
        p = self.p
        return np.array([comb(self.n, 2) * p, 3 * comb(self.n, 3) * p ** 2, comb(self.n, 3) * p ** 3])


class Graph:
    """
    Undirected simple graph on vertices 0..n-1.

    Immutable: ``adj`` is a tuple of row bitsets, bit j of row i set iff
    {i, j} is an edge.
    """

    __slots__ = ('n', 'adj')

    def __init__(self, n: int, adj: Iterable[int]):
        adj = tuple(int(row) for row in adj)
        if n < 3:
            raise InvalidModel(f'Graph needs n >= 3, got {n}')
        if len(adj) != n:
            raise InvalidModel(f'expected {n} adjacency rows, got {len(adj)}')
        full = (1 << n) - 1
        for i, row in enumerate(adj):
            if row & ~full or (row >> i) & 1:
                raise InvalidModel(f'row {i} has a self-loop or out-of-range bit')
            r = row
            while r:
                low = r & -r
                j = low.bit_length() - 1
                if not (adj[j] >> i) & 1:
                    raise InvalidModel(f'adjacency not symmetric at ({i}, {j})')
                r ^= low
        object.__setattr__(self, 'n', n)
        object.__setattr__(self, 'adj', adj)

    def __setattr__(self, key, value):
        raise AttributeError('Graph is immutable')

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Tuple[int, int]]) -> 'Graph':
        rows = [0] * n
        for i, j in edges:
            if i == j or not (0 <= i < n and 0 <= j < n):
                raise InvalidModel(f'invalid edge ({i}, {j}) for n={n}')
            rows[i] |= 1 << j
            rows[j] |= 1 << i
        return cls(n, rows)

    @classmethod
    def empty(cls, n: int) -> 'Graph':
        return cls(n, [0] * n)

    @classmethod
    def complete(cls, n: int) -> 'Graph':
        full = (1 << n) - 1
        return cls(n, [full ^ (1 << i) for i in range(n)])

    @classmethod
    def from_adjacency(cls, matrix) -> 'Graph':
        a = np.asarray(matrix).astype(bool)
        packed = np.packbits(a, axis=1, bitorder='little')
        return cls(a.shape[0], [int.from_bytes(row.tobytes(), 'little') for row in packed])

    def has_edge(self, i: int, j: int) -> bool:
        return bool((self.adj[i] >> j) & 1)

    def degree(self, i: int) -> int:
        return self.adj[i].bit_count()

    def common_neighbours(self, i: int, j: int) -> int:
        return (self.adj[i] & self.adj[j]).bit_count()

    def edges(self):
        for i in range(self.n):
            row = self.adj[i] >> (i + 1)
            j = i + 1
            while row:
                if row & 1:
                    yield i, j
                row >>= 1
                j += 1

    def with_edge(self, i: int, j: int, present: bool) -> 'Graph':
        """Copy with the indicator of {i, j} set to ``present``."""
        if self.has_edge(i, j) == bool(present):
            return self
        rows = list(self.adj)
        rows[i] ^= 1 << j
        rows[j] ^= 1 << i
        return Graph(self.n, rows)

    def to_adjacency(self) -> np.ndarray:
        out = np.zeros((self.n, self.n), dtype=np.int8)
        for i, j in self.edges():
            out[i, j] = out[j, i] = 1
        return out

    def __eq__(self, other):
        return isinstance(other, Graph) and self.n == other.n and self.adj == other.adj

    def __hash__(self):
        return hash((self.n, self.adj))

    def __repr__(self):
        return f'Graph(n={self.n}, edges={sum(r.bit_count() for r in self.adj) // 2})'


@dataclass(frozen=True)
class CountVector:
    """Raw edge, 2-star and triangle counts."""

    T: int
    V: int
    U: int

    def as_array(self) -> np.ndarray:
        return np.array([self.T, self.V, self.U], dtype=np.float64)

    def __add__(self, other: 'CountVector') -> 'CountVector':
        return CountVector(self.T + other.T, self.V + other.V, self.U + other.U)


@dataclass(frozen=True)
class ScaledCounts:
    """Centered rescaled counts (T₁ − ET₁, V₁ − EV₁, U₁ − EU₁)."""

    t1: float
    v1: float
    u1: float

    def as_array(self) -> np.ndarray:
        return np.array([self.t1, self.v1, self.u1])


def sample(model: GraphModel, rng: np.random.Generator) -> Graph:
    """Draw one G(n, p) graph; each potential edge independently with probability p."""
    n = model.n
    upper = np.triu(rng.random((n, n)) < model.p, k=1)
    return Graph.from_adjacency(upper | upper.T)


def count(g: Graph) -> CountVector:
    """(T, V, U) with V = Σ_i C(deg_i, 2) and U the triangle count."""
    degrees = [row.bit_count() for row in g.adj]
    t = sum(degrees) // 2
    v = sum(deg * (deg - 1) // 2 for deg in degrees)
    closed = 0
    for i, j in g.edges():
        closed += (g.adj[i] & g.adj[j]).bit_count()
    return CountVector(t, v, closed // 3)


def scaled_counts(counts: CountVector, model: GraphModel) -> ScaledCounts:
    w = model.scales * (counts.as_array() - model.means)
    return ScaledCounts(*(float(x) for x in w))


def edge_toggle_delta(g: Graph, i: int, j: int, present: bool) -> CountVector:
    """
    Count change when the indicator of {i, j} is set to ``present``.

    ΔT = ±1, ΔV = ±(deg_i + deg_j − 2I_ij), ΔU = ±|N(i) ∩ N(j)|.
    """
    old = g.has_edge(i, j)
    if old == bool(present):
        return CountVector(0, 0, 0)
    sign = 1 if present else -1
    d = g.degree(i) + g.degree(j) - 2 * int(old)
    return CountVector(sign, sign * d, sign * g.common_neighbours(i, j))
