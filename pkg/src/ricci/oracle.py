"""Instrumented query oracles over a hidden graph or bipartite instance.

Bipartite sessions address nodes through side-tagged handles ``("L", label)``
and ``("R", label)`` because the local gadget of an edge contains ``u`` and
``v`` on both sides. Neighbor-type queries return a uniformly random node
that has not been returned before for the same key, and :data:`EXHAUSTED`
once none is left.
"""

from __future__ import annotations

import json
import random
from dataclasses import asdict, dataclass

from .emd import MpmctInstance
from .errors import DomainError
from .graph import Graph, LocalBipartite

LEFT = "L"
RIGHT = "R"


class _Exhausted:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "EXHAUSTED"

    def __bool__(self):
        return False

    def __reduce__(self):
        return (_Exhausted, ())


EXHAUSTED = _Exhausted()


def make_rng(rng=None) -> random.Random:
    if isinstance(rng, random.Random):
        return rng
    return random.Random(rng)


@dataclass
class QueryCounters:
    pair: int = 0
    neighbor: int = 0
    weighted_neighbor: int = 0
    selective_degree: int = 0

    def as_dict(self) -> dict[str, int]:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=False)

    def snapshot(self) -> "QueryCounters":
        return QueryCounters(**self.as_dict())

    def __sub__(self, other: "QueryCounters") -> "QueryCounters":
        return QueryCounters(**{k: v - getattr(other, k) for k, v in self.as_dict().items()})

    def __add__(self, other: "QueryCounters") -> "QueryCounters":
        return QueryCounters(**{k: v + getattr(other, k) for k, v in self.as_dict().items()})

    def total(self, include_selective: bool = False) -> int:
        t = self.pair + self.neighbor + self.weighted_neighbor
        return t + self.selective_degree if include_selective else t


class _Drawer:
    """Uniform draws without replacement from a fixed candidate list."""

    __slots__ = ("pool",)

    def __init__(self, items):
        self.pool = list(items)

    def draw(self, rng: random.Random):
        if not self.pool:
            return EXHAUSTED
        k = rng.randrange(len(self.pool)) if len(self.pool) > 1 else 0
        self.pool[k], self.pool[-1] = self.pool[-1], self.pool[k]
        return self.pool.pop()


class GraphSession:
    """Neighbor-query access to a hidden graph.

    ``degree`` is answered for free; the sampling estimators assume the degree
    sequence is known.
    """

    def __init__(self, g: Graph, rng=None):
        self.graph = g
        self.rng = make_rng(rng)
        self.counters = QueryCounters()
        self._open: dict[str, _Drawer] = {}

    def _key(self, x) -> str:
        return self.graph.name(self.graph.index(x))

    def neighbor_query(self, x):
        x = self._key(x)
        self.counters.neighbor += 1
        drawer = self._open.get(x)
        if drawer is None:
            drawer = self._open[x] = _Drawer(self.graph.neighbors(x))
        return drawer.draw(self.rng)

    def degree(self, x) -> int:
        return self.graph.degree(x)

    def reset_exploration(self, x=None) -> None:
        """Forget returned neighbors of ``x`` (of every node if ``x`` is None)."""
        if x is None:
            self._open.clear()
        else:
            self._open.pop(self._key(x), None)


class BipartiteSession:
    """Pair, weighted-neighbor and selective-degree access to a bipartite instance.

    Args:
        left: Left labels.
        right: Right labels.
        weight: ``len(left) x len(right)`` integer matrix.
        rng: ``random.Random``, a seed, or None.
        weights: Weight classes accepted by neighbor and degree queries.
    """

    def __init__(self, left, right, weight, rng=None, weights=(1, 2, 3)):
        self._left = tuple(left)
        self._right = tuple(right)
        self._w = [list(map(int, row)) for row in weight]
        if len(self._w) != len(self._left) or any(len(r) != len(self._right) for r in self._w):
            raise DomainError("weight matrix shape does not match the sides")
        self._li = {x: i for i, x in enumerate(self._left)}
        self._ri = {y: j for j, y in enumerate(self._right)}
        self.weights = frozenset(weights)
        self.rng = make_rng(rng)
        self.counters = QueryCounters()
        self._open: dict[tuple, _Drawer] = {}

    @classmethod
    def from_instance(cls, h: MpmctInstance, rng=None) -> "BipartiteSession":
        return cls(h.left, h.right, h.weight, rng)

    @classmethod
    def from_local_bipartite(cls, b: LocalBipartite, rng=None) -> "BipartiteSession":
        """Session over an edge gadget; weight class 0 (shared nodes) is queryable."""
        return cls(b.left, b.right, b.weight, rng, weights=(0, 1, 2, 3))

    def left_nodes(self) -> list[tuple[str, str]]:
        return [(LEFT, x) for x in self._left]

    def right_nodes(self) -> list[tuple[str, str]]:
        return [(RIGHT, y) for y in self._right]

    @property
    def n_left(self) -> int:
        return len(self._left)

    @property
    def n_right(self) -> int:
        return len(self._right)

    def _side_index(self, node) -> tuple[str, int]:
        try:
            side, label = node
        except (TypeError, ValueError):
            raise DomainError(f"not a node handle: {node!r}") from None
        table = self._li if side == LEFT else self._ri if side == RIGHT else None
        if table is None or label not in table:
            raise DomainError(f"unknown node {node!r}")
        return side, table[label]

    def _check_weight(self, s) -> None:
        if s not in self.weights:
            raise DomainError(f"weight class {s!r} not in {sorted(self.weights)}")

    def weight_between(self, x, y) -> int:
        """Uncounted lookup, for tests and the exact reference paths."""
        sx, i = self._side_index(x)
        sy, j = self._side_index(y)
        if (sx, sy) != (LEFT, RIGHT):
            raise DomainError("expected a left node and a right node")
        return self._w[i][j]

    def _targets(self, side: str, i: int, s: int) -> list[tuple[str, str]]:
        if side == LEFT:
            return [(RIGHT, y) for j, y in enumerate(self._right) if self._w[i][j] == s]
        return [(LEFT, x) for k, x in enumerate(self._left) if self._w[k][i] == s]

    def pair_query(self, x, y) -> int:
        w = self.weight_between(x, y)
        self.counters.pair += 1
        return w

    def weighted_neighbor_query(self, x, s: int):
        side, i = self._side_index(x)
        self._check_weight(s)
        self.counters.weighted_neighbor += 1
        key = (side, i, s)
        drawer = self._open.get(key)
        if drawer is None:
            drawer = self._open[key] = _Drawer(self._targets(side, i, s))
        return drawer.draw(self.rng)

    def selective_degree_query(self, x, s: int) -> int:
        side, i = self._side_index(x)
        self._check_weight(s)
        self.counters.selective_degree += 1
        return len(self._targets(side, i, s))
