"""Undirected unweighted graphs and the local bipartite gadget of an edge."""

from __future__ import annotations

import threading
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator

import numpy as np

from . import kernels
from .errors import DomainError, MalformedInput, NotAnEdge


class Graph:
    """Immutable simple graph over opaque string node ids.

    Node ids are mapped to dense indices in first-seen order; neighbor lists
    are kept sorted by index. A CSR copy of the adjacency feeds the compiled
    kernels.
    """

    def __init__(self, names: Iterable[str], adjacency: Iterable[Iterable[int]]):
        self._names = tuple(names)
        self._index = {name: i for i, name in enumerate(self._names)}
        if len(self._index) != len(self._names):
            raise MalformedInput("duplicate node names")
        self._nbrs = tuple(tuple(sorted(set(a))) for a in adjacency)
        if len(self._nbrs) != len(self._names):
            raise MalformedInput("adjacency length does not match node count")
        for i, nb in enumerate(self._nbrs):
            for j in nb:
                if j == i:
                    raise MalformedInput(f"self-loop at {self._names[i]!r}")
                if i not in self._nbrs[j]:
                    raise MalformedInput("adjacency is not symmetric")
        self._sets = tuple(frozenset(nb) for nb in self._nbrs)
        counts = np.fromiter((len(nb) for nb in self._nbrs), dtype=np.int64, count=len(self._nbrs))
        self._indptr = np.zeros(len(self._nbrs) + 1, dtype=np.int64)
        np.cumsum(counts, out=self._indptr[1:])
        self._indices = np.fromiter(
            (j for nb in self._nbrs for j in nb), dtype=np.int64, count=int(self._indptr[-1])
        )
        self._n_edges = int(self._indptr[-1]) // 2
        self._scratch = threading.local()

    def __repr__(self):
        return f"Graph(nodes={len(self._names)}, edges={self._n_edges})"

    @property
    def nodes(self) -> tuple[str, ...]:
        return self._names

    @property
    def adjacency(self) -> dict[str, frozenset[str]]:
        return {
            name: frozenset(self._names[j] for j in self._nbrs[i])
            for i, name in enumerate(self._names)
        }

    def number_of_nodes(self) -> int:
        return len(self._names)

    def number_of_edges(self) -> int:
        return self._n_edges

    def __contains__(self, node) -> bool:
        return str(node) in self._index

    def index(self, node) -> int:
        try:
            return self._index[str(node)]
        except KeyError:
            raise DomainError(f"unknown node {node!r}") from None

    def name(self, i: int) -> str:
        return self._names[i]

    def degree(self, node) -> int:
        return len(self._nbrs[self.index(node)])

    def neighbors(self, node) -> tuple[str, ...]:
        return tuple(self._names[j] for j in self._nbrs[self.index(node)])

    def neighbor_indices(self, i: int) -> tuple[int, ...]:
        return self._nbrs[i]

    def has_edge(self, u, v) -> bool:
        return self.index(v) in self._sets[self.index(u)]

    def edges(self) -> Iterator[tuple[str, str]]:
        """Each edge once, as ``(a, b)`` with ``index(a) < index(b)``."""
        for i, nb in enumerate(self._nbrs):
            for j in nb:
                if i < j:
                    yield self._names[i], self._names[j]

    def degrees(self) -> dict[str, int]:
        return {name: len(nb) for name, nb in zip(self._names, self._nbrs)}

    def distance_matrix(self, left_idx, right_idx) -> np.ndarray:
        """Capped (at 3) distances between two index lists, via the kernel."""
        sc = self._scratch
        if not hasattr(sc, "stamp"):
            n = len(self._names)
            sc.stamp = np.full(max(n, 1), -1, dtype=np.int64)
            sc.level = np.zeros(max(n, 1), dtype=np.int64)
            sc.next = 0
        left = np.asarray(left_idx, dtype=np.int64)
        right = np.asarray(right_idx, dtype=np.int64)
        out, sc.next = kernels.local_weight_matrix(
            self._indptr, self._indices, left, right, sc.stamp, sc.level, sc.next
        )
        return out


def from_edge_list(pairs: Iterable[tuple]) -> Graph:
    """Build a graph from node-id pairs; duplicates collapse, self-loops raise."""
    index: dict[str, int] = {}
    adj: list[set[int]] = []

    def idx(name: str) -> int:
        if name not in index:
            index[name] = len(adj)
            adj.append(set())
        return index[name]

    for pair in pairs:
        try:
            a, b = pair
        except (TypeError, ValueError):
            raise MalformedInput(f"not a node pair: {pair!r}") from None
        a, b = str(a), str(b)
        if a == b:
            raise MalformedInput(f"self-loop on node {a!r}")
        i, j = idx(a), idx(b)
        adj[i].add(j)
        adj[j].add(i)
    return Graph(index, adj)


def parse_edge_list(lines: Iterable[str]) -> Graph:
    """Parse whitespace-separated edge lines; ``#`` comments and blanks skipped."""
    pairs = []
    for lineno, line in enumerate(lines, 1):
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        tokens = text.split()
        if len(tokens) != 2:
            raise MalformedInput(f"line {lineno}: expected two tokens, got {len(tokens)}")
        if tokens[0] == tokens[1]:
            raise MalformedInput(f"line {lineno}: self-loop on node {tokens[0]!r}")
        pairs.append((tokens[0], tokens[1]))
    return from_edge_list(pairs)


def read_edge_list(path) -> Graph:
    try:
        with open(path, encoding="utf-8") as fh:
            return parse_edge_list(fh)
    except UnicodeDecodeError as exc:
        raise MalformedInput(f"{path}: not UTF-8 text ({exc.reason})") from None


def bounded_distance(g: Graph, x, y, cap: int) -> int:
    """Shortest-path distance between ``x`` and ``y``, or ``cap`` if farther."""
    if cap < 1:
        raise DomainError("cap must be at least 1")
    s, t = g.index(x), g.index(y)
    if s == t:
        return 0
    seen = {s}
    frontier = deque([(s, 0)])
    while frontier:
        a, d = frontier.popleft()
        if d + 1 >= cap:
            continue
        for b in g.neighbor_indices(a):
            if b == t:
                return d + 1
            if b not in seen:
                seen.add(b)
                frontier.append((b, d + 1))
    return cap


@dataclass(frozen=True)
class LocalBipartite:
    """Complete bipartite gadget of edge ``{u, v}`` with ``deg(u) <= deg(v)``.

    ``left`` is ``u`` followed by its neighbors, ``right`` is ``v`` followed by
    its neighbors, and ``weight[i, j]`` is the graph distance between
    ``left[i]`` and ``right[j]`` (always in {0, 1, 2, 3}).
    """

    u: str
    v: str
    left: tuple[str, ...]
    right: tuple[str, ...]
    weight: np.ndarray

    @property
    def left_mass(self) -> Fraction:
        return Fraction(1, len(self.left))

    @property
    def right_mass(self) -> Fraction:
        return Fraction(1, len(self.right))

    @property
    def deg_u(self) -> int:
        return len(self.left) - 1

    @property
    def deg_v(self) -> int:
        return len(self.right) - 1

    def weight_of(self, x, y) -> int:
        return int(self.weight[self.left.index(str(x)), self.right.index(str(y))])


@dataclass(frozen=True)
class OverlapStats:
    k: int
    ell: int
    m: int


def oriented(g: Graph, u, v) -> tuple[str, str]:
    """Return the edge endpoints ordered so that ``deg(u) <= deg(v)``.

    Raises NotAnEdge if ``{u, v}`` is not an edge.
    """
    u, v = g.name(g.index(u)), g.name(g.index(v))
    if not g.has_edge(u, v):
        raise NotAnEdge(f"{{{u}, {v}}} is not an edge")
    if g.degree(u) > g.degree(v):
        u, v = v, u
    return u, v


def local_bipartite(g: Graph, u, v) -> LocalBipartite:
    u, v = oriented(g, u, v)
    iu, iv = g.index(u), g.index(v)
    left_idx = (iu,) + g.neighbor_indices(iu)
    right_idx = (iv,) + g.neighbor_indices(iv)
    weight = g.distance_matrix(left_idx, right_idx)
    weight.setflags(write=False)
    return LocalBipartite(
        u=u,
        v=v,
        left=tuple(g.name(i) for i in left_idx),
        right=tuple(g.name(i) for i in right_idx),
        weight=weight,
    )


def overlap_stats(g: Graph, u, v) -> OverlapStats:
    """Neighborhood overlap counts with ``k = deg(u) - ell`` and ``m = deg(v) - ell``."""
    u, v = oriented(g, u, v)
    ell = len(g._sets[g.index(u)] & g._sets[g.index(v)])
    return OverlapStats(k=g.degree(u) - ell, ell=ell, m=g.degree(v) - ell)
