"""Exact earth mover's distance on local gadgets and the derived curvatures.

Everything here is exact: transport problems are scaled to integers by the
lcm of the two side sizes and solved as integral min-cost flows, so results
are :class:`fractions.Fraction` values with no tolerance involved.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import lcm

import numpy as np

from . import kernels
from .errors import DegreeMismatch, DomainError, MalformedInput, NotAnEdge, OracleTooLarge
from .graph import Graph, LocalBipartite, local_bipartite

TRANSPORT_FLOW = "transport_flow"
MATCHING = "matching"


@dataclass(frozen=True)
class EmdResult:
    value: Fraction
    method: str
    plan_weight: int
    scale: int


@dataclass(frozen=True)
class MpmctInstance:
    """Square complete bipartite instance with weights in {1, 2, 3}."""

    left: tuple[str, ...]
    right: tuple[str, ...]
    weight: np.ndarray

    def __post_init__(self):
        if len(self.left) != len(self.right):
            raise MalformedInput("MPMCT sides must have equal size")
        w = np.asarray(self.weight, dtype=np.int64)
        if w.size == 0:
            w = w.reshape(0, 0)
        if w.shape != (len(self.left), len(self.right)):
            raise MalformedInput(f"weight shape {w.shape} does not match the sides")
        if w.size and (w.min() < 1 or w.max() > 3):
            raise MalformedInput("MPMCT weights must lie in {1, 2, 3}")
        w.setflags(write=False)
        object.__setattr__(self, "left", tuple(self.left))
        object.__setattr__(self, "right", tuple(self.right))
        object.__setattr__(self, "weight", w)

    @property
    def n(self) -> int:
        return len(self.left)

    @classmethod
    def from_matrix(cls, rows) -> "MpmctInstance":
        w = np.asarray(rows, dtype=np.int64)
        if w.size == 0:
            w = w.reshape(0, 0)
        if w.ndim != 2:
            raise MalformedInput("weight matrix must be two-dimensional")
        return cls(
            left=tuple(f"u{i + 1}" for i in range(w.shape[0])),
            right=tuple(f"v{j + 1}" for j in range(w.shape[1])),
            weight=w,
        )


def _transport(weight: np.ndarray, supply, demand) -> int:
    return int(
        kernels.min_cost_transport(
            np.ascontiguousarray(weight, dtype=np.int64),
            np.asarray(supply, dtype=np.int64),
            np.asarray(demand, dtype=np.int64),
        )
    )


def emd_transport(b: LocalBipartite) -> EmdResult:
    nl, nr = len(b.left), len(b.right)
    scale = lcm(nl, nr)
    cost = _transport(b.weight, [scale // nl] * nl, [scale // nr] * nr)
    return EmdResult(Fraction(cost, scale), TRANSPORT_FLOW, cost, scale)


def emd_matching(b: LocalBipartite) -> EmdResult:
    """EMD of an equal-degree gadget as a min-weight perfect matching / (1 + deg)."""
    if len(b.left) != len(b.right):
        raise DegreeMismatch("matching form needs deg(u) == deg(v)")
    n = len(b.left)
    cost = _transport(b.weight, [1] * n, [1] * n)
    return EmdResult(Fraction(cost, n), MATCHING, cost, n)


def min_weight_perfect_matching(h: MpmctInstance) -> int:
    if h.n == 0:
        return 0
    return _transport(h.weight, [1] * h.n, [1] * h.n)


def reduced_instance(g: Graph, u, v) -> MpmctInstance:
    """Residual matching instance of an equal-degree edge after zero-cost pairs."""
    u, v = g.name(g.index(u)), g.name(g.index(v))
    if not g.has_edge(u, v):
        raise NotAnEdge(f"{{{u}, {v}}} is not an edge")
    if g.degree(u) != g.degree(v):
        raise DegreeMismatch(f"deg({u})={g.degree(u)} != deg({v})={g.degree(v)}")
    iu, iv = g.index(u), g.index(v)
    nu = set(g.neighbor_indices(iu))
    nv = set(g.neighbor_indices(iv))
    left_idx = [x for x in g.neighbor_indices(iu) if x not in nv and x != iv]
    right_idx = [y for y in g.neighbor_indices(iv) if y not in nu and y != iu]
    weight = g.distance_matrix(left_idx, right_idx) if left_idx else np.zeros((0, 0), np.int64)
    return MpmctInstance(
        left=tuple(g.name(i) for i in left_idx),
        right=tuple(g.name(i) for i in right_idx),
        weight=weight,
    )


def curvature_edge(g: Graph, u, v) -> Fraction:
    return 1 - emd_transport(local_bipartite(g, u, v)).value


def curvature_edge_matching(g: Graph, u, v) -> Fraction:
    """Equal-degree curvature through the reduced matching instance."""
    h = reduced_instance(g, u, v)
    return 1 - Fraction(min_weight_perfect_matching(h), 1 + g.degree(v))


def curvature_node(g: Graph, v) -> Fraction:
    nbrs = g.neighbors(v)
    if not nbrs:
        raise DomainError(f"node {v!r} is isolated")
    return sum((curvature_edge(g, v, u) for u in nbrs), Fraction(0)) / len(nbrs)


def curvature_avg(g: Graph) -> Fraction:
    if g.number_of_edges() == 0:
        raise DomainError("graph has no edges")
    return sum(edge_curvatures(g).values(), Fraction(0)) / g.number_of_edges()


def edge_curvatures(g: Graph) -> dict[tuple[str, str], Fraction]:
    """Curvature of every edge, keyed as produced by :meth:`Graph.edges`."""
    return {(a, b): curvature_edge(g, a, b) for a, b in g.edges()}


def brute_force_emd(b: LocalBipartite, max_units: int = 20) -> Fraction:
    """Independent EMD oracle by exhaustive unit-matching search.

    Each left node becomes ``S/|left|`` unit sources and each right node
    ``S/|right|`` unit sinks, ``S = lcm(|left|, |right|)``. The minimum over
    all perfect matchings of units is found by exhaustive search; units of the
    same right node are interchangeable, so the search is memoized on the
    vector of remaining right capacities. This visits the same matchings as
    plain enumeration of all ``S!`` unit matchings, without repeats.
    """
    nl, nr = len(b.left), len(b.right)
    scale = lcm(nl, nr)
    if scale > max_units:
        raise OracleTooLarge(f"{scale} units exceeds the oracle bound {max_units}")
    per_left = scale // nl
    weight = [list(map(int, row)) for row in b.weight]
    owner = [i for i in range(nl) for _ in range(per_left)]

    @lru_cache(maxsize=None)
    def best(unit: int, caps: tuple[int, ...]) -> int:
        if unit == scale:
            return 0
        row = weight[owner[unit]]
        out = None
        for j, c in enumerate(caps):
            if c:
                rest = caps[:j] + (c - 1,) + caps[j + 1:]
                val = row[j] + best(unit + 1, rest)
                if out is None or val < out:
                    out = val
        return out

    return Fraction(best(0, (scale // nr,) * nr), scale)
