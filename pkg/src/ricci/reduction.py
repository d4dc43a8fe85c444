"""Padding unequal-degree gadgets to square matching instances, and back.

``pad_to_equal`` replaces every left node by ``a`` copies and appends ``b``
special nodes at distance 3 from everything, where
``deg(v) + 1 = a * (deg(u) + 1) + b``. The padded EMD overestimates the true
one by at most ``3b / (deg(v) + 1)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .emd import MpmctInstance, _transport
from .errors import DomainError
from .graph import Graph, LocalBipartite, from_edge_list


def copy_label(x: str, j: int) -> str:
    return f"{x}^{j}"


def special_label(i: int) -> str:
    return f"r_{i}"


@dataclass(frozen=True)
class PaddedBipartite:
    base: LocalBipartite
    a: int
    b: int
    left_expanded: tuple[str, ...]
    origin: tuple[int, ...]  # index into base.left, or -1 for a special node
    weight: np.ndarray

    @property
    def right(self) -> tuple[str, ...]:
        return self.base.right

    @property
    def size(self) -> int:
        return len(self.left_expanded)

    def gap_bound(self) -> Fraction:
        return Fraction(3 * self.b, self.size)


def padding_parameters(deg_u: int, deg_v: int) -> tuple[int, int]:
    if deg_u > deg_v:
        raise DomainError("padding needs deg(u) <= deg(v)")
    a, b = divmod(deg_v + 1, deg_u + 1)
    return a, b


def pad_to_equal(base: LocalBipartite) -> PaddedBipartite:
    a, b = padding_parameters(base.deg_u, base.deg_v)
    labels: list[str] = []
    origin: list[int] = []
    for i, x in enumerate(base.left):
        for j in range(1, a + 1):
            labels.append(copy_label(x, j))
            origin.append(i)
    for i in range(1, b + 1):
        labels.append(special_label(i))
        origin.append(-1)
    weight = np.full((len(labels), len(base.right)), 3, dtype=np.int64)
    rows = [k for k, o in enumerate(origin) if o >= 0]
    weight[rows] = base.weight[[origin[k] for k in rows]]
    weight.setflags(write=False)
    return PaddedBipartite(base, a, b, tuple(labels), tuple(origin), weight)


def padded_emd(p: PaddedBipartite) -> Fraction:
    n = p.size
    return Fraction(_transport(p.weight, [1] * n, [1] * n), n)


def realize_as_graph(h: MpmctInstance) -> tuple[Graph, tuple[str, str]]:
    """A graph whose reduced instance at edge ``{u, v}`` reproduces ``h``.

    Left node ``i`` becomes ``u{i}`` (attached to ``u``), right node ``j``
    becomes ``v{j}`` (attached to ``v``); weight-1 pairs are joined directly,
    weight-2 pairs through a private midpoint ``x{i}.{j}``, weight-3 pairs not
    at all.
    """
    if h.n < 1:
        raise DomainError("realization needs n >= 1")
    n = h.n
    edges = [("u", "v")]
    edges += [("u", f"u{i + 1}") for i in range(n)]
    edges += [("v", f"v{j + 1}") for j in range(n)]
    for i in range(n):
        for j in range(n):
            w = int(h.weight[i, j])
            if w == 1:
                edges.append((f"u{i + 1}", f"v{j + 1}"))
            elif w == 2:
                mid = f"x{i + 1}.{j + 1}"
                edges.append((f"u{i + 1}", mid))
                edges.append((mid, f"v{j + 1}"))
    return from_edge_list(edges), ("u", "v")
