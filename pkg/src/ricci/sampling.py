"""Node and average curvature from an edge-curvature black box and neighbor queries.

The black box ``B(x, y)`` returns a value in ``[C(x, y), C(x, y) + r]``. Both
estimators average ``B`` over ``k`` independent samples; with
``k = ceil(9 ln 6 / (2 r^2))`` Hoeffding's inequality keeps the sample mean
within ``r`` of its expectation with probability at least 2/3, so the result
is within ``2r`` of the true value.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from itertools import accumulate

from .errors import DomainError
from .oracle import EXHAUSTED, GraphSession, make_rng

LOW, HIGH = Fraction(-2), Fraction(1)


def sample_count(r) -> int:
    r = Fraction(str(r)) if not isinstance(r, Fraction) else r
    if r <= 0:
        raise DomainError("r must be positive")
    return math.ceil(9 * math.log(6) / (2 * float(r) ** 2))


@dataclass(frozen=True)
class EstimatorConfig:
    r: Fraction
    k: int
    seed: int = 0

    def __post_init__(self):
        if self.r <= 0:
            raise DomainError("r must be positive")
        if self.k < 1:
            raise DomainError("k must be at least 1")

    @classmethod
    def for_radius(cls, r, seed: int = 0) -> "EstimatorConfig":
        r = r if isinstance(r, Fraction) else Fraction(str(r))
        return cls(r=r, k=sample_count(r), seed=seed)


def _clamp(x: Fraction) -> Fraction:
    return min(max(x, LOW), HIGH)


def _mean(values) -> Fraction:
    values = [Fraction(v) for v in values]
    return _clamp(sum(values, Fraction(0)) / len(values))


def _drain(session: GraphSession, x) -> list:
    session.reset_exploration(x)
    out = []
    while True:
        y = session.neighbor_query(x)
        if y is EXHAUSTED:
            return out
        out.append(y)


def estimate_node_curvature(session: GraphSession, v, cfg: EstimatorConfig, black_box) -> Fraction:
    """Average of ``B(v, u)`` over sampled neighbors ``u`` of ``v``.

    With ``k >= deg(v)`` every neighbor is enumerated once and the result is
    the exact mean of ``B``; otherwise ``k`` neighbors are drawn independently
    with replacement.
    """
    deg = session.degree(v)
    if deg == 0:
        raise DomainError(f"node {v!r} is isolated")
    if cfg.k >= deg:
        return _mean(black_box(v, u) for u in _drain(session, v))
    values = []
    for _ in range(cfg.k):
        session.reset_exploration(v)
        values.append(black_box(v, session.neighbor_query(v)))
    return _mean(values)


class EdgeSampler:
    """Uniform edge sampling from known degrees plus one neighbor query per edge."""

    def __init__(self, session: GraphSession, degrees: dict, rng=None):
        self.session = session
        self.nodes = [x for x, dx in degrees.items() if dx > 0]
        self.cumulative = list(accumulate(degrees[x] for x in self.nodes))
        if not self.nodes:
            raise DomainError("graph has no edges")
        self.rng = make_rng(rng)

    @property
    def total_degree(self) -> int:
        return self.cumulative[-1]

    def sample(self) -> tuple:
        t = self.rng.randrange(self.total_degree)
        x = self.nodes[bisect_right(self.cumulative, t)]
        self.session.reset_exploration(x)
        return x, self.session.neighbor_query(x)


def sample_uniform_edge(session: GraphSession, degrees: dict, rng=None) -> tuple:
    """One edge, uniform over all edges: pick ``x`` with probability proportional to its degree."""
    return EdgeSampler(session, degrees, rng).sample()


def estimate_avg_curvature(session: GraphSession, degrees: dict, cfg: EstimatorConfig,
                           black_box, rng=None) -> Fraction:
    """Average of ``B`` over uniformly sampled edges, or over all edges if ``k >= |E|``."""
    sampler = EdgeSampler(session, degrees, cfg.seed if rng is None else rng)
    n_edges = sampler.total_degree // 2
    if cfg.k >= n_edges:
        seen = set()
        values = []
        for x in sampler.nodes:
            for y in _drain(session, x):
                key = frozenset((x, y))
                if key not in seen:
                    seen.add(key)
                    values.append(black_box(x, y))
        return _mean(values)
    return _mean(black_box(*sampler.sample()) for _ in range(cfg.k))
