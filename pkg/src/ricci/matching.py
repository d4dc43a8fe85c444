"""Estimating the normalized maximum-matching size of a weight-class subgraph.

Two backends share one interface. ``exact`` reveals the whole subgraph by
draining weighted neighbor queries and runs Hopcroft-Karp. ``local`` is a
constant-query estimator: it samples left nodes and asks a local oracle
whether each is matched in a near-maximum matching built in phases. Phase
``i`` augments along a random-rank greedy maximal set of disjoint
augmenting paths of length ``2i - 1``; all of it is simulated lazily around
the sampled node.
"""

from __future__ import annotations

import math
import random
import sys
from collections import deque
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError, PreconditionViolation
from .oracle import EXHAUSTED, LEFT, make_rng

BACKENDS = ("exact", "local")
DEFAULT_MAX_PHASES = 4
FAILURE_PROBABILITY = Fraction(1, 10)


@dataclass(frozen=True)
class MatchingEstimate:
    m_tilde: Fraction
    delta: Fraction
    queries_used: int

    def __post_init__(self):
        if not 0 <= self.m_tilde <= 1:
            raise ValueError(f"m_tilde {self.m_tilde} outside [0, 1]")


def _as_fraction(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(str(x))


class _Revealer:
    """Lazily reveals the chosen-weight adjacency of nodes, with a degree check.

    Drained neighbor lists and selective degrees are cached on the session per
    ``(node, weight)`` key, so several estimates can share one session: the
    oracle never repeats an answer for a key, and a second drain would come
    back empty.
    """

    def __init__(self, session, weights, d):
        self.session = session
        self.weights = tuple(sorted(weights))
        self.d = d
        cache = session.__dict__.setdefault("_matching_cache", {"adj": {}, "deg": {}})
        self._adj_cache = cache["adj"]
        self._deg_cache = cache["deg"]
        self._adj: dict = {}

    def degree(self, x, w) -> int:
        key = (x, w)
        got = self._deg_cache.get(key)
        if got is None:
            got = self._deg_cache[key] = self.session.selective_degree_query(x, w)
        return got

    def _drain(self, x, w) -> tuple:
        key = (x, w)
        got = self._adj_cache.get(key)
        if got is None:
            out = []
            while True:
                y = self.session.weighted_neighbor_query(x, w)
                if y is EXHAUSTED:
                    break
                out.append(y)
            got = self._adj_cache[key] = tuple(out)
        return got

    def __call__(self, x) -> tuple:
        got = self._adj.get(x)
        if got is not None:
            return got
        if self.d is not None:
            deg = sum(self.degree(x, w) for w in self.weights)
            if deg > self.d:
                raise PreconditionViolation(
                    f"node {x!r} has degree {deg} > {self.d} in weight classes {self.weights}"
                )
        got = self._adj[x] = tuple(y for w in self.weights for y in self._drain(x, w))
        return got


def _queries(session) -> int:
    c = session.counters
    return c.pair + c.neighbor + c.weighted_neighbor + c.selective_degree


def hopcroft_karp(left, adj) -> int:
    """Maximum matching size of a bipartite graph given left-side adjacency."""
    mate_l = {x: None for x in left}
    mate_r: dict = {}
    inf = math.inf

    while True:
        dist = {}
        q = deque()
        for x in left:
            if mate_l[x] is None:
                dist[x] = 0
                q.append(x)
        found = inf
        while q:
            x = q.popleft()
            if dist[x] >= found:
                continue
            for y in adj[x]:
                z = mate_r.get(y)
                if z is None:
                    found = min(found, dist[x] + 1)
                elif z not in dist:
                    dist[z] = dist[x] + 1
                    q.append(z)
        if found is inf:
            break

        def augment(x) -> bool:
            for y in adj[x]:
                z = mate_r.get(y)
                if z is None or (dist.get(z) == dist[x] + 1 and augment(z)):
                    mate_l[x] = y
                    mate_r[y] = x
                    return True
            dist[x] = inf
            return False

        with _deep_recursion(len(left) + 100):
            for x in left:
                if mate_l[x] is None:
                    augment(x)
    return sum(1 for y in mate_l.values() if y is not None)


@contextmanager
def _deep_recursion(limit: int):
    old = sys.getrecursionlimit()
    if limit > old:
        sys.setrecursionlimit(limit)
    try:
        yield
    finally:
        sys.setrecursionlimit(old)


def exact_backend(session, weights, d=None) -> MatchingEstimate:
    start = _queries(session)
    reveal = _Revealer(session, weights, d)
    left = session.left_nodes()
    if not left:
        return MatchingEstimate(Fraction(0), Fraction(0), 0)
    adj = {x: reveal(x) for x in left}
    size = hopcroft_karp(left, adj)
    return MatchingEstimate(Fraction(size, len(left)), Fraction(0), _queries(session) - start)


class PhaseOracle:
    """Local mate oracle for a phased near-maximum matching.

    Nodes are opaque hashable handles; left nodes carry side tag ``"L"``.
    ``mate(i, x)`` is the partner of ``x`` after ``i`` phases, or None.
    """

    def __init__(self, adjacency, rng: random.Random):
        self.adj = adjacency
        self.rng = rng
        self._mate: dict = {}
        self._through: dict = {}
        self._rank: dict = {}
        self._in_mis: dict = {}

    def rank(self, i: int, path: tuple) -> float:
        key = (i, path)
        r = self._rank.get(key)
        if r is None:
            r = self._rank[key] = self.rng.random()
        return r

    def mate(self, i: int, x):
        if i == 0:
            return None
        key = (i, x)
        if key in self._mate:
            return self._mate[key]
        out = self.mate(i - 1, x)
        for p in self.paths_through(i, x):
            if self.in_mis(i, p):
                k = p.index(x)
                out = p[k + 1] if k % 2 == 0 else p[k - 1]
                break
        self._mate[key] = out
        return out

    def paths_through(self, i: int, x) -> tuple:
        """Augmenting paths of length ``2i - 1`` w.r.t. phase ``i - 1`` that contain ``x``.

        Paths are vertex tuples ``p[0] .. p[2i-1]`` with ``p[0]`` on the left,
        so ``(p[k], p[k+1])`` is a matched edge exactly when ``k`` is odd.
        """
        key = (i, x)
        got = self._through.get(key)
        if got is not None:
            return got
        last = 2 * i - 1
        found = set()
        start = 0 if x[0] == LEFT else 1
        for pos in range(start, last + 1, 2):
            for back in self._extend(i, x, pos, -1, 0):
                for fwd in self._extend(i, x, pos, +1, last):
                    p = tuple(reversed(back)) + (x,) + fwd
                    if len(set(p)) == len(p):
                        found.add(p)
        got = self._through[key] = tuple(sorted(found, key=repr))
        return got

    def _extend(self, i: int, x, pos: int, step: int, end: int):
        """All valid continuations of a path from ``x`` at ``pos`` towards ``end``."""
        prev = i - 1
        if pos == end:
            if self.mate(prev, x) is None:
                yield ()
            return
        k = pos if step > 0 else pos - 1  # index of the edge being crossed
        if k % 2 == 1:
            y = self.mate(prev, x)
            if y is None:
                return
            for rest in self._extend(i, y, pos + step, step, end):
                yield (y,) + rest
            return
        mx = self.mate(prev, x)
        for y in self.adj(x):
            if y == mx:
                continue
            nxt = pos + step
            if nxt != end and self.mate(prev, y) is None:
                continue
            for rest in self._extend(i, y, nxt, step, end):
                yield (y,) + rest

    def in_mis(self, i: int, path: tuple) -> bool:
        key = (i, path)
        got = self._in_mis.get(key)
        if got is not None:
            return got
        r = self.rank(i, path)
        rivals = set()
        for y in path:
            rivals.update(self.paths_through(i, y))
        rivals.discard(path)
        lower = sorted((self.rank(i, q), q) for q in rivals if self.rank(i, q) < r)
        out = True
        for _, q in lower:
            if self.in_mis(i, q):
                out = False
                break
        self._in_mis[key] = out
        return out


def phase_count(delta: Fraction, max_phases: int = DEFAULT_MAX_PHASES) -> int:
    return max(1, min(math.ceil(1 / delta) + 1, max_phases))


def sample_size(delta: Fraction, failure: Fraction = FAILURE_PROBABILITY) -> int:
    """Hoeffding sample count for accuracy ``delta / 2`` at the given failure rate."""
    return math.ceil(2 * math.log(2 / failure) / float(delta) ** 2)


def local_backend(session, weights, delta, d=None, rng=None,
                  max_phases: int = DEFAULT_MAX_PHASES) -> MatchingEstimate:
    delta = _as_fraction(delta)
    if delta <= 0:
        raise DomainError("delta must be positive")
    rng = make_rng(rng)
    start = _queries(session)
    left = session.left_nodes()
    n = len(left)
    if n == 0:
        return MatchingEstimate(Fraction(0), delta, 0)
    k = sample_size(delta)
    nodes = left if k >= n else [left[rng.randrange(n)] for _ in range(k)]
    oracle = PhaseOracle(_Revealer(session, weights, d), rng)
    phases = phase_count(delta, max_phases)
    with _deep_recursion(20000):
        hits = sum(1 for x in nodes if oracle.mate(phases, x) is not None)
    m = Fraction(hits, len(nodes)) - delta / 2
    m = min(max(m, Fraction(0)), Fraction(1))
    return MatchingEstimate(m, delta, _queries(session) - start)


def estimate_matching(session, weights, delta, d=None, *, backend: str = "exact",
                      rng=None, max_phases: int = DEFAULT_MAX_PHASES) -> MatchingEstimate:
    """Estimate the maximum matching size of the chosen weight classes, divided by n.

    Args:
        session: Bipartite query session; ``n`` is its number of left nodes.
        weights: Subset of the session's weight classes.
        delta: Target accuracy; the local backend reports ``m - delta <= m_tilde <= m``
            with probability at least 9/10.
        d: Degree bound of the chosen subgraph, checked with selective degree
            queries. None skips the check.
        backend: ``"exact"`` or ``"local"``.
        rng: Seed or ``random.Random`` for the local backend.
    """
    weights = frozenset(weights)
    if not weights:
        raise DomainError("empty weight set")
    if backend == "exact":
        return exact_backend(session, weights, d)
    if backend == "local":
        return local_backend(session, weights, delta, d, rng, max_phases)
    raise DomainError(f"unknown backend {backend!r}")
