"""Constant-query curvature approximation for a single edge.

For equal degrees the curvature is ``1 - M / (1 + deg v)`` where ``M`` is the
minimum perfect matching weight of the reduced instance with weights in
{1, 2, 3}. ``M / n`` is estimated from the normalized maximum matchings of
the weight-1, weight-2 and weight-{1,2} subgraphs, always from above, so the
curvature estimate is biased downwards.

Unequal degrees go through :class:`PaddedSession`, which answers queries on
the padded square instance on the fly from queries on the real gadget, and
:class:`RestrictedSession`, which removes the zero-cost diagonal of shared
nodes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import DomainError, UnsupportedRegime
from .graph import Graph, local_bipartite, oriented, overlap_stats
from .matching import estimate_matching
from .oracle import EXHAUSTED, LEFT, RIGHT, BipartiteSession, QueryCounters, make_rng
from .reduction import copy_label, padding_parameters, special_label

VARIANTS = ("a", "b")


@dataclass(frozen=True)
class ApproxCurvature:
    """Lower-biased curvature estimate: ``C - guarantee <= estimate <= C`` on success."""

    estimate: Fraction
    guarantee: Fraction
    queries: dict
    side: str = "lower_biased"
    delta_hat: Fraction | None = None
    case: str | None = None
    estimates: dict = field(default_factory=dict)

    def __post_init__(self):
        if not -2 <= self.estimate <= 1:
            raise ValueError(f"estimate {self.estimate} outside [-2, 1]")


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(str(x))


def select_delta(m1, m2, m12, delta) -> tuple[Fraction, str]:
    """Pick the matching-cost estimate from the three matching estimates.

    Returns ``(Delta, rule)`` where ``rule`` names the branch taken:
    ``few_light`` (almost no weight-1 matching), ``light`` (weight-1 bound),
    ``light_union_close`` (union estimate close to twice the weight-1 one) or
    ``union``. Every threshold compares the estimates themselves.
    """
    m1, m2, m12, delta = map(_frac, (m1, m2, m12, delta))
    if m1 <= Fraction(1, 4):
        return 3 - m2, "few_light"
    if m2 <= Fraction(1, 2) or m1 >= Fraction(1, 2) or m12 <= Fraction(3, 4):
        return 3 - 2 * m1, "light"
    if m12 <= 2 * m1 + delta:
        return 3 - 2 * m1, "light_union_close"
    return 3 - m12, "union"


def _real_counters(session) -> QueryCounters:
    inner = getattr(session, "real_counters", None)
    return inner() if inner is not None else session.counters.snapshot()


def _curvature_from_delta(delta_hat: Fraction, n: int, deg_v: int) -> Fraction:
    return 1 - delta_hat * n / (1 + deg_v)


def _resolve_deg_v(session, deg_v) -> int:
    n = len(session.left_nodes())
    if deg_v is None:
        return n + 1
    if deg_v < n + 1:
        raise DomainError(f"deg(v)={deg_v} is too small for a reduced instance of size {n}")
    return deg_v


def approx_equal_a(session, eps, d, *, deg_v=None, backend="exact", rng=None) -> ApproxCurvature:
    """Additive ``(1 + eps)`` estimate when the weight-1 subgraph has degree <= d.

    Args:
        session: Query session over the reduced instance.
        eps: Accuracy parameter.
        d: Degree bound of the weight-1 subgraph.
        deg_v: Degree of the endpoints; defaults to ``n + 1`` (no shared neighbors).
        backend: Matching estimator backend.
        rng: Seed or ``random.Random`` for the estimator.
    """
    eps = _frac(eps)
    if eps <= 0:
        raise DomainError("eps must be positive")
    deg_v = _resolve_deg_v(session, deg_v)
    n = len(session.left_nodes())
    rng = make_rng(rng)
    before = _real_counters(session)
    delta = eps / 2
    m1 = estimate_matching(session, {1}, delta, d, backend=backend, rng=rng).m_tilde
    delta_hat = 3 - 2 * m1
    return ApproxCurvature(
        estimate=_curvature_from_delta(delta_hat, n, deg_v),
        guarantee=1 + eps,
        queries=(_real_counters(session) - before).as_dict(),
        delta_hat=delta_hat,
        estimates={"m1": m1},
    )


def approx_equal_b(session, eps, d, *, deg_v=None, backend="exact", rng=None) -> ApproxCurvature:
    """Additive ``(1/2 + eps)`` estimate when weight-1 and weight-2 degrees are <= d.

    Arguments are as for :func:`approx_equal_a`.
    """
    eps = _frac(eps)
    if eps <= 0:
        raise DomainError("eps must be positive")
    deg_v = _resolve_deg_v(session, deg_v)
    n = len(session.left_nodes())
    rng = make_rng(rng)
    before = _real_counters(session)
    delta = eps / 5
    m1 = estimate_matching(session, {1}, delta, d, backend=backend, rng=rng).m_tilde
    m2 = estimate_matching(session, {2}, delta, d, backend=backend, rng=rng).m_tilde
    m12 = estimate_matching(session, {1, 2}, delta, 2 * d, backend=backend, rng=rng).m_tilde
    delta_hat, case = select_delta(m1, m2, m12, delta)
    return ApproxCurvature(
        estimate=_curvature_from_delta(delta_hat, n, deg_v),
        guarantee=Fraction(1, 2) + eps,
        queries=(_real_counters(session) - before).as_dict(),
        delta_hat=delta_hat,
        case=case,
        estimates={"m1": m1, "m2": m2, "m12": m12},
    )


class _OrderedSet(dict):
    """Insertion-ordered set with indexable snapshots."""

    def add(self, x):
        self[x] = None


@dataclass
class PadSimState:
    """Bookkeeping of the padded-instance simulation.

    ``sigma[(x, s)]`` is the real count of weight-``s`` neighbors of left node
    ``x``; ``t_sets[(x, s)][j]`` holds answers already given to copy ``j`` and
    ``t_union[(x, s)]`` their union, which is also exactly the set of answers
    the real oracle has produced for ``(x, s)``. For right nodes ``nu1`` is the
    real count, ``revealed`` the real left nodes seen so far and ``t_kappa``
    the padded labels already returned. ``special_returned`` tracks answers
    per special node.
    """

    sigma: dict = field(default_factory=dict)
    t_sets: dict = field(default_factory=dict)
    t_union: dict = field(default_factory=dict)
    nu1: dict = field(default_factory=dict)
    revealed: dict = field(default_factory=dict)
    t_kappa: dict = field(default_factory=dict)
    special_returned: dict = field(default_factory=dict)

    def kappa(self, y, s) -> int:
        return len(self.t_kappa.get((y, s), ()))


class PaddedSession:
    """Virtual session over the padded instance, driven by a real gadget session.

    Each left node ``x`` of the real session becomes copies ``x^1 .. x^a`` and
    ``b`` special nodes ``r_1 .. r_b`` at weight 3 from every right node are
    added. Every virtual query issues at most one real query of the same type
    plus at most one real selective degree query, and every answer has the
    distribution the padded instance itself would produce.
    """

    def __init__(self, real: BipartiteSession, a: int, b: int, rng=None):
        n_left, n_right = real.n_left, real.n_right
        if a < 1 or b < 0 or a * n_left + b != n_right or b >= n_left:
            raise DomainError(
                f"a={a}, b={b} do not satisfy a*{n_left} + b = {n_right} with 0 <= b < {n_left}"
            )
        self.real = real
        self.a = a
        self.b = b
        self.rng = make_rng(rng) if rng is not None else real.rng
        self.weights = real.weights
        self.counters = QueryCounters()
        self.state = PadSimState()
        self._labels: dict[str, tuple] = {}
        for x in real.left_nodes():
            for j in range(1, a + 1):
                self._labels[copy_label(x[1], j)] = (x, j)
        for i in range(1, b + 1):
            self._labels[special_label(i)] = (None, i)
        self._right = real.right_nodes()
        self._right_set = set(self._right)

    def real_counters(self) -> QueryCounters:
        return self.real.counters.snapshot()

    def left_nodes(self) -> list[tuple[str, str]]:
        return [(LEFT, lab) for lab in self._labels]

    def right_nodes(self) -> list[tuple[str, str]]:
        return list(self._right)

    @property
    def n_left(self) -> int:
        return len(self._labels)

    @property
    def n_right(self) -> int:
        return len(self._right)

    def _left(self, node) -> tuple:
        if not (isinstance(node, tuple) and len(node) == 2 and node[0] == LEFT):
            raise DomainError(f"not a left node: {node!r}")
        got = self._labels.get(node[1])
        if got is None:
            raise DomainError(f"unknown node {node!r}")
        return got

    def _check_right(self, node) -> None:
        if node not in self._right_set:
            raise DomainError(f"unknown right node {node!r}")

    def _check_weight(self, s) -> None:
        if s not in self.weights:
            raise DomainError(f"weight class {s!r} not in {sorted(self.weights)}")

    def pair_query(self, x, y) -> int:
        origin, _ = self._left(x)
        self._check_right(y)
        self.counters.pair += 1
        if origin is None:
            return 3
        return self.real.pair_query(origin, y)

    def weight_between(self, x, y) -> int:
        origin, _ = self._left(x)
        self._check_right(y)
        return 3 if origin is None else self.real.weight_between(origin, y)

    def _sigma(self, x, s) -> int:
        key = (x, s)
        got = self.state.sigma.get(key)
        if got is None:
            got = self.state.sigma[key] = self.real.selective_degree_query(x, s)
        return got

    def _nu1(self, y, s) -> int:
        key = (y, s)
        got = self.state.nu1.get(key)
        if got is None:
            got = self.state.nu1[key] = self.real.selective_degree_query(y, s)
        return got

    def selective_degree_query(self, node, s: int) -> int:
        self._check_weight(s)
        if node in self._right_set:
            self.counters.selective_degree += 1
            return self.a * self._nu1(node, s) + (self.b if s == 3 else 0)
        origin, _ = self._left(node)
        self.counters.selective_degree += 1
        if origin is None:
            return self.n_right if s == 3 else 0
        return self._sigma(origin, s)

    def weighted_neighbor_query(self, node, s: int):
        self._check_weight(s)
        if node in self._right_set:
            self.counters.weighted_neighbor += 1
            return self._from_right(node, s)
        origin, j = self._left(node)
        self.counters.weighted_neighbor += 1
        if origin is None:
            return self._from_special(j, s)
        return self._from_copy(origin, j, s)

    def _from_copy(self, x, j: int, s: int):
        st = self.state
        sigma = self._sigma(x, s)
        union = st.t_union.setdefault((x, s), _OrderedSet())
        mine = st.t_sets.setdefault((x, s), {}).setdefault(j, _OrderedSet())
        lam_copy = sigma - len(mine)  # unexplored targets of this copy
        if lam_copy == 0:
            return EXHAUSTED
        lam_real = sigma - len(union)  # targets the real oracle has not produced yet
        cached = [y for y in union if y not in mine]
        assert lam_real + len(cached) == lam_copy
        # One draw decides between a fresh real answer (weight lam_real) and
        # each already-known target (weight 1), so the answer is uniform over
        # all unexplored targets of this copy.
        if not cached:
            k = 0
        elif lam_real == 0 and len(cached) == 1:
            k = 0
        else:
            k = self.rng.randrange(lam_copy)
        if k < lam_real:
            y = self.real.weighted_neighbor_query(x, s)
            assert y is not EXHAUSTED
            union.add(y)
        else:
            y = cached[k - lam_real]
        mine.add(y)
        return y

    def _from_special(self, i: int, s: int):
        returned = self.state.special_returned.setdefault(i, _OrderedSet())
        if s != 3 or len(returned) == self.n_right:
            return EXHAUSTED
        pool = [y for y in self._right if y not in returned]
        y = pool[self.rng.randrange(len(pool))] if len(pool) > 1 else pool[0]
        returned.add(y)
        return y

    def _from_right(self, y, s: int):
        st = self.state
        a = self.a
        nu1 = self._nu1(y, s)
        nu2 = self.b if s == 3 else 0
        revealed = st.revealed.setdefault((y, s), [])
        given = st.t_kappa.setdefault((y, s), _OrderedSet())
        lam = a * nu1 + nu2 - len(given)
        if lam == 0:
            return EXHAUSTED
        phi = nu1 - len(revealed)  # real neighbors not yet produced by the real oracle
        known = [(LEFT, copy_label(x[1], j)) for x in revealed for j in range(1, a + 1)]
        known += [(LEFT, special_label(i)) for i in range(1, nu2 + 1)]
        known = [z for z in known if z not in given]
        if Fraction(a * phi, lam) + Fraction(len(known), lam) != 1:
            raise AssertionError("mixing probabilities do not sum to 1")
        # A fresh real answer has weight a * phi (any of its a copies); each
        # known unreturned label has weight 1.
        if not known:
            k = self.rng.randrange(lam) if a > 1 else 0
        else:
            k = self.rng.randrange(lam)
        if k < a * phi:
            x = self.real.weighted_neighbor_query(y, s)
            assert x is not EXHAUSTED
            revealed.append(x)
            z = (LEFT, copy_label(x[1], k % a + 1))
        else:
            z = known[k - a * phi]
        given.add(z)
        return z


def make_padded_session(real: BipartiteSession, a: int, b: int, rng=None) -> PaddedSession:
    return PaddedSession(real, a, b, rng)


class RestrictedSession:
    """View of a square session without a set of left and right nodes.

    Used to drop the shared nodes of the padded gadget (copy 1 of every node
    on both sides, matched to itself at cost 0). Neighbor queries skip removed
    nodes by re-querying; selective degrees subtract removed nodes found with
    pair queries.
    """

    def __init__(self, inner, drop_left, drop_right):
        self.inner = inner
        self.weights = inner.weights
        self._drop_left = frozenset(drop_left)
        self._drop_right = frozenset(drop_right)
        self._left = [x for x in inner.left_nodes() if x not in self._drop_left]
        self._right = [y for y in inner.right_nodes() if y not in self._drop_right]
        self._left_set = set(self._left)
        self._right_set = set(self._right)
        self._excluded_count: dict = {}

    @property
    def counters(self) -> QueryCounters:
        return self.inner.counters

    def real_counters(self) -> QueryCounters:
        return _real_counters(self.inner)

    def left_nodes(self):
        return list(self._left)

    def right_nodes(self):
        return list(self._right)

    def _check(self, node) -> bool:
        if node in self._left_set:
            return True
        if node in self._right_set:
            return False
        raise DomainError(f"node {node!r} is not in the restricted view")

    def pair_query(self, x, y) -> int:
        if not (x in self._left_set and y in self._right_set):
            raise DomainError("expected a left node and a right node of the view")
        return self.inner.pair_query(x, y)

    def weighted_neighbor_query(self, x, s: int):
        drop = self._drop_right if self._check(x) else self._drop_left
        while True:
            z = self.inner.weighted_neighbor_query(x, s)
            if z is EXHAUSTED or z not in drop:
                return z

    def selective_degree_query(self, x, s: int) -> int:
        is_left = self._check(x)
        full = self.inner.selective_degree_query(x, s)
        key = (x, s)
        excluded = self._excluded_count.get(key)
        if excluded is None:
            if is_left:
                excluded = sum(1 for y in self._drop_right if self.inner.pair_query(x, y) == s)
            else:
                excluded = sum(1 for z in self._drop_left if self.inner.pair_query(z, x) == s)
            self._excluded_count[key] = excluded
        return full - excluded


def _check_regime(deg_u: int, deg_v: int, delta: Fraction) -> None:
    if (deg_v + 1) % (deg_u + 1) == 0:
        return
    if deg_u >= (1 - delta / 3) * deg_v:
        return
    raise UnsupportedRegime(
        f"deg(u)={deg_u}, deg(v)={deg_v}: need deg(v)+1 divisible by deg(u)+1 "
        f"or deg(u) >= (1 - delta/3) deg(v)"
    )


def approx_unequal(real: BipartiteSession, eps, delta, d, *, shared=None, variant="b",
                   backend="exact", rng=None) -> ApproxCurvature:
    """Curvature estimate for an edge with ``deg(u) <= deg(v)`` through padding.

    Args:
        real: Session over the edge gadget (left ``u`` and its neighbors,
            right ``v`` and its neighbors, weight class 0 allowed).
        eps: Accuracy of the equal-degree algorithm.
        delta: Padding slack; the regime must satisfy ``deg(u) >= (1 - delta/3) deg(v)``
            unless ``deg(v) + 1`` is a multiple of ``deg(u) + 1``.
        d: Degree bound of the weight-1 and weight-2 classes of the real
            gadget; the padded instance is checked against ``a * d``.
        shared: Labels present on both sides (``u``, ``v`` and common
            neighbors). Known for free from the two neighbor lists; computed
            from the session labels when omitted.
        variant: ``"a"`` or ``"b"``.
        backend: Matching estimator backend.
        rng: Seed or ``random.Random``.
    """
    eps, delta = _frac(eps), _frac(delta)
    if variant not in VARIANTS:
        raise DomainError(f"unknown variant {variant!r}")
    if delta <= 0:
        raise DomainError("delta must be positive")
    deg_u, deg_v = real.n_left - 1, real.n_right - 1
    if deg_u > deg_v:
        raise DomainError("orient the edge so that deg(u) <= deg(v)")
    _check_regime(deg_u, deg_v, delta)
    rng = make_rng(rng)
    a, b = padding_parameters(deg_u, deg_v)
    if shared is None:
        right_labels = {y for _, y in real.right_nodes()}
        shared = [x for _, x in real.left_nodes() if x in right_labels]
    padded = PaddedSession(real, a, b, rng)
    view = RestrictedSession(
        padded,
        drop_left=[(LEFT, copy_label(x, 1)) for x in shared],
        drop_right=[(RIGHT, x) for x in shared],
    )
    fn = approx_equal_a if variant == "a" else approx_equal_b
    inner = fn(view, eps, a * d, deg_v=deg_v, backend=backend, rng=rng)
    return ApproxCurvature(
        estimate=inner.estimate,
        guarantee=inner.guarantee + delta,
        queries=inner.queries,
        delta_hat=inner.delta_hat,
        case=inner.case,
        estimates=inner.estimates,
    )


def approx_edge(g: Graph, u, v, *, variant="b", eps=Fraction(1, 10), delta=Fraction(1, 10),
                d=3, backend="exact", rng=None, force_padding=False) -> ApproxCurvature:
    """Approximate ``C(u, v)`` of a graph edge through the query algorithms.

    The neighbor lists of ``u`` and ``v`` are read directly (free); only
    queries on the bipartite instance are counted.
    """
    from .emd import reduced_instance

    rng = make_rng(rng)
    u, v = oriented(g, u, v)
    if g.degree(u) == g.degree(v) and not force_padding:
        session = BipartiteSession.from_instance(reduced_instance(g, u, v), rng)
        fn = approx_equal_a if variant == "a" else approx_equal_b
        return fn(session, eps, d, deg_v=g.degree(v), backend=backend, rng=rng)
    shared = [u, v] + sorted(set(g.neighbors(u)) & set(g.neighbors(v)))
    assert overlap_stats(g, u, v).ell == len(shared) - 2
    session = BipartiteSession.from_local_bipartite(local_bipartite(g, u, v), rng)
    return approx_unequal(session, eps, delta, d, shared=shared, variant=variant,
                          backend=backend, rng=rng)
