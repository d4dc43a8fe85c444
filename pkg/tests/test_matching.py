import itertools
import random
import statistics
from fractions import Fraction

import pytest

from ricci.adversarial import gen_all_heavy, gen_bounded_random, gen_permutation
from ricci.emd import MpmctInstance
from ricci.errors import DomainError, PreconditionViolation
from ricci.matching import (
    MatchingEstimate,
    estimate_matching,
    hopcroft_karp,
    phase_count,
    sample_size,
)
from ricci.oracle import BipartiteSession


def session(h, seed=0):
    return BipartiteSession.from_instance(h, rng=seed)


def brute_matching(w, classes):
    n = len(w)
    return max(sum(1 for i in range(n) if w[i][p[i]] in classes) for p in itertools.permutations(range(n)))


def test_empty_subgraph_gives_zero():
    for backend in ("exact", "local"):
        est = estimate_matching(session(gen_all_heavy(5)), {1, 2}, Fraction(1, 5), 3,
                                backend=backend, rng=1)
        assert est.m_tilde == 0


def test_diagonal_exact_is_one():
    est = estimate_matching(session(gen_permutation(4, [1, 2, 3, 4])), {1}, Fraction(1, 10), 1)
    assert est.m_tilde == 1
    assert est.delta == 0
    assert est.queries_used >= 4


def test_exact_matches_brute_force():
    rng = random.Random(41)
    for _ in range(60):
        n = rng.randint(1, 6)
        w = [[rng.randint(1, 3) for _ in range(n)] for _ in range(n)]
        for classes in ({1}, {2}, {1, 2}):
            est = estimate_matching(session(MpmctInstance.from_matrix(w)), classes, Fraction(1, 5))
            assert est.m_tilde == Fraction(brute_matching(w, classes), n)


def test_hopcroft_karp_on_path():
    adj = {"a": ["x"], "b": ["x", "y"], "c": ["y", "z"]}
    assert hopcroft_karp(["a", "b", "c"], adj) == 3


def test_degree_bound_violation_detected():
    h = gen_bounded_random(20, 3, random.Random(1), keep=1.0)
    with pytest.raises(PreconditionViolation):
        estimate_matching(session(h), {1}, Fraction(1, 5), 1)
    with pytest.raises(PreconditionViolation):
        estimate_matching(session(h), {1}, Fraction(1, 5), 1, backend="local", rng=0)


def test_only_neighbor_and_degree_queries():
    s = session(gen_bounded_random(15, 2, random.Random(2)))
    estimate_matching(s, {1, 2}, Fraction(1, 4), 4, backend="local", rng=3)
    assert s.counters.pair == 0 and s.counters.neighbor == 0


def test_local_within_delta_of_exact():
    delta = Fraction(1, 5)
    good = 0
    for t in range(200):
        rng = random.Random(t)
        h = gen_bounded_random(rng.randint(20, 60), 3, rng)
        exact = estimate_matching(session(h, t), {1}, delta, 3).m_tilde
        local = estimate_matching(session(h, t), {1}, delta, 3, backend="local", rng=t).m_tilde
        assert local <= exact  # all nodes evaluated here, so one-sidedness is exact
        good += exact - local <= delta
    assert good >= 180


def test_local_query_count_does_not_grow_with_n():
    delta, d = Fraction(2, 3), 2
    means = []
    for n in (50, 100, 200):
        counts = []
        for t in range(40):
            rng = random.Random(1000 * n + t)
            h = gen_bounded_random(n, d, rng)
            counts.append(estimate_matching(session(h, t), {1}, delta, d, backend="local",
                                            rng=t).queries_used)
        means.append(statistics.fmean(counts))
    assert sample_size(delta) < 50
    assert max(means) / min(means) <= 1.2


def test_phase_and_sample_constants():
    assert phase_count(Fraction(1, 2)) == 3
    assert phase_count(Fraction(1, 100)) == 4
    assert sample_size(Fraction(1, 2)) == 24


def test_estimate_validation():
    with pytest.raises(ValueError):
        MatchingEstimate(Fraction(3, 2), Fraction(0), 0)
    with pytest.raises(DomainError):
        estimate_matching(session(gen_all_heavy(2)), {1}, Fraction(1, 5), backend="nope")
    with pytest.raises(DomainError):
        estimate_matching(session(gen_all_heavy(2)), set(), Fraction(1, 5))


def test_local_is_seed_deterministic():
    h = gen_bounded_random(80, 2, random.Random(5))
    runs = [estimate_matching(session(h, 1), {1}, Fraction(1, 2), 2, backend="local", rng=9)
            for _ in range(2)]
    assert runs[0] == runs[1]
