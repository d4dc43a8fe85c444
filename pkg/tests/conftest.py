import itertools
import random

import pytest

from ricci.graph import from_edge_list

ACCEPTANCE_LINES: list[str] = []


def random_graph(n, p, rng):
    """Erdos-Renyi G(n, p) on nodes 0..n-1; isolated nodes are dropped."""
    return from_edge_list([(a, b) for a, b in itertools.combinations(range(n), 2) if rng.random() < p])


def bounded_er_graph(rng, n_max=40, max_degree=4):
    """Random G(n, p) with at least one edge and max degree <= max_degree (rejection)."""
    while True:
        n = rng.randint(4, n_max)
        p = rng.uniform(1.0, 3.0) / n
        pairs = [(a, b) for a, b in itertools.combinations(range(n), 2) if rng.random() < p]
        if not pairs:
            continue
        deg = [0] * n
        for a, b in pairs:
            deg[a] += 1
            deg[b] += 1
        if max(deg) <= max_degree:
            return from_edge_list(pairs)


def graph_of(text):
    return from_edge_list(tuple(line.split()) for line in text.strip().splitlines())


@pytest.fixture
def rng():
    return random.Random(12345)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
