import random

import networkx as nx
import numpy as np
import pytest
from scipy.optimize import linprog

from ricci import kernels
from ricci.graph import from_edge_list

from conftest import random_graph

needs_compiled = pytest.mark.skipif(kernels.compiled_kernels is None, reason="extension not built")


def lp_transport(cost, supply, demand):
    nl, nr = cost.shape
    a_eq = []
    for i in range(nl):
        row = np.zeros(nl * nr)
        row[i * nr:(i + 1) * nr] = 1
        a_eq.append(row)
    for j in range(nr):
        row = np.zeros(nl * nr)
        row[j::nr] = 1
        a_eq.append(row)
    res = linprog(cost.ravel(), A_eq=np.array(a_eq), b_eq=np.concatenate([supply, demand]),
                  bounds=(0, None), method="highs")
    return res.fun


def random_problem(rng):
    nl, nr = rng.randint(1, 7), rng.randint(1, 7)
    cost = np.array([[rng.randint(0, 3) for _ in range(nr)] for _ in range(nl)], dtype=np.int64)
    total = nl * nr * rng.randint(1, 3)
    supply = np.full(nl, total // nl, dtype=np.int64)
    demand = np.full(nr, total // nr, dtype=np.int64)
    return cost, supply, demand


def test_python_kernel_matches_lp():
    rng = random.Random(1)
    for _ in range(150):
        cost, supply, demand = random_problem(rng)
        got = kernels.python_kernels.min_cost_transport(cost, supply, demand)
        assert got == pytest.approx(lp_transport(cost, supply, demand), abs=1e-7)


@needs_compiled
def test_backends_agree_on_transport():
    rng = random.Random(2)
    for _ in range(300):
        cost, supply, demand = random_problem(rng)
        assert kernels.compiled_kernels.min_cost_transport(cost, supply, demand) == \
            kernels.python_kernels.min_cost_transport(cost, supply, demand)


@pytest.mark.parametrize("impl", ["python", "compiled"])
def test_transport_input_errors(impl):
    mod = kernels.python_kernels if impl == "python" else kernels.compiled_kernels
    if mod is None:
        pytest.skip("extension not built")
    cost = np.zeros((2, 2), dtype=np.int64)
    with pytest.raises(ValueError):
        mod.min_cost_transport(cost, np.array([1, 1]), np.array([1, 2]))
    with pytest.raises(ValueError):
        mod.min_cost_transport(cost, np.array([-1, 3]), np.array([1, 1]))
    assert mod.min_cost_transport(cost, np.array([0, 0]), np.array([0, 0])) == 0


def _weights_via(mod, g, left, right):
    n = g.number_of_nodes()
    stamp = np.full(n, -1, dtype=np.int64)
    level = np.zeros(n, dtype=np.int64)
    out, _ = mod.local_weight_matrix(g._indptr, g._indices, np.array(left, dtype=np.int64),
                                     np.array(right, dtype=np.int64), stamp, level, 0)
    return out


def test_weight_matrix_matches_networkx_distances():
    rng = random.Random(3)
    for _ in range(40):
        g = random_graph(15, 0.2, rng)
        if g.number_of_nodes() < 2:
            continue
        nxg = nx.Graph(list(g.edges()))
        left = rng.sample(range(g.number_of_nodes()), min(4, g.number_of_nodes()))
        right = rng.sample(range(g.number_of_nodes()), min(5, g.number_of_nodes()))
        want = np.array([[min(3, nx.shortest_path_length(nxg, g.name(a), g.name(b)))
                          if nx.has_path(nxg, g.name(a), g.name(b)) else 3 for b in right] for a in left])
        for mod in (kernels.python_kernels, kernels.compiled_kernels):
            if mod is not None:
                np.testing.assert_array_equal(_weights_via(mod, g, left, right), want)


def test_active_backend_is_reported():
    assert kernels.BACKEND in ("cython", "python")
    if kernels.compiled_kernels is not None:
        assert kernels.BACKEND == "cython"


def test_pure_python_switch(tmp_path):
    import subprocess
    import sys
    out = subprocess.run([sys.executable, "-c", "from ricci import kernels; print(kernels.BACKEND)"],
                         env={"RICCI_PURE_PYTHON": "1", "PATH": ""}, capture_output=True, text=True)
    assert out.stdout.strip() == "python"


def test_scratch_reuse_across_calls():
    g = from_edge_list([("a", "b"), ("b", "c"), ("c", "d"), ("d", "e")])
    first = g.distance_matrix([0], [1, 2, 3, 4])
    second = g.distance_matrix([4], [0, 1, 2, 3])
    np.testing.assert_array_equal(first, [[1, 2, 3, 3]])
    np.testing.assert_array_equal(second, [[3, 3, 2, 1]])
