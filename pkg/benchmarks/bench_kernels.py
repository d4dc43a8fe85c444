"""Compare the compiled and pure-Python kernels on the same inputs.

Usage: python3 benchmarks/bench_kernels.py [--repeat N]

Prints one line per (kernel, size) with the best wall time of each backend
and the speedup. Exits non-zero if the two backends disagree on any input.
"""

import argparse
import itertools
import random
import sys
import time
from math import lcm

import numpy as np

from ricci import _kernels_py as pure
from ricci.graph import from_edge_list

try:
    from ricci import _kernels as compiled
except ImportError:
    compiled = None


def best_of(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def transport_case(n_left, n_right, rng):
    cost = np.array([[rng.randint(0, 3) for _ in range(n_right)] for _ in range(n_left)], dtype=np.int64)
    scale = lcm(n_left, n_right)
    supply = np.full(n_left, scale // n_left, dtype=np.int64)
    demand = np.full(n_right, scale // n_right, dtype=np.int64)
    return cost, supply, demand


def weight_case(n, p, rng):
    g = from_edge_list([(a, b) for a, b in itertools.combinations(range(n), 2) if rng.random() < p])
    hub = max(range(g.number_of_nodes()), key=lambda i: len(g.neighbor_indices(i)))
    left = np.array((hub,) + g.neighbor_indices(hub), dtype=np.int64)
    right = np.array(range(g.number_of_nodes()), dtype=np.int64)
    return g, left, right


def run_weight(mod, g, left, right):
    size = g.number_of_nodes()
    stamp = np.full(size, -1, dtype=np.int64)
    level = np.zeros(size, dtype=np.int64)
    out, _ = mod.local_weight_matrix(g._indptr, g._indices, left, right, stamp, level, 0)
    return out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if compiled is None:
        print("compiled extension not built; run `pip install -e . --no-build-isolation` first")
        return 1
    rng = random.Random(0)
    ok = True
    print(f"{'kernel':<22}{'size':>12}{'cython s':>12}{'python s':>12}{'speedup':>10}")
    for nl, nr in ((5, 7), (20, 31), (60, 81), (120, 161)):
        cost, supply, demand = transport_case(nl, nr, rng)
        tc, vc = best_of(lambda: compiled.min_cost_transport(cost, supply, demand), args.repeat)
        tp, vp = best_of(lambda: pure.min_cost_transport(cost, supply, demand), args.repeat)
        ok &= vc == vp
        print(f"{'min_cost_transport':<22}{f'{nl}x{nr}':>12}{tc:>12.5f}{tp:>12.5f}{tp / tc:>10.1f}")
    for n, p in ((200, 0.05), (1000, 0.02), (3000, 0.01)):
        g, left, right = weight_case(n, p, rng)
        tc, vc = best_of(lambda: run_weight(compiled, g, left, right), args.repeat)
        tp, vp = best_of(lambda: run_weight(pure, g, left, right), args.repeat)
        ok &= bool((vc == vp).all())
        size = f"{len(left)}x{len(right)}"
        print(f"{'local_weight_matrix':<22}{size:>12}{tc:>12.5f}{tp:>12.5f}{tp / tc:>10.1f}")
    if not ok:
        print("backends disagree")
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
