# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: dense min-cost transportation and local distance matrices.

Both functions mirror :mod:`ricci._kernels_py` exactly, including
tie-breaking, so either backend gives bit-identical integer results.
"""

import numpy as np
cimport numpy as cnp

ctypedef cnp.int64_t i64

cdef i64 INF = 1 << 60


def min_cost_transport(const i64[:, :] cost, const i64[:] supply, const i64[:] demand):
    """Minimum total cost of shipping ``supply`` to ``demand`` over ``cost``.

    Successive shortest paths with node potentials on the network
    source -> left -> right -> sink. Left-to-right arcs are uncapacitated.
    Potentials start from Bellman-Ford distances, which on this three-layer
    network reduce to a column minimum.
    """
    cdef Py_ssize_t nl = cost.shape[0], nr = cost.shape[1]
    cdef Py_ssize_t i, j, best, k
    cdef i64 total_s = 0, total_d = 0, remaining, bott, d_t, nd, bestd, cand, res

    if supply.shape[0] != nl or demand.shape[0] != nr:
        raise ValueError("supply/demand length does not match cost shape")
    for i in range(nl):
        if supply[i] < 0:
            raise ValueError("negative supply")
        total_s += supply[i]
    for j in range(nr):
        if demand[j] < 0:
            raise ValueError("negative demand")
        total_d += demand[j]
    if total_s != total_d:
        raise ValueError("unbalanced transportation problem")
    if total_s == 0:
        return 0

    flow_arr = np.zeros((nl, nr), dtype=np.int64)
    cdef i64[:, :] flow = flow_arr
    rs_arr = np.array(supply, dtype=np.int64)
    rd_arr = np.array(demand, dtype=np.int64)
    cdef i64[:] rs = rs_arr
    cdef i64[:] rd = rd_arr
    pot_l_arr = np.zeros(nl, dtype=np.int64)
    pot_r_arr = np.zeros(nr, dtype=np.int64)
    cdef i64[:] pot_l = pot_l_arr
    cdef i64[:] pot_r = pot_r_arr
    cdef i64 pot_t = 0
    dl_arr = np.empty(nl, dtype=np.int64)
    dr_arr = np.empty(nr, dtype=np.int64)
    cdef i64[:] dl = dl_arr
    cdef i64[:] dr = dr_arr
    par_l_arr = np.empty(nl, dtype=np.int64)
    par_r_arr = np.empty(nr, dtype=np.int64)
    cdef i64[:] par_l = par_l_arr
    cdef i64[:] par_r = par_r_arr
    done_l_arr = np.empty(nl, dtype=np.uint8)
    done_r_arr = np.empty(nr, dtype=np.uint8)
    cdef unsigned char[:] done_l = done_l_arr
    cdef unsigned char[:] done_r = done_r_arr

    # Bellman-Ford initial potentials (all arc costs are non-negative).
    for j in range(nr):
        bestd = INF
        for i in range(nl):
            if cost[i, j] < bestd:
                bestd = cost[i, j]
        pot_r[j] = bestd
    pot_t = INF
    for j in range(nr):
        if pot_r[j] < pot_t:
            pot_t = pot_r[j]

    remaining = total_s
    while remaining > 0:
        for i in range(nl):
            done_l[i] = 0
            par_l[i] = -1
            dl[i] = -pot_l[i] if rs[i] > 0 else INF
        for j in range(nr):
            done_r[j] = 0
            par_r[j] = -1
            dr[j] = INF

        while True:
            # pick the unfinished node of least reduced distance; left first on ties
            bestd = INF
            best = -1
            for i in range(nl):
                if not done_l[i] and dl[i] < bestd:
                    bestd = dl[i]
                    best = i
            for j in range(nr):
                if not done_r[j] and dr[j] < bestd:
                    bestd = dr[j]
                    best = nl + j
            if best < 0:
                break
            if best < nl:
                i = best
                done_l[i] = 1
                for j in range(nr):
                    if not done_r[j]:
                        nd = bestd + cost[i, j] + pot_l[i] - pot_r[j]
                        if nd < dr[j]:
                            dr[j] = nd
                            par_r[j] = i
            else:
                j = best - nl
                done_r[j] = 1
                for i in range(nl):
                    if not done_l[i] and flow[i, j] > 0:
                        nd = bestd - cost[i, j] + pot_r[j] - pot_l[i]
                        if nd < dl[i]:
                            dl[i] = nd
                            par_l[i] = j

        d_t = INF
        best = -1
        for j in range(nr):
            if rd[j] > 0 and dr[j] < INF:
                cand = dr[j] + pot_r[j] - pot_t
                if cand < d_t:
                    d_t = cand
                    best = j
        if best < 0:
            raise RuntimeError("no augmenting path in a balanced problem")

        for i in range(nl):
            pot_l[i] += dl[i] if dl[i] < d_t else d_t
        for j in range(nr):
            pot_r[j] += dr[j] if dr[j] < d_t else d_t
        pot_t += d_t

        # bottleneck along sink <- best <- ... <- source
        bott = rd[best]
        j = best
        while True:
            i = par_r[j]
            k = par_l[i]
            if k < 0:
                if rs[i] < bott:
                    bott = rs[i]
                break
            if flow[i, k] < bott:
                bott = flow[i, k]
            j = k
        if remaining < bott:
            bott = remaining

        rd[best] -= bott
        j = best
        while True:
            i = par_r[j]
            flow[i, j] += bott
            k = par_l[i]
            if k < 0:
                rs[i] -= bott
                break
            flow[i, k] -= bott
            j = k
        remaining -= bott

    res = 0
    for i in range(nl):
        for j in range(nr):
            res += flow[i, j] * cost[i, j]
    return res


def local_weight_matrix(const i64[:] indptr, const i64[:] indices,
                        const i64[:] left, const i64[:] right,
                        i64[:] stamp, i64[:] level, i64 stamp_base):
    """Distances capped at 3 from each ``left`` node to each ``right`` node.

    A breadth-first search from every left node, truncated after depth 2;
    anything not reached is assigned 3. ``stamp``/``level`` are caller-owned
    scratch arrays of size ``|V|``; ``stamp_base`` must exceed every value
    already stored in ``stamp``. Returns the matrix and the next free stamp.
    """
    cdef Py_ssize_t nl = left.shape[0], nr = right.shape[0]
    cdef Py_ssize_t a, b, p, q
    cdef i64 x, z, w, st
    out_arr = np.empty((nl, nr), dtype=np.int64)
    cdef i64[:, :] out = out_arr

    for a in range(nl):
        st = stamp_base + a
        x = left[a]
        stamp[x] = st
        level[x] = 0
        for p in range(indptr[x], indptr[x + 1]):
            z = indices[p]
            stamp[z] = st
            level[z] = 1
        for p in range(indptr[x], indptr[x + 1]):
            z = indices[p]
            for q in range(indptr[z], indptr[z + 1]):
                w = indices[q]
                if stamp[w] != st:
                    stamp[w] = st
                    level[w] = 2
        for b in range(nr):
            w = right[b]
            out[a, b] = level[w] if stamp[w] == st else 3
    return out_arr, stamp_base + nl
