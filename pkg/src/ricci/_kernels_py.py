"""Pure-Python fallback for :mod:`ricci._kernels`.

Same algorithms and tie-breaking as the compiled module; used when the
extension is not built or when ``RICCI_PURE_PYTHON`` is set.
"""

import numpy as np

INF = 1 << 60


def min_cost_transport(cost, supply, demand):
    cost = [list(map(int, row)) for row in np.asarray(cost)]
    supply = [int(s) for s in supply]
    demand = [int(d) for d in demand]
    nl = len(supply)
    nr = len(demand)
    if len(cost) != nl or any(len(row) != nr for row in cost):
        raise ValueError("supply/demand length does not match cost shape")
    if min(supply, default=0) < 0 or min(demand, default=0) < 0:
        raise ValueError("negative supply or demand")
    if sum(supply) != sum(demand):
        raise ValueError("unbalanced transportation problem")
    remaining = sum(supply)
    if remaining == 0:
        return 0

    flow = [[0] * nr for _ in range(nl)]
    rs = supply[:]
    rd = demand[:]
    pot_l = [0] * nl
    pot_r = [min(cost[i][j] for i in range(nl)) for j in range(nr)]
    pot_t = min(pot_r)

    while remaining > 0:
        dl = [-pot_l[i] if rs[i] > 0 else INF for i in range(nl)]
        dr = [INF] * nr
        par_l = [-1] * nl
        par_r = [-1] * nr
        done_l = [False] * nl
        done_r = [False] * nr

        while True:
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
                done_l[i] = True
                row = cost[i]
                base = bestd + pot_l[i]
                for j in range(nr):
                    if not done_r[j]:
                        nd = base + row[j] - pot_r[j]
                        if nd < dr[j]:
                            dr[j] = nd
                            par_r[j] = i
            else:
                j = best - nl
                done_r[j] = True
                base = bestd + pot_r[j]
                for i in range(nl):
                    if not done_l[i] and flow[i][j] > 0:
                        nd = base - cost[i][j] - pot_l[i]
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
            pot_l[i] += min(dl[i], d_t)
        for j in range(nr):
            pot_r[j] += min(dr[j], d_t)
        pot_t += d_t

        bott = rd[best]
        j = best
        while True:
            i = par_r[j]
            k = par_l[i]
            if k < 0:
                bott = min(bott, rs[i])
                break
            bott = min(bott, flow[i][k])
            j = k
        bott = min(bott, remaining)

        rd[best] -= bott
        j = best
        while True:
            i = par_r[j]
            flow[i][j] += bott
            k = par_l[i]
            if k < 0:
                rs[i] -= bott
                break
            flow[i][k] -= bott
            j = k
        remaining -= bott

    return sum(flow[i][j] * cost[i][j] for i in range(nl) for j in range(nr))


def local_weight_matrix(indptr, indices, left, right, stamp, level, stamp_base):
    indptr = indptr.tolist() if hasattr(indptr, "tolist") else list(indptr)
    indices = indices.tolist() if hasattr(indices, "tolist") else list(indices)
    right = [int(w) for w in right]
    out = np.empty((len(left), len(right)), dtype=np.int64)
    for a, x in enumerate(int(x) for x in left):
        dist = {x: 0}
        nbrs = indices[indptr[x]:indptr[x + 1]]
        for z in nbrs:
            dist[z] = 1
        for z in nbrs:
            for w in indices[indptr[z]:indptr[z + 1]]:
                if w not in dist:
                    dist[w] = 2
        out[a] = [dist.get(w, 3) for w in right]
    return out, stamp_base + len(left)
