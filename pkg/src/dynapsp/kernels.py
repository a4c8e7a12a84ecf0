"""Numba kernels for the weight arithmetic and single-source computations.

Weights are exact integers carried as two int64 limbs ``(m, t)`` meaning the
value ``m * modulus + t`` with ``0 <= t < modulus``.  With the tie-breaking
perturbation active, ``modulus = n**10``, ``m`` is the raw weight part and
``t`` accumulates the ``n**9 + lambda(e)`` terms; with it inactive,
``modulus = 1`` and ``t`` is identically zero.  Every comparison is
lexicographic on ``(m, t)``, which equals comparison of the exact values.
Infinity is ``m >= INF_M``.
"""

from __future__ import annotations

import numpy as np
from numba import njit

INF_M = np.int64(1) << np.int64(62)
I64 = np.int64


@njit(cache=True, inline="always")
def w_is_inf(m):
    return m >= INF_M


@njit(cache=True, inline="always")
def w_lt(m1, t1, m2, t2):
    if m1 != m2:
        return m1 < m2
    return t1 < t2


@njit(cache=True, inline="always")
def w_add(m1, t1, m2, t2, modulus):
    # inf absorbs; finite sums stay far below INF_M by the W_max contract
    if m1 >= INF_M or m2 >= INF_M:
        return INF_M, I64(0)
    m = m1 + m2
    t = t1 + t2
    if t >= modulus:
        t -= modulus
        m += 1
    return m, t


@njit(cache=True, inline="always")
def w_sub(m1, t1, m2, t2, modulus):
    if m1 >= INF_M:
        return INF_M, I64(0)
    m = m1 - m2
    t = t1 - t2
    if t < 0:
        t += modulus
        m -= 1
    return m, t


@njit(cache=True)
def bf_potentials(wm, wt, alive, modulus):
    """Bellman-Ford from a virtual source with 0-weight edges to every vertex.

    Returns (pm, pt, ok); ok is False when the n-th round still relaxes,
    i.e. a negative cycle is reachable.
    """
    n = wm.shape[0]
    pm = np.zeros(n, dtype=np.int64)
    pt = np.zeros(n, dtype=np.int64)
    n_alive = 0
    for v in range(n):
        if alive[v]:
            n_alive += 1
    changed = False
    for rnd in range(n_alive + 1):
        changed = False
        for u in range(n):
            if not alive[u] or pm[u] >= INF_M:
                continue
            for v in range(n):
                if v == u or not alive[v]:
                    continue
                if wm[u, v] >= INF_M:
                    continue
                cm, ct = w_add(pm[u], pt[u], wm[u, v], wt[u, v], modulus)
                if w_lt(cm, ct, pm[v], pt[v]):
                    pm[v] = cm
                    pt[v] = ct
                    changed = True
        if not changed:
            break
    return pm, pt, not changed


@njit(cache=True)
def reweight(wm, wt, pm, pt, alive, modulus):
    """Shift edge weights by potentials: w'(u,v) = w(u,v) + p(u) - p(v)."""
    n = wm.shape[0]
    em = np.full((n, n), INF_M, dtype=np.int64)
    et = np.zeros((n, n), dtype=np.int64)
    for u in range(n):
        if not alive[u]:
            continue
        for v in range(n):
            if u == v or not alive[v] or wm[u, v] >= INF_M:
                continue
            m, t = w_add(wm[u, v], wt[u, v], pm[u], pt[u], modulus)
            m, t = w_sub(m, t, pm[v], pt[v], modulus)
            em[u, v] = m
            et[u, v] = t
    return em, et


@njit(cache=True)
def dijkstra(em, et, alive, src, modulus):
    """Array Dijkstra over non-negative pair weights.

    Returns (dm, dt, parent, depth); unreachable vertices keep dm = INF_M,
    parent = -1.  Extraction ties break on (weight, slot) so the tree shape
    is deterministic.
    """
    n = em.shape[0]
    dm = np.full(n, INF_M, dtype=np.int64)
    dt = np.zeros(n, dtype=np.int64)
    parent = np.full(n, -1, dtype=np.int32)
    depth = np.full(n, -1, dtype=np.int32)
    done = np.zeros(n, dtype=np.bool_)
    if not alive[src]:
        return dm, dt, parent, depth
    dm[src] = 0
    depth[src] = 0
    for _ in range(n):
        u = -1
        bm = INF_M
        bt = I64(0)
        for v in range(n):
            if alive[v] and not done[v] and dm[v] < INF_M:
                if u == -1 or w_lt(dm[v], dt[v], bm, bt):
                    u = v
                    bm = dm[v]
                    bt = dt[v]
        if u == -1:
            break
        done[u] = True
        for v in range(n):
            if done[v] or not alive[v] or em[u, v] >= INF_M:
                continue
            cm, ct = w_add(dm[u], dt[u], em[u, v], et[u, v], modulus)
            if w_lt(cm, ct, dm[v], dt[v]):
                dm[v] = cm
                dt[v] = ct
                parent[v] = u
                depth[v] = depth[u] + 1
    return dm, dt, parent, depth


@njit(cache=True)
def sshdp(em, et, alive, src, hopcap, modulus):
    """Hop-capped Dijkstra variant keeping, per target, the tentative path and
    preferring fewer hops on equal weight.

    Returns (dm, dt, parent, depth).  A settled vertex u only relaxes its
    out-edges while its path has fewer than ``hopcap`` edges.
    """
    n = em.shape[0]
    dm = np.full(n, INF_M, dtype=np.int64)
    dt = np.zeros(n, dtype=np.int64)
    parent = np.full(n, -1, dtype=np.int32)
    depth = np.full(n, -1, dtype=np.int32)
    done = np.zeros(n, dtype=np.bool_)
    if not alive[src]:
        return dm, dt, parent, depth
    dm[src] = 0
    depth[src] = 0
    for _ in range(n):
        u = -1
        bm = INF_M
        bt = I64(0)
        bh = 0
        for v in range(n):
            if alive[v] and not done[v] and dm[v] < INF_M:
                if (
                    u == -1
                    or w_lt(dm[v], dt[v], bm, bt)
                    or (dm[v] == bm and dt[v] == bt and depth[v] < bh)
                ):
                    u = v
                    bm = dm[v]
                    bt = dt[v]
                    bh = depth[v]
        if u == -1:
            break
        done[u] = True
        if depth[u] >= hopcap:
            continue
        for v in range(n):
            if done[v] or not alive[v] or em[u, v] >= INF_M:
                continue
            cm, ct = w_add(dm[u], dt[u], em[u, v], et[u, v], modulus)
            if w_lt(cm, ct, dm[v], dt[v]) or (
                cm == dm[v] and ct == dt[v] and depth[u] + 1 < depth[v]
            ):
                dm[v] = cm
                dt[v] = ct
                parent[v] = u
                depth[v] = depth[u] + 1
    return dm, dt, parent, depth


@njit(cache=True)
def bf_rounds(em, et, alive, src, h, modulus):
    """Plain hop-bounded Bellman-Ford from src with round-stamped labels.

    Returns (dm, dt, pred, hop), all of shape (h+1, n).  pred[r, v] is the
    predecessor chosen at round r, or -1 when the label was carried over from
    round r-1; hop counts real edges of the label's walk.
    """
    n = em.shape[0]
    NR = h + 1
    dm = np.full((NR, n), INF_M, dtype=np.int64)
    dt = np.zeros((NR, n), dtype=np.int64)
    pred = np.full((NR, n), -1, dtype=np.int32)
    hop = np.full((NR, n), -1, dtype=np.int32)
    if not alive[src]:
        return dm, dt, pred, hop
    dm[0, src] = 0
    hop[0, src] = 0
    for r in range(1, NR):
        for v in range(n):
            dm[r, v] = dm[r - 1, v]
            dt[r, v] = dt[r - 1, v]
            hop[r, v] = hop[r - 1, v]
        for u in range(n):
            if not alive[u] or dm[r - 1, u] >= INF_M:
                continue
            um = dm[r - 1, u]
            ut = dt[r - 1, u]
            uh = hop[r - 1, u]
            for v in range(n):
                if v == u or not alive[v] or em[u, v] >= INF_M:
                    continue
                cm, ct = w_add(um, ut, em[u, v], et[u, v], modulus)
                if w_lt(cm, ct, dm[r, v], dt[r, v]):
                    dm[r, v] = cm
                    dt[r, v] = ct
                    hop[r, v] = uh + 1
                    pred[r, v] = u
    return dm, dt, pred, hop


@njit(cache=True)
def bftc_rounds(em, et, alive, in_c, src, h, modulus):
    """Hop-bounded Bellman-Ford from src on the center-split graph.

    State (v, 0) means no center visited yet, (v, 1) means at least one vertex
    of C was visited.  Returns round-stamped labels and predecessors so paths
    can be reconstructed: arrays have shape (h+1, 2, n); pred encodes the
    predecessor state as u * 2 + copy, or -1 for a carried-over label.
    """
    n = em.shape[0]
    NR = h + 1
    dm = np.full((NR, 2, n), INF_M, dtype=np.int64)
    dt = np.zeros((NR, 2, n), dtype=np.int64)
    pred = np.full((NR, 2, n), -1, dtype=np.int32)
    hop = np.full((NR, 2, n), -1, dtype=np.int32)
    if not alive[src]:
        return dm, dt, pred, hop
    c0 = 1 if in_c[src] else 0
    dm[0, c0, src] = 0
    hop[0, c0, src] = 0
    for r in range(1, NR):
        for cp in range(2):
            for v in range(n):
                dm[r, cp, v] = dm[r - 1, cp, v]
                dt[r, cp, v] = dt[r - 1, cp, v]
                hop[r, cp, v] = hop[r - 1, cp, v]
        for cp in range(2):
            for u in range(n):
                if not alive[u] or dm[r - 1, cp, u] >= INF_M:
                    continue
                um = dm[r - 1, cp, u]
                ut = dt[r - 1, cp, u]
                uh = hop[r - 1, cp, u]
                for v in range(n):
                    if v == u or not alive[v] or em[u, v] >= INF_M:
                        continue
                    ncp = cp
                    if in_c[v]:
                        ncp = 1
                    cm, ct = w_add(um, ut, em[u, v], et[u, v], modulus)
                    if w_lt(cm, ct, dm[r, ncp, v], dt[r, ncp, v]):
                        dm[r, ncp, v] = cm
                        dt[r, ncp, v] = ct
                        hop[r, ncp, v] = uh + 1
                        pred[r, ncp, v] = u * 2 + cp
    return dm, dt, pred, hop


@njit(cache=True)
def fw_apsp(wm, wt, alive, modulus):
    """Floyd-Warshall on pair weights; diagonal fixed at 0 for alive slots."""
    n = wm.shape[0]
    dm = np.full((n, n), INF_M, dtype=np.int64)
    dt = np.zeros((n, n), dtype=np.int64)
    for u in range(n):
        if not alive[u]:
            continue
        dm[u, u] = 0
        for v in range(n):
            if v != u and alive[v] and wm[u, v] < INF_M:
                dm[u, v] = wm[u, v]
                dt[u, v] = wt[u, v]
    for k in range(n):
        if not alive[k]:
            continue
        for s in range(n):
            if not alive[s] or dm[s, k] >= INF_M:
                continue
            am = dm[s, k]
            at = dt[s, k]
            for v in range(n):
                if not alive[v] or dm[k, v] >= INF_M:
                    continue
                cm, ct = w_add(am, at, dm[k, v], dt[k, v], modulus)
                if w_lt(cm, ct, dm[s, v], dt[s, v]):
                    dm[s, v] = cm
                    dt[s, v] = ct
    return dm, dt


@njit(cache=True)
def hop_dp(wm, wt, alive, hmax, modulus):
    """Hop-restricted DP: d[h, s, t] = weight of the <=h-hop shortest walk."""
    n = wm.shape[0]
    dm = np.full((hmax + 1, n, n), INF_M, dtype=np.int64)
    dt = np.zeros((hmax + 1, n, n), dtype=np.int64)
    for s in range(n):
        if alive[s]:
            dm[0, s, s] = 0
    for h in range(1, hmax + 1):
        for s in range(n):
            if not alive[s]:
                continue
            for t in range(n):
                dm[h, s, t] = dm[h - 1, s, t]
                dt[h, s, t] = dt[h - 1, s, t]
            for u in range(n):
                if not alive[u] or dm[h - 1, s, u] >= INF_M:
                    continue
                am = dm[h - 1, s, u]
                at = dt[h - 1, s, u]
                for t in range(n):
                    if t == u or not alive[t] or wm[u, t] >= INF_M:
                        continue
                    cm, ct = w_add(am, at, wm[u, t], wt[u, t], modulus)
                    if w_lt(cm, ct, dm[h, s, t], dt[h, s, t]):
                        dm[h, s, t] = cm
                        dt[h, s, t] = ct
    return dm, dt


@njit(cache=True)
def hop_restricted_pred_counts(wm, wt, alive, hmax, modulus):
    """Hop-restricted DP with optimal-predecessor counting.

    d[h, s, t] is the weight of the best <=h-hop walk; cnt[h, s, t] counts
    predecessors u with d[h-1, s, u] + w(u, t) equal to d[h, s, t].  With a
    sound perturbation every cell that improves at hop h has count exactly 1
    and every carried-over cell has count 0 (the tie limb encodes the hop
    count, so walks of different lengths can never weigh the same).
    """
    n = wm.shape[0]
    dm = np.full((hmax + 1, n, n), INF_M, dtype=np.int64)
    dt = np.zeros((hmax + 1, n, n), dtype=np.int64)
    cnt = np.zeros((hmax + 1, n, n), dtype=np.int32)
    for s in range(n):
        if alive[s]:
            dm[0, s, s] = 0
    for h in range(1, hmax + 1):
        for s in range(n):
            if not alive[s]:
                continue
            for t in range(n):
                if not alive[t]:
                    continue
                bm = dm[h - 1, s, t]
                bt = dt[h - 1, s, t]
                c = 0
                for u in range(n):
                    if u == t or not alive[u]:
                        continue
                    if dm[h - 1, s, u] >= INF_M or wm[u, t] >= INF_M:
                        continue
                    cm, ct = w_add(dm[h - 1, s, u], dt[h - 1, s, u], wm[u, t], wt[u, t], modulus)
                    if w_lt(cm, ct, bm, bt):
                        bm = cm
                        bt = ct
                        c = 1
                    elif cm == bm and ct == bt and bm < INF_M:
                        c += 1
                dm[h, s, t] = bm
                dt[h, s, t] = bt
                cnt[h, s, t] = c
    return dm, dt, cnt
