"""Shared test helpers: seeded graph generation and pure-python brute force.

The brute-force routines work on exact python integers built from the pair
weights, so they are independent of the package's int64 limb arithmetic.
"""

from __future__ import annotations

import itertools

import numpy as np

from dynapsp.graph import INF, Graph, perturb_all

BIG = None  # marker for "no path" in python-int land


def random_graph(n, density, w_max, seed, w_min=0, perturb=True, pseed=1234):
    rng = np.random.default_rng(seed)
    g = Graph.complete_alive(n)
    for u in range(n):
        for v in range(n):
            if u != v and rng.random() < density:
                g.set_raw_edge(u, v, int(rng.integers(w_min, w_max + 1)))
    perturb_all(g, pseed, enabled=perturb)
    return g


def exact_edge_value(g: Graph, u, v):
    """Exact perturbed weight of edge (u,v) as a python int, or None."""
    if g.wm[u, v] >= INF:
        return None
    return int(g.wm[u, v]) * g.modulus + int(g.wt[u, v])


def walk_table(g: Graph, hmax, members=None):
    """d[h][s][t] = exact min weight over walks with <= h edges (python ints).

    Plain DP over the alive adjacency; independent oracle for everything
    hop-restricted.
    """
    alive = [v for v in range(g.capacity)
             if g.alive[v] and (members is None or members[v])]
    d = {0: {(s, s): 0 for s in alive}}
    for h in range(1, hmax + 1):
        cur = dict(d[h - 1])
        for (s, u), w in d[h - 1].items():
            for v in alive:
                if v == u:
                    continue
                ew = exact_edge_value(g, u, v)
                if ew is None:
                    continue
                c = w + ew
                if (s, v) not in cur or c < cur[(s, v)]:
                    cur[(s, v)] = c
        d[h] = cur
    return d


def brute_apsp_raw(g: Graph, members=None):
    """Raw-scale APSP by python-int DP (n-1 hops), INF for unreachable."""
    alive = [v for v in range(g.capacity)
             if g.alive[v] and (members is None or members[v])]
    h = max(len(alive) - 1, 1)
    d = walk_table(g, h, members)[h]
    out = np.full((g.capacity, g.capacity), INF, dtype=np.int64)
    for (s, t), w in d.items():
        out[s, t] = w // g.modulus
    return out


def enumerate_paths(g: Graph, s, t, hmax, members=None):
    """All simple paths s..t with <= hmax edges, as (vertexlist, weight)."""
    alive = [v for v in range(g.capacity)
             if g.alive[v] and (members is None or members[v])]
    out = []

    def rec(path, w):
        u = path[-1]
        if u == t and len(path) > 1:
            out.append((list(path), w))
        if len(path) - 1 >= hmax:
            return
        for v in alive:
            if v in path:
                continue
            ew = exact_edge_value(g, u, v)
            if ew is None:
                continue
            path.append(v)
            rec(path, w + ew)
            path.pop()

    if s in alive and t in alive and s != t:
        rec([s], 0)
    return out


def enumerate_walks(g: Graph, s, t, hmax, members=None):
    """All walks s..t with 1..hmax edges (revisits allowed)."""
    alive = [v for v in range(g.capacity)
             if g.alive[v] and (members is None or members[v])]
    out = []

    def rec(path, w):
        u = path[-1]
        if u == t and len(path) > 1:
            out.append((list(path), w))
        if len(path) - 1 >= hmax:
            return
        for v in alive:
            if v == u:
                continue
            ew = exact_edge_value(g, u, v)
            if ew is None:
                continue
            path.append(v)
            rec(path, w + ew)
            path.pop()

    if s in alive and t in alive:
        rec([s], 0)
    return out


def all_small_digraphs(n, weights):
    """Every digraph on n labelled vertices with edge weight in weights or
    absent; yields raw weight matrices."""
    slots = [(u, v) for u in range(n) for v in range(n) if u != v]
    choices = [None] + list(weights)
    for combo in itertools.product(choices, repeat=len(slots)):
        m = np.full((n, n), INF, dtype=np.int64)
        for (u, v), w in zip(slots, combo):
            if w is not None:
                m[u, v] = w
        yield m


def graph_from_raw(raw, perturb=True, pseed=7):
    n = raw.shape[0]
    g = Graph.complete_alive(n)
    for u in range(n):
        for v in range(n):
            if u != v and raw[u, v] < INF:
                g.set_raw_edge(u, v, int(raw[u, v]))
    perturb_all(g, pseed, enabled=perturb)
    return g
