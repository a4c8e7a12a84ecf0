"""Single-source kernels wrapped as stored trees and path handles.

Four kernels: exact Dijkstra, hop-bounded Bellman-Ford, Bellman-Ford through
a center set (on the vertex-split graph), and the hop-capped Dijkstra sweep
that collects every strongly-hop-dominant path up to a hop cap.  All of them
are pure given a weight matrix snapshot.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .kernels import INF_M
from .path_store import PathStore, SsspTree


class KernelContractError(ValueError):
    pass


def _check_nonnegative(em, alive):
    sub = em[np.ix_(alive, alive)]
    if sub.size and int(sub.min()) < 0:
        raise KernelContractError("negative effective weight; reweight first")


def dijkstra(em, et, alive, src, modulus, store: PathStore | None = None,
             reversed_graph: bool = False, built_at: int = 0) -> SsspTree:
    """Exact shortest-path tree from src over non-negative weights."""
    _check_nonnegative(em, alive)
    dm, dt, parent, depth = kernels.dijkstra(em, et, alive, src, modulus)
    tree = SsspTree(root=src, parent=parent, depth=depth, dm=dm, dt=dt,
                    reversed=reversed_graph, built_at=built_at)
    if store is not None:
        store.add_tree(tree)
    return tree


def ssshdp_trees(em, et, alive, src, hop_cap, modulus,
                 store: PathStore | None = None, reversed_graph: bool = False,
                 built_at: int = 0) -> list[SsspTree]:
    """Trees whose root paths cover all strongly-hop-dominant paths from src
    with hop at most hop_cap.

    One hop-capped Dijkstra sweep per cap h = 1, 2, 4, ..., 2**ceil(log2 cap);
    a path that is 4|p|-hop shortest is 2**ceil(log2 |p|)-hop-dominant and is
    found by that round.
    """
    _check_nonnegative(em, alive)
    trees = []
    h = 1
    while True:
        dm, dt, parent, depth = kernels.sshdp(em, et, alive, src, h, modulus)
        tree = SsspTree(root=src, parent=parent, depth=depth, dm=dm, dt=dt,
                        reversed=reversed_graph, built_at=built_at)
        if store is not None:
            store.add_tree(tree)
        trees.append(tree)
        if h >= hop_cap:
            break
        h *= 2
    return trees


def ssshdp_path_set(store: PathStore, trees: list[SsspTree]) -> list[int]:
    """Materialize the union of root paths as handles, deduplicated by
    (target, weight, hop)."""
    seen = set()
    out = []
    for tree in trees:
        n = tree.depth.shape[0]
        for v in range(n):
            if tree.depth[v] < 0 or v == tree.root:
                continue
            key = (v, int(tree.dm[v]), int(tree.dt[v]), int(tree.depth[v]))
            if key in seen:
                continue
            seen.add(key)
            out.append(store.segment(tree.tree_id, tree.root, v))
    return out


@dataclass
class HopPaths:
    """Per-target best <=h-hop paths from one source, as one stamped tree.

    node_of[t] is the tree node of the best label for t (-1 when t is
    unreachable within the hop budget); handles are segments root..node.
    """

    tree: SsspTree
    node_of: np.ndarray
    wm: np.ndarray
    wt: np.ndarray
    hops: np.ndarray

    def path(self, store: PathStore, t: int) -> int:
        if self.node_of[t] < 0:
            return 0
        root = int(self.tree.root)
        return store.segment(self.tree.tree_id, root, int(self.node_of[t]))


def _stamped_tree(dm, dt, pred, hop, src_state, n_states, vtx_of_state,
                  reversed_graph, built_at):
    """Tree over (round, state) nodes; carried-over labels chain to the same
    state one round earlier without increasing depth."""
    rounds = dm.shape[0]
    total = rounds * n_states
    parent = np.full(total, -1, dtype=np.int32)
    depth = np.full(total, -1, dtype=np.int32)
    ndm = np.full(total, INF_M, dtype=np.int64)
    ndt = np.zeros(total, dtype=np.int64)
    vtx = np.empty(total, dtype=np.int32)
    flat_dm = dm.reshape(rounds, n_states)
    flat_dt = dt.reshape(rounds, n_states)
    flat_pred = pred.reshape(rounds, n_states)
    flat_hop = hop.reshape(rounds, n_states)
    for r in range(rounds):
        base = r * n_states
        for s in range(n_states):
            vtx[base + s] = vtx_of_state[s]
            if flat_dm[r, s] >= INF_M:
                continue
            node = base + s
            ndm[node] = flat_dm[r, s]
            ndt[node] = flat_dt[r, s]
            depth[node] = flat_hop[r, s]
            if r == 0:
                continue
            p = flat_pred[r, s]
            parent[node] = (r - 1) * n_states + (p if p >= 0 else s)
    root = src_state  # round 0
    return SsspTree(root=root, parent=parent, depth=depth, dm=ndm, dt=ndt,
                    reversed=reversed_graph, vtx=vtx, built_at=built_at)


def bellman_ford(em, et, alive, src, h, modulus, store: PathStore,
                 reversed_graph: bool = False, built_at: int = 0) -> HopPaths:
    """Best <=h-hop paths from src; ties beyond the perturbation are broken
    by round order, which is deterministic."""
    dm, dt, pred, hop = kernels.bf_rounds(em, et, alive, src, h, modulus)
    n = em.shape[0]
    vtx_of_state = np.arange(n, dtype=np.int32)
    tree = _stamped_tree(dm, dt, pred, hop, src, n, vtx_of_state,
                         reversed_graph, built_at)
    store.add_tree(tree)
    last = h  # final round has the best <=h labels
    node_of = np.where(dm[last] < INF_M,
                       np.arange(n, dtype=np.int32) + last * n, -1).astype(np.int32)
    return HopPaths(tree=tree, node_of=node_of, wm=dm[last].copy(),
                    wt=dt[last].copy(), hops=hop[last].copy())


def bellman_ford_through_centers(em, et, alive, centers_mask, src, h, modulus,
                                 store: PathStore, reversed_graph: bool = False,
                                 built_at: int = 0) -> HopPaths:
    """Best <=h-hop paths from src that visit at least one center.

    Runs on the split graph with states (v, seen-center); the projected tree
    stores original vertices, so handles read back as real paths.
    """
    n = em.shape[0]
    dm, dt, pred, hop = kernels.bftc_rounds(em, et, alive, centers_mask, src,
                                            h, modulus)
    # states laid out as copy * n + v to match the kernel's u * 2 + cp encoding
    rounds = h + 1
    dm2 = np.empty((rounds, 2 * n), dtype=np.int64)
    dt2 = np.empty((rounds, 2 * n), dtype=np.int64)
    hop2 = np.empty((rounds, 2 * n), dtype=np.int32)
    pred2 = np.full((rounds, 2 * n), -1, dtype=np.int32)
    for cp in range(2):
        dm2[:, cp * n:(cp + 1) * n] = dm[:, cp, :]
        dt2[:, cp * n:(cp + 1) * n] = dt[:, cp, :]
        hop2[:, cp * n:(cp + 1) * n] = hop[:, cp, :]
        enc = pred[:, cp, :]
        dec = np.where(enc >= 0, (enc % 2) * n + enc // 2, -1)
        pred2[:, cp * n:(cp + 1) * n] = dec
    vtx_of_state = np.concatenate([np.arange(n), np.arange(n)]).astype(np.int32)
    src_state = (n if centers_mask[src] else 0) + src
    tree = _stamped_tree(dm2, dt2, pred2, hop2, src_state, 2 * n, vtx_of_state,
                         reversed_graph, built_at)
    store.add_tree(tree)
    last = h
    seen = dm2[last, n:]
    node_of = np.where(seen < INF_M,
                       np.arange(n, dtype=np.int32) + (last * 2 * n + n), -1).astype(np.int32)
    return HopPaths(tree=tree, node_of=node_of, wm=dm2[last, n:].copy(),
                    wt=dt2[last, n:].copy(), hops=hop2[last, n:].copy())
