"""Brute-force ground truth: exact APSP, hop-restricted tables, and the
hop-dominance classifier.  These run on the same perturbed weights as the
engine so path identities (not just raw weights) are comparable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .graph import INF, Graph, NegativeCycleError, johnson_reweight
from .kernels import INF_M


def exact_apsp_pairs(graph: Graph, members: np.ndarray | None = None):
    """Floyd-Warshall distance pairs on the perturbed scale."""
    mask = graph.alive if members is None else (graph.alive & members)
    return kernels.fw_apsp(graph.wm, graph.wt, mask, graph.modulus)


def exact_apsp(graph: Graph, members: np.ndarray | None = None) -> np.ndarray:
    """Raw-scale distance matrix (int64, INF sentinel for unreachable/dead)."""
    dm, dt = exact_apsp_pairs(graph, members)
    out = dm.copy()
    out[dm >= INF_M] = INF
    return out


def exact_apsp_dijkstra(graph: Graph, members: np.ndarray | None = None) -> np.ndarray:
    """Same matrix via Johnson potentials plus one Dijkstra per source."""
    mask = graph.alive if members is None else (graph.alive & members)
    pm, pt, ok = kernels.bf_potentials(graph.wm, graph.wt, mask, graph.modulus)
    if not ok:
        raise NegativeCycleError("negative cycle")
    em, et = kernels.reweight(graph.wm, graph.wt, pm, pt, mask, graph.modulus)
    n = graph.capacity
    out = np.full((n, n), INF, dtype=np.int64)
    for s in range(n):
        if not mask[s]:
            continue
        dm, dt, _, _ = kernels.dijkstra(em, et, mask, s, graph.modulus)
        for t in range(n):
            if mask[t] and dm[t] < INF_M:
                m, _ = kernels.w_sub(dm[t], dt[t], pm[s], pt[s], graph.modulus)
                m2, _ = kernels.w_add(m, _, pm[t], pt[t], graph.modulus)
                out[s, t] = m2
    return out


def exact_apsp_bellman_ford(graph: Graph, members: np.ndarray | None = None) -> np.ndarray:
    """Same matrix via one (n-1)-round Bellman-Ford per source on raw perturbed
    weights."""
    mask = graph.alive if members is None else (graph.alive & members)
    n = graph.capacity
    h = max(int(mask.sum()) - 1, 1)
    out = np.full((n, n), INF, dtype=np.int64)
    for s in range(n):
        if not mask[s]:
            continue
        dm, dt, _, _ = kernels.bf_rounds(graph.wm, graph.wt, mask, s, h, graph.modulus)
        row_m = dm[h]
        for t in range(n):
            if mask[t] and row_m[t] < INF_M:
                out[s, t] = row_m[t]
    return out


@dataclass
class HopApsp:
    """Hop-restricted table: dm/dt[h, s, t] = best <=h-hop walk weight."""

    dm: np.ndarray
    dt: np.ndarray
    modulus: int

    def weight(self, h: int, s: int, t: int) -> tuple[int, int]:
        return int(self.dm[h, s, t]), int(self.dt[h, s, t])

    def raw(self, h: int, s: int, t: int) -> int:
        m = int(self.dm[h, s, t])
        return INF if m >= INF_M else m

    def argmin_hop(self, h: int, s: int, t: int) -> int:
        """Hop count of the <=h-hop optimum (smallest h' attaining it)."""
        if self.dm[h, s, t] >= INF_M:
            return -1
        for hh in range(h + 1):
            if self.dm[hh, s, t] == self.dm[h, s, t] and self.dt[hh, s, t] == self.dt[h, s, t]:
                return hh
        return h


def exact_hop_apsp(graph: Graph, h: int, members: np.ndarray | None = None) -> HopApsp:
    mask = graph.alive if members is None else (graph.alive & members)
    dm, dt = kernels.hop_dp(graph.wm, graph.wt, mask, h, graph.modulus)
    return HopApsp(dm=dm, dt=dt, modulus=graph.modulus)


def hop_and_length(graph: Graph, members: np.ndarray | None = None):
    """(hop, length) of the unique shortest path per pair.

    Needs the perturbation: the tie limb of a canonical pair weight encodes
    the edge count directly.  Returns (hops int32, dm, dt); hops is -1 for
    unreachable pairs and 0 on the diagonal.
    """
    dm, dt = exact_apsp_pairs(graph, members)
    unit = graph.pert.hop_unit
    if unit <= 0:
        raise ValueError("hop_and_length needs the perturbation enabled")
    hops = np.where(dm < INF_M, dt // unit, -1).astype(np.int32)
    return hops, dm, dt


@dataclass(frozen=True)
class DominantPath:
    """One hop-restricted optimum from s, with its dominance classification."""

    target: int
    hop: int
    wm: int
    wt: int
    dominant: bool          # <=h optimum that is also a <=2h optimum
    strongly_dominant: bool  # 4*hop-hop shortest


def enumerate_dominant(graph: Graph, s: int, H: int,
                       members: np.ndarray | None = None) -> list[DominantPath]:
    """Classify, for every target and hop budget up to H, the budget optimum.

    Small-n oracle: builds the hop DP out to 4H and compares windows.  Each
    distinct optimum appears once (keyed by target/weight/actual hop).
    """
    mask = graph.alive if members is None else (graph.alive & members)
    table = exact_hop_apsp(graph, 4 * H, members)
    n = graph.capacity
    out = {}
    for t in range(n):
        if not mask[t] or t == s:
            continue
        for h in range(1, H + 1):
            if table.dm[h, s, t] >= INF_M:
                continue
            ah = table.argmin_hop(h, s, t)
            if ah <= 0:
                continue
            key = (t, int(table.dm[h, s, t]), int(table.dt[h, s, t]), ah)
            if key in out:
                continue
            wpair = (table.dm[h, s, t], table.dt[h, s, t])
            dom = (table.dm[2 * ah, s, t], table.dt[2 * ah, s, t]) == wpair
            strong = (table.dm[4 * ah, s, t], table.dt[4 * ah, s, t]) == wpair
            out[key] = DominantPath(target=t, hop=ah, wm=int(wpair[0]),
                                    wt=int(wpair[1]), dominant=dom,
                                    strongly_dominant=strong)
    return list(out.values())


def tie_break_pred_counts(graph: Graph, members: np.ndarray | None = None):
    """Hop-restricted DP optimal-predecessor counts.

    Uniqueness of every hop-restricted optimum holds iff every cell that
    improves at its hop has exactly one optimal predecessor and every
    carried-over cell has none.
    """
    mask = graph.alive if members is None else (graph.alive & members)
    hmax = max(int(mask.sum()) - 1, 1)
    dm, dt, cnt = kernels.hop_restricted_pred_counts(graph.wm, graph.wt, mask,
                                                     hmax, graph.modulus)
    return dm, dt, cnt


def tie_break_unique(graph: Graph, members: np.ndarray | None = None) -> bool:
    """True when every hop-restricted optimum has exactly one optimal
    predecessor (the unique optimum path re-derives itself each round via its
    own predecessor; a second predecessor would be a second optimum path)."""
    dm, dt, cnt = tie_break_pred_counts(graph, members)
    hmax = dm.shape[0] - 1
    n = dm.shape[1]
    off = ~np.eye(n, dtype=np.bool_)
    for h in range(1, hmax + 1):
        finite = (dm[h] < INF_M) & off
        if not (cnt[h][finite] == 1).all():
            return False
        diag = np.arange(n)
        if not (cnt[h][diag, diag][dm[h][diag, diag] < INF_M] == 0).all():
            return False
    return True
