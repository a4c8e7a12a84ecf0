"""Mutable weighted digraph with slot-stable vertex identity.

Vertices are slots ``0..capacity-1`` with an alive flag; deleting a vertex
never renumbers anything, and re-insertion reuses the slot.  Raw weights are
plain integers; ``perturb_all`` replaces each raw weight ``w`` by the exact
value ``w * n**10 + n**9 + lambda(e)`` with ``lambda(e)`` uniform in
``[0, n**8)``.  That value is stored as the limb pair
``(w, n**9 + lambda(e))`` so every later sum or comparison is exact int64
arithmetic (see kernels module).  ``johnson_reweight`` shifts the perturbed
weights by potentials so all effective weights are non-negative.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .kernels import INF_M

INF = int(INF_M)

# Largest raw magnitude a single edge may carry: any sum over a walk of up to
# capacity edges must stay far below INF_M so pair additions cannot overflow.
RAW_LIMIT = 1 << 40


class GraphUsageError(ValueError):
    """Caller violated an operation precondition (double delete, bad edge...)."""


class GraphConfigError(ValueError):
    """Configuration makes exact arithmetic impossible (overflow contract)."""


class NegativeCycleError(ValueError):
    """The graph contains a negative cycle; updates on it are unsupported."""


def _perturb_params(n: int) -> tuple[int, int, int]:
    ne = max(n, 2)
    modulus = ne**10
    if modulus >= INF // 4:
        raise GraphConfigError(
            f"perturbation modulus {ne}**10 exceeds the exact int64 range; "
            "disable perturbation for graphs this large"
        )
    return modulus, ne**9, ne**8


@dataclass
class Perturbation:
    """Tie-breaking state: per-edge lambda draws plus the scale constants."""

    n: int
    seed: int
    modulus: int
    hop_unit: int
    lam_range: int
    lam: np.ndarray
    _rng: np.random.Generator = field(repr=False, default=None)

    def fresh_lambda(self) -> int:
        """Lambda for an edge inserted after the major rebuild."""
        if self.lam_range <= 1:
            return 0
        return int(self._rng.integers(0, self.lam_range))

    @classmethod
    def identity(cls, n: int) -> "Perturbation":
        """No-op perturbation: modulus 1, every tie limb zero."""
        return cls(n=n, seed=0, modulus=1, hop_unit=0, lam_range=1,
                   lam=np.zeros((0, 0), dtype=np.int64), _rng=None)

    @property
    def enabled(self) -> bool:
        return self.modulus != 1


@dataclass
class Potentials:
    """Johnson potentials on the perturbed scale: w + p(u) - p(v) >= 0."""

    pm: np.ndarray
    pt: np.ndarray


class Graph:
    def __init__(self, capacity: int):
        self.capacity = capacity
        self.alive = np.zeros(capacity, dtype=np.bool_)
        self.raw = np.full((capacity, capacity), INF, dtype=np.int64)
        # perturbed pair weights; identity perturbation until perturb_all runs
        self.wm = np.full((capacity, capacity), INF, dtype=np.int64)
        self.wt = np.zeros((capacity, capacity), dtype=np.int64)
        # Johnson-shifted pair weights (valid for vertices alive at the last
        # johnson_reweight; callers mask out later insertions themselves)
        self.em = np.full((capacity, capacity), INF, dtype=np.int64)
        self.et = np.zeros((capacity, capacity), dtype=np.int64)
        self.pert: Perturbation = Perturbation.identity(capacity)
        self.pot: Potentials | None = None

    @property
    def n_alive(self) -> int:
        return int(self.alive.sum())

    @property
    def modulus(self) -> int:
        return self.pert.modulus

    # -- construction ------------------------------------------------------

    @classmethod
    def complete_alive(cls, n: int) -> "Graph":
        g = cls(n)
        g.alive[:] = True
        return g

    def set_raw_edge(self, u: int, v: int, w: int) -> None:
        if u == v:
            return  # self loops never participate
        if abs(w) > RAW_LIMIT:
            raise GraphConfigError(f"edge weight {w} exceeds the exact-arithmetic bound")
        self.raw[u, v] = w
        self._refresh_edge(u, v)

    def _refresh_edge(self, u: int, v: int) -> None:
        if self.raw[u, v] >= INF:
            self.wm[u, v] = INF
            self.wt[u, v] = 0
            return
        p = self.pert
        if p.enabled:
            self.wm[u, v] = self.raw[u, v]
            self.wt[u, v] = p.hop_unit + int(p.lam[u, v])
        else:
            self.wm[u, v] = self.raw[u, v]
            self.wt[u, v] = 0

    # -- mutation ----------------------------------------------------------

    def delete_vertex(self, v: int) -> None:
        if v < 0 or v >= self.capacity or not self.alive[v]:
            raise GraphUsageError(f"delete of vertex {v} that is not alive")
        self.alive[v] = False

    def insert_vertex(self, v: int, in_edges, out_edges) -> None:
        """Revive slot v (or extend capacity by one) with the given edges.

        in_edges / out_edges are (u, w) lists; every u must be alive.  New
        edges draw fresh lambda values from the current perturbation stream.
        """
        if v == self.capacity:
            self._grow()
        if v < 0 or v >= self.capacity or self.alive[v]:
            raise GraphUsageError(f"insert into slot {v} that is not free")
        for u, _ in list(in_edges) + list(out_edges):
            if u < 0 or u >= self.capacity or not self.alive[u]:
                raise GraphUsageError(f"insert references dead vertex {u}")
        self.alive[v] = True
        self.raw[v, :] = INF
        self.raw[:, v] = INF
        self.wm[v, :] = INF
        self.wt[v, :] = 0
        self.wm[:, v] = INF
        self.wt[:, v] = 0
        p = self.pert
        for u, w in out_edges:
            if u == v:
                continue
            if abs(w) > RAW_LIMIT:
                raise GraphConfigError(f"edge weight {w} exceeds the exact-arithmetic bound")
            self.raw[v, u] = w
            if p.enabled:
                p.lam[v, u] = p.fresh_lambda()
            self._refresh_edge(v, u)
        for u, w in in_edges:
            if u == v:
                continue
            if abs(w) > RAW_LIMIT:
                raise GraphConfigError(f"edge weight {w} exceeds the exact-arithmetic bound")
            self.raw[u, v] = w
            if p.enabled:
                p.lam[u, v] = p.fresh_lambda()
            self._refresh_edge(u, v)

    def _grow(self) -> None:
        old = self.capacity
        new = old + 1
        for name in ("raw", "wm", "em"):
            arr = getattr(self, name)
            big = np.full((new, new), INF, dtype=np.int64)
            big[:old, :old] = arr
            setattr(self, name, big)
        for name in ("wt", "et"):
            arr = getattr(self, name)
            big = np.zeros((new, new), dtype=np.int64)
            big[:old, :old] = arr
            setattr(self, name, big)
        alive = np.zeros(new, dtype=np.bool_)
        alive[:old] = self.alive
        self.alive = alive
        if self.pert.enabled:
            lam = np.zeros((new, new), dtype=np.int64)
            lam[:old, :old] = self.pert.lam
            self.pert.lam = lam
        self.capacity = new

    # -- snapshot format ---------------------------------------------------

    @classmethod
    def from_snapshot(cls, text: str) -> "Graph":
        """Parse the text format: header "n m", then m lines "u v w"."""
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines:
            raise GraphUsageError("empty snapshot")
        n, m = (int(x) for x in lines[0].split())
        g = cls.complete_alive(n)
        if len(lines) - 1 != m:
            raise GraphUsageError(f"snapshot declares {m} edges, has {len(lines) - 1}")
        for ln in lines[1:]:
            u, v, w = (int(x) for x in ln.split())
            if not (0 <= u < n and 0 <= v < n):
                raise GraphUsageError(f"edge ({u},{v}) out of range")
            if u != v and (g.raw[u, v] >= INF or w < g.raw[u, v]):
                g.set_raw_edge(u, v, w)
        return g

    def to_snapshot(self) -> str:
        us, vs = np.nonzero(self.raw < INF)
        rows = [f"{self.capacity} {len(us)}"]
        for u, v in zip(us.tolist(), vs.tolist()):
            rows.append(f"{u} {v} {int(self.raw[u, v])}")
        return "\n".join(rows) + "\n"


def perturb_all(graph: Graph, seed: int, enabled: bool = True) -> Perturbation:
    """Install a fresh tie-breaking perturbation over every present edge.

    Deterministic given seed; previous lambda values are discarded.  n in the
    exponents is the graph capacity at call time and stays fixed until the
    next call.
    """
    n = graph.capacity
    if not enabled:
        graph.pert = Perturbation.identity(n)
        graph.wm[:] = graph.raw
        graph.wt[:] = 0
        return graph.pert
    modulus, hop_unit, lam_range = _perturb_params(n)
    rng = np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(0x9E,)))
    lam = rng.integers(0, lam_range, size=(n, n), dtype=np.int64)
    pert = Perturbation(n=n, seed=seed, modulus=modulus, hop_unit=hop_unit,
                        lam_range=lam_range, lam=lam, _rng=rng)
    graph.pert = pert
    mask = graph.raw < INF
    graph.wm = np.where(mask, graph.raw, INF).astype(np.int64)
    graph.wt = np.where(mask, hop_unit + lam, 0).astype(np.int64)
    return pert


def johnson_reweight(graph: Graph, members: np.ndarray | None = None) -> Potentials:
    """Compute potentials from a virtual source and shift all edge weights.

    Raises NegativeCycleError when Bellman-Ford keeps relaxing after n rounds.
    The potentials stay valid under subsequent deletions.
    """
    mask = graph.alive if members is None else (graph.alive & members)
    pm, pt, ok = kernels.bf_potentials(graph.wm, graph.wt, mask, graph.modulus)
    if not ok:
        raise NegativeCycleError("negative cycle reachable; input unsupported")
    graph.pot = Potentials(pm=pm, pt=pt)
    graph.em, graph.et = kernels.reweight(graph.wm, graph.wt, pm, pt, mask, graph.modulus)
    return graph.pot


def perturbed_value(graph: Graph, m: int, t: int) -> int:
    """Exact integer value of a pair weight on the perturbed scale."""
    if m >= INF:
        return INF
    return m * graph.modulus + t


def hops_from_tie(graph: Graph, t: int) -> int:
    """Recover the edge count of a path from its tie limb.

    The tie limb of a k-edge path is k*n**9 + sum(lambda) with the lambda sum
    below n**9, so integer division recovers k exactly.
    """
    if not graph.pert.enabled:
        raise GraphUsageError("hop recovery needs the perturbation enabled")
    return t // graph.pert.hop_unit
