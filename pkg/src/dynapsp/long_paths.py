"""Hitting-set distance matrix covering every shortest path with many hops.

Samples each vertex with probability min(1, kappa*(a*ln(n^3)+1)/h), runs
Dijkstra from each sampled center forward and backward, and keeps
A[s,t] = min over centers of d(s,c) + d(c,t).  Entries never drop below the
true distance; for pairs whose shortest path has at least h hops the matrix
equals the true distance with high probability (certainty once the
probability clamps to 1).
"""

from __future__ import annotations

import math

import numpy as np

from . import kernels
from .kernels import INF_M
from .rng import sample_subset


def hitting_probability(n: int, h: int, kappa: float = 1.0, a: float = 1.0) -> float:
    ne = max(n, 2)
    x = a * math.log(ne**3) + 1.0
    return min(1.0, kappa * x / max(h, 1))


def rand_get_shortest_paths(em, et, alive, h, modulus, gen,
                            n_formula: int | None = None,
                            kappa: float = 1.0, a: float = 1.0):
    """Distance-pair matrices (Am, At) plus the sampled center list."""
    n = em.shape[0]
    universe = np.flatnonzero(alive)
    p = hitting_probability(n_formula if n_formula is not None else n, h, kappa, a)
    centers = universe[sample_subset(gen, len(universe), p)]
    Am = np.full((n, n), INF_M, dtype=np.int64)
    At = np.zeros((n, n), dtype=np.int64)
    Am[universe, universe] = 0
    emT = np.ascontiguousarray(em.T)
    etT = np.ascontiguousarray(et.T)
    for c in centers:
        c = int(c)
        fm, ft, _, _ = kernels.dijkstra(em, et, alive, c, modulus)
        tm, tt, _, _ = kernels.dijkstra(emT, etT, alive, c, modulus)
        # candidate[s, t] = d(s, c) + d(c, t)
        cm = tm[:, None] + fm[None, :]
        ct = tt[:, None] + ft[None, :]
        carry = ct >= modulus
        ct = np.where(carry, ct - modulus, ct)
        cm = np.where(carry, cm + 1, cm)
        finite = (tm[:, None] < INF_M) & (fm[None, :] < INF_M)
        better = finite & ((cm < Am) | ((cm == Am) & (ct < At)))
        Am[better] = cm[better]
        At[better] = ct[better]
    return Am, At, centers
