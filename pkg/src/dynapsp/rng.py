"""Seeded randomness: keyed sub-streams, output-sensitive subset sampling,
and the resample-on-access hitting variables.

Every random decision in the engine flows through a SeedStream child keyed by
call site, so a master seed fully determines a run.  The hitting variables
X[s,v,t,j] are never stored: each query draws a fresh subset whose per-vertex
inclusion probability is q[j] = min(1, kappa * 100 * log2(n) / h_j).
"""

from __future__ import annotations

import math

import numpy as np

from .hop_levels import HopLevels


class SeedStream:
    """Splittable deterministic stream; children are keyed derivations."""

    def __init__(self, entropy: int, key: tuple[int, ...] = ()):
        self.entropy = entropy
        self.key = key
        self._gen: np.random.Generator | None = None

    def child(self, *key: int) -> "SeedStream":
        return SeedStream(self.entropy, self.key + tuple(int(k) & 0xFFFFFFFF for k in key))

    @property
    def gen(self) -> np.random.Generator:
        if self._gen is None:
            self._gen = np.random.default_rng(
                np.random.SeedSequence(entropy=self.entropy, spawn_key=self.key))
        return self._gen


def sample_subset(gen: np.random.Generator, n: int, p: float) -> np.ndarray:
    """Indices in [0, n), each kept independently with probability p.

    Geometric skipping keeps the expected cost O(1 + n*p) rather than O(n).
    """
    if n <= 0 or p <= 0.0:
        return np.empty(0, dtype=np.int64)
    if p >= 1.0:
        return np.arange(n, dtype=np.int64)
    out = []
    denom = math.log1p(-p)
    i = -1
    while True:
        u = gen.random()
        if u <= 0.0:
            break
        i += int(math.log(u) / denom) + 1
        if i >= n:
            break
        out.append(i)
    return np.asarray(out, dtype=np.int64)


class HitVarOracle:
    """Fresh draws of the level-j hitting variables over a vertex universe.

    type1(j) samples {v : X[.,v,.,j] = 1}; type2(j) samples
    {v : sum_{j' in [j, i_h]} X >= 1}, i.e. inclusion probability
    1 - prod_{j' >= j} (1 - q[j']).  Probabilities clamp at 1, which makes
    small instances deterministic and exhaustive.
    """

    def __init__(self, stream: SeedStream, n: int, hops: HopLevels, kappa: float = 1.0):
        self.hops = hops
        self.kappa = kappa
        self._gen = stream.gen
        base = kappa * 100.0 * math.log2(max(n, 2))
        self.q = np.array(
            [min(1.0, base / float(hops.h[j])) for j in hops.levels], dtype=np.float64)
        # suffix "at least one level >= j hits" probabilities
        self.q2 = np.empty_like(self.q)
        acc = 1.0
        for j in range(hops.i_h, -1, -1):
            acc *= 1.0 - self.q[j]
            self.q2[j] = 1.0 - acc
        self.calls_type1 = 0
        self.calls_type2 = 0

    def hits_type1(self, s: int, t: int, j: int, universe: np.ndarray) -> np.ndarray:
        """Fresh sample of {v in universe : X[s,v,t,j] = 1}."""
        self.calls_type1 += 1
        if j > self.hops.i_h:
            return np.empty(0, dtype=universe.dtype)
        keep = sample_subset(self._gen, len(universe), float(self.q[j]))
        return universe[keep]

    def hits_type2(self, s: int, t: int, j: int, universe: np.ndarray) -> np.ndarray:
        """Fresh sample of {v in universe : some level j' >= j has X = 1}."""
        self.calls_type2 += 1
        if j > self.hops.i_h:
            return np.empty(0, dtype=universe.dtype)
        keep = sample_subset(self._gen, len(universe), float(self.q2[j]))
        return universe[keep]
