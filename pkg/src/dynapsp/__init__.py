"""Fully-dynamic all-pairs shortest paths engine.

The library keeps an n x n distance matrix current under vertex insertions
and deletions, using layered hop-restricted path tables that are rebuilt on a
geometric cadence and repaired per update from randomized hitting sets, plus
brute-force oracles for verification and a benchmark harness.
"""

from .graph import Graph, INF

__all__ = ["Graph", "INF"]
