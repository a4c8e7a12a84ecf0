"""Geometric hop grid h_j = ceil(1.5**j) and its inverse.

The grid is shared by every table in the engine.  Levels 0..i_h are the ones
tables are allocated for; the grid itself extends far enough that h_inverse
is defined for any hop a concatenation or a long tree path can produce.
"""

from __future__ import annotations

import numpy as np


class HopLevels:
    def __init__(self, n: int, hop_bound: int | None = None):
        """Build the grid for an n-vertex graph.

        i_h is the first index whose grid value reaches sqrt(n); the extended
        grid covers hops up to hop_bound (default: max(4H, 2n), enough for
        any concatenation of stored paths or full tree path).
        """
        self.n = max(n, 1)
        grid = [1]
        j = 1
        # h_j = ceil(3^j / 2^j), computed exactly in integers
        while grid[-1] * grid[-1] < self.n:
            grid.append((3**j + (1 << j) - 1) >> j)
            j += 1
        self.i_h = len(grid) - 1
        self.H = grid[self.i_h]
        bound = max(4 * self.H, 2 * self.n, hop_bound or 0)
        while grid[-1] < bound:
            grid.append((3**j + (1 << j) - 1) >> j)
            j += 1
        self.h = np.asarray(grid, dtype=np.int64)
        # inv[x] = smallest y with x <= h[y], for x in [0, grid[-1]]
        inv = np.zeros(grid[-1] + 1, dtype=np.int32)
        y = 0
        for x in range(1, grid[-1] + 1):
            while grid[y] < x:
                y += 1
            inv[x] = y
        self._inv = inv

    def h_inverse(self, x: int) -> int:
        """Smallest level y with x <= h[y]."""
        if x <= 0:
            raise ValueError(f"h_inverse needs a positive hop count, got {x}")
        return int(self._inv[x])

    def h_inverse_array(self, xs: np.ndarray) -> np.ndarray:
        """Vector form; entries must lie in [1, grid max]."""
        return self._inv[xs]

    @property
    def levels(self) -> range:
        """Table levels 0..i_h."""
        return range(self.i_h + 1)

    def __repr__(self) -> str:
        return f"HopLevels(n={self.n}, i_h={self.i_h}, H={self.H})"
