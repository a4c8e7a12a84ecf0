"""Immutable path handles backed by stored shortest-path trees.

A path is one of: the empty path BOTTOM (weight infinity, absorbs
concatenation), a single vertex POINT, a SEGMENT of a stored tree (top must
be an ancestor of bottom; weight and hop are O(1) from the per-node arrays),
or a CONCAT of two paths sharing an endpoint.  Handles are int indices into a
columnar arena; construction is O(1) and nothing is ever mutated.

Trees built on the reversed graph carry a flag: their root-to-node walks
read backwards as real-graph paths, so a segment's start/end swap.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from .kernels import INF_M, w_sub

BOTTOM = 0

KIND_BOTTOM = 0
KIND_POINT = 1
KIND_SEGMENT = 2
KIND_CONCAT = 3


class PathUsageError(ValueError):
    pass


class UnsupportedPathShapeError(ValueError):
    """split_at only supports the shapes the rebuild step produces."""


@njit(cache=True)
def _dfs_intervals(parent, present):
    n = parent.shape[0]
    cnt = np.zeros(n + 1, dtype=np.int32)
    for v in range(n):
        if present[v] and parent[v] >= 0:
            cnt[parent[v] + 1] += 1
    for i in range(n):
        cnt[i + 1] += cnt[i]
    head = cnt[:n].copy()
    child = np.empty(n, dtype=np.int32)
    pos = head.copy()
    for v in range(n):
        if present[v] and parent[v] >= 0:
            child[pos[parent[v]]] = v
            pos[parent[v]] += 1
    din = np.full(n, -1, dtype=np.int32)
    dout = np.full(n, -1, dtype=np.int32)
    stack = np.empty(n, dtype=np.int32)
    nxt = head.copy()
    timer = 0
    for r in range(n):
        if not present[r] or parent[r] != -1:
            continue
        top = 0
        stack[0] = r
        din[r] = timer
        timer += 1
        while top >= 0:
            u = stack[top]
            if nxt[u] < cnt[u + 1]:
                v = child[nxt[u]]
                nxt[u] += 1
                top += 1
                stack[top] = v
                din[v] = timer
                timer += 1
            else:
                dout[u] = timer
                timer += 1
                top -= 1
    return din, dout


class SsspTree:
    """A rooted shortest-path tree with O(1) ancestor tests.

    Node indices may differ from graph vertices (hop-stamped Bellman-Ford
    trees); vtx maps node -> graph vertex and is None when they coincide.
    depth counts real edges (label carry-overs do not increase it).
    """

    __slots__ = ("tree_id", "root", "reversed", "parent", "depth", "dm", "dt",
                 "vtx", "din", "dout", "built_at")

    def __init__(self, root, parent, depth, dm, dt, reversed=False, vtx=None,
                 built_at=0):
        self.tree_id = -1
        self.root = root
        self.reversed = reversed
        self.parent = parent
        self.depth = depth
        self.dm = dm
        self.dt = dt
        self.vtx = vtx
        self.built_at = built_at
        present = depth >= 0
        self.din, self.dout = _dfs_intervals(parent, present)

    def vertex_of(self, node: int) -> int:
        return int(node if self.vtx is None else self.vtx[node])

    def is_ancestor(self, a: int, b: int) -> bool:
        """True when node a lies on the root path of node b (or a == b)."""
        return bool(self.din[a] <= self.din[b] and self.din[b] <= self.dout[a])

    def node_vertices(self, top: int, bot: int) -> list[int]:
        """Graph vertices along top..bot in tree order, carry-overs skipped."""
        out = []
        u = bot
        while True:
            x = self.vertex_of(u)
            if not out or out[-1] != x:
                out.append(x)
            if u == top:
                break
            u = self.parent[u]
        out.reverse()
        return out


class TreeBank:
    """Stacked per-tree arrays for vectorized segment tests.

    Holds simple trees only (node index == graph vertex), all with the same
    vertex universe width; row r of each array belongs to tree id r.  The
    bank is cleared wholesale at major rebuilds, so table entries built at
    any point between majors can keep referencing their trees.
    """

    def __init__(self, width: int):
        self.width = width
        self.trees: list[SsspTree] = []
        self._rows_din: list[np.ndarray] = []
        self._rows_dout: list[np.ndarray] = []
        self._rows_dep: list[np.ndarray] = []
        self._rows_dm: list[np.ndarray] = []
        self._rows_dt: list[np.ndarray] = []
        self._rows_par: list[np.ndarray] = []
        self._stacked = None

    def add(self, tree: SsspTree) -> int:
        if tree.vtx is not None or tree.parent.shape[0] != self.width:
            raise PathUsageError("bank trees must be simple and full-width")
        tree.tree_id = len(self.trees)
        self.trees.append(tree)
        self._rows_din.append(tree.din)
        self._rows_dout.append(tree.dout)
        self._rows_dep.append(tree.depth)
        self._rows_dm.append(tree.dm)
        self._rows_dt.append(tree.dt)
        self._rows_par.append(tree.parent)
        self._stacked = None
        return tree.tree_id

    def root_of(self, tree_id: int) -> int:
        return self.trees[tree_id].root

    @property
    def arrays(self):
        """(din, dout, dep, dm, dt, par) stacked as (ntrees, width)."""
        if self._stacked is None:
            self._stacked = (
                np.vstack(self._rows_din) if self._rows_din else np.zeros((0, self.width), np.int32),
                np.vstack(self._rows_dout) if self._rows_dout else np.zeros((0, self.width), np.int32),
                np.vstack(self._rows_dep) if self._rows_dep else np.zeros((0, self.width), np.int32),
                np.vstack(self._rows_dm) if self._rows_dm else np.zeros((0, self.width), np.int64),
                np.vstack(self._rows_dt) if self._rows_dt else np.zeros((0, self.width), np.int64),
                np.vstack(self._rows_par) if self._rows_par else np.zeros((0, self.width), np.int32),
            )
        return self._stacked

    def clear(self) -> None:
        self.trees.clear()
        for rows in (self._rows_din, self._rows_dout, self._rows_dep,
                     self._rows_dm, self._rows_dt, self._rows_par):
            rows.clear()
        self._stacked = None


class PathStore:
    """Columnar arena of path handles; index 0 is the empty path."""

    def __init__(self, modulus: int = 1):
        self.modulus = modulus
        self.trees: list[SsspTree] = []
        self._cap = 64
        self.kind = np.zeros(self._cap, dtype=np.int8)
        self.a = np.zeros(self._cap, dtype=np.int32)   # tree id / left child
        self.b = np.zeros(self._cap, dtype=np.int32)   # top node / right child
        self.c = np.zeros(self._cap, dtype=np.int32)   # bottom node
        self.wm = np.zeros(self._cap, dtype=np.int64)
        self.wt = np.zeros(self._cap, dtype=np.int64)
        self.hop = np.zeros(self._cap, dtype=np.int32)
        self.start = np.zeros(self._cap, dtype=np.int32)
        self.end = np.zeros(self._cap, dtype=np.int32)
        self.size = 1
        self.kind[BOTTOM] = KIND_BOTTOM
        self.wm[BOTTOM] = INF_M
        self.start[BOTTOM] = -1
        self.end[BOTTOM] = -1

    # -- arena plumbing ----------------------------------------------------

    def _push(self, kind, a, b, c, wm, wt, hop, start, end) -> int:
        if self.size == self._cap:
            self._cap *= 2
            for name in ("kind", "a", "b", "c", "wm", "wt", "hop", "start", "end"):
                arr = getattr(self, name)
                grown = np.zeros(self._cap, dtype=arr.dtype)
                grown[: self.size] = arr
                setattr(self, name, grown)
        i = self.size
        self.size += 1
        self.kind[i] = kind
        self.a[i] = a
        self.b[i] = b
        self.c[i] = c
        self.wm[i] = wm
        self.wt[i] = wt
        self.hop[i] = hop
        self.start[i] = start
        self.end[i] = end
        return i

    def mark(self) -> tuple[int, int]:
        return self.size, len(self.trees)

    def free_to(self, mark: tuple[int, int]) -> None:
        """Bulk-free every handle and tree created after mark."""
        self.size, ntrees = mark
        del self.trees[ntrees:]

    def add_tree(self, tree: SsspTree) -> int:
        tree.tree_id = len(self.trees)
        self.trees.append(tree)
        return tree.tree_id

    # -- constructors ------------------------------------------------------

    def point(self, v: int) -> int:
        return self._push(KIND_POINT, 0, 0, 0, 0, 0, 0, v, v)

    def segment(self, tree_id: int, top: int, bot: int) -> int:
        tree = self.trees[tree_id]
        if not tree.is_ancestor(top, bot):
            raise PathUsageError(f"segment top {top} is not an ancestor of {bot}")
        wm, wt = w_sub(tree.dm[bot], tree.dt[bot], tree.dm[top], tree.dt[top],
                       self.modulus)
        hop = int(tree.depth[bot] - tree.depth[top])
        if hop == 0:
            return self.point(tree.vertex_of(top))
        vt, vb = tree.vertex_of(top), tree.vertex_of(bot)
        start, end = (vb, vt) if tree.reversed else (vt, vb)
        return self._push(KIND_SEGMENT, tree_id, top, bot, wm, wt, hop, start, end)

    def concat(self, x: int, y: int) -> int:
        if x == BOTTOM or y == BOTTOM:
            return BOTTOM
        if self.hop[x] == 0:
            if self.start[x] != self.start[y]:
                raise PathUsageError("concat endpoint mismatch")
            return y
        if self.hop[y] == 0:
            if self.end[x] != self.start[y]:
                raise PathUsageError("concat endpoint mismatch")
            return x
        if self.end[x] != self.start[y]:
            raise PathUsageError(
                f"concat endpoint mismatch: {self.end[x]} vs {self.start[y]}")
        m = self.wm[x] + self.wm[y]
        t = self.wt[x] + self.wt[y]
        if t >= self.modulus:
            t -= self.modulus
            m += 1
        return self._push(KIND_CONCAT, x, y, 0, m, t,
                          self.hop[x] + self.hop[y], self.start[x], self.end[y])

    # -- queries -----------------------------------------------------------

    def weight(self, p: int) -> tuple[int, int]:
        return int(self.wm[p]), int(self.wt[p])

    def is_bottom(self, p: int) -> bool:
        return p == BOTTOM

    def vertices(self, p: int) -> list[int]:
        if p == BOTTOM:
            raise PathUsageError("the empty path has no vertices")
        out: list[int] = []
        stack = [p]
        while stack:
            q = stack.pop()
            k = self.kind[q]
            if k == KIND_CONCAT:
                stack.append(int(self.b[q]))
                stack.append(int(self.a[q]))
            elif k == KIND_POINT:
                v = int(self.start[q])
                if not out or out[-1] != v:
                    out.append(v)
            else:
                tree = self.trees[self.a[q]]
                vs = tree.node_vertices(int(self.b[q]), int(self.c[q]))
                if tree.reversed:
                    vs.reverse()
                if out and vs and out[-1] == vs[0]:
                    out.extend(vs[1:])
                else:
                    out.extend(vs)
        return out

    def intersects(self, p: int, dead) -> bool:
        """True when any vertex of p lies in the vertex set dead."""
        if p == BOTTOM:
            raise PathUsageError("the empty path has no vertices")
        if not dead:
            return False
        return any(v in dead for v in self.vertices(p))

    def _segments_of(self, p: int) -> list[int]:
        k = self.kind[p]
        if k in (KIND_SEGMENT, KIND_POINT):
            return [p]
        if k == KIND_CONCAT:
            left, right = int(self.a[p]), int(self.b[p])
            if self.kind[left] == KIND_CONCAT or self.kind[right] == KIND_CONCAT:
                raise UnsupportedPathShapeError("split_at needs at most two segments")
            return [left, right]
        raise UnsupportedPathShapeError("cannot split the empty path")

    def _segment_contains(self, seg: int, v: int) -> int:
        """Node of vertex v on the segment, or -1.  Simple trees only."""
        if self.kind[seg] == KIND_POINT:
            return 0 if self.start[seg] == v else -1
        tree = self.trees[self.a[seg]]
        if tree.vtx is not None:
            raise UnsupportedPathShapeError("split_at on a hop-stamped tree")
        top, bot = int(self.b[seg]), int(self.c[seg])
        if v >= tree.depth.shape[0] or tree.depth[v] < 0:
            return -1
        if tree.is_ancestor(top, v) and tree.is_ancestor(v, bot):
            return v
        return -1

    def _split_segment(self, seg: int, node: int) -> tuple[int, int]:
        if self.kind[seg] == KIND_POINT:
            return seg, seg
        tree = self.trees[self.a[seg]]
        top, bot = int(self.b[seg]), int(self.c[seg])
        upper = self.segment(self.a[seg], top, node)
        lower = self.segment(self.a[seg], node, bot)
        if tree.reversed:
            return lower, upper
        return upper, lower

    def split_at(self, p: int, v: int) -> tuple[bool, int, int]:
        """Locate vertex v on p; return (found, p[<v], p[>v]).

        p must be a tree segment or a concatenation of two (the shapes the
        rebuild step stores); junction hits split at the junction.
        """
        if p == BOTTOM:
            raise PathUsageError("cannot split the empty path")
        segs = self._segments_of(p)
        if len(segs) == 1:
            node = self._segment_contains(segs[0], v)
            if node < 0:
                return False, BOTTOM, BOTTOM
            pre, suf = self._split_segment(segs[0], node)
            return True, pre, suf
        left, right = segs
        node = self._segment_contains(left, v)
        if node >= 0:
            pre, suf = self._split_segment(left, node)
            return True, pre, self.concat(suf, right)
        node = self._segment_contains(right, v)
        if node >= 0:
            pre, suf = self._split_segment(right, node)
            return True, self.concat(left, pre), suf
        return False, BOTTOM, BOTTOM
