"""Per-layer rebuild machinery.

A layer i keeps hop-leveled path tables built through its center set C_i on
the graph as of its last rebuild, with congestion control: vertices that
would make future repairs expensive are moved into a congested set and
delegated to the next layer down (C_{i-1} = O_i together with the
concatenation-phase set).

Three table families exist:
  * basic tables   - hop-bounded Bellman-Ford-through-centers paths from
                     every source (reference engine mode),
  * dominant tables (pi) - pairings of strongly-hop-dominant paths to and
                     from each center, keyed by hop level,
  * concat tables  (pi-bar) - per level, the best covered two-table
                     concatenation through each center, built center by
                     center in random order with congestion feedback.

Entries are stored columnar; a dominant entry is two root-anchored tree
segments (reverse tree to the center, forward tree from it), a concat entry
references up to three dominant entries plus its junction vertices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from . import kernels
from .hop_levels import HopLevels
from .kernels import INF_M
from .path_store import SsspTree, TreeBank
from .rng import SeedStream, sample_subset
from .sssp import bellman_ford_through_centers, ssshdp_trees

I64 = np.int64

BAR_NONE = 0
BAR_FWD = 1
BAR_MIR = 2


class RebuildError(RuntimeError):
    """Congestion invariants still violated after every retry."""


# ---------------------------------------------------------------------------
# numba helpers
# ---------------------------------------------------------------------------


@njit(cache=True, inline="always")
def _on_path(din, dout, r, a, b, v):
    """v lies on the tree path a..b (a an ancestor of b)."""
    return (din[r, v] <= din[r, b] <= dout[r, v]) and (din[r, a] <= din[r, v] <= dout[r, a])


@njit(cache=True, inline="always")
def _is_anc(din, dout, r, a, b):
    return din[r, a] <= din[r, b] <= dout[r, a]


@njit(cache=True)
def pi_dead_mask(prt, pft, rows, cols, din, dout, roots, events):
    """Dead flags for dominant entries (two root-anchored segments)."""
    m = prt.shape[0]
    out = np.zeros(m, dtype=np.bool_)
    for k in range(m):
        r = prt[k]
        if r < 0:
            continue
        f = pft[k]
        s = rows[k]
        t = cols[k]
        for e in range(events.shape[0]):
            v = events[e]
            if _is_anc(din, dout, r, v, s) or _is_anc(din, dout, f, v, t):
                out[k] = True
                break
    return out


@njit(cache=True)
def _bar_entry_dead(kind, c, u, s, t, tAr, tAf, tBr, tBf, tCr, tCf,
                    din, dout, roots, v):
    """Does vertex v lie on the concat entry's path?  Mirrors _bar_pieces."""
    if kind == BAR_FWD:
        if tAr >= 0:
            if _is_anc(din, dout, tAr, c, s):
                if _on_path(din, dout, tAr, c, s, v):
                    return True
            else:
                if _is_anc(din, dout, tAr, v, s):
                    return True
                if _on_path(din, dout, tAf, roots[tAf], c, v):
                    return True
        if tBr >= 0:
            if _is_anc(din, dout, tBf, c, u):
                if _on_path(din, dout, tBf, c, u, v):
                    return True
            else:
                if _on_path(din, dout, tBr, roots[tBr], c, v):
                    return True
                if _is_anc(din, dout, tBf, v, u):
                    return True
        if _is_anc(din, dout, tCr, v, u) or _is_anc(din, dout, tCf, v, t):
            return True
        return False
    # mirror: eC' covers s..u, eB' prefix u..c, eA' suffix c..t
    if _is_anc(din, dout, tCr, v, s) or _is_anc(din, dout, tCf, v, u):
        return True
    if tBr >= 0:
        if _is_anc(din, dout, tBr, c, u):
            if _on_path(din, dout, tBr, c, u, v):
                return True
        else:
            if _is_anc(din, dout, tBr, v, u):
                return True
            if _on_path(din, dout, tBf, roots[tBf], c, v):
                return True
    if tAr >= 0:
        if _is_anc(din, dout, tAf, c, t):
            if _on_path(din, dout, tAf, c, t, v):
                return True
        else:
            if _on_path(din, dout, tAr, roots[tAr], c, v):
                return True
            if _is_anc(din, dout, tAf, v, t):
                return True
    return False


@njit(cache=True)
def bar_dead_mask(kind, cen, mid, rows, cols, tAr, tAf, tBr, tBf, tCr, tCf,
                  din, dout, roots, events):
    m = kind.shape[0]
    out = np.zeros(m, dtype=np.bool_)
    for k in range(m):
        if kind[k] == BAR_NONE:
            continue
        for e in range(events.shape[0]):
            if _bar_entry_dead(kind[k], cen[k], mid[k], rows[k], cols[k],
                               tAr[k], tAf[k], tBr[k], tBf[k], tCr[k], tCf[k],
                               din, dout, roots, events[e]):
                out[k] = True
                break
    return out


@njit(cache=True)
def _walk_piece(par, r, a, b, skip, unit, cong):
    """Add unit to every vertex on tree path a..b except `skip`; returns the
    largest congestion seen."""
    worst = -1.0
    u = b
    while True:
        if u != skip:
            cong[u] += unit
            if cong[u] > worst:
                worst = cong[u]
        if u == a:
            break
        u = par[r, u]
    return worst


@njit(cache=True)
def apply_improvements(order_j, order_s, order_t,
                       phim, phit, phihop, phikind, phimid,
                       phitAr, phitAf, phitBr, phitBf, phitCr, phitCf,
                       bwm, bwt, bhp, bkind, bcen, bmid,
                       btAr, btAf, btBr, btBf, btCr, btCf,
                       cong_bar, tau, units, c,
                       din, dout, par, roots, in_obar):
    """Write phi improvements into the concat table in the given order,
    accumulating congestion; stops right after some vertex first exceeds tau.

    Returns (progress index, crossed) where crossed signals that the caller
    must recompute phi with the grown congested set before continuing.
    """
    m = order_j.shape[0]
    for idx in range(m):
        j = order_j[idx]
        s = order_s[idx]
        t = order_t[idx]
        pw = phim[j, s, t]
        if pw >= INF_M:
            continue
        pt_ = phit[j, s, t]
        if (pw > bwm[j, s, t]) or (pw == bwm[j, s, t] and pt_ >= bwt[j, s, t]):
            continue
        bwm[j, s, t] = pw
        bwt[j, s, t] = pt_
        bhp[j, s, t] = phihop[j, s, t]
        kind = phikind[j, s, t]
        bkind[j, s, t] = kind
        bcen[j, s, t] = c
        u = phimid[j, s, t]
        bmid[j, s, t] = u
        tAr = phitAr[j, s, t]
        tAf = phitAf[j, s, t]
        tBr = phitBr[j, s, t]
        tBf = phitBf[j, s, t]
        tCr = phitCr[j, s, t]
        tCf = phitCf[j, s, t]
        btAr[j, s, t] = tAr
        btAf[j, s, t] = tAf
        btBr[j, s, t] = tBr
        btBf[j, s, t] = tBf
        btCr[j, s, t] = tCr
        btCf[j, s, t] = tCf
        # congestion along the new path, junction vertices counted once
        unit = units[j]
        worst = -1.0
        if kind == BAR_FWD:
            if tAr >= 0:
                if _is_anc(din, dout, tAr, c, s):
                    w = _walk_piece(par, tAr, c, s, -1, unit, cong_bar)
                else:
                    w = _walk_piece(par, tAr, roots[tAr], s, -1, unit, cong_bar)
                    w2 = _walk_piece(par, tAf, roots[tAf], c, roots[tAf], unit, cong_bar)
                    if w2 > w:
                        w = w2
            else:
                w = -1.0
            if w > worst:
                worst = w
            if tBr >= 0:
                if _is_anc(din, dout, tBf, c, u):
                    w = _walk_piece(par, tBf, c, u, c, unit, cong_bar)
                else:
                    w = _walk_piece(par, tBr, roots[tBr], c, c, unit, cong_bar)
                    w2 = _walk_piece(par, tBf, roots[tBf], u, roots[tBf], unit, cong_bar)
                    if w2 > w:
                        w = w2
                if w > worst:
                    worst = w
            w = _walk_piece(par, tCr, roots[tCr], u, u, unit, cong_bar)
            if w > worst:
                worst = w
            w = _walk_piece(par, tCf, roots[tCf], t, roots[tCf], unit, cong_bar)
            if w > worst:
                worst = w
        else:
            w = _walk_piece(par, tCr, roots[tCr], s, -1, unit, cong_bar)
            if w > worst:
                worst = w
            w = _walk_piece(par, tCf, roots[tCf], u, roots[tCf], unit, cong_bar)
            if w > worst:
                worst = w
            if tBr >= 0:
                if _is_anc(din, dout, tBr, c, u):
                    w = _walk_piece(par, tBr, c, u, u, unit, cong_bar)
                else:
                    w = _walk_piece(par, tBr, roots[tBr], u, u, unit, cong_bar)
                    w2 = _walk_piece(par, tBf, roots[tBf], c, roots[tBf], unit, cong_bar)
                    if w2 > w:
                        w = w2
                if w > worst:
                    worst = w
            if tAr >= 0:
                if _is_anc(din, dout, tAf, c, t):
                    w = _walk_piece(par, tAf, c, t, c, unit, cong_bar)
                else:
                    w = _walk_piece(par, tAr, roots[tAr], c, c, unit, cong_bar)
                    w2 = _walk_piece(par, tAf, roots[tAf], t, roots[tAf], unit, cong_bar)
                    if w2 > w:
                        w = w2
                if w > worst:
                    worst = w
        if worst > tau:
            return idx + 1, True
    return m, False


# ---------------------------------------------------------------------------
# layer state
# ---------------------------------------------------------------------------


@dataclass
class LayerState:
    i: int
    n: int
    levels: int
    tau: float
    rebuild_time: int = -1
    centers: np.ndarray = field(default_factory=lambda: np.empty(0, np.int64))
    O: np.ndarray | None = None
    Obar: np.ndarray | None = None
    out_centers: np.ndarray = field(default_factory=lambda: np.empty(0, np.int64))
    congestion: np.ndarray | None = None
    congestion_bar: np.ndarray | None = None
    # dominant tables
    pwm: np.ndarray | None = None
    pwt: np.ndarray | None = None
    php: np.ndarray | None = None
    prt: np.ndarray | None = None
    pft: np.ndarray | None = None
    # concat tables
    bwm: np.ndarray | None = None
    bwt: np.ndarray | None = None
    bhp: np.ndarray | None = None
    bkind: np.ndarray | None = None
    bcen: np.ndarray | None = None
    bmid: np.ndarray | None = None
    btAr: np.ndarray | None = None
    btAf: np.ndarray | None = None
    btBr: np.ndarray | None = None
    btBf: np.ndarray | None = None
    btCr: np.ndarray | None = None
    btCf: np.ndarray | None = None
    # basic tables: per level j, per source s
    basic_wm: list | None = None
    basic_wt: list | None = None
    basic_hop: list | None = None
    basic_node: list | None = None
    basic_par: list | None = None   # stacked parents (src, nodes)
    basic_vtx: list | None = None   # shared vtx layout per level
    basic_src: list | None = None   # source slot per stacked row

    def alloc_pi(self):
        shape = (self.levels, self.n, self.n)
        self.pwm = np.full(shape, INF_M, dtype=np.int64)
        self.pwt = np.zeros(shape, dtype=np.int64)
        self.php = np.zeros(shape, dtype=np.int32)
        self.prt = np.full(shape, -1, dtype=np.int32)
        self.pft = np.full(shape, -1, dtype=np.int32)

    def alloc_bar(self):
        shape = (self.levels, self.n, self.n)
        self.bwm = np.full(shape, INF_M, dtype=np.int64)
        self.bwt = np.zeros(shape, dtype=np.int64)
        self.bhp = np.zeros(shape, dtype=np.int32)
        self.bkind = np.zeros(shape, dtype=np.int8)
        self.bcen = np.full(shape, -1, dtype=np.int32)
        self.bmid = np.full(shape, -1, dtype=np.int32)
        for name in ("btAr", "btAf", "btBr", "btBf", "btCr", "btCf"):
            setattr(self, name, np.full(shape, -1, dtype=np.int32))


def layer_tau(n_formula: int, i: int, c_tau: float) -> float:
    return c_tau * float(math.isqrt(n_formula**5)) / float(2**i)


# ---------------------------------------------------------------------------
# congestion sampling (shared by the dominant rebuild)
# ---------------------------------------------------------------------------


@njit(cache=True)
def _bftc_congestion(pred, hop, h, n, unit, cong):
    """Walk every reached (copy=1) target at the last round and accumulate
    congestion; consecutive stalls collapse so each path vertex counts once."""
    worst = -1.0
    for t in range(n):
        if hop[h, 1, t] < 0:
            continue
        r = h
        cp = 1
        v = t
        last = -1
        while True:
            if v != last:
                cong[v] += unit
                if cong[v] > worst:
                    worst = cong[v]
                last = v
            if r == 0:
                break
            p = pred[r, cp, v]
            if p < 0:
                r -= 1
            else:
                v = p // 2
                cp = p % 2
                r -= 1
    return worst


def sample_congested(em, et, alive, centers_mask, layer: LayerState,
                     hops: HopLevels, modulus: int, n_formula: int,
                     stream: SeedStream, slot_order: np.ndarray):
    """Randomized congestion pass: per level, run the through-center kernel
    from a sampled subset of sources, scale contributions by 1/p, and move
    vertices over the threshold out of the working graph immediately."""
    n = em.shape[0]
    O = np.zeros(n, dtype=np.bool_)
    cong = np.zeros((layer.levels, n), dtype=np.float64)
    gen = stream.gen
    ne = max(n_formula, 2)
    log2n = math.log2(ne)
    if not centers_mask.any():
        layer.O = O
        layer.congestion = cong
        return O
    for j in range(layer.levels):
        hj = int(hops.h[j])
        pj = min(1.0, (ne * ne * log2n) / (layer.tau * hj))
        if pj <= 0.0:
            continue
        picked = sample_subset(gen, len(slot_order), pj)
        unit = (float(ne) / hj) / pj
        for k in picked:
            s = int(slot_order[k])
            if not alive[s] or O[s]:
                continue
            work = alive & ~O
            dm, dt, pred, hop = kernels.bftc_rounds(em, et, work, centers_mask,
                                                    s, hj, modulus)
            _bftc_congestion(pred, hop, hj, n, unit, cong[j])
            over = cong[j] > layer.tau
            O |= over
    layer.O = O
    layer.congestion = cong
    return O


# ---------------------------------------------------------------------------
# dominant rebuild
# ---------------------------------------------------------------------------


def rebuild_dominant(em, et, emT, etT, alive, layer: LayerState,
                     hops: HopLevels, modulus: int, n_formula: int,
                     stream: SeedStream, bank: TreeBank, built_at: int,
                     checks: bool = True):
    """Congestion sampling, then per center pair up the strongly-hop-dominant
    paths to and from it, keeping the per-(s, t, level) minimum."""
    n = em.shape[0]
    centers_mask = np.zeros(n, dtype=np.bool_)
    centers_mask[layer.centers] = True
    slot_order = np.flatnonzero(alive)
    sample_congested(em, et, alive, centers_mask, layer, hops, modulus,
                     n_formula, stream.child(1), slot_order)
    layer.alloc_pi()
    work = alive & ~layer.O
    hinv = hops._inv
    for c in layer.centers:
        c = int(c)
        if not work[c]:
            continue
        fwd = ssshdp_trees(em, et, work, c, hops.H, modulus, built_at=built_at)
        rev = ssshdp_trees(emT, etT, work, c, hops.H, modulus,
                           reversed_graph=True, built_at=built_at)
        fids = [bank.add(t) for t in fwd]
        rids = [bank.add(t) for t in rev]
        for rt, rid in zip(rev, rids):
            sdep = rt.depth
            s_ok = sdep >= 0
            for ft, fid in zip(fwd, fids):
                tdep = ft.depth
                t_ok = tdep >= 0
                hop = sdep[:, None] + tdep[None, :]
                valid = s_ok[:, None] & t_ok[None, :] & (hop >= 1)
                if not valid.any():
                    continue
                jarr = np.where(valid, hinv[np.where(valid, hop, 1)], -1)
                wm = rt.dm[:, None] + ft.dm[None, :]
                wt = rt.dt[:, None] + ft.dt[None, :]
                carry = wt >= modulus
                wt = np.where(carry, wt - modulus, wt)
                wm = np.where(carry, wm + 1, wm)
                for j in range(layer.levels):
                    sel = jarr == j
                    if not sel.any():
                        continue
                    cur_m = layer.pwm[j]
                    cur_t = layer.pwt[j]
                    better = sel & ((wm < cur_m) | ((wm == cur_m) & (wt < cur_t)))
                    if not better.any():
                        continue
                    layer.pwm[j][better] = wm[better]
                    layer.pwt[j][better] = wt[better]
                    layer.php[j][better] = hop[better]
                    layer.prt[j][better] = rid
                    layer.pft[j][better] = fid
    if checks:
        for j in range(layer.levels):
            present = layer.prt[j] >= 0
            assert (layer.php[j][present] <= hops.h[j]).all(), \
                "dominant entry exceeds its level hop bound"
    layer.out_centers = np.flatnonzero(layer.O)
    return layer


# ---------------------------------------------------------------------------
# concat tables
# ---------------------------------------------------------------------------


def _entry_matrix(all_layers, upto_layer, level, n):
    """Iterate finite dominant-entry slices for layers <= upto_layer at one
    level: yields (wm, wt, hop, revtree, fwdtree)."""
    for st in all_layers:
        if st.i > upto_layer or st.pwm is None:
            continue
        if level >= st.levels:
            continue
        yield st.pwm[level], st.pwt[level], st.php[level], st.prt[level], st.pft[level]


def _obar_entry_alive(prt, pft, bank: TreeBank, obar_list):
    """Mask of entries avoiding every vertex in obar_list."""
    din, dout, _, _, _, _ = bank.arrays
    ok = prt >= 0
    if not len(obar_list):
        return ok
    n = prt.shape[0]
    rows = np.broadcast_to(np.arange(n)[:, None], prt.shape)
    cols = np.broadcast_to(np.arange(n)[None, :], prt.shape)
    r = np.where(ok, prt, 0)
    f = np.where(ok, pft, 0)
    for v in obar_list:
        on_rev = (din[r, v] <= din[r, rows]) & (din[r, rows] <= dout[r, v])
        on_fwd = (din[f, v] <= din[f, cols]) & (din[f, cols] <= dout[f, v])
        ok = ok & ~(on_rev | on_fwd)
    return ok


def _lex_min_axis(wm, wt, axis):
    """(min_m, min_t, arg) lexicographic minimum along an axis; rows that are
    all infinite come back as (INF_M, 0, 0)."""
    mm = wm.min(axis=axis)
    on_min = wm == np.expand_dims(mm, axis)
    mt = np.where(on_min, wt, np.iinfo(np.int64).max).min(axis=axis)
    sel = on_min & (wt == np.expand_dims(mt, axis))
    idx = np.argmax(sel, axis=axis)
    mt = np.where(mm >= INF_M, 0, mt)
    return mm, mt, idx


def _carry(arr_m, arr_t, modulus):
    neg = arr_t < 0
    arr_t[neg] += modulus
    arr_m[neg] -= 1
    over = arr_t >= modulus
    arr_t[over] -= modulus
    arr_m[over] += 1


class _ConcatScratch:
    """Per-(center, level-cumulative) aggregates for the concat construction:
    pf_* = best prefix (start -> c) keyed by start, pt_* = best suffix
    (c -> end) keyed by end, per level budget."""

    def __init__(self, n, levels):
        self.n = n
        self.levels = levels
        shape = (levels, n)
        self.pf_wm = np.full(shape, INF_M, dtype=np.int64)
        self.pf_wt = np.zeros(shape, dtype=np.int64)
        self.pf_hop = np.zeros(shape, dtype=np.int32)
        self.pf_rev = np.full(shape, -1, dtype=np.int32)
        self.pf_fwd = np.full(shape, -1, dtype=np.int32)
        self.pt_wm = np.full(shape, INF_M, dtype=np.int64)
        self.pt_wt = np.zeros(shape, dtype=np.int64)
        self.pt_hop = np.zeros(shape, dtype=np.int32)
        self.pt_rev = np.full(shape, -1, dtype=np.int32)
        self.pt_fwd = np.full(shape, -1, dtype=np.int32)


def _aggregate_center(scratch, c, layers_states, upto_layer, levels, bank,
                      obar_list, modulus):
    """Fill the prefix and suffix minima per level from every surviving entry
    containing c (both sides of the entry's own center count)."""
    din, dout, dep, dm, dt, _ = bank.arrays
    n = scratch.n
    rows = np.arange(n)
    srow = rows[:, None]
    tcol = rows[None, :]
    for st in layers_states:
        if st.i > upto_layer or st.pwm is None:
            continue
        for j in range(min(levels, st.levels)):
            prt, pft = st.prt[j], st.pft[j]
            ok = _obar_entry_alive(prt, pft, bank, obar_list)
            if not ok.any():
                continue
            r = np.where(ok, prt, 0)
            f = np.where(ok, pft, 0)
            # c on the reverse side <=> c is an ancestor of the row vertex in
            # the reverse tree; forward side likewise with the column vertex
            rev_side = ok & (din[r, c] <= din[r, srow]) & (din[r, srow] <= dout[r, c])
            fwd_side = ok & (din[f, c] <= din[f, tcol]) & (din[f, tcol] <= dout[f, c])
            has_c = rev_side | fwd_side
            if not has_c.any():
                continue
            pre_m = np.where(rev_side, dm[r, srow] - dm[r, c], dm[r, srow] + dm[f, c])
            pre_t = np.where(rev_side, dt[r, srow] - dt[r, c], dt[r, srow] + dt[f, c])
            pre_h = np.where(rev_side, dep[r, srow] - dep[r, c], dep[r, srow] + dep[f, c])
            suf_m = np.where(fwd_side, dm[f, tcol] - dm[f, c], dm[r, c] + dm[f, tcol])
            suf_t = np.where(fwd_side, dt[f, tcol] - dt[f, c], dt[r, c] + dt[f, tcol])
            suf_h = np.where(fwd_side, dep[f, tcol] - dep[f, c], dep[r, c] + dep[f, tcol])
            _carry(pre_m, pre_t, modulus)
            _carry(suf_m, suf_t, modulus)
            pre_m = np.where(has_c, pre_m, INF_M)
            suf_m = np.where(has_c, suf_m, INF_M)
            # best prefix per start vertex (minimize over the entry's end)
            mm, mt, idx = _lex_min_axis(pre_m, pre_t, 1)
            better = (mm < scratch.pf_wm[j]) | ((mm == scratch.pf_wm[j]) & (mt < scratch.pf_wt[j]))
            upd = np.flatnonzero(better)
            if upd.size:
                pick = idx[upd]
                scratch.pf_wm[j][upd] = mm[upd]
                scratch.pf_wt[j][upd] = mt[upd]
                scratch.pf_hop[j][upd] = pre_h[upd, pick]
                scratch.pf_rev[j][upd] = prt[upd, pick]
                scratch.pf_fwd[j][upd] = pft[upd, pick]
            # best suffix per end vertex (minimize over the entry's start)
            mm, mt, idx = _lex_min_axis(suf_m, suf_t, 0)
            better = (mm < scratch.pt_wm[j]) | ((mm == scratch.pt_wm[j]) & (mt < scratch.pt_wt[j]))
            upd = np.flatnonzero(better)
            if upd.size:
                pick = idx[upd]
                scratch.pt_wm[j][upd] = mm[upd]
                scratch.pt_wt[j][upd] = mt[upd]
                scratch.pt_hop[j][upd] = suf_h[pick, upd]
                scratch.pt_rev[j][upd] = prt[pick, upd]
                scratch.pt_fwd[j][upd] = pft[pick, upd]
    # cumulative minima over level budgets
    for j in range(1, levels):
        for wm, wt, hp, rv, fw in (
            (scratch.pf_wm, scratch.pf_wt, scratch.pf_hop, scratch.pf_rev, scratch.pf_fwd),
            (scratch.pt_wm, scratch.pt_wt, scratch.pt_hop, scratch.pt_rev, scratch.pt_fwd),
        ):
            better = (wm[j - 1] < wm[j]) | ((wm[j - 1] == wm[j]) & (wt[j - 1] < wt[j]))
            for arr in (wm, wt, hp, rv, fw):
                arr[j][better] = arr[j - 1][better]


class _BestTables:
    """Per level budget, the pointwise-min surviving entry over layers <= i
    avoiding the current congested set (the c-free part of the construction).
    Rebuilt whenever the congested set grows."""

    def __init__(self, layers_states, upto_layer, levels, n, bank, obar_list):
        self.wm = np.full((levels, n, n), INF_M, dtype=np.int64)
        self.wt = np.zeros((levels, n, n), dtype=np.int64)
        self.hop = np.zeros((levels, n, n), dtype=np.int32)
        self.rev = np.full((levels, n, n), -1, dtype=np.int32)
        self.fwd = np.full((levels, n, n), -1, dtype=np.int32)
        for st in layers_states:
            if st.i > upto_layer or st.pwm is None:
                continue
            for j in range(min(levels, st.levels)):
                ok = _obar_entry_alive(st.prt[j], st.pft[j], bank, obar_list)
                wm = np.where(ok, st.pwm[j], INF_M)
                better = (wm < self.wm[j]) | ((wm == self.wm[j]) & (st.pwt[j] < self.wt[j]))
                self.wm[j][better] = wm[better]
                self.wt[j][better] = st.pwt[j][better]
                self.hop[j][better] = st.php[j][better]
                self.rev[j][better] = st.prt[j][better]
                self.fwd[j][better] = st.pft[j][better]
        for j in range(1, levels):
            better = (self.wm[j - 1] < self.wm[j]) | (
                (self.wm[j - 1] == self.wm[j]) & (self.wt[j - 1] < self.wt[j]))
            for arr in (self.wm, self.wt, self.hop, self.rev, self.fwd):
                arr[j][better] = arr[j - 1][better]


def _phi_tables(scratch: _ConcatScratch, best: _BestTables, c, levels, n,
                modulus, hops, checks):
    """Combine aggregates into the per-level phi tables (forward and mirror,
    keeping the shorter) with full witness columns."""
    shape = (levels, n, n)
    phim = np.full(shape, INF_M, dtype=np.int64)
    phit = np.zeros(shape, dtype=np.int64)
    phihop = np.zeros(shape, dtype=np.int32)
    phikind = np.zeros(shape, dtype=np.int8)
    phimid = np.full(shape, -1, dtype=np.int32)
    tAr = np.full(shape, -1, dtype=np.int32)
    tAf = np.full(shape, -1, dtype=np.int32)
    tBr = np.full(shape, -1, dtype=np.int32)
    tBf = np.full(shape, -1, dtype=np.int32)
    tCr = np.full(shape, -1, dtype=np.int32)
    tCf = np.full(shape, -1, dtype=np.int32)
    for j in range(levels):
        # a prefix or suffix can always be empty at the center itself
        pf_m = scratch.pf_wm[j].copy()
        pf_t = scratch.pf_wt[j].copy()
        pf_h = scratch.pf_hop[j].copy()
        if pf_m[c] > 0 or (pf_m[c] == 0 and pf_t[c] > 0):
            pf_m[c] = 0
            pf_t[c] = 0
            pf_h[c] = 0
        pt_m = scratch.pt_wm[j].copy()
        pt_t = scratch.pt_wt[j].copy()
        pt_h = scratch.pt_hop[j].copy()
        if pt_m[c] > 0 or (pt_m[c] == 0 and pt_t[c] > 0):
            pt_m[c] = 0
            pt_t[c] = 0
            pt_h[c] = 0
        # forward: prefix(s..c) + suffix(c..u) + entry(u..t)
        mid_m = pt_m[:, None] + best.wm[j]
        mid_t = pt_t[:, None] + best.wt[j]
        fin = (pt_m[:, None] < INF_M) & (best.wm[j] < INF_M)
        mid_m = np.where(fin, mid_m, INF_M)
        _carry(mid_m, mid_t, modulus)
        cm, ct, cu = _lex_min_axis(mid_m, mid_t, 0)  # per t: best u
        fw_m = pf_m[:, None] + cm[None, :]
        fw_t = pf_t[:, None] + ct[None, :]
        ffin = (pf_m[:, None] < INF_M) & (cm[None, :] < INF_M)
        fw_m = np.where(ffin, fw_m, INF_M)
        _carry(fw_m, fw_t, modulus)
        fw_hop = (pf_h[:, None] + pt_h[cu][None, :]
                  + best.hop[j][cu, np.arange(n)][None, :])
        # mirror: entry(s..u) + prefix(u..c) + suffix(c..t)
        mir_m = best.wm[j] + pf_m[None, :]
        mir_t = best.wt[j] + pf_t[None, :]
        mfin = (best.wm[j] < INF_M) & (pf_m[None, :] < INF_M)
        mir_m = np.where(mfin, mir_m, INF_M)
        _carry(mir_m, mir_t, modulus)
        sm, st_, su = _lex_min_axis(mir_m, mir_t, 1)  # per s: best u
        mi_m = sm[:, None] + pt_m[None, :]
        mi_t = st_[:, None] + pt_t[None, :]
        mifin = (sm[:, None] < INF_M) & (pt_m[None, :] < INF_M)
        mi_m = np.where(mifin, mi_m, INF_M)
        _carry(mi_m, mi_t, modulus)
        mi_hop = (best.hop[j][np.arange(n), su][:, None]
                  + pf_h[su][:, None] + pt_h[None, :])
        use_fwd = (fw_m < mi_m) | ((fw_m == mi_m) & (fw_t <= mi_t))
        phim[j] = np.where(use_fwd, fw_m, mi_m)
        phit[j] = np.where(use_fwd, fw_t, mi_t)
        phihop[j] = np.where(use_fwd, fw_hop, mi_hop)
        phikind[j] = np.where(phim[j] >= INF_M, BAR_NONE,
                              np.where(use_fwd, BAR_FWD, BAR_MIR))
        rowv = np.arange(n)[:, None]
        colv = np.arange(n)[None, :]
        u_f = np.broadcast_to(cu[None, :], (n, n))
        u_m = np.broadcast_to(su[:, None], (n, n))
        phimid[j] = np.where(use_fwd, u_f, u_m)
        # witnesses: forward uses A=prefix-entry(s), B=suffix-entry(u),
        # C=best(u,t); mirror uses C=best(s,u), B=prefix-entry(u), A=suffix-entry(t)
        tAr[j] = np.where(use_fwd, np.broadcast_to(scratch.pf_rev[j][:, None], (n, n)),
                          np.broadcast_to(scratch.pt_rev[j][None, :], (n, n)))
        tAf[j] = np.where(use_fwd, np.broadcast_to(scratch.pf_fwd[j][:, None], (n, n)),
                          np.broadcast_to(scratch.pt_fwd[j][None, :], (n, n)))
        tBr[j] = np.where(use_fwd, scratch.pt_rev[j][u_f], scratch.pf_rev[j][u_m])
        tBf[j] = np.where(use_fwd, scratch.pt_fwd[j][u_f], scratch.pf_fwd[j][u_m])
        tCr[j] = np.where(use_fwd, best.rev[j][u_f, colv], best.rev[j][rowv, u_m])
        tCf[j] = np.where(use_fwd, best.fwd[j][u_f, colv], best.fwd[j][rowv, u_m])
        # zero prefix/suffix pieces: mark the entry ref absent
        zeroA_f = rowv == c
        zeroA_m = colv == c
        zeroB_f = u_f == c
        zeroB_m = u_m == c
        zeroA = np.where(use_fwd, zeroA_f, zeroA_m)
        zeroB = np.where(use_fwd, zeroB_f, zeroB_m)
        tAr[j][zeroA] = -1
        tAf[j][zeroA] = -1
        tBr[j][zeroB] = -1
        tBf[j][zeroB] = -1
        none = phikind[j] == BAR_NONE
        phimid[j][none] = -1
        if checks:
            present = phikind[j] != BAR_NONE
            assert (phihop[j][present] <= 3 * int(hops.h[j])).all(), \
                "concat entry exceeds 3x its level hop bound"
    return (phim, phit, phihop, phikind, phimid, tAr, tAf, tBr, tBf, tCr, tCf)
