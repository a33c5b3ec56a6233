"""Numba kernels for the hot paths.

Everything here operates on flat numpy arrays prepared by the owning
modules: the weight-table dynamic program, the batched tree sampler with
validation and extension counting, and the exact chronological backtracker.
Randomness is counter-based (one splitmix64 stream keyed by (seed, draw
index)), so results are independent of thread count and chunking.

Integer arithmetic is guarded: products and sums saturate above _CAP and the
saturation is reported, at which point the caller recomputes with float64
weights (pass cap=inf to disable saturation on that path).
"""
from __future__ import annotations

import numpy as np
from numba import njit, prange

_CAP = np.int64(1) << np.int64(61)
_CAPF = 1e300  # float-mode cap: effectively never saturates, keeps 0/1 typed
_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_INV53 = 1.0 / 9007199254740992.0  # 2**-53


# ---- counter-based RNG -----------------------------------------------------

@njit(cache=True, inline="always")
def _mix64(z):
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


@njit(cache=True, inline="always")
def _rng_init(seed, draw):
    return _mix64(np.uint64(seed) + _GOLDEN * (np.uint64(draw) + np.uint64(1)))


@njit(cache=True, inline="always")
def _rng_u01(state):
    """Advance the stream; returns (new_state, uniform in [0, 1))."""
    state = state + _GOLDEN
    return state, float(_mix64(state) >> np.uint64(11)) * _INV53


# ---- guarded arithmetic and searches ----------------------------------------

@njit(cache=True, inline="always")
def _gadd(a, b, cap):
    # saturates at 2*cap, which still fits the value range of both dtypes
    if a > cap - b:
        return cap + cap
    return a + b


@njit(cache=True, inline="always")
def _gmul(a, b, cap):
    if a > 0 and b > 0 and a > cap // b:
        return cap + cap
    return a * b


@njit(cache=True, inline="always")
def _bisect_left(arr, lo, hi, x):
    while lo < hi:
        mid = (lo + hi) >> 1
        if arr[mid] < x:
            lo = mid + 1
        else:
            hi = mid
    return lo


@njit(cache=True, inline="always")
def _bisect_right(arr, lo, hi, x):
    while lo < hi:
        mid = (lo + hi) >> 1
        if arr[mid] <= x:
            lo = mid + 1
        else:
            hi = mid
    return lo


# ---- weight-table dynamic program -------------------------------------------

@njit(cache=True, parallel=True)
def weight_table(ts, src, dst,
                 out_off, out_ts, out_eid, out_dst,
                 in_off, in_ts, in_eid, in_src,
                 win_lo, win_hi, win_first, entry_off, entry_win,
                 level_slots, level_off,
                 trip_off, trip_child, trip_alpha, trip_beta, trip_anchor_src,
                 delta, use_c2, cap, w, ofl, scan):
    """Fill w[slot, entry] bottom-up by tree-edge height.

    Leaf rows come prefilled with ones; each non-leaf weight is the product
    over dependency triples of the summed child weights along the clipped
    candidate interval.  `ofl` marks entries whose value saturated; `scan`
    counts adjacency entries touched (resource-contract instrumentation).
    """
    n_entries = w.shape[1]
    one = cap - cap + 1
    for lvl in range(len(level_off) - 1):
        for entry in prange(n_entries):
            wi = entry_win[entry]
            eid = win_first[wi] + (entry - entry_off[wi])
            eu = src[eid]
            ev = dst[eid]
            et = ts[eid]
            wlo = win_lo[wi]
            whi = win_hi[wi]
            touched = 0
            for sp in range(level_off[lvl], level_off[lvl + 1]):
                s = level_slots[sp]
                prod = one
                for ti in range(trip_off[s], trip_off[s + 1]):
                    if prod == 0:
                        break
                    if trip_anchor_src[ti] == 1:
                        av, bv = eu, ev
                    else:
                        av, bv = ev, eu
                    if trip_beta[ti] == 0:
                        lo, hi = et - delta, et
                    else:
                        lo, hi = et, et + delta
                    if lo < wlo:
                        lo = wlo
                    if hi > whi:
                        hi = whi
                    ssum = cap - cap
                    if lo <= hi:
                        child = trip_child[ti]
                        if trip_alpha[ti] == 0:
                            a0, b0 = out_off[av], out_off[av + 1]
                            i = _bisect_left(out_ts, a0, b0, lo)
                            j = _bisect_right(out_ts, a0, b0, hi)
                            for p in range(i, j):
                                touched += 1
                                if use_c2 and out_dst[p] == bv:
                                    continue
                                ce = out_eid[p] - win_first[wi] + entry_off[wi]
                                ssum = _gadd(ssum, w[child, ce], cap)
                        else:
                            a0, b0 = in_off[av], in_off[av + 1]
                            i = _bisect_left(in_ts, a0, b0, lo)
                            j = _bisect_right(in_ts, a0, b0, hi)
                            for p in range(i, j):
                                touched += 1
                                if use_c2 and in_src[p] == bv:
                                    continue
                                ce = in_eid[p] - win_first[wi] + entry_off[wi]
                                ssum = _gadd(ssum, w[child, ce], cap)
                    prod = _gmul(prod, ssum, cap)
                w[s, entry] = prod
                if prod > cap:
                    ofl[entry] = 1
            scan[entry] += touched


@njit(cache=True)
def guarded_cumsum(row, out, cap):
    """Running sum with saturation; returns the (possibly saturated) total."""
    acc = cap - cap
    for i in range(row.size):
        acc = _gadd(acc, row[i], cap)
        out[i] = acc
    return acc


# ---- one sampled tree draw ---------------------------------------------------

@njit(cache=True)
def _draw_tree(seed, draw, wi,
               ts, src, dst,
               out_off, out_ts, out_eid, out_dst,
               in_off, in_ts, in_eid, in_src,
               win_lo, win_hi, win_first, entry_off,
               win_w, ccum, w, cap,
               center_slot, center_src, center_dst,
               desc_slots, slot_far,
               trip_off, trip_child, trip_alpha, trip_beta, trip_anchor_src,
               delta, use_c2, pe, mv):
    """Sample one partial tree match top-down into pe (edges) and mv (vertices).

    Returns 0 on success, 1 on the internal-consistency fault of an empty
    candidate list under a positive parent weight (impossible when the table
    and this descent follow the same candidate rule).
    """
    state = _rng_init(seed, draw)
    base = entry_off[wi]
    top = entry_off[wi + 1]

    state, u = _rng_u01(state)
    target = u * float(win_w[wi])
    lo, hi = base, top
    while lo < hi:
        mid = (lo + hi) >> 1
        if float(ccum[mid]) > target:
            hi = mid
        else:
            lo = mid + 1
    pos = lo
    if pos == top:
        pos = top - 1
    while pos > base and ccum[pos] == ccum[pos - 1]:
        pos -= 1
    eid = win_first[wi] + (pos - base)
    pe[center_slot] = eid
    mv[center_src] = src[eid]
    mv[center_dst] = dst[eid]

    wlo = win_lo[wi]
    whi = win_hi[wi]
    for di in range(desc_slots.size):
        s = desc_slots[di]
        t0, t1 = trip_off[s], trip_off[s + 1]
        if t0 == t1:
            continue
        e = pe[s]
        eu, ev, et = src[e], dst[e], ts[e]
        for ti in range(t0, t1):
            if trip_anchor_src[ti] == 1:
                av, bv = eu, ev
            else:
                av, bv = ev, eu
            if trip_beta[ti] == 0:
                lo_t, hi_t = et - delta, et
            else:
                lo_t, hi_t = et, et + delta
            if lo_t < wlo:
                lo_t = wlo
            if hi_t > whi:
                hi_t = whi
            child = trip_child[ti]
            if trip_alpha[ti] == 0:
                a0, b0 = out_off[av], out_off[av + 1]
                adj_ts, adj_eid, adj_other = out_ts, out_eid, out_dst
            else:
                a0, b0 = in_off[av], in_off[av + 1]
                adj_ts, adj_eid, adj_other = in_ts, in_eid, in_src
            i = _bisect_left(adj_ts, a0, b0, lo_t) if lo_t <= hi_t else b0
            j = _bisect_right(adj_ts, a0, b0, hi_t) if lo_t <= hi_t else b0
            ssum = cap - cap
            for p in range(i, j):
                if use_c2 and adj_other[p] == bv:
                    continue
                ce = adj_eid[p] - win_first[wi] + entry_off[wi]
                ssum = _gadd(ssum, w[child, ce], cap)
            if ssum <= 0:
                return 1
            state, u = _rng_u01(state)
            tgt = u * float(ssum)
            acc = cap - cap
            pick = -1
            for p in range(i, j):
                if use_c2 and adj_other[p] == bv:
                    continue
                ce = adj_eid[p] - win_first[wi] + entry_off[wi]
                wv = w[child, ce]
                if wv <= 0:
                    continue
                acc = _gadd(acc, wv, cap)
                pick = p
                if float(acc) > tgt:
                    break
            pe[child] = adj_eid[pick]
            mv[slot_far[child]] = adj_other[pick]
    return 0


# ---- extension counting (ListCount) ------------------------------------------

@njit(cache=True)
def _lc_forward(pair_ts, ra, rb, j0, j1):
    """Strictly-increasing chain count across lists [j0, j1).

    Returns (total, per-element chain counts of the last list).
    """
    f = np.ones(rb[j0] - ra[j0], np.int64)
    for jj in range(j0 + 1, j1):
        m = rb[jj] - ra[jj]
        g = np.empty(m, np.int64)
        acc = np.int64(0)
        p = 0
        prev_base = ra[jj - 1]
        prev_n = f.size
        for i in range(m):
            t_i = pair_ts[ra[jj] + i]
            while p < prev_n and pair_ts[prev_base + p] < t_i:
                acc = _gadd(acc, f[p], _CAP)
                p += 1
            g[i] = acc
        f = g
    total = np.int64(0)
    for i in range(f.size):
        total = _gadd(total, f[i], _CAP)
    return total, f


@njit(cache=True)
def _lc_backward(pair_ts, ra, rb, j0, j1):
    """Chain counts keyed by the first pick: g[i] chains starting at element i
    of list j0 and extending through list j1-1."""
    g = np.ones(rb[j1 - 1] - ra[j1 - 1], np.int64)
    for jj in range(j1 - 2, j0 - 1, -1):
        m = rb[jj] - ra[jj]
        h = np.empty(m, np.int64)
        acc = np.int64(0)
        p = g.size - 1
        nxt_base = ra[jj + 1]
        for i in range(m - 1, -1, -1):
            t_i = pair_ts[ra[jj] + i]
            while p >= 0 and pair_ts[nxt_base + p] > t_i:
                acc = _gadd(acc, g[p], _CAP)
                p -= 1
            h[i] = acc
        g = h
    return g


@njit(cache=True)
def _derive_extensions(ts, pair_keys, pair_off, pair_ts,
                       nt_src, nt_dst, nt_prev, nt_next, gap_off,
                       delta, pe, mv, t_min_s, t_max_s):
    """Exact number of full-motif matches extending the validated tree match.

    Non-tree candidates live strictly between the sampled timestamps of the
    neighbouring tree edges in time order; the open ends clip against the
    delta window anchored at the sampled extremes.  Gaps multiply, except
    that when both the earliest and the latest pattern edges are non-tree
    picks their joint span constraint couples the first and last gaps, which
    is resolved with one chains-by-first x chains-by-last pass.
    """
    nt = nt_src.size
    if nt == 0:
        return np.int64(1)
    ra = np.empty(nt, np.int64)
    rb = np.empty(nt, np.int64)
    npairs = pair_keys.size
    for j in range(nt):
        u = mv[nt_src[j]]
        v = mv[nt_dst[j]]
        key = (u << np.int64(32)) | v
        pidx = _bisect_left(pair_keys, 0, npairs, key)
        if pidx >= npairs or pair_keys[pidx] != key:
            return np.int64(0)
        a, b = pair_off[pidx], pair_off[pidx + 1]
        if nt_prev[j] >= 0:
            lo = ts[pe[nt_prev[j]]] + 1
        else:
            lo = t_max_s - delta
        if nt_next[j] >= 0:
            hi = ts[pe[nt_next[j]]] - 1
        else:
            hi = t_min_s + delta
        if lo > hi:
            return np.int64(0)
        i = _bisect_left(pair_ts, a, b, lo)
        k = _bisect_right(pair_ts, a, b, hi)
        if i >= k:
            return np.int64(0)
        ra[j] = i
        rb[j] = k

    ngaps = gap_off.size - 1
    first_open = nt_prev[gap_off[0]] < 0
    last_open = nt_next[gap_off[ngaps] - 1] < 0
    total = np.int64(1)
    g_first = 0
    g_last = ngaps - 1
    for g in range(ngaps):
        coupled = first_open and last_open and (g == g_first or g == g_last)
        if coupled:
            continue
        cnt, _ = _lc_forward(pair_ts, ra, rb, gap_off[g], gap_off[g + 1])
        if cnt == 0:
            return np.int64(0)
        total = _gmul(total, cnt, _CAP)
    if first_open and last_open:
        na = _lc_backward(pair_ts, ra, rb, gap_off[g_first], gap_off[g_first + 1])
        _, nb = _lc_forward(pair_ts, ra, rb, gap_off[g_last], gap_off[g_last + 1])
        blast = gap_off[g_last + 1] - 1
        bn = nb.size
        pb = np.empty(bn + 1, np.int64)
        pb[0] = 0
        for i in range(bn):
            pb[i + 1] = _gadd(pb[i], nb[i], _CAP)
        afirst = gap_off[g_first]
        pair_total = np.int64(0)
        for i in range(na.size):
            if na[i] == 0:
                continue
            limit = pair_ts[ra[afirst] + i] + delta
            idx = _bisect_right(pair_ts, ra[blast], rb[blast], limit) - ra[blast]
            pair_total = _gadd(pair_total, _gmul(na[i], pb[idx], _CAP), _CAP)
        if pair_total == 0:
            return np.int64(0)
        total = _gmul(total, pair_total, _CAP)
    return total


@njit(cache=True, inline="always")
def _window_span_count(t_lo, t_hi, delta, q):
    """How many lattice windows [i*delta, (i+2)*delta] contain [t_lo, t_hi]."""
    i_lo = (t_hi + delta - 1) // delta - 2
    if i_lo < 0:
        i_lo = 0
    i_hi = t_lo // delta
    if i_hi > q - 1:
        i_hi = q - 1
    n = i_hi - i_lo + 1
    if n < 0:
        n = 0
    return n


# ---- batched sampling / estimation --------------------------------------------

@njit(cache=True)
def sample_one(seed, draw, wi,
               ts, src, dst,
               out_off, out_ts, out_eid, out_dst,
               in_off, in_ts, in_eid, in_src,
               win_lo, win_hi, win_first, entry_off,
               win_w, ccum, w, cap,
               center_slot, center_src, center_dst,
               desc_slots, slot_far,
               trip_off, trip_child, trip_alpha, trip_beta, trip_anchor_src,
               delta, use_c2, n_vertices, out_picks):
    """Serial one-draw entry point for the interactive sampling surface."""
    pe = np.empty(desc_slots.size, np.int64)
    mv = np.empty(n_vertices, np.int64)
    fault = _draw_tree(seed, draw, wi, ts, src, dst,
                       out_off, out_ts, out_eid, out_dst,
                       in_off, in_ts, in_eid, in_src,
                       win_lo, win_hi, win_first, entry_off,
                       win_w, ccum, w, cap,
                       center_slot, center_src, center_dst,
                       desc_slots, slot_far,
                       trip_off, trip_child, trip_alpha, trip_beta,
                       trip_anchor_src, delta, use_c2, pe, mv)
    if fault == 0:
        for s in range(pe.size):
            out_picks[s] = pe[s]
    return fault


@njit(cache=True, parallel=True)
def sample_batch(seed, draw_base, k, draw_off,
                 ts, src, dst,
                 out_off, out_ts, out_eid, out_dst,
                 in_off, in_ts, in_eid, in_src,
                 win_lo, win_hi, win_first, entry_off,
                 win_w, ccum, w, cap,
                 center_slot, center_src, center_dst,
                 desc_slots, slot_far,
                 trip_off, trip_child, trip_alpha, trip_beta, trip_anchor_src,
                 delta, use_c2, n_vertices, n_chunks,
                 out_win, out_picks, out_fault):
    """Record the sampled window and tree-edge assignment of every draw."""
    n_slots = out_picks.shape[1]
    for c in prange(n_chunks):
        pe = np.empty(n_slots, np.int64)
        mv = np.empty(n_vertices, np.int64)
        j0 = (k * c) // n_chunks
        j1 = (k * (c + 1)) // n_chunks
        if j0 >= j1:
            continue
        q = draw_off.size - 1
        wi = _bisect_right(draw_off, 0, q, j0) - 1
        if wi < 0:
            wi = 0
        for j in range(j0, j1):
            while j >= draw_off[wi + 1]:
                wi += 1
            fault = _draw_tree(seed, draw_base + j, wi, ts, src, dst,
                               out_off, out_ts, out_eid, out_dst,
                               in_off, in_ts, in_eid, in_src,
                               win_lo, win_hi, win_first, entry_off,
                               win_w, ccum, w, cap,
                               center_slot, center_src, center_dst,
                               desc_slots, slot_far,
                               trip_off, trip_child, trip_alpha, trip_beta,
                               trip_anchor_src, delta, use_c2, pe, mv)
            if fault != 0:
                out_fault[c] += 1
                out_win[j] = -1
                continue
            out_win[j] = wi
            for s in range(n_slots):
                out_picks[j, s] = pe[s]


@njit(cache=True, parallel=True)
def estimate_batch(seed, draw_base, k, draw_off,
                   ts, src, dst,
                   out_off, out_ts, out_eid, out_dst,
                   in_off, in_ts, in_eid, in_src,
                   win_lo, win_hi, win_first, entry_off,
                   win_w, ccum, w, cap,
                   center_slot, center_src, center_dst,
                   desc_slots, slot_far,
                   trip_off, trip_child, trip_alpha, trip_beta, trip_anchor_src,
                   pair_keys, pair_off, pair_ts,
                   nt_src, nt_dst, nt_prev, nt_next, gap_off,
                   delta, use_c2, use_c3, n_vertices, n_windows, n_chunks,
                   out_cnt6, out_cnt6_f, out_tally, out_maxd, out_fault, out_ofl):
    """Draw, validate, and count extensions for draws [0, k).

    Per chunk: out_cnt6 accumulates 6 * extensions / window-multiplicity
    (exact int64, saturation mirrored into out_cnt6_f), out_tally rows hold
    (valid, vertex_map, delta_interval, edge_order) counts.
    """
    n_slots = desc_slots.size
    for c in prange(n_chunks):
        pe = np.empty(n_slots, np.int64)
        mv = np.empty(n_vertices, np.int64)
        j0 = (k * c) // n_chunks
        j1 = (k * (c + 1)) // n_chunks
        if j0 >= j1:
            continue
        wi = _bisect_right(draw_off, 0, n_windows, j0) - 1
        if wi < 0:
            wi = 0
        for j in range(j0, j1):
            while j >= draw_off[wi + 1]:
                wi += 1
            fault = _draw_tree(seed, draw_base + j, wi, ts, src, dst,
                               out_off, out_ts, out_eid, out_dst,
                               in_off, in_ts, in_eid, in_src,
                               win_lo, win_hi, win_first, entry_off,
                               win_w, ccum, w, cap,
                               center_slot, center_src, center_dst,
                               desc_slots, slot_far,
                               trip_off, trip_child, trip_alpha, trip_beta,
                               trip_anchor_src, delta, use_c2, pe, mv)
            if fault != 0:
                out_fault[c] += 1
                continue
            viol = 0
            for x in range(n_vertices):
                for y in range(x + 1, n_vertices):
                    if mv[x] == mv[y]:
                        viol = 1
                        break
                if viol != 0:
                    break
            t_min_s = ts[pe[0]]
            t_max_s = t_min_s
            for s in range(1, n_slots):
                tv = ts[pe[s]]
                if tv < t_min_s:
                    t_min_s = tv
                if tv > t_max_s:
                    t_max_s = tv
            if viol == 0 and t_max_s - t_min_s > delta:
                viol = 2
            if viol == 0:
                for s in range(1, n_slots):
                    if ts[pe[s]] <= ts[pe[s - 1]]:
                        viol = 3
                        break
            if viol != 0:
                out_tally[c, viol] += 1
                continue
            out_tally[c, 0] += 1
            if use_c3:
                nphi = _window_span_count(t_min_s, t_max_s, delta, n_windows)
            else:
                nphi = 1
            d = _derive_extensions(ts, pair_keys, pair_off, pair_ts,
                                   nt_src, nt_dst, nt_prev, nt_next, gap_off,
                                   delta, pe, mv, t_min_s, t_max_s)
            if d > _CAP:
                out_ofl[c] = 1
            if d > out_maxd[c]:
                out_maxd[c] = d
            contrib = _gmul(d, np.int64(6 // nphi), _CAP)
            out_cnt6[c] = _gadd(out_cnt6[c], contrib, _CAP)
            if out_cnt6[c] > _CAP:
                out_ofl[c] = 1
            out_cnt6_f[c] += float(d) * (6.0 / nphi)


# ---- exact chronological backtracking ------------------------------------------

@njit(cache=True, parallel=True)
def exact_backtrack(ts, src, dst,
                    out_off, out_ts, out_eid, out_dst,
                    in_off, in_ts, in_eid, in_src,
                    me_src, me_dst, n_vertices, delta, n_chunks, counts):
    """Count full motif matches by extending edges in required time order.

    Work splits over the choice of the first (earliest) edge; each extension
    explores only the binary-searched slice of candidates inside the open
    time bound and the closing delta bound.
    """
    m = ts.size
    n_edges = me_src.size
    for c in prange(n_chunks):
        phi = np.full(n_vertices, np.int64(-1))
        kind = np.empty(n_edges, np.int64)
        cur = np.empty(n_edges, np.int64)
        end = np.empty(n_edges, np.int64)
        tpick = np.empty(n_edges, np.int64)
        newa = np.empty(n_edges, np.int64)
        newb = np.empty(n_edges, np.int64)
        cnt = np.int64(0)
        a0 = (m * c) // n_chunks
        a1 = (m * (c + 1)) // n_chunks
        for anchor in range(a0, a1):
            if n_edges == 1:
                cnt += 1
                continue
            t_first = ts[anchor]
            phi[me_src[0]] = src[anchor]
            phi[me_dst[0]] = dst[anchor]
            tpick[0] = t_first
            d = 1
            _setup_depth(d, phi, me_src, me_dst, tpick, t_first, delta,
                         ts, out_off, out_ts, in_off, in_ts, m, kind, cur, end)
            while d >= 1:
                descended = False
                while cur[d] < end[d]:
                    p = cur[d]
                    cur[d] += 1
                    ok = False
                    va = np.int64(-1)
                    vb = np.int64(-1)
                    tv = np.int64(0)
                    kd = kind[d]
                    if kd == 0:
                        if out_dst[p] == phi[me_dst[d]]:
                            ok = True
                            tv = out_ts[p]
                    elif kd == 1:
                        wv = out_dst[p]
                        used = False
                        for z in range(n_vertices):
                            if phi[z] == wv:
                                used = True
                                break
                        if not used:
                            ok = True
                            va = me_dst[d]
                            phi[va] = wv
                            tv = out_ts[p]
                    elif kd == 2:
                        wv = in_src[p]
                        used = False
                        for z in range(n_vertices):
                            if phi[z] == wv:
                                used = True
                                break
                        if not used:
                            ok = True
                            va = me_src[d]
                            phi[va] = wv
                            tv = in_ts[p]
                    else:
                        uu = src[p]
                        vv = dst[p]
                        used = False
                        for z in range(n_vertices):
                            if phi[z] == uu or phi[z] == vv:
                                used = True
                                break
                        if not used:
                            ok = True
                            va = me_src[d]
                            vb = me_dst[d]
                            phi[va] = uu
                            phi[vb] = vv
                            tv = ts[p]
                    if not ok:
                        continue
                    tpick[d] = tv
                    newa[d] = va
                    newb[d] = vb
                    if d == n_edges - 1:
                        cnt += 1
                        if va >= 0:
                            phi[va] = -1
                        if vb >= 0:
                            phi[vb] = -1
                    else:
                        d += 1
                        _setup_depth(d, phi, me_src, me_dst, tpick, t_first,
                                     delta, ts, out_off, out_ts, in_off, in_ts,
                                     m, kind, cur, end)
                        descended = True
                        break
                if not descended:
                    d -= 1
                    if d >= 1:
                        if newa[d] >= 0:
                            phi[newa[d]] = -1
                        if newb[d] >= 0:
                            phi[newb[d]] = -1
            phi[me_src[0]] = -1
            phi[me_dst[0]] = -1
        counts[c] = cnt


@njit(cache=True, inline="always")
def _setup_depth(d, phi, me_src, me_dst, tpick, t_first, delta,
                 ts, out_off, out_ts, in_off, in_ts, m, kind, cur, end):
    px = phi[me_src[d]]
    py = phi[me_dst[d]]
    t_lo = tpick[d - 1]
    t_hi = t_first + delta
    if px >= 0 and py >= 0:
        kind[d] = 0
        a, b = out_off[px], out_off[px + 1]
        cur[d] = _bisect_right(out_ts, a, b, t_lo)
        end[d] = _bisect_right(out_ts, a, b, t_hi)
    elif px >= 0:
        kind[d] = 1
        a, b = out_off[px], out_off[px + 1]
        cur[d] = _bisect_right(out_ts, a, b, t_lo)
        end[d] = _bisect_right(out_ts, a, b, t_hi)
    elif py >= 0:
        kind[d] = 2
        a, b = in_off[py], in_off[py + 1]
        cur[d] = _bisect_right(in_ts, a, b, t_lo)
        end[d] = _bisect_right(in_ts, a, b, t_hi)
    else:
        kind[d] = 3
        cur[d] = _bisect_right(ts, 0, m, t_lo)
        end[d] = _bisect_right(ts, 0, m, t_hi)
