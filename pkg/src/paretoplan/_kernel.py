"""Compiled search loop for the normalised-sum and Pareto-front planners.

Same algorithm as ``planner._Search``, over flat arrays.  Per-cell
heuristic, elevation and per-move solar costs come in precomputed so both
engines perform identical floating-point operations and break ties the
same way.  The node index doubles as the insertion sequence number.

Open and front rows are mirrored column-major into compact arrays so the
per-expansion scans run branch-free over contiguous memory.  Every open row
off the front hangs in a linked list owned by one front member that
dominates it; when a member leaves the front only its own list is
re-examined.
"""

from __future__ import annotations

import numpy as np
from numba import njit

MODE_NORM = 1
MODE_PO = 2

OPEN, CLOSED, DEAD = 0, 1, 2
NO_HEADING = 8
# Rows are padded to a fixed width; unused columns stay zero, which changes
# neither dominance nor the normalised sums (zero-span columns are skipped).
D = 4
BLOCK = 128
LANES = 8


@njit(cache=True)
def _grow_rows(a, n):
    out = np.zeros((n, a.shape[1]))
    out[: a.shape[0]] = a
    return out


@njit(cache=True)
def _grow_cols(a, n):
    out = np.zeros((a.shape[0], n))
    out[:, : a.shape[1]] = a
    return out


@njit(cache=True)
def _grow_i(a, n):
    out = np.empty(n, dtype=a.dtype)
    out[: a.shape[0]] = a
    return out


@njit(cache=True)
def _dom(vec, a, b):
    """Row ``a`` of ``vec`` dominates row ``b``."""
    strict = False
    for k in range(D):
        if vec[a, k] > vec[b, k]:
            return False
        if vec[a, k] < vec[b, k]:
            strict = True
    return strict


@njit(cache=True)
def _wle(vec, a, b):
    for k in range(D):
        if vec[a, k] > vec[b, k]:
            return False
    return True


@njit(cache=True)
def _first_dominator(cols, count, vec, c):
    """Slot of some column-major row dominating ``vec[c]``, or -1."""
    c0 = vec[c, 0]
    c1 = vec[c, 1]
    c2 = vec[c, 2]
    c3 = vec[c, 3]
    a0 = cols[0]
    a1 = cols[1]
    a2 = cols[2]
    a3 = cols[3]
    start = 0
    while start < count:
        stop = min(start + BLOCK, count)
        hit = np.uint8(0)
        for i in range(start, stop):
            bad = (np.uint8(a0[i] > c0) | np.uint8(a1[i] > c1)
                   | np.uint8(a2[i] > c2) | np.uint8(a3[i] > c3))
            strict = (np.uint8(a0[i] < c0) | np.uint8(a1[i] < c1)
                      | np.uint8(a2[i] < c2) | np.uint8(a3[i] < c3))
            hit |= strict & (bad ^ np.uint8(1))
        if hit:
            for i in range(start, stop):
                if (a0[i] <= c0 and a1[i] <= c1 and a2[i] <= c2 and a3[i] <= c3
                        and (a0[i] < c0 or a1[i] < c1 or a2[i] < c2 or a3[i] < c3)):
                    return i
        start = stop
    return -1


@njit(cache=True)
def _dominated_slots(cols, count, vec, n, out):
    """Write the slots of rows ``vec[n]`` dominates into ``out``; return how many."""
    c0 = vec[n, 0]
    c1 = vec[n, 1]
    c2 = vec[n, 2]
    c3 = vec[n, 3]
    a0 = cols[0]
    a1 = cols[1]
    a2 = cols[2]
    a3 = cols[3]
    k = 0
    start = 0
    while start < count:
        stop = min(start + BLOCK, count)
        hit = np.uint8(0)
        for i in range(start, stop):
            bad = (np.uint8(c0 > a0[i]) | np.uint8(c1 > a1[i])
                   | np.uint8(c2 > a2[i]) | np.uint8(c3 > a3[i]))
            strict = (np.uint8(c0 < a0[i]) | np.uint8(c1 < a1[i])
                      | np.uint8(c2 < a2[i]) | np.uint8(c3 < a3[i]))
            hit |= strict & (bad ^ np.uint8(1))
        if hit:
            for i in range(start, stop):
                if (c0 <= a0[i] and c1 <= a1[i] and c2 <= a2[i] and c3 <= a3[i]
                        and (c0 < a0[i] or c1 < a1[i] or c2 < a2[i] or c3 < a3[i])):
                    out[k] = i
                    k += 1
        start = stop
    return k


@njit(cache=True, fastmath={"nnan", "ninf"})
def _col_range(col, count):
    lo = np.full(LANES, np.inf)
    hi = np.full(LANES, -np.inf)
    m = count - count % LANES
    for i in range(0, m, LANES):
        for j in range(LANES):
            v = col[i + j]
            lo[j] = min(lo[j], v)
            hi[j] = max(hi[j], v)
    a = lo.min()
    b = hi.max()
    for i in range(m, count):
        a = min(a, col[i])
        b = max(b, col[i])
    return a, b


@njit(cache=True)
def _pick(cols, ids, count, rng):
    """Smallest normalised sum over the first ``count`` rows; ties to the lowest id.

    ``rng`` holds each column's (lo, hi, dirty); dirty columns are rescanned.
    Each sum adds its column terms in column order, as ``pareto.normalized_sums`` does.
    """
    if count == 1:
        return ids[0]
    lo = np.empty(D)
    span = np.empty(D)
    for k in range(D):
        if rng[k, 2] != 0.0:
            rng[k, 0], rng[k, 1] = _col_range(cols[k], count)
            rng[k, 2] = 0.0
        lo[k] = rng[k, 0]
        span[k] = rng[k, 1] - rng[k, 0]
    lo0, lo1, lo2, lo3 = lo[0], lo[1], lo[2], lo[3]
    sp0, sp1, sp2, sp3 = span[0], span[1], span[2], span[3]
    a0 = cols[0]
    a1 = cols[1]
    a2 = cols[2]
    a3 = cols[3]
    best = -1
    best_sum = np.inf
    for i in range(count):
        s = 0.0
        if sp0 > 0.0:
            s += (a0[i] - lo0) / sp0
        if sp1 > 0.0:
            s += (a1[i] - lo1) / sp1
        if sp2 > 0.0:
            s += (a2[i] - lo2) / sp2
        if sp3 > 0.0:
            s += (a3[i] - lo3) / sp3
        if s < best_sum or (s == best_sum and ids[i] < best):
            best = ids[i]
            best_sum = s
    return best


@njit(cache=True)
def _adopt(blk_head, blk_tail, blk_next, owner, child):
    blk_next[child] = -1
    if blk_head[owner] < 0:
        blk_head[owner] = child
    else:
        blk_next[blk_tail[owner]] = child
    blk_tail[owner] = child


@njit(cache=True)
def _put(vec, n, ids, cols, pos, count, rng):
    ids[count] = n
    for k in range(D):
        v = vec[n, k]
        cols[k, count] = v
        if count == 0:
            rng[k, 0] = v
            rng[k, 1] = v
            rng[k, 2] = 0.0
        else:
            if v < rng[k, 0]:
                rng[k, 0] = v
            if v > rng[k, 1]:
                rng[k, 1] = v
    pos[n] = count
    return count + 1


@njit(cache=True)
def _take(slot, ids, cols, pos, count, rng):
    gone = ids[slot]
    count -= 1
    last = ids[count]
    ids[slot] = last
    for k in range(D):
        v = cols[k, slot]
        if v == rng[k, 0] or v == rng[k, 1]:
            rng[k, 2] = 1.0
        cols[k, slot] = cols[k, count]
    pos[last] = slot
    pos[gone] = -1
    return count


@njit(cache=True)
def _front_drop(vec, gone, state, front_ids, front_cols, front_pos, front_rng, n_front,
                cand, blk_head, blk_tail, blk_next):
    """Take ``gone`` off the front and promote rows only it dominated.

    Returns the new front size.
    """
    fs = front_pos[gone]
    if fs < 0:
        return n_front
    n_front = _take(fs, front_ids, front_cols, front_pos, n_front, front_rng)
    c = blk_head[gone]
    blk_head[gone] = -1
    k = 0
    last = -1
    while c >= 0:
        nxt = blk_next[c]
        if state[c] == OPEN:
            # siblings tend to share a dominator; try the last one first
            if last >= 0 and front_pos[front_ids[last]] == last and _dom(vec, front_ids[last], c):
                f = last
            else:
                f = _first_dominator(front_cols, n_front, vec, c)
            if f >= 0:
                last = f
                _adopt(blk_head, blk_tail, blk_next, front_ids[f], c)
            else:
                cand[k] = c
                k += 1
        c = nxt
    top_start = n_front
    for i in range(k):
        c = cand[i]
        top = True
        for o in range(k):
            if o != i and _dom(vec, cand[o], c):
                top = False
                break
        if top:
            n_front = _put(vec, c, front_ids, front_cols, front_pos, n_front, front_rng)
            blk_head[c] = -1
    for i in range(k):
        c = cand[i]
        if front_pos[c] < 0:
            for f in range(top_start, n_front):
                if _dom(vec, front_ids[f], c):
                    _adopt(blk_head, blk_tail, blk_next, front_ids[f], c)
                    break
    return n_front


@njit(cache=True)
def search(occ, hcell, elev, step_dx, step_dy, step_len, solar, sx, sy, gx, gy,
           mode, use_e, use_s, audit):
    """Run one search.

    Returns ``(parent, px, py, goal_parent, goal_move, expanded, peak,
    violations)``; ``goal_parent`` is -1 when the open list ran dry.
    """
    H, W = occ.shape
    cap = 4096
    vec = np.zeros((cap, D))
    px = np.empty(cap, dtype=np.int32)
    py = np.empty(cap, dtype=np.int32)
    parent = np.empty(cap, dtype=np.int64)
    state = np.empty(cap, dtype=np.int8)
    next_in_key = np.empty(cap, dtype=np.int64)
    open_pos = np.empty(cap, dtype=np.int64)
    front_pos = np.empty(cap, dtype=np.int64)
    blk_head = np.empty(cap, dtype=np.int64)
    blk_tail = np.empty(cap, dtype=np.int64)
    blk_next = np.empty(cap, dtype=np.int64)
    cand = np.empty(cap, dtype=np.int64)
    hits = np.empty(cap, dtype=np.int64)
    open_ids = np.empty(cap, dtype=np.int64)
    open_cols = np.zeros((D, cap))
    front_ids = np.empty(cap, dtype=np.int64)
    front_cols = np.zeros((D, cap))
    # per column: lo, hi, dirty flag
    open_rng = np.zeros((D, 3))
    front_rng = np.zeros((D, 3))
    key_head = np.full(H * W * 9, -1, dtype=np.int64)

    expanded = 0
    violations = 0

    vec[0, 1] = hcell[sy, sx]
    if use_e:
        vec[0, 2] = elev[sy, sx]
    px[0] = sx
    py[0] = sy
    parent[0] = -1
    state[0] = OPEN
    next_in_key[0] = -1
    key_head[(sy * W + sx) * 9 + NO_HEADING] = 0
    n_open = _put(vec, 0, open_ids, open_cols, open_pos, 0, open_rng)
    blk_head[0] = -1
    front_pos[0] = -1
    n_front = 0
    if mode == MODE_PO:
        n_front = _put(vec, 0, front_ids, front_cols, front_pos, 0, front_rng)
    n_nodes = 1
    peak = 1

    while n_open > 0:
        if mode == MODE_PO:
            q = _pick(front_cols, front_ids, n_front, front_rng)
        else:
            q = _pick(open_cols, open_ids, n_open, open_rng)
        if audit:
            # plain scan over the open rows, independent of the front bookkeeping
            for i in range(n_open):
                if _dom(vec, open_ids[i], q):
                    violations += 1
                    break
        n_open = _take(open_pos[q], open_ids, open_cols, open_pos, n_open, open_rng)
        state[q] = CLOSED
        if mode == MODE_PO:
            n_front = _front_drop(vec, q, state, front_ids, front_cols, front_pos, front_rng, n_front,
                                  cand, blk_head, blk_tail, blk_next)
        expanded += 1

        qx = px[q]
        qy = py[q]
        for m in range(8):
            nx = qx + step_dx[m]
            ny = qy + step_dy[m]
            if nx < 0 or ny < 0 or nx >= W or ny >= H or occ[ny, nx]:
                continue
            if nx == gx and ny == gy:
                return parent[:n_nodes], px[:n_nodes], py[:n_nodes], q, m, expanded, peak, violations
            if n_nodes == vec.shape[0]:
                cap = 2 * vec.shape[0]
                vec = _grow_rows(vec, cap)
                open_cols = _grow_cols(open_cols, cap)
                front_cols = _grow_cols(front_cols, cap)
                px = _grow_i(px, cap)
                py = _grow_i(py, cap)
                parent = _grow_i(parent, cap)
                state = _grow_i(state, cap)
                next_in_key = _grow_i(next_in_key, cap)
                open_pos = _grow_i(open_pos, cap)
                front_pos = _grow_i(front_pos, cap)
                blk_head = _grow_i(blk_head, cap)
                blk_tail = _grow_i(blk_tail, cap)
                blk_next = _grow_i(blk_next, cap)
                cand = _grow_i(cand, cap)
                hits = _grow_i(hits, cap)
                open_ids = _grow_i(open_ids, cap)
                front_ids = _grow_i(front_ids, cap)
            n = n_nodes
            vec[n, 0] = vec[q, 0] + step_len[m]
            vec[n, 1] = hcell[ny, nx]
            j = 2
            if use_e:
                vec[n, j] = elev[ny, nx]
                j += 1
            if use_s:
                vec[n, j] = vec[q, j] + solar[m]
            key = (ny * W + nx) * 9 + (m if use_s else NO_HEADING)

            skip = False
            e = key_head[key]
            while e >= 0:
                if state[e] != DEAD and _wle(vec, e, n):
                    skip = True
                    break
                e = next_in_key[e]
            if skip:
                continue

            e = key_head[key]
            while e >= 0:
                if state[e] != DEAD and _wle(vec, n, e):
                    was_open = state[e] == OPEN
                    state[e] = DEAD
                    if was_open:
                        n_open = _take(open_pos[e], open_ids, open_cols, open_pos, n_open, open_rng)
                        if mode == MODE_PO:
                            n_front = _front_drop(vec, e, state, front_ids, front_cols,
                                                  front_pos, front_rng, n_front, cand,
                                                  blk_head, blk_tail, blk_next)
                e = next_in_key[e]

            px[n] = nx
            py[n] = ny
            parent[n] = q
            state[n] = OPEN
            next_in_key[n] = key_head[key]
            key_head[key] = n
            n_open = _put(vec, n, open_ids, open_cols, open_pos, n_open, open_rng)
            front_pos[n] = -1
            blk_head[n] = -1
            if mode == MODE_PO:
                f = _first_dominator(front_cols, n_front, vec, n)
                if f >= 0:
                    _adopt(blk_head, blk_tail, blk_next, front_ids[f], n)
                else:
                    # descending, so each swap-remove pulls in a row already kept
                    for i in range(_dominated_slots(front_cols, n_front, vec, n, hits) - 1, -1, -1):
                        o = front_ids[hits[i]]
                        n_front = _take(hits[i], front_ids, front_cols, front_pos, n_front, front_rng)
                        # whatever o dominated, n dominates too
                        if blk_head[o] >= 0:
                            if blk_head[n] < 0:
                                blk_head[n] = blk_head[o]
                            else:
                                blk_next[blk_tail[n]] = blk_head[o]
                            blk_tail[n] = blk_tail[o]
                            blk_head[o] = -1
                        _adopt(blk_head, blk_tail, blk_next, n, o)
                    n_front = _put(vec, n, front_ids, front_cols, front_pos, n_front, front_rng)
            n_nodes += 1
            if n_open > peak:
                peak = n_open
    return parent[:n_nodes], px[:n_nodes], py[:n_nodes], -1, -1, expanded, peak, violations


def warm_up() -> None:
    """Compile (or load from cache) the search loop on a 2x2 map."""
    occ = np.zeros((2, 2), dtype=np.bool_)
    z = np.zeros((2, 2))
    dx = np.array([1, 1, 0, -1, -1, -1, 0, 1], dtype=np.int64)
    dy = np.array([0, -1, -1, -1, 0, 1, 1, 1], dtype=np.int64)
    for mode in (MODE_NORM, MODE_PO):
        search(occ, z, z, dx, dy, np.ones(8), np.zeros(8), 0, 0, 1, 1, mode, True, True, False)
