"""Integer kernels behind the decision procedures and the ray-shooting index.

Every coordinate here is an integer: callers scale the instance and ``q`` by
a common denominator, so an interval is ``[X[i], X[i] + U]`` and the
separation is ``Q``.  Value arrays are allocated with the input dtype, which
lets the same source run on object arrays of Python ints (see
:func:`lmcsi._jit.pure_copy`).  Index arrays are always int64.
"""

import numpy as np

from ._jit import kernel

# ---------------------------------------------------------------------------
# Segment forest for upward ray shooting.  Segments are identified by rank
# 0..N-1 (sorted by height); slot ranges are inclusive.


@kernel
def forest_build(lo_slot, hi_slot, nslots):
    """Segment tree (CSR layout) over ``nslots`` slots.

    Returns ``(size, offsets, entries, skip)``; node ``v`` owns
    ``entries[offsets[v]:offsets[v+1]]`` in increasing rank order.
    """
    size = 1
    while size < max(nslots, 1):
        size *= 2
    n = lo_slot.shape[0]
    counts = np.zeros(2 * size + 1, np.int64)
    for t in range(n):
        lo = lo_slot[t] + size
        hi = hi_slot[t] + size + 1
        while lo < hi:
            if lo & 1:
                counts[lo + 1] += 1
                lo += 1
            if hi & 1:
                hi -= 1
                counts[hi + 1] += 1
            lo >>= 1
            hi >>= 1
    offsets = np.cumsum(counts)
    fill = offsets[:-1].copy()
    entries = np.empty(offsets[-1], np.int64)
    for t in range(n):
        lo = lo_slot[t] + size
        hi = hi_slot[t] + size + 1
        while lo < hi:
            if lo & 1:
                entries[fill[lo]] = t
                fill[lo] += 1
                lo += 1
            if hi & 1:
                hi -= 1
                entries[fill[hi]] = t
                fill[hi] += 1
            lo >>= 1
            hi >>= 1
    skip = np.arange(1, offsets[-1] + 1, dtype=np.int64)
    return size, offsets, entries, skip


@kernel
def forest_shoot(size, offsets, entries, skip, dead, slot, min_rank):
    """Smallest live rank ``>= min_rank`` whose segment covers ``slot``, or -1."""
    best = -1
    v = slot + size
    while v >= 1:
        lo = offsets[v]
        end = offsets[v + 1]
        hi = end
        while lo < hi:
            mid = (lo + hi) >> 1
            if entries[mid] < min_rank:
                lo = mid + 1
            else:
                hi = mid
        r = lo
        while r < end and dead[entries[r]]:
            r = skip[r]
        e = lo
        while e < r and dead[entries[e]]:  # path compression
            nxt = skip[e]
            skip[e] = r
            e = nxt
        if r < end:
            cand = entries[r]
            if best < 0 or cand < best:
                best = cand
        v >>= 1
    return best


@kernel
def _slot_of(coords, v):
    r = np.searchsorted(coords, v)
    if r < coords.shape[0] and coords[r] == v:
        return 2 * r + 1
    return 2 * r


@kernel
def _row_pieces(lo, hi, lo_open, hi_open, owner, H):
    """Cut line segments into rows of height ``H``; offsets are row-relative.

    A piece reaching the end of its row is open at offset ``H``.
    """
    m = lo.shape[0]
    cnt = 0
    for t in range(m):
        cnt += hi[t] // H - lo[t] // H + 1
    row = np.empty(cnt, np.int64)
    a = np.empty(cnt, lo.dtype)
    b = np.empty(cnt, lo.dtype)
    ao = np.empty(cnt, np.bool_)
    bo = np.empty(cnt, np.bool_)
    own = np.empty(cnt, np.int64)
    k = 0
    for t in range(m):
        r0 = lo[t] // H
        r1 = hi[t] // H
        for r in range(r0, r1 + 1):
            base = r * H
            if r == r0:
                pa = lo[t] - base
                pao = lo_open[t]
            else:
                pa = lo[t] - lo[t]
                pao = False
            if r == r1:
                pb = hi[t] - base
                pbo = hi_open[t]
            else:
                pb = H + (lo[t] - lo[t])
                pbo = True
            if pa < pb or (pa == pb and not pao and not pbo):
                row[k] = r
                a[k] = pa
                b[k] = pb
                ao[k] = pao
                bo[k] = pbo
                own[k] = owner[t]
                k += 1
    return row[:k], a[:k], b[:k], ao[:k], bo[:k], own[:k]


@kernel
def _row_index(row, a, b, ao, bo, own):
    """Ray-shooting index over row pieces, ranked by (row, input order)."""
    order = np.argsort(row, kind="mergesort")
    rows = row[order]
    owners = own[order]
    coords = np.unique(np.concatenate((a, b)))
    m = row.shape[0]
    lo_slot = np.empty(m, np.int64)
    hi_slot = np.empty(m, np.int64)
    for t in range(m):
        s = order[t]
        lo_slot[t] = 2 * np.searchsorted(coords, a[s]) + 1 + (1 if ao[s] else 0)
        hi_slot[t] = 2 * np.searchsorted(coords, b[s]) + 1 - (1 if bo[s] else 0)
        if lo_slot[t] > hi_slot[t]:
            lo_slot[t] = 0
            hi_slot[t] = -1
    size, offsets, entries, skip = forest_build(lo_slot, hi_slot, 2 * coords.shape[0] + 1)
    return rows, owners, coords, size, offsets, entries, skip


@kernel
def _row_shoot(rows, coords, size, offsets, entries, skip, dead, j0, delta):
    """First live piece at row >= j0 covering offset ``delta``: rank or -1."""
    if rows.shape[0] == 0:
        return -1
    min_rank = np.searchsorted(rows, j0)
    if min_rank >= rows.shape[0]:
        return -1
    return forest_shoot(size, offsets, entries, skip, dead,
                        _slot_of(coords, delta), min_rank)


# ---------------------------------------------------------------------------
# Shared helpers.


@kernel
def split_parts(X, U, Q):
    """Start indices of the gap-free parts, followed by ``n``."""
    n = X.shape[0]
    starts = np.empty(n + 1, np.int64)
    starts[0] = 0
    m = 1
    for i in range(1, n):
        if X[i] - X[i - 1] - U >= Q:
            starts[m] = i
            m += 1
    starts[m] = n
    return starts[:m + 1].copy()


@kernel
def make_leftmost(X, C, R, Q):
    """Slide every representative left as far as separation allows.

    Processing in order of current position keeps every pair separated and
    never moves a point right, so a feasible input stays feasible.
    """
    n = X.shape[0]
    out = R.copy()
    if n == 0:
        return out
    order = np.argsort(R, kind="mergesort")
    have0 = False
    have1 = False
    m0 = R[0]
    m1 = R[0]
    for t in range(n):
        i = order[t]
        r = X[i]
        if C[i] == 0:
            if have1 and m1 + Q > r:
                r = m1 + Q
            if not have0 or r > m0:
                m0 = r
                have0 = True
        else:
            if have0 and m0 + Q > r:
                r = m0 + Q
            if not have1 or r > m1:
                m1 = r
                have1 = True
        out[i] = r
    return out


@kernel
def half_grid(X, C, U):
    """Color 0 on multiples of ``U``, color 1 on odd multiples of ``U/2``.

    ``U`` must be even.  Opposite colors end up at least ``U/2`` apart.
    """
    n = X.shape[0]
    R = np.empty(n, X.dtype)
    half = U // 2
    for i in range(n):
        if C[i] == 0:
            R[i] = -((-X[i]) // U) * U
        else:
            R[i] = -((half - X[i]) // U) * U + half
    return R


# ---------------------------------------------------------------------------
# q in (1, 2] and beyond: order-forced greedy.


@kernel
def decide_high_kernel(X, C, U, Q, starts):
    n = X.shape[0]
    R = np.empty(n, X.dtype)
    for p in range(starts.shape[0] - 1):
        lo = starts[p]
        hi = starts[p + 1]
        h0 = False
        h1 = False
        l0 = X[lo]
        l1 = X[lo]
        for i in range(lo, hi):
            r = X[i]
            if C[i] == 0:
                if h1 and l1 + Q > r:
                    r = l1 + Q
            else:
                if h0 and l0 + Q > r:
                    r = l0 + Q
            if r > X[i] + U:
                return False, R
            R[i] = r
            if C[i] == 0:
                if not h0 or r > l0:
                    l0 = r
                h0 = True
            else:
                if not h1 or r > l1:
                    l1 = r
                h1 = True
    return True, R


# ---------------------------------------------------------------------------
# q in (3/4, 1]: components of the "overlap >= q" graph.


@kernel
def _find(parent, x):
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


@kernel
def _union(parent, a, b):
    ra = _find(parent, a)
    rb = _find(parent, b)
    if ra != rb:
        if ra < rb:
            parent[rb] = ra
        else:
            parent[ra] = rb


@kernel
def components_h_kernel(X, C, U, Q):
    """Component label per interval, labels ordered by first member."""
    n = X.shape[0]
    W = U - Q
    parent = np.arange(n)
    idx1 = np.nonzero(C == 1)[0]
    B = X[idx1]
    nb = idx1.shape[0]
    link = np.zeros(nb + 1, np.int64)
    for r in range(n):
        if C[r] != 0:
            continue
        a = np.searchsorted(B, X[r] - W)
        b = np.searchsorted(B, X[r] + W, side="right") - 1
        if a <= b:
            _union(parent, r, idx1[a])
            link[a] += 1
            link[b] -= 1
    run = 0
    for t in range(nb - 1):
        run += link[t]
        if run > 0:
            _union(parent, idx1[t], idx1[t + 1])
    label = np.empty(n, np.int64)
    root_label = np.full(n, -1, np.int64)
    nc = 0
    for i in range(n):
        rt = _find(parent, i)
        if root_label[rt] < 0:
            root_label[rt] = nc
            nc += 1
        label[i] = root_label[rt]
    return label, nc


@kernel
def _subrep(X, C, U, Q, members, a, b, c, cp, x, write, R):
    """Leftmost placement of ``members[a:b]`` ending with color ``c``.

    The previous component ends with color ``cp`` at ``x``.  Returns
    ``(ok, rightmost)``; writes positions into ``R`` when ``write``.
    """
    has_c = False
    for t in range(a, b):
        if C[members[t]] == c:
            has_c = True
            break
    if not has_c:
        return False, x
    y = x
    have_y = False
    base = x + Q if cp == c else x
    for t in range(a, b):
        j = members[t]
        if C[j] == c:
            continue
        r = base if base > X[j] else X[j]
        if r > X[j] + U:
            return False, x
        if write:
            R[j] = r
        if not have_y or r > y:
            y = r
            have_y = True
    base = y + Q if have_y else (x + Q if cp != c else x)
    f = x
    have_f = False
    for t in range(a, b):
        j = members[t]
        if C[j] != c:
            continue
        r = base if base > X[j] else X[j]
        if r > X[j] + U:
            return False, x
        if write:
            R[j] = r
        if not have_f or r > f:
            f = r
            have_f = True
    return True, f


@kernel
def _component_members(label, nc):
    n = label.shape[0]
    start = np.zeros(nc + 1, np.int64)
    for i in range(n):
        start[label[i] + 1] += 1
    start = np.cumsum(start)
    fill = start[:-1].copy()
    members = np.empty(n, np.int64)
    for i in range(n):
        members[fill[label[i]]] = i
        fill[label[i]] += 1
    return start, members


@kernel
def decide_mid_kernel(X, C, U, Q, starts):
    n = X.shape[0]
    R = np.empty(n, X.dtype)
    label, nc = components_h_kernel(X, C, U, Q)
    cstart, members = _component_members(label, nc)
    is_start = np.zeros(n + 1, np.bool_)
    for p in range(starts.shape[0] - 1):
        is_start[starts[p]] = True
    f = np.empty((nc, 2), X.dtype)
    ok = np.zeros((nc, 2), np.bool_)
    prev = np.full((nc, 2), -1, np.int64)
    fresh = np.zeros(nc, np.bool_)
    init = np.empty(nc, X.dtype)
    dummy = np.empty(0, X.dtype)
    for ci in range(nc):
        a = cstart[ci]
        b = cstart[ci + 1]
        first = members[a]
        if is_start[first]:
            fresh[ci] = True
            init[ci] = X[first] - U
        for c in range(2):
            best_ok = False
            best_f = X[first]
            best_p = -1
            for cp in range(2):
                if fresh[ci]:
                    x = init[ci]
                    xok = True
                else:
                    x = f[ci - 1, cp]
                    xok = ok[ci - 1, cp]
                if not xok:
                    continue
                sok, sf = _subrep(X, C, U, Q, members, a, b, c, cp, x, False, dummy)
                if sok and (not best_ok or sf < best_f):
                    best_ok = True
                    best_f = sf
                    best_p = cp
            ok[ci, c] = best_ok
            f[ci, c] = best_f
            prev[ci, c] = best_p
        if not ok[ci, 0] and not ok[ci, 1]:
            return False, R
    # Walk back from the last component of each part.
    ci = nc - 1
    while ci >= 0:
        if ok[ci, 0] and ok[ci, 1]:
            c = 0 if f[ci, 0] <= f[ci, 1] else 1
        elif ok[ci, 0]:
            c = 0
        else:
            c = 1
        while True:
            cp = prev[ci, c]
            x = init[ci] if fresh[ci] else f[ci - 1, cp]
            _subrep(X, C, U, Q, members, cstart[ci], cstart[ci + 1], c, cp, x, True, R)
            done = fresh[ci]
            ci -= 1
            if done:
                break
            c = cp
    return True, R


# ---------------------------------------------------------------------------
# q in (1/2, 3/4]: maximal tabular subsolutions and their concatenation.
# All functions below work on one gap-free part with local indices.


@kernel
def _color_arrays(X, C):
    idx0 = np.nonzero(C == 0)[0]
    idx1 = np.nonzero(C == 1)[0]
    return idx0, X[idx0], idx1, X[idx1]


@kernel
def _family_part(X, C, U, Q):
    n = X.shape[0]
    idx0, P0, idx1, P1 = _color_arrays(X, C)
    s_lt = np.full(n, -1, np.int64)
    o_ll = np.full(n, -1, np.int64)
    o_l = np.full(n, -1, np.int64)
    o_f = np.zeros(n, np.bool_)
    for i in range(n):
        if C[i] == 0:
            Ps, Is, Po, Io = P0, idx0, P1, idx1
        else:
            Ps, Is, Po, Io = P1, idx1, P0, idx0
        a = np.searchsorted(Ps, X[i]) - 1
        if a >= 0:
            s_lt[i] = Is[a]
        b = np.searchsorted(Po, X[i] - U - Q, side="right") - 1
        if b >= 0:
            o_ll[i] = Io[b]
        e = np.searchsorted(Po, X[i] - Q, side="right") - 1
        if e > b:
            o_l[i] = Io[e]
        if e + 1 < Po.shape[0] and Po[e + 1] < X[i] - U + Q:
            o_f[i] = True
    return s_lt, o_ll, o_l, o_f


@kernel
def _bad_index(X, C, U, Q, d, Tend):
    """Row index of positions unusable for color ``d``.

    A position is unusable when no interval of color ``d`` covers it, or
    when it lies in ``(X_o + U - Q, X_o + Q)`` for an interval ``o`` of the
    other color (such a point splits ``o`` into two parts shorter than q).
    """
    H = 2 * Q
    Pd = X[C == d]
    Po = X[C != d]
    nd = Pd.shape[0]
    no = Po.shape[0]
    cap = nd + 1 + no
    lo = np.empty(cap, X.dtype)
    hi = np.empty(cap, X.dtype)
    lop = np.zeros(cap, np.bool_)
    hop = np.zeros(cap, np.bool_)
    m = 0
    zero = Tend - Tend
    if nd == 0:
        lo[0] = zero
        hi[0] = Tend
        m = 1
    else:
        if Pd[0] > zero:
            lo[m] = zero
            hi[m] = Pd[0]
            hop[m] = True
            m += 1
        end = Pd[0] + U
        for t in range(1, nd):
            if Pd[t] > end:
                lo[m] = end
                hi[m] = Pd[t]
                lop[m] = True
                hop[m] = True
                m += 1
            if Pd[t] + U > end:
                end = Pd[t] + U
        if end < Tend:
            lo[m] = end
            hi[m] = Tend
            lop[m] = True
            m += 1
    for t in range(no):
        lo[m] = Po[t] + U - Q
        hi[m] = Po[t] + Q
        lop[m] = True
        hop[m] = True
        m += 1
    own = np.zeros(m, np.int64)
    row, a, b, ao, bo, ow = _row_pieces(lo[:m], hi[:m], lop[:m], hop[:m], own, H)
    return _row_index(row, a, b, ao, bo, ow)


@kernel
def _first_bad_step(rows, coords, size, offsets, entries, skip, dead, p0, H):
    """Number of ``H`` steps from ``p0`` to the first unusable position, or -1."""
    j0 = p0 // H
    hit = _row_shoot(rows, coords, size, offsets, entries, skip, dead, j0, p0 - j0 * H)
    if hit < 0:
        return -1
    return rows[hit] - j0


@kernel
def _tabular_part(X, C, U, Q, o_f):
    """Steps ``nu`` of every maximal tabular subsolution (-1 if empty) and
    the rightmost interval of each color it represents."""
    n = X.shape[0]
    H = 2 * Q
    idx0, P0, idx1, P1 = _color_arrays(X, C)
    top = X[n - 1] + U
    rmax = (X[n - 1] + 2 * Q) // H
    if top // H + 1 > rmax:
        rmax = top // H + 1
    Tend = (rmax + 2) * H
    r0, _w0, c0, s0, o0, e0, k0 = _bad_index(X, C, U, Q, 0, Tend)
    r1, _w1, c1, s1, o1, e1, k1 = _bad_index(X, C, U, Q, 1, Tend)
    d0 = np.zeros(r0.shape[0], np.bool_)
    d1 = np.zeros(r1.shape[0], np.bool_)
    nu = np.full(n, -1, np.int64)
    mx0 = np.full(n, -1, np.int64)
    mx1 = np.full(n, -1, np.int64)
    ok = True
    for i in range(n):
        if o_f[i]:
            continue
        if C[i] == 0:
            ss = _first_bad_step(r0, c0, s0, o0, e0, k0, d0, X[i] + 2 * Q, H)
            so = _first_bad_step(r1, c1, s1, o1, e1, k1, d1, X[i] + Q, H)
        else:
            ss = _first_bad_step(r1, c1, s1, o1, e1, k1, d1, X[i] + 2 * Q, H)
            so = _first_bad_step(r0, c0, s0, o0, e0, k0, d0, X[i] + Q, H)
        if ss < 0 or so < 0:
            ok = False
            continue
        t_same = 2 + 2 * ss
        t_opp = 1 + 2 * so
        v = int((t_same if t_same < t_opp else t_opp) - 1)
        nu[i] = v
        x = X[i] + v * Q
        cx = C[i] if v % 2 == 0 else 1 - C[i]
        if cx == 0:
            mx0[i] = idx0[np.searchsorted(P0, x, side="right") - 1]
            if v >= 1:
                mx1[i] = idx1[np.searchsorted(P1, x - Q, side="right") - 1]
        else:
            mx1[i] = idx1[np.searchsorted(P1, x, side="right") - 1]
            if v >= 1:
                mx0[i] = idx0[np.searchsorted(P0, x - Q, side="right") - 1]
    return ok, nu, mx0, mx1


@kernel
def low_tables_kernel(X, C, U, Q, starts):
    """Family pointers and maximal tabular data for all intervals (global indices)."""
    n = X.shape[0]
    s_lt = np.full(n, -1, np.int64)
    o_ll = np.full(n, -1, np.int64)
    o_l = np.full(n, -1, np.int64)
    o_f = np.zeros(n, np.bool_)
    nu = np.full(n, -1, np.int64)
    mx0 = np.full(n, -1, np.int64)
    mx1 = np.full(n, -1, np.int64)
    ok = True
    for p in range(starts.shape[0] - 1):
        lo = starts[p]
        hi = starts[p + 1]
        Xl = X[lo:hi] - X[lo]
        Cl = C[lo:hi]
        a, b, c, f = _family_part(Xl, Cl, U, Q)
        pok, v, m0, m1 = _tabular_part(Xl, Cl, U, Q, f)
        ok = ok and pok
        for t in range(hi - lo):
            s_lt[lo + t] = a[t] + lo if a[t] >= 0 else -1
            o_ll[lo + t] = b[t] + lo if b[t] >= 0 else -1
            o_l[lo + t] = c[t] + lo if c[t] >= 0 else -1
            o_f[lo + t] = f[t]
            nu[lo + t] = v[t]
            mx0[lo + t] = m0[t] + lo if m0[t] >= 0 else -1
            mx1[lo + t] = m1[t] + lo if m1[t] >= 0 else -1
    return ok, s_lt, o_ll, o_l, o_f, nu, mx0, mx1


@kernel
def longest_compatible_steps(X, C, Q, nu_k, k, i):
    """Steps of the longest prefix of M[k] compatible with M[i]; -1 if none.

    A prefix ending at ``X[k] + L*Q`` is compatible iff it ends left of
    ``X[i]`` and, when its last point has the color opposite to ``C[i]``,
    ends at or before ``X[i] - Q``.
    """
    if X[k] >= X[i]:
        return -1
    L = (X[i] - X[k] - 1) // Q
    if L > nu_k:
        L = nu_k
    L = int(L)
    cl = C[k] if L % 2 == 0 else 1 - C[k]
    if cl != C[i] and X[k] + L * Q > X[i] - Q:
        L -= 1
    return L


@kernel
def _bit_update(val, pay, pos, v, k):
    m = val.shape[0]
    while pos < m:
        if v > val[pos]:
            val[pos] = v
            pay[pos] = k
        pos += pos & (-pos)


@kernel
def _bit_query(val, pay, pos):
    best = -2
    who = -1
    while pos > 0:
        if val[pos] > best:
            best = val[pos]
            who = pay[pos]
        pos -= pos & (-pos)
    return best, who


@kernel
def _good_index(X, C, U, Q, nu, o_l, d):
    """Good segments of color ``d``: owners ``i`` whose blocking interval
    ``o_l[i]`` has color ``d`` and whose segment has positive length."""
    n = X.shape[0]
    cnt = 0
    for i in range(n):
        m = o_l[i]
        if nu[i] >= 0 and m >= 0 and C[m] == d and X[m] < X[i] - Q:
            cnt += 1
    lo = np.empty(cnt, X.dtype)
    hi = np.empty(cnt, X.dtype)
    own = np.empty(cnt, np.int64)
    t = 0
    for i in range(n):
        m = o_l[i]
        if nu[i] >= 0 and m >= 0 and C[m] == d and X[m] < X[i] - Q:
            lo[t] = X[m]
            e = X[m] + U
            hi[t] = e if e < X[i] - Q else X[i] - Q
            own[t] = i
            t += 1
    flags = np.zeros(cnt, np.bool_)
    row, a, b, ao, bo, ow = _row_pieces(lo, hi, flags, flags, own, 2 * Q)
    return _row_index(row, a, b, ao, bo, ow)


@kernel
def _kill_owner(first, second, dead0, dead1, C, o_l, i):
    if C[o_l[i]] == 0:
        dead = dead0
    else:
        dead = dead1
    if first[i] >= 0:
        dead[first[i]] = True
    if second[i] >= 0:
        dead[second[i]] = True


@kernel
def _low_part(X, C, U, Q, R):
    """Run the append scan on one part; fills ``R`` on success.

    Status: 1 solution found, 0 no solution, negative on an internal
    inconsistency.  Also returns the per-interval append state.
    """
    n = X.shape[0]
    H = 2 * Q
    s_lt, o_ll, o_l, o_f = _family_part(X, C, U, Q)
    tok, nu, mx0, mx1 = _tabular_part(X, C, U, Q, o_f)
    append = np.zeros(n, np.bool_)
    via = np.zeros(n, np.int64)
    p = np.full(n, -1, np.int64)
    pp = np.full(n, -1, np.int64)
    last0 = np.full(n, -1, np.int64)
    last1 = np.full(n, -1, np.int64)
    req0 = np.full(n, -1, np.int64)
    req1 = np.full(n, -1, np.int64)
    if not tok:
        return -1, append, via, p, pp, last0, last1, req0, req1
    idx0, P0, idx1, P1 = _color_arrays(X, C)

    g0r, g0o, g0c, g0s, g0f, g0e, g0k = _good_index(X, C, U, Q, nu, o_l, 0)
    g1r, g1o, g1c, g1s, g1f, g1e, g1k = _good_index(X, C, U, Q, nu, o_l, 1)
    dead0 = np.zeros(g0r.shape[0], np.bool_)
    dead1 = np.zeros(g1r.shape[0], np.bool_)
    first = np.full(n, -1, np.int64)
    second = np.full(n, -1, np.int64)
    for t in range(g0o.shape[0]):
        w = g0o[t]
        if first[w] < 0:
            first[w] = t
        else:
            second[w] = t
    for t in range(g1o.shape[0]):
        w = g1o[t]
        if first[w] < 0:
            first[w] = t
        else:
            second[w] = t
    # Owners whose blocking interval is m, for the start point of M[m].
    ostart = np.zeros(n + 1, np.int64)
    for i in range(n):
        m = o_l[i]
        if nu[i] >= 0 and m >= 0 and X[m] < X[i] - Q:
            ostart[m + 1] += 1
    ostart = np.cumsum(ostart)
    olist = np.empty(ostart[n], np.int64)
    ofill = ostart[:-1].copy()
    for i in range(n):
        m = o_l[i]
        if nu[i] >= 0 and m >= 0 and X[m] < X[i] - Q:
            olist[ofill[m]] = i
            ofill[m] += 1

    bval = np.full(n + 2, -2, np.int64)
    bpay = np.full(n + 2, -1, np.int64)
    cn = C[n - 1]
    found = -1
    for i in range(n):
        if nu[i] < 0:
            continue
        if s_lt[i] < 0 and o_ll[i] < 0 and o_l[i] < 0:
            append[i] = True
            via[i] = 1
            last0[i] = mx0[i]
            last1[i] = mx1[i]
        else:
            if o_l[i] >= 0:
                if X[o_l[i]] < X[i] - Q and pp[i] >= 0:
                    append[i] = True
                    via[i] = 2
                    p[i] = pp[i]
            else:
                if C[i] == 0:
                    req0[i] = s_lt[i]
                    req1[i] = o_ll[i]
                else:
                    req0[i] = o_ll[i]
                    req1[i] = s_lt[i]
                best, who = _bit_query(bval, bpay, n - req0[i])
                if who >= 0 and best >= req1[i]:
                    append[i] = True
                    via[i] = 3
                    p[i] = who
            if append[i]:
                x = X[i] + int(nu[i]) * Q
                cx = C[i] if nu[i] % 2 == 0 else 1 - C[i]
                if cx == 0:
                    last0[i] = idx0[np.searchsorted(P0, x, side="right") - 1]
                    b1 = np.searchsorted(P1, x + Q - U) - 1
                    last1[i] = idx1[b1] if b1 >= 0 else -1
                else:
                    last1[i] = idx1[np.searchsorted(P1, x, side="right") - 1]
                    b0 = np.searchsorted(P0, x + Q - U) - 1
                    last0[i] = idx0[b0] if b0 >= 0 else -1
        if not append[i]:
            continue
        _bit_update(bval, bpay, n - last0[i], last1[i], i)
        # Good segments reached by M[i]: its start point serves only the
        # owners blocked by I_i itself, later points serve every interval
        # containing them.
        for t in range(ostart[i], ostart[i + 1]):
            w = olist[t]
            if pp[w] < 0:
                pp[w] = i
                _kill_owner(first, second, dead0, dead1, C, o_l, w)
        for d in range(2):
            t0 = 2 if d == C[i] else 1
            if t0 > nu[i]:
                continue
            cnt = (nu[i] - t0) // 2 + 1
            p0 = X[i] + t0 * Q
            j = p0 // H
            delta = p0 - j * H
            jl = j + cnt - 1
            while True:
                if d == 0:
                    hit = _row_shoot(g0r, g0c, g0s, g0f, g0e, g0k, dead0, j, delta)
                    if hit < 0 or g0r[hit] > jl:
                        break
                    w = g0o[hit]
                else:
                    hit = _row_shoot(g1r, g1c, g1s, g1f, g1e, g1k, dead1, j, delta)
                    if hit < 0 or g1r[hit] > jl:
                        break
                    w = g1o[hit]
                if pp[w] < 0:
                    pp[w] = i
                _kill_owner(first, second, dead0, dead1, C, o_l, w)
        mx = mx0[i] if cn == 0 else mx1[i]
        if mx == n - 1:
            found = i
            break
    if found < 0:
        return 0, append, via, p, pp, last0, last1, req0, req1

    # Rebuild the valid sequence of tabular pieces, right to left.
    ks = np.empty(n, np.int64)
    ls = np.empty(n, np.int64)
    ns = 0
    cur = found
    ks[0] = cur
    ls[0] = nu[cur]
    ns = 1
    while via[cur] != 1:
        k = p[cur]
        if via[cur] == 2:
            L = longest_compatible_steps(X, C, Q, nu[k], k, cur)
            if L < 0:
                return -2, append, via, p, pp, last0, last1, req0, req1
        else:
            L = -1
            while k >= 0:
                L = longest_compatible_steps(X, C, Q, nu[k], k, cur)
                if L >= 0:
                    break
                k = p[k]
            if k < 0:
                break
        ks[ns] = k
        ls[ns] = L
        ns += 1
        cur = k
    assigned = np.zeros(n, np.bool_)
    for s in range(ns):
        k = ks[s]
        if assigned[k] and R[k] != X[k]:
            return -3, append, via, p, pp, last0, last1, req0, req1
        R[k] = X[k]
        assigned[k] = True
        for t in range(1, ls[s] + 1):
            pos = X[k] + t * Q
            d = C[k] if t % 2 == 0 else 1 - C[k]
            if d == 0:
                a = np.searchsorted(P0, pos - U)
                b = np.searchsorted(P0, pos, side="right")
                for u in range(a, b):
                    j = idx0[u]
                    if assigned[j] and R[j] != pos:
                        return -3, append, via, p, pp, last0, last1, req0, req1
                    R[j] = pos
                    assigned[j] = True
            else:
                a = np.searchsorted(P1, pos - U)
                b = np.searchsorted(P1, pos, side="right")
                for u in range(a, b):
                    j = idx1[u]
                    if assigned[j] and R[j] != pos:
                        return -3, append, via, p, pp, last0, last1, req0, req1
                    R[j] = pos
                    assigned[j] = True
    # Intervals still missing contain the start of a piece of their color
    # and can share that point.  This includes the leftmost piece when the
    # walk back found no compatible predecessor.
    sp0 = np.empty(ns, X.dtype)
    sp1 = np.empty(ns, X.dtype)
    n0 = 0
    n1 = 0
    for s in range(ns):
        k = ks[s]
        if C[k] == 0:
            sp0[n0] = X[k]
            n0 += 1
        else:
            sp1[n1] = X[k]
            n1 += 1
    sp0 = np.sort(sp0[:n0])
    sp1 = np.sort(sp1[:n1])
    for j in range(n):
        if assigned[j]:
            continue
        sp = sp0 if C[j] == 0 else sp1
        u = np.searchsorted(sp, X[j], side="right")
        if u >= sp.shape[0] or sp[u] > X[j] + U:
            return -4, append, via, p, pp, last0, last1, req0, req1
        R[j] = sp[u]
        assigned[j] = True
    return 1, append, via, p, pp, last0, last1, req0, req1


@kernel
def decide_low_kernel(X, C, U, Q, starts):
    n = X.shape[0]
    R = np.empty(n, X.dtype)
    for p in range(starts.shape[0] - 1):
        lo = starts[p]
        hi = starts[p + 1]
        single = True
        for i in range(lo + 1, hi):
            if C[i] != C[lo]:
                single = False
                break
        if single:
            for i in range(lo, hi):
                R[i] = X[i]
            continue
        Xl = X[lo:hi] - X[lo]
        Rl = np.empty(hi - lo, X.dtype)
        status = _low_part(Xl, C[lo:hi], U, Q, Rl)[0]
        if status != 1:
            return status, R
        for i in range(lo, hi):
            R[i] = Rl[i - lo] + X[lo]
    return 1, R


@kernel
def low_parts_kernel(X, C, U, Q, starts, todo):
    """Per-part status (as :func:`_low_part`) for the parts flagged in ``todo``.

    Parts not flagged get 2.  Every flagged part is evaluated, so a No also
    tells which of the other parts are Yes.
    """
    m = starts.shape[0] - 1
    st = np.full(m, 2, np.int64)
    for p in range(m):
        if not todo[p]:
            continue
        lo = starts[p]
        hi = starts[p + 1]
        single = True
        for i in range(lo + 1, hi):
            if C[i] != C[lo]:
                single = False
                break
        if single:
            st[p] = 1
            continue
        Xl = X[lo:hi] - X[lo]
        Rl = np.empty(hi - lo, X.dtype)
        st[p] = _low_part(Xl, C[lo:hi], U, Q, Rl)[0]
    return st


@kernel
def low_state_kernel(X, C, U, Q, lo, hi):
    """Append state of one part (local indices), for inspection and audits."""
    Xl = X[lo:hi] - X[lo]
    Rl = np.empty(hi - lo, X.dtype)
    return _low_part(Xl, C[lo:hi], U, Q, Rl)
