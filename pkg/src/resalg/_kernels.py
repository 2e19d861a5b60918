"""Hot inner loops.

Every function here takes and returns plain integer/boolean numpy arrays so
the same source runs under ``numba.njit`` or as ordinary Python.  Callers go
through the public wrappers in the other modules; nothing here validates its
input.

Where a vectorised numpy formulation exists (residual derivation), the
``*_numpy`` variant is what the fallback path uses, since interpreting the
loop version would be needlessly slow.
"""
from __future__ import annotations

import numpy as np

from ._accel import USE_NUMBA, njit

# ---------------------------------------------------------------------------
# residuals


@njit
def _residual_loops(leq, prod, out):
    n = prod.shape[0]
    for x in range(n):
        for y in range(n):
            best = -1
            for z in range(n):
                if leq[prod[z, x], y]:
                    if best == -1 or leq[best, z]:
                        best = z
            if best == -1:
                return False, x, y
            # best is maximal in scan order; it must dominate every candidate
            for z in range(n):
                if leq[prod[z, x], y] and not leq[z, best]:
                    return False, x, y
            out[x, y] = best
    return True, -1, -1


def _residual_numpy(leq, prod, out):
    n = prod.shape[0]
    # cand[x, y, z]: z (.) x <= y
    cand = leq[prod.T[:, None, :], np.arange(n)[None, :, None]]
    # z is an upper bound of the candidate set
    above = ~(cand.astype(np.int64) @ (~leq).astype(np.int64)).astype(bool)
    top = cand & above
    has = top.any(axis=2)
    if not has.all():
        bad = np.argwhere(~has)[0]
        return False, int(bad[0]), int(bad[1])
    out[:, :] = top.argmax(axis=2)
    return True, -1, -1


def residual(leq, prod, out):
    """Fill ``out`` with the residual of ``prod``; report the first failing pair."""
    if USE_NUMBA:
        return _residual_loops(leq, prod, out)
    return _residual_numpy(leq, prod, out)


# ---------------------------------------------------------------------------
# homomorphism search


@njit
def _hom_assign(x, v, h, used, mono, trail, tlen, queue, src, dst):
    """Assign h[x] = v and propagate through every operation table."""
    m = h.shape[0]
    k = src.shape[0]
    if h[x] != -1:
        return h[x] == v, tlen
    if mono and used[v] > 0:
        return False, tlen
    h[x] = v
    used[v] += 1
    trail[tlen] = x
    tlen += 1
    qh = 0
    qt = 0
    queue[qt] = x
    qt += 1
    while qh < qt:
        a = queue[qh]
        qh += 1
        for b in range(m):
            if h[b] == -1:
                continue
            for op in range(k):
                for side in range(2):
                    if side == 0:
                        c = src[op, a, b]
                        w = dst[op, h[a], h[b]]
                    else:
                        c = src[op, b, a]
                        w = dst[op, h[b], h[a]]
                    hc = h[c]
                    if hc == -1:
                        if mono and used[w] > 0:
                            return False, tlen
                        h[c] = w
                        used[w] += 1
                        trail[tlen] = c
                        tlen += 1
                        queue[qt] = c
                        qt += 1
                    elif hc != w:
                        return False, tlen
    return True, tlen


@njit
def hom_search(src, dst, init, mono, limit, out):
    """Depth-first search for homomorphisms ``src -> dst``.

    ``src``/``dst`` stack the operation tables (same order in both), ``init``
    holds forced images (constants and pins) or -1.  Maps are produced in
    lexicographic order; the first ``out.shape[0]`` are written to ``out``.
    Stops after ``limit`` solutions when ``limit > 0``.  Returns the count.
    """
    m = src.shape[1]
    n = dst.shape[1]
    h = np.full(m, -1, np.int64)
    used = np.zeros(n, np.int64)
    trail = np.empty(m, np.int64)
    queue = np.empty(m, np.int64)
    tlen = 0
    for x in range(m):
        if init[x] != -1:
            ok, tlen = _hom_assign(x, init[x], h, used, mono, trail, tlen, queue, src, dst)
            if not ok:
                return 0
    count = 0
    xs = np.empty(m + 1, np.int64)
    vals = np.empty(m + 1, np.int64)
    marks = np.empty(m + 1, np.int64)
    first = -1
    for x in range(m):
        if h[x] == -1:
            first = x
            break
    if first == -1:
        if out.shape[0] > 0:
            out[0, :] = h
        return 1
    depth = 0
    xs[0] = first
    vals[0] = 0
    marks[0] = tlen
    while depth >= 0:
        while tlen > marks[depth]:
            tlen -= 1
            y = trail[tlen]
            used[h[y]] -= 1
            h[y] = -1
        v = vals[depth]
        if v >= n:
            depth -= 1
            continue
        vals[depth] = v + 1
        ok, tlen = _hom_assign(xs[depth], v, h, used, mono, trail, tlen, queue, src, dst)
        if not ok:
            continue
        nxt = -1
        for x in range(xs[depth] + 1, m):
            if h[x] == -1:
                nxt = x
                break
        if nxt == -1:
            if count < out.shape[0]:
                out[count, :] = h
            count += 1
            if limit > 0 and count >= limit:
                return count
            continue
        depth += 1
        xs[depth] = nxt
        vals[depth] = 0
        marks[depth] = tlen
    return count


# ---------------------------------------------------------------------------
# monoid enumeration


@njit
def _assoc_ok(t):
    """Associativity over the entries of ``t`` known so far (-1 = unknown)."""
    n = t.shape[0]
    for x in range(n):
        for y in range(n):
            xy = t[x, y]
            if xy == -1:
                continue
            for z in range(n):
                yz = t[y, z]
                if yz == -1:
                    continue
                left = t[xy, z]
                right = t[x, yz]
                if left != -1 and right != -1 and left != right:
                    return False
    return True


@njit
def _monotone_ok(t, leq, i, j, v):
    """Would t[i, j] = v respect monotonicity against known entries?"""
    n = t.shape[0]
    for p in range(n):
        for q in range(n):
            w = t[p, q]
            if w == -1:
                continue
            if leq[p, i] and leq[q, j] and not leq[w, v]:
                return False
            if leq[i, p] and leq[j, q] and not leq[v, w]:
                return False
    return True


@njit
def _base_table(n, bot, top):
    t = np.full((n, n), -1, np.int64)
    for x in range(n):
        t[top, x] = x
        t[x, top] = x
        t[bot, x] = bot
        t[x, bot] = bot
    return t


@njit
def ordered_monoids(leq, meet, bot, top, store, out):
    """Commutative, associative, order-monotone monoids with identity ``top``.

    Free cells are the pairs ``i <= j`` of non-constant elements.  Each cell
    ranges over elements below ``meet[i, j]`` (integrality).  With ``store``
    false only the count is returned; otherwise tables go to ``out``.
    """
    n = leq.shape[0]
    cells_i = np.empty(n * n, np.int64)
    cells_j = np.empty(n * n, np.int64)
    nc = 0
    for i in range(n):
        if i == bot or i == top:
            continue
        for j in range(i, n):
            if j == bot or j == top:
                continue
            cells_i[nc] = i
            cells_j[nc] = j
            nc += 1
    t = _base_table(n, bot, top)
    if nc == 0:
        if store:
            out[0, :, :] = t
        return 1
    vals = np.zeros(nc + 1, np.int64)
    count = 0
    depth = 0
    while depth >= 0:
        i = cells_i[depth]
        j = cells_j[depth]
        t[i, j] = -1
        t[j, i] = -1
        v = vals[depth]
        placed = False
        while v < n:
            if leq[v, meet[i, j]] and _monotone_ok(t, leq, i, j, v):
                t[i, j] = v
                t[j, i] = v
                if _assoc_ok(t):
                    placed = True
                    break
                t[i, j] = -1
                t[j, i] = -1
            v += 1
        if not placed:
            vals[depth] = 0
            depth -= 1
            continue
        vals[depth] = v + 1
        if depth == nc - 1:
            if store:
                out[count, :, :] = t
            count += 1
            continue
        depth += 1
        vals[depth] = 0
    return count


@njit
def unordered_monoids(n, bot, top, store, out):
    """Commutative associative tables with identity ``top`` and zero ``bot``.

    No order information is used; this is the independent side of the count
    cross-check.
    """
    cells_i = np.empty(n * n, np.int64)
    cells_j = np.empty(n * n, np.int64)
    nc = 0
    for i in range(n):
        if i == bot or i == top:
            continue
        for j in range(i, n):
            if j == bot or j == top:
                continue
            cells_i[nc] = i
            cells_j[nc] = j
            nc += 1
    t = _base_table(n, bot, top)
    if nc == 0:
        if store:
            out[0, :, :] = t
        return 1
    vals = np.zeros(nc + 1, np.int64)
    count = 0
    depth = 0
    while depth >= 0:
        i = cells_i[depth]
        j = cells_j[depth]
        t[i, j] = -1
        t[j, i] = -1
        v = vals[depth]
        placed = False
        while v < n:
            t[i, j] = v
            t[j, i] = v
            if _assoc_ok(t):
                placed = True
                break
            t[i, j] = -1
            t[j, i] = -1
            v += 1
        if not placed:
            vals[depth] = 0
            depth -= 1
            continue
        vals[depth] = v + 1
        if depth == nc - 1:
            if store:
                out[count, :, :] = t
            count += 1
            continue
        depth += 1
        vals[depth] = 0
    return count


def collect(kernel, *args, shape):
    """Run a two-pass enumeration kernel: count, allocate, then store."""
    dummy = np.empty((0,) + shape, np.int64)
    total = kernel(*args, False, dummy)
    out = np.empty((total,) + shape, np.int64)
    kernel(*args, True, out)
    return out
