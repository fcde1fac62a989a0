"""Compiled branch-and-bound kernel for groups of order at most 64.

A set of group elements is a uint64 bitmask indexed by enumeration
position.  Translating a set by g is a per-axis rotation of bit blocks,
precomputed as (low mask, high mask, up shift, down shift) per axis and
coordinate value.
"""

import numpy as np
from numba import int64, njit, uint64

FNV_OFFSET = 1469598103934665603
FNV_PRIME = 1099511628211


@njit(cache=True, inline="always")
def _shift(m, g, coords, rlo, rhi, rup, rdn, naxes):
    for a in range(naxes):
        y = coords[g, a]
        if y:
            m = ((m & rlo[a, y]) << rup[a, y]) | ((m & rhi[a, y]) >> rdn[a, y])
    return m


@njit(cache=True)
def _popcount(x):
    c = 0
    while x:
        x &= x - uint64(1)
        c += 1
    return c


@njit(cache=True)
def _slot(st_row, L, live, mc, lastp1, tmask):
    h = uint64(FNV_OFFSET)
    for c in range(L):
        h = (h ^ st_row[c]) * uint64(FNV_PRIME)
    h = (h ^ live) * uint64(FNV_PRIME)
    h = (h ^ uint64(mc)) * uint64(FNV_PRIME)
    h = (h ^ uint64(lastp1)) * uint64(FNV_PRIME)
    return int64(h & uint64(tmask))


@njit(cache=True)
def search(N, B, w, obj, coords, rlo, rhi, rup, rdn, zsh, allowed, rootmask,
           st0, used0, mcap0, last0, val0, cap, budget, sigma_count, tt_bits):
    """Maximize the objective over avoiding multisets extending a root.

    Returns (best, witness elements, witness multiplicities, nodes,
    complete).  The witness lists only the choices made below the root.
    """
    L = B + 1
    naxes = coords.shape[1]
    maxd = N + 1
    st = np.zeros((maxd + 1, L), dtype=np.uint64)
    used = np.zeros(maxd + 1, dtype=np.uint64)
    mcap = np.zeros(maxd + 1, dtype=np.int64)
    last = np.zeros(maxd + 1, dtype=np.int64)
    val = np.zeros(maxd + 1, dtype=np.int64)
    cg = np.zeros((maxd + 1, N), dtype=np.int64)
    cm = np.zeros((maxd + 1, N), dtype=np.int64)
    nc = np.zeros(maxd + 1, dtype=np.int64)
    ci = np.zeros(maxd + 1, dtype=np.int64)
    ck = np.zeros(maxd + 1, dtype=np.int64)
    key_live = np.zeros(maxd + 1, dtype=np.uint64)
    chosen_g = np.zeros(maxd + 1, dtype=np.int64)
    chosen_k = np.zeros(maxd + 1, dtype=np.int64)
    best_g = np.zeros(maxd + 1, dtype=np.int64)
    best_k = np.zeros(maxd + 1, dtype=np.int64)
    best_len = 0
    best = -1
    T = 1 << tt_bits
    tmask = T - 1
    tkeys = np.zeros((T, L + 3), dtype=np.uint64)
    tval = np.full(T, -1, dtype=np.int64)
    tmp = np.zeros(L, dtype=np.uint64)
    nodes = 0
    complete = True
    for c in range(L):
        st[0, c] = st0[c]
    used[0] = used0
    mcap[0] = mcap0
    last[0] = last0
    val[0] = val0
    d = 0
    entering = True
    while d >= 0:
        if entering:
            entering = False
            nodes += 1
            if nodes > budget:
                complete = False
                break
            if val[d] > best:
                best = val[d]
                best_len = d
                for j in range(d):
                    best_g[j] = chosen_g[j]
                    best_k[j] = chosen_k[j]
                if best >= cap:
                    break
            u = used[d]
            live = uint64(0)
            bound = 0
            n = 0
            for g in range(N):
                if not allowed[g]:
                    continue
                if d == 0 and not rootmask[g]:
                    continue
                i = 1
                while True:
                    c = i * w[g]
                    if c > B:
                        break
                    if ((st[d, B - c] | uint64(1)) & zsh[g, i]) != 0:
                        break
                    i += 1
                m = i - 1
                if (u >> uint64(g)) & uint64(1):
                    if m > 0:
                        live |= uint64(1) << uint64(g)
                    continue
                lim = mcap[d] if g > last[d] else mcap[d] - 1
                if m > lim:
                    m = lim
                if m > 0:
                    cg[d, n] = g
                    cm[d, n] = m
                    n += 1
                    bound += m * obj[g]
            if sigma_count:
                sc = N - 1 - _popcount(st[d, 0])
                if sc < bound:
                    bound = sc
            key_live[d] = live
            slot = _slot(st[d], L, live, mcap[d], last[d] + 1, tmask)
            hit = tval[slot] >= 0
            if hit:
                for c in range(L):
                    if tkeys[slot, c] != st[d, c]:
                        hit = False
                        break
                if hit and (tkeys[slot, L] != live or tkeys[slot, L + 1] != uint64(mcap[d])
                            or tkeys[slot, L + 2] != uint64(last[d] + 1)):
                    hit = False
            if hit and val[d] + tval[slot] <= best:
                d -= 1
                continue
            if val[d] + bound <= best:
                for c in range(L):
                    tkeys[slot, c] = st[d, c]
                tkeys[slot, L] = live
                tkeys[slot, L + 1] = uint64(mcap[d])
                tkeys[slot, L + 2] = uint64(last[d] + 1)
                tval[slot] = bound
                d -= 1
                continue
            # multiplicity descending, index ascending
            for a in range(1, n):
                gg = cg[d, a]
                mm = cm[d, a]
                b = a - 1
                while b >= 0 and cm[d, b] < mm:
                    cg[d, b + 1] = cg[d, b]
                    cm[d, b + 1] = cm[d, b]
                    b -= 1
                cg[d, b + 1] = gg
                cm[d, b + 1] = mm
            nc[d] = n
            ci[d] = 0
            ck[d] = cm[d, 0] if n > 0 else 0
        if ci[d] >= nc[d]:
            slot = _slot(st[d], L, key_live[d], mcap[d], last[d] + 1, tmask)
            for c in range(L):
                tkeys[slot, c] = st[d, c]
            tkeys[slot, L] = key_live[d]
            tkeys[slot, L + 1] = uint64(mcap[d])
            tkeys[slot, L + 2] = uint64(last[d] + 1)
            tval[slot] = best - val[d]
            d -= 1
            continue
        g = cg[d, ci[d]]
        k = ck[d]
        ck[d] -= 1
        if ck[d] == 0:
            ci[d] += 1
            if ci[d] < nc[d]:
                ck[d] = cm[d, ci[d]]
        for c in range(L):
            st[d + 1, c] = st[d, c]
        wg = w[g]
        bit = uint64(1) << uint64(g)
        for _ in range(k):
            for c in range(L):
                tmp[c] = st[d + 1, c]
            for c in range(wg, L):
                st[d + 1, c] = tmp[c] | _shift(tmp[c - wg], g, coords, rlo, rhi, rup, rdn, naxes) | bit
        used[d + 1] = used[d] | bit
        mcap[d + 1] = k
        last[d + 1] = g
        val[d + 1] = val[d] + k * obj[g]
        chosen_g[d] = g
        chosen_k[d] = k
        d += 1
        entering = True
    return best, best_g[:best_len].copy(), best_k[:best_len].copy(), nodes, complete
