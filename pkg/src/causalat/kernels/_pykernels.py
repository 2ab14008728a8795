"""Pure-Python kernels.

Same contracts as the compiled ``_ckernels`` module.  Inputs arrive already
normalised by :mod:`causalat.kernels` (contiguous ``int32``/``uint8``/``int64``
arrays), so these functions do no coercion of their own.
"""

import numpy as np


def _low(mask):
    return (mask & -mask).bit_length() - 1


def transitive_closure(adj):
    c = adj.astype(bool)
    np.fill_diagonal(c, True)
    for k in range(c.shape[0]):
        c |= c[:, k : k + 1] & c[k : k + 1, :]
    return c.astype(np.uint8)


def bound_tables(leq):
    le = leq.astype(bool)
    n = le.shape[0]
    meet = np.full((n, n), -1, dtype=np.int32)
    join = np.full((n, n), -1, dtype=np.int32)
    down_size = le.sum(axis=0)
    up_size = le.sum(axis=1)
    for a in range(n):
        for b in range(a, n):
            lower = np.flatnonzero(le[:, a] & le[:, b])
            if lower.size:
                c = lower[np.argmax(down_size[lower])]
                if le[lower, c].all():
                    meet[a, b] = meet[b, a] = c
            upper = np.flatnonzero(le[a] & le[b])
            if upper.size:
                c = upper[np.argmax(up_size[upper])]
                if le[c, upper].all():
                    join[a, b] = join[b, a] = c
    return meet, join


def subset_hom_witness(f, op_src, unit_src, op_dst, unit_dst):
    fl = f.tolist()
    src_tab = op_src.tolist()
    dst_tab = op_dst.tolist()
    if fl[unit_src] != unit_dst:
        return 0
    size = 1 << len(fl)
    src = [unit_src] * size
    dst = [unit_dst] * size
    for mask in range(1, size):
        low = _low(mask)
        rest = mask & (mask - 1)
        s = src_tab[src[rest]][low]
        d = dst_tab[dst[rest]][fl[low]]
        src[mask] = s
        dst[mask] = d
        if fl[s] != d:
            return mask
    return -1


def enumerate_join_maps(order, offsets, triples, op_dst, fixed):
    n1 = len(order)
    n2 = op_dst.shape[0]
    order_l = order.tolist()
    offs = offsets.tolist()
    tri = triples.tolist()
    dst = op_dst.tolist()
    fix = fixed.tolist()
    f = [-1] * n1
    rows = []

    def place(t):
        if t == n1:
            rows.append(list(f))
            return
        x = order_l[t]
        values = (fix[x],) if fix[x] >= 0 else range(n2)
        checks = tri[offs[t] : offs[t + 1]]
        for c in values:
            f[x] = c
            if all(dst[f[u]][f[v]] == f[w] for u, v, w in checks):
                place(t + 1)
        f[x] = -1

    place(0)
    if not rows:
        return np.zeros((0, n1), dtype=np.int32)
    return np.array(rows, dtype=np.int32)


def adjunction_witness(leq1, leq2, f, g):
    lhs = leq2[f, :].astype(bool)
    rhs = leq1[:, g].astype(bool)
    bad = np.argwhere(lhs != rhs)
    if bad.size == 0:
        return -1, -1
    return int(bad[0, 0]), int(bad[0, 1])


def subset_joins(join, bottom, elems):
    tab = join.tolist()
    el = elems.tolist()
    size = 1 << len(el)
    out = [bottom] * size
    for mask in range(1, size):
        out[mask] = tab[out[mask & (mask - 1)]][el[_low(mask)]]
    return np.array(out, dtype=np.int32)


def distributive_subsets(meet, join, bottom):
    n = meet.shape[0]
    mt = meet.tolist()
    jt = join.tolist()
    size = 1 << n
    joins = [bottom] * size
    lows = [0] * size
    for mask in range(1, size):
        low = _low(mask)
        lows[mask] = low
        joins[mask] = jt[joins[mask & (mask - 1)]][low]
    flags = [1] * size
    for x in range(n):
        row = mt[x]
        acc = [bottom] * size
        for mask in range(1, size):
            a = jt[acc[mask & (mask - 1)]][row[lows[mask]]]
            acc[mask] = a
            if row[joins[mask]] != a:
                flags[mask] = 0
    return np.array(joins, dtype=np.int32), np.array(flags, dtype=np.uint8)


def union_map_scan(images, sub_join1, embed1, sub_join2):
    m, k1 = images.shape
    n1 = embed1.shape[0]
    sj1 = sub_join1.tolist()
    e1 = embed1.tolist()
    sj2 = sub_join2.tolist()
    size = 1 << k1
    witness = np.full(m, -1, dtype=np.int64)
    induced = np.zeros((m, n1), dtype=np.int32)
    g = [0] * size
    for r in range(m):
        img = images[r].tolist()
        for mask in range(1, size):
            g[mask] = g[mask & (mask - 1)] | img[_low(mask)]
        for mask in range(size):
            if sj2[g[mask]] != sj2[g[e1[sj1[mask]]]]:
                witness[r] = mask
                break
        induced[r] = [sj2[g[e1[x]]] for x in range(n1)]
    return witness, induced
