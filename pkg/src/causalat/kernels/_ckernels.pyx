# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels.

Contracts mirror ``_pykernels``; inputs are pre-normalised by the dispatcher.
"""

import numpy as np
from libc.stdint cimport int32_t, int64_t, uint8_t


cdef extern from *:
    int __builtin_ctzll(unsigned long long) nogil


def transitive_closure(const uint8_t[:, ::1] adj):
    cdef Py_ssize_t n = adj.shape[0], i, j, k
    out = np.array(adj, dtype=np.uint8, copy=True)
    cdef uint8_t[:, ::1] c = out
    for i in range(n):
        c[i, i] = 1
    for k in range(n):
        for i in range(n):
            if c[i, k]:
                for j in range(n):
                    if c[k, j]:
                        c[i, j] = 1
    return out


def bound_tables(const uint8_t[:, ::1] leq):
    cdef Py_ssize_t n = leq.shape[0], a, b, c, d
    meet_arr = np.full((n, n), -1, dtype=np.int32)
    join_arr = np.full((n, n), -1, dtype=np.int32)
    cdef int32_t[:, ::1] meet = meet_arr
    cdef int32_t[:, ::1] join = join_arr
    down_arr = np.zeros(n, dtype=np.int32)
    up_arr = np.zeros(n, dtype=np.int32)
    cdef int32_t[::1] down = down_arr
    cdef int32_t[::1] up = up_arr
    cdef int32_t best, best_size
    cdef bint ok
    for a in range(n):
        for b in range(n):
            if leq[a, b]:
                down[b] += 1
                up[a] += 1
    with nogil:
        for a in range(n):
            for b in range(a, n):
                best = -1
                best_size = -1
                for c in range(n):
                    if leq[c, a] and leq[c, b] and down[c] > best_size:
                        best = <int32_t>c
                        best_size = down[c]
                if best >= 0:
                    ok = True
                    for d in range(n):
                        if leq[d, a] and leq[d, b] and not leq[d, best]:
                            ok = False
                            break
                    if ok:
                        meet[a, b] = best
                        meet[b, a] = best
                best = -1
                best_size = -1
                for c in range(n):
                    if leq[a, c] and leq[b, c] and up[c] > best_size:
                        best = <int32_t>c
                        best_size = up[c]
                if best >= 0:
                    ok = True
                    for d in range(n):
                        if leq[a, d] and leq[b, d] and not leq[best, d]:
                            ok = False
                            break
                    if ok:
                        join[a, b] = best
                        join[b, a] = best
    return meet_arr, join_arr


def subset_hom_witness(const int32_t[::1] f, const int32_t[:, ::1] op_src,
                       int32_t unit_src, const int32_t[:, ::1] op_dst,
                       int32_t unit_dst):
    cdef Py_ssize_t m = f.shape[0]
    cdef int64_t size = (<int64_t>1) << m
    cdef int64_t mask, rest, found = -1
    cdef int low
    cdef int32_t s, d
    if f[unit_src] != unit_dst:
        return 0
    src_arr = np.empty(size, dtype=np.int32)
    dst_arr = np.empty(size, dtype=np.int32)
    cdef int32_t[::1] src = src_arr
    cdef int32_t[::1] dst = dst_arr
    src[0] = unit_src
    dst[0] = unit_dst
    with nogil:
        for mask in range(1, size):
            low = __builtin_ctzll(<unsigned long long>mask)
            rest = mask & (mask - 1)
            s = op_src[src[rest], low]
            d = op_dst[dst[rest], f[low]]
            src[mask] = s
            dst[mask] = d
            if f[s] != d:
                found = mask
                break
    return found


def enumerate_join_maps(const int32_t[::1] order, const int32_t[::1] offsets,
                        const int32_t[:, ::1] triples,
                        const int32_t[:, ::1] op_dst,
                        const int32_t[::1] fixed):
    cdef Py_ssize_t n1 = order.shape[0]
    cdef int32_t n2 = <int32_t>op_dst.shape[0]
    f_arr = np.full(n1, -1, dtype=np.int32)
    cand_arr = np.full(n1 + 1, -1, dtype=np.int32)
    cdef int32_t[::1] f = f_arr
    cdef int32_t[::1] cand = cand_arr
    cdef Py_ssize_t t = 0, i
    cdef int32_t x, c
    cdef bint placed, ok
    rows = []
    while t >= 0:
        if t == n1:
            rows.append(f_arr.copy())
            t -= 1
            continue
        x = order[t]
        placed = False
        while True:
            if fixed[x] >= 0:
                if cand[t] < fixed[x]:
                    c = fixed[x]
                else:
                    break
            else:
                c = cand[t] + 1
                if c >= n2:
                    break
            cand[t] = c
            f[x] = c
            ok = True
            for i in range(offsets[t], offsets[t + 1]):
                if op_dst[f[triples[i, 0]], f[triples[i, 1]]] != f[triples[i, 2]]:
                    ok = False
                    break
            if ok:
                placed = True
                break
        if placed:
            t += 1
            cand[t] = -1
        else:
            f[x] = -1
            cand[t] = -1
            t -= 1
    if not rows:
        return np.zeros((0, n1), dtype=np.int32)
    return np.array(rows, dtype=np.int32)


def adjunction_witness(const uint8_t[:, ::1] leq1, const uint8_t[:, ::1] leq2,
                       const int32_t[::1] f, const int32_t[::1] g):
    cdef Py_ssize_t n1 = f.shape[0], n2 = g.shape[0], a, b
    for a in range(n1):
        for b in range(n2):
            if leq2[f[a], b] != leq1[a, g[b]]:
                return a, b
    return -1, -1


def subset_joins(const int32_t[:, ::1] join, int32_t bottom,
                 const int32_t[::1] elems):
    cdef Py_ssize_t k = elems.shape[0]
    cdef int64_t size = (<int64_t>1) << k, mask
    out_arr = np.empty(size, dtype=np.int32)
    cdef int32_t[::1] out = out_arr
    out[0] = bottom
    with nogil:
        for mask in range(1, size):
            out[mask] = join[out[mask & (mask - 1)],
                             elems[__builtin_ctzll(<unsigned long long>mask)]]
    return out_arr


def distributive_subsets(const int32_t[:, ::1] meet, const int32_t[:, ::1] join,
                         int32_t bottom):
    cdef Py_ssize_t n = meet.shape[0], x
    cdef int64_t size = (<int64_t>1) << n, mask
    cdef int32_t a
    joins_arr = np.empty(size, dtype=np.int32)
    flags_arr = np.ones(size, dtype=np.uint8)
    acc_arr = np.empty(size, dtype=np.int32)
    cdef int32_t[::1] joins = joins_arr
    cdef uint8_t[::1] flags = flags_arr
    cdef int32_t[::1] acc = acc_arr
    with nogil:
        joins[0] = bottom
        for mask in range(1, size):
            joins[mask] = join[joins[mask & (mask - 1)],
                               __builtin_ctzll(<unsigned long long>mask)]
        for x in range(n):
            acc[0] = bottom
            for mask in range(1, size):
                a = join[acc[mask & (mask - 1)],
                         meet[x, __builtin_ctzll(<unsigned long long>mask)]]
                acc[mask] = a
                if meet[x, joins[mask]] != a:
                    flags[mask] = 0
    return joins_arr, flags_arr


def union_map_scan(const int64_t[:, ::1] images, const int32_t[::1] sub_join1,
                   const int64_t[::1] embed1, const int32_t[::1] sub_join2):
    cdef Py_ssize_t m = images.shape[0], k1 = images.shape[1]
    cdef Py_ssize_t n1 = embed1.shape[0], r, x
    cdef int64_t size = (<int64_t>1) << k1, mask
    witness_arr = np.full(m, -1, dtype=np.int64)
    induced_arr = np.zeros((m, n1), dtype=np.int32)
    g_arr = np.zeros(size, dtype=np.int64)
    cdef int64_t[::1] witness = witness_arr
    cdef int32_t[:, ::1] induced = induced_arr
    cdef int64_t[::1] g = g_arr
    with nogil:
        for r in range(m):
            g[0] = 0
            for mask in range(1, size):
                g[mask] = g[mask & (mask - 1)] | images[r, __builtin_ctzll(<unsigned long long>mask)]
            for mask in range(size):
                if sub_join2[g[mask]] != sub_join2[g[embed1[sub_join1[mask]]]]:
                    witness[r] = mask
                    break
            for x in range(n1):
                induced[r, x] = sub_join2[g[embed1[x]]]
    return witness_arr, induced_arr
