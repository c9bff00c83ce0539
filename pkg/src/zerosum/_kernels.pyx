# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels: zero-sum length DP and the avoider branch-and-bound.

Length sets are stored as W little-endian uint64 words per group element.
The Python-facing contract matches ``zerosum._pykernels`` exactly.
"""

from libc.stdint cimport uint64_t, int64_t, int32_t, uint8_t
from libc.stdlib cimport malloc, calloc, free
from libc.string cimport memset, memcpy
import time

import numpy as np
cimport numpy as cnp

IMPLEMENTATION = "cython"


cdef inline void extend(const uint64_t* src, uint64_t* dst, const int32_t* subcol, int G, int W) noexcept nogil:
    cdef int g, w, s
    cdef const uint64_t* sp
    for g in range(G):
        s = subcol[g]
        sp = src + s * W
        dst[g * W] = src[g * W] | (sp[0] << 1)
        for w in range(1, W):
            dst[g * W + w] = src[g * W + w] | (sp[w] << 1) | (sp[w - 1] >> 63)


cdef inline bint hits(const uint64_t* dp, const uint64_t* lm, int W) noexcept nogil:
    cdef int w
    for w in range(W):
        if dp[w] & lm[w]:
            return True
    return False


cdef inline bint any_bits(const uint64_t* row, int W) noexcept nogil:
    cdef int w
    for w in range(W):
        if row[w]:
            return True
    return False


cdef object words_to_int(const uint64_t* row, int W):
    cdef int w
    out = 0
    for w in range(W - 1, -1, -1):
        out = (out << 64) | <object>row[w]
    return out


cdef void int_to_words(object value, uint64_t* row, int W):
    cdef int w
    for w in range(W):
        row[w] = <uint64_t>(value & 0xFFFFFFFFFFFFFFFF)
        value >>= 64


cdef int32_t* sub_columns(object sub_table, int G) except NULL:
    cdef cnp.ndarray[int32_t, ndim=2] arr = np.ascontiguousarray(np.asarray(sub_table, dtype=np.int32).T)
    cdef int32_t* cols = <int32_t*>malloc(G * G * sizeof(int32_t))
    if cols == NULL:
        raise MemoryError()
    memcpy(cols, &arr[0, 0], G * G * sizeof(int32_t))
    return cols


def sum_length_table(sub_table, items):
    cdef int G = len(sub_table)
    cdef int n = len(items)
    cdef int W = n // 64 + 1
    cdef int32_t* cols = sub_columns(sub_table, G)
    cdef uint64_t* a = <uint64_t*>calloc(G * W, sizeof(uint64_t))
    cdef uint64_t* b = <uint64_t*>calloc(G * W, sizeof(uint64_t))
    cdef uint64_t* t
    cdef int x, g
    try:
        a[0] = 1
        for item in items:
            x = item
            extend(a, b, cols + x * G, G, W)
            t = a; a = b; b = t
        return [words_to_int(a + g * W, W) for g in range(G)]
    finally:
        free(cols); free(a); free(b)


def zero_sum_lengths(sub_table, items):
    return sum_length_table(sub_table, items)[0] & ~1


def zero_sum_lengths_batch(sub_table, rows):
    cdef cnp.ndarray[int64_t, ndim=2] arr = np.ascontiguousarray(np.asarray(rows, dtype=np.int64).reshape(len(rows), -1))
    cdef int G = len(sub_table)
    cdef int N = arr.shape[0]
    cdef int k = arr.shape[1]
    cdef int W = k // 64 + 1
    cdef int32_t* cols = sub_columns(sub_table, G)
    cdef uint64_t* a = <uint64_t*>malloc(G * W * sizeof(uint64_t))
    cdef uint64_t* b = <uint64_t*>malloc(G * W * sizeof(uint64_t))
    cdef uint64_t* t
    cdef int i, j
    out = []
    try:
        for i in range(N):
            memset(a, 0, G * W * sizeof(uint64_t))
            a[0] = 1
            for j in range(k):
                extend(a, b, cols + arr[i, j] * G, G, W)
                t = a; a = b; b = t
            a[0] &= ~(<uint64_t>1)
            out.append(words_to_int(a, W))
        return out
    finally:
        free(cols); free(a); free(b)


cdef class Ctx:
    cdef int G
    cdef int W
    cdef int cap
    cdef int mode
    cdef int target
    cdef bint require_zero_sum
    cdef bint sigma_bound
    cdef int sym_depth
    cdef const int32_t* cols
    cdef const uint8_t* allowed
    cdef const uint64_t* lmask
    cdef uint8_t** canon
    cdef uint64_t* stack      # (cap + 2) * G * W
    cdef uint64_t* tmp_a
    cdef uint64_t* tmp_b
    cdef int* seq
    cdef int* valid           # (cap + 2) * G child lists
    cdef int64_t* shared      # [best, abort] or NULL
    cdef long long nodes
    cdef long long sym_prunes
    cdef long long bound_prunes
    cdef long long node_limit
    cdef double deadline
    cdef bint cap_hit
    cdef bint aborted
    cdef int best_len
    cdef int* best_seq
    cdef int collect_limit
    cdef object collected


cdef int poll(Ctx c) except -1:
    if c.deadline > 0 and time.monotonic() > c.deadline:
        c.aborted = True
    if c.shared != NULL and c.shared[1] != 0:
        c.aborted = True
    return 0


cdef int ext_bound(Ctx c, const uint64_t* dp, int d, const int* valid, int nvalid, int need) except -1:
    cdef int G = c.G, W = c.W
    cdef int g, i, x, m, ext, sigma, room
    cdef uint64_t* cur
    cdef uint64_t* nxt
    cdef uint64_t* t
    if c.sigma_bound:
        sigma = 0
        for g in range(1, G):
            if any_bits(dp + g * W, W):
                sigma += 1
        if G - 1 - sigma < need:
            return G - 1 - sigma
    ext = nvalid
    if ext >= need:
        return ext
    room = c.cap - d
    for i in range(nvalid):
        x = valid[i]
        cur = c.tmp_a
        nxt = c.tmp_b
        extend(dp, cur, c.cols + x * G, G, W)
        m = 1
        while m < room:
            extend(cur, nxt, c.cols + x * G, G, W)
            if hits(nxt, c.lmask, W):
                break
            t = cur; cur = nxt; nxt = t
            m += 1
            ext += 1
            if ext >= need:
                return ext
    return ext


cdef int visit(Ctx c, int d, int last, long long code) except -1:
    cdef int G = c.G, W = c.W
    cdef uint64_t* dp = c.stack + d * G * W
    cdef uint64_t* child = c.stack + (d + 1) * G * W
    cdef int* valid = c.valid + d * G
    cdef int nvalid = 0
    cdef int x, i, need, gb
    cdef long long ccode
    c.nodes += 1
    if c.node_limit and c.nodes >= c.node_limit:
        c.aborted = True
        return 0
    if (c.nodes & 4095) == 0:
        poll(c)
        if c.aborted:
            return 0
    if c.mode == 0 and d > c.best_len:
        c.best_len = d
        for i in range(d):
            c.best_seq[i] = c.seq[i]
        if c.shared != NULL and d > c.shared[0]:
            c.shared[0] = d
    if c.mode == 1 and d == c.target:
        if not c.require_zero_sum or ((dp[d >> 6] >> (d & 63)) & 1):
            c.collected.append([c.seq[i] for i in range(d)])
            if c.collect_limit and len(c.collected) >= c.collect_limit:
                c.aborted = True
        return 0
    for x in range(last, G):
        if not c.allowed[x]:
            continue
        extend(dp, child, c.cols + x * G, G, W)
        if hits(child, c.lmask, W):
            continue
        valid[nvalid] = x
        nvalid += 1
    if nvalid == 0:
        return 0
    if c.mode == 0 and d >= c.cap:
        c.cap_hit = True
        return 0
    if c.mode == 0:
        need = c.best_len + 1
        if c.shared != NULL:
            gb = <int>c.shared[0]
            if gb > need:
                need = gb
        need -= d
    else:
        need = c.target - d
    if need > 0 and ext_bound(c, dp, d, valid, nvalid, need) < need:
        c.bound_prunes += 1
        return 0
    for i in range(nvalid):
        x = valid[i]
        ccode = 0
        if d < c.sym_depth:
            ccode = code * G + x
            if not c.canon[d][ccode]:
                c.sym_prunes += 1
                continue
        extend(dp, child, c.cols + x * G, G, W)
        c.seq[d] = x
        visit(c, d + 1, x, ccode)
        if c.aborted:
            return 0
    return 0


def avoider_search(
    sub_table,
    lmask,
    int cap,
    allowed,
    prefix=(),
    canon=(),
    int mode=0,
    int target=0,
    bint require_zero_sum=False,
    shared=None,
    bint sigma_bound=False,
    long long node_limit=0,
    double deadline=0.0,
    int collect_limit=0,
):
    cdef Ctx c = Ctx()
    cdef int G = len(sub_table)
    cdef int W = cap // 64 + 1
    cdef int depth_slots = cap + 2
    cdef int i, x, k, d
    cdef long long code = 0
    cdef cnp.ndarray[uint8_t, ndim=1] allowed_arr = np.ascontiguousarray(np.asarray(allowed, dtype=np.uint8))
    cdef cnp.ndarray[int64_t, ndim=1] shared_arr
    cdef cnp.ndarray[uint8_t, ndim=1] tab
    cdef uint64_t* lm = <uint64_t*>calloc(W, sizeof(uint64_t))
    canon_arrays = [np.ascontiguousarray(np.asarray(t, dtype=np.uint8)) for t in canon]

    c.G = G
    c.W = W
    c.cap = cap
    c.mode = mode
    c.target = target
    c.require_zero_sum = require_zero_sum
    c.sigma_bound = sigma_bound
    c.sym_depth = len(canon_arrays)
    c.node_limit = node_limit
    c.deadline = deadline
    c.collect_limit = collect_limit
    c.best_len = -1
    c.collected = []
    c.allowed = &allowed_arr[0]
    int_to_words(lmask, lm, W)
    c.lmask = lm
    c.cols = sub_columns(sub_table, G)
    c.canon = <uint8_t**>malloc((c.sym_depth + 1) * sizeof(uint8_t*))
    for k in range(c.sym_depth):
        tab = canon_arrays[k]
        c.canon[k] = &tab[0]
    c.stack = <uint64_t*>calloc(depth_slots * G * W, sizeof(uint64_t))
    c.tmp_a = <uint64_t*>calloc(G * W, sizeof(uint64_t))
    c.tmp_b = <uint64_t*>calloc(G * W, sizeof(uint64_t))
    c.seq = <int*>calloc(depth_slots, sizeof(int))
    c.best_seq = <int*>calloc(depth_slots, sizeof(int))
    c.valid = <int*>calloc(depth_slots * G, sizeof(int))
    if shared is not None:
        shared_arr = shared
        c.shared = &shared_arr[0]
    else:
        c.shared = NULL
    try:
        c.stack[0] = 1
        d = 0
        for item in prefix:
            x = item
            extend(c.stack + d * G * W, c.stack + (d + 1) * G * W, c.cols + x * G, G, W)
            c.seq[d] = x
            code = code * G + x
            d += 1
        last = int(prefix[len(prefix) - 1]) if len(prefix) else 0
        if not hits(c.stack + d * G * W, lm, W):
            if d > c.sym_depth:
                code = 0
            visit(c, d, last, code)
        return {
            "nodes": c.nodes,
            "sym_prunes": c.sym_prunes,
            "bound_prunes": c.bound_prunes,
            "cap_hit": bool(c.cap_hit),
            "aborted": bool(c.aborted),
            "best_len": c.best_len,
            "best_seq": [c.best_seq[i] for i in range(max(c.best_len, 0))],
            "collected": c.collected,
        }
    finally:
        free(lm)
        free(<void*>c.cols)
        free(c.canon)
        free(c.stack)
        free(c.tmp_a)
        free(c.tmp_b)
        free(c.seq)
        free(c.best_seq)
        free(c.valid)
