# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled tree builder. Same contract and arithmetic as ``_tree_py``."""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport int64_t, uint64_t
from libc.stdlib cimport free, malloc, qsort

cnp.import_array()


ctypedef struct Item:
    double v
    int64_t lab


cdef int _cmp_item(const void* a, const void* b) noexcept nogil:
    cdef double x = (<Item*>a).v
    cdef double y = (<Item*>b).v
    return (x > y) - (x < y)


cdef inline uint64_t _splitmix(uint64_t* state) noexcept nogil:
    state[0] += 0x9E3779B97F4A7C15ULL
    cdef uint64_t z = state[0]
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    return z ^ (z >> 31)


def build_tree(X, y, sample, features, Py_ssize_t n_try, Py_ssize_t max_depth,
               Py_ssize_t min_leaf, seed, xlogx):
    cdef const double[:, :] Xv = np.ascontiguousarray(X, dtype=np.float64)
    cdef const int64_t[:] yv = np.ascontiguousarray(y, dtype=np.int64)
    cdef int64_t[:] idx = np.array(sample, dtype=np.int64)
    cdef const int64_t[:] feats = np.ascontiguousarray(features, dtype=np.int64)
    cdef const double[:] T = np.ascontiguousarray(xlogx, dtype=np.float64)
    cdef uint64_t state = <uint64_t>(int(seed) & 0xFFFFFFFFFFFFFFFF)

    cdef Py_ssize_t m = idx.shape[0]
    cdef Py_ssize_t k = feats.shape[0]
    cdef Py_ssize_t cap = 2 * m + 1
    feat_a = np.full(cap, -1, dtype=np.int64)
    thr_a = np.zeros(cap, dtype=np.float64)
    left_a = np.full(cap, -1, dtype=np.int64)
    right_a = np.full(cap, -1, dtype=np.int64)
    counts_a = np.zeros((cap, 2), dtype=np.int64)
    cdef int64_t[:] feat = feat_a
    cdef double[:] thr = thr_a
    cdef int64_t[:] left = left_a
    cdef int64_t[:] right = right_a
    cdef int64_t[:, :] counts = counts_a

    # stack frames: start, end, depth, parent, is_right
    cdef int64_t* stack = <int64_t*>malloc(5 * (cap + 1) * sizeof(int64_t))
    cdef Item* items = <Item*>malloc((m + 1) * sizeof(Item))
    cdef int64_t* perm = <int64_t*>malloc((k + 1) * sizeof(int64_t))
    cdef int64_t* tmp = <int64_t*>malloc((m + 1) * sizeof(int64_t))
    if stack == NULL or items == NULL or perm == NULL or tmp == NULL:
        free(stack); free(items); free(perm); free(tmp)
        raise MemoryError()

    cdef Py_ssize_t sp = 0, n_nodes = 0
    cdef Py_ssize_t start, end, depth, parent, is_right, node
    cdef Py_ssize_t n, i, j, fi, tried, nl, nr, n_left, best_f
    cdef int64_t c0, c1, l0, l1, r0, r1, f, sw
    cdef double parent_score, g, best_g, best_t, a, b, t
    cdef bint found

    try:
        with nogil:
            stack[0] = 0; stack[1] = m; stack[2] = 0; stack[3] = -1; stack[4] = 0
            sp = 1
            while sp > 0:
                sp -= 1
                start = stack[5 * sp]; end = stack[5 * sp + 1]
                depth = stack[5 * sp + 2]; parent = stack[5 * sp + 3]
                is_right = stack[5 * sp + 4]
                node = n_nodes
                n_nodes += 1
                if parent >= 0:
                    if is_right:
                        right[parent] = node
                    else:
                        left[parent] = node
                n = end - start
                c1 = 0
                for i in range(start, end):
                    c1 += yv[idx[i]]
                c0 = n - c1
                counts[node, 0] = c0
                counts[node, 1] = c1
                if c0 == 0 or c1 == 0 or n < 2 * min_leaf or k == 0:
                    continue
                if max_depth >= 0 and depth >= max_depth:
                    continue

                for i in range(k):
                    perm[i] = feats[i]
                i = k - 1
                while i > 0:
                    j = <Py_ssize_t>(_splitmix(&state) % <uint64_t>(i + 1))
                    sw = perm[i]; perm[i] = perm[j]; perm[j] = sw
                    i -= 1

                parent_score = T[n] - T[c0] - T[c1]
                best_g = -1.0 / 0.0
                best_f = -1
                best_t = 0.0
                tried = 0
                for fi in range(k):
                    if tried >= n_try:
                        break
                    f = perm[fi]
                    for i in range(n):
                        items[i].v = Xv[idx[start + i], f]
                        items[i].lab = yv[idx[start + i]]
                    qsort(items, n, sizeof(Item), _cmp_item)
                    if items[0].v == items[n - 1].v:
                        continue
                    tried += 1
                    l1 = 0
                    for i in range(n - 1):
                        l1 += items[i].lab
                        if not items[i].v < items[i + 1].v:
                            continue
                        nl = i + 1
                        nr = n - nl
                        if nl < min_leaf or nr < min_leaf:
                            continue
                        l0 = nl - l1
                        r1 = c1 - l1
                        r0 = nr - r1
                        g = parent_score - ((T[nl] - T[l0] - T[l1]) + (T[nr] - T[r0] - T[r1]))
                        if g > best_g:
                            best_g = g
                            best_f = f
                            a = items[i].v
                            b = items[i + 1].v
                            t = (a + b) * 0.5
                            best_t = a if t >= b else t
                if best_f < 0:
                    continue

                feat[node] = best_f
                thr[node] = best_t
                n_left = 0
                for i in range(start, end):
                    if Xv[idx[i], best_f] <= best_t:
                        tmp[n_left] = idx[i]
                        n_left += 1
                j = n_left
                for i in range(start, end):
                    if not Xv[idx[i], best_f] <= best_t:
                        tmp[j] = idx[i]
                        j += 1
                for i in range(n):
                    idx[start + i] = tmp[i]
                # right first so the left child is popped (and numbered) next
                stack[5 * sp] = start + n_left; stack[5 * sp + 1] = end
                stack[5 * sp + 2] = depth + 1; stack[5 * sp + 3] = node
                stack[5 * sp + 4] = 1
                sp += 1
                stack[5 * sp] = start; stack[5 * sp + 1] = start + n_left
                stack[5 * sp + 2] = depth + 1; stack[5 * sp + 3] = node
                stack[5 * sp + 4] = 0
                sp += 1
    finally:
        free(stack); free(items); free(perm); free(tmp)

    return (feat_a[:n_nodes].copy(), thr_a[:n_nodes].copy(), left_a[:n_nodes].copy(),
            right_a[:n_nodes].copy(), counts_a[:n_nodes].copy())
