"""Pure numpy tree builder; the fallback when the compiled kernel is absent.

This mirrors ``_tree_ext.pyx`` operation for operation so that both
backends grow bit-identical trees: the same node order, the same feature
permutations (splitmix64 stream) and the same floating-point expression for
the split score, evaluated against a shared ``c * log2(c)`` table.
"""

from __future__ import annotations

import numpy as np

_MASK = (1 << 64) - 1


# below this many rows plain Python loops beat numpy's per-call overhead
SMALL_NODE = 40


def _large_split(XT, ylab, rows, perm, n_try, min_leaf, c1, T, ramp):
    n = len(rows)
    c0 = n - c1
    parent_score = T[n] - T[c0] - T[c1]
    nl = ramp[1:n]
    nr = n - nl
    size_ok = (nl >= min_leaf) & (nr >= min_leaf)
    best_g, best_f, best_t = -np.inf, -1, 0.0
    tried = 0
    for f in perm:
        if tried >= n_try:
            break
        vals = XT[f, rows]
        order = vals.argsort(kind="stable")
        v = vals[order]
        if v[0] == v[-1]:
            continue
        tried += 1
        l1 = ylab[order].cumsum()[:-1]
        valid = v[:-1] < v[1:]
        valid &= size_ok
        if not valid.any():
            continue
        l0 = nl - l1
        r1 = c1 - l1
        r0 = nr - r1
        g = parent_score - ((T[nl] - T[l0] - T[l1]) + (T[nr] - T[r0] - T[r1]))
        g[~valid] = -np.inf
        k = int(g.argmax())
        if g[k] > best_g:
            best_g, best_f = g[k], f
            a, b = v[k], v[k + 1]
            t = (a + b) * 0.5
            best_t = a if t >= b else t
    return best_f, best_t


def _small_split(Xl, yl, rows, perm, n_try, min_leaf, c1, Tl):
    # same arithmetic as _large_split, one scalar at a time
    n = len(rows)
    c0 = n - c1
    parent_score = Tl[n] - Tl[c0] - Tl[c1]
    labels = [yl[r] for r in rows]
    best_g, best_f, best_t = -np.inf, -1, 0.0
    tried = 0
    lo, hi = min_leaf, n - min_leaf
    for f in perm:
        if tried >= n_try:
            break
        col = Xl[f]
        # ties may land in any order; only cuts between distinct values count
        pairs = sorted(zip([col[r] for r in rows], labels))
        if pairs[0][0] == pairs[-1][0]:
            continue
        tried += 1
        g_best, k_best, l1 = -np.inf, -1, 0
        for k in range(n - 1):
            l1 += pairs[k][1]
            nl = k + 1
            if nl < lo or nl > hi or not pairs[k][0] < pairs[k + 1][0]:
                continue
            nr = n - nl
            r1 = c1 - l1
            g = parent_score - ((Tl[nl] - Tl[nl - l1] - Tl[l1])
                                + (Tl[nr] - Tl[nr - r1] - Tl[r1]))
            if g > g_best:
                g_best, k_best = g, k
        if k_best >= 0 and g_best > best_g:
            best_g, best_f = g_best, f
            a, b = pairs[k_best][0], pairs[k_best + 1][0]
            t = (a + b) * 0.5
            best_t = a if t >= b else t
    return best_f, best_t


def build_tree(X, y, sample, features, n_try, max_depth, min_leaf, seed, xlogx):
    """Grow one tree on the rows ``sample`` of ``X``.

    ``max_depth`` < 0 means unlimited. Returns the arrays
    ``(feature, threshold, left, right, counts)``; leaves have feature -1.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    idx = np.array(sample, dtype=np.int64)
    features = [int(f) for f in features]
    T = np.asarray(xlogx, dtype=np.float64)
    # feature-major copy so each column gather reads contiguous memory
    XT = np.ascontiguousarray(X.T)
    ramp = np.arange(len(idx) + 1)
    Xl, yl, Tl = XT.tolist(), y.tolist(), T.tolist()
    state = int(seed) & _MASK

    feat, thr, left, right, counts = [], [], [], [], []
    stack = [(0, len(idx), 0, -1, False)]
    while stack:
        start, end, depth, parent, is_right = stack.pop()
        node = len(feat)
        if parent >= 0:
            (right if is_right else left)[parent] = node
        rows = idx[start:end]
        n = end - start
        if n <= SMALL_NODE:
            row_list = rows.tolist()
            c1 = sum([yl[r] for r in row_list])
        else:
            c1 = int(y[rows].sum())
        c0 = n - c1
        feat.append(-1)
        thr.append(0.0)
        left.append(-1)
        right.append(-1)
        counts.append((c0, c1))
        if c0 == 0 or c1 == 0 or n < 2 * min_leaf or (0 <= max_depth <= depth) \
                or not features:
            continue

        perm = list(features)
        for i in range(len(perm) - 1, 0, -1):
            # splitmix64, inlined
            state = (state + 0x9E3779B97F4A7C15) & _MASK
            z = ((state ^ (state >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
            z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
            j = (z ^ (z >> 31)) % (i + 1)
            perm[i], perm[j] = perm[j], perm[i]

        if n <= SMALL_NODE:
            best_f, best_t = _small_split(Xl, yl, row_list, perm, n_try, min_leaf,
                                          c1, Tl)
        else:
            best_f, best_t = _large_split(XT, y[rows], rows, perm, n_try, min_leaf,
                                          c1, T, ramp)
        if best_f < 0:
            continue

        feat[node] = best_f
        thr[node] = float(best_t)
        go_left = XT[best_f, rows] <= best_t
        n_left = int(go_left.sum())
        idx[start:end] = np.concatenate([rows[go_left], rows[~go_left]])
        stack.append((start + n_left, end, depth + 1, node, True))
        stack.append((start, start + n_left, depth + 1, node, False))

    return (np.array(feat, dtype=np.int64), np.array(thr, dtype=np.float64),
            np.array(left, dtype=np.int64), np.array(right, dtype=np.int64),
            np.array(counts, dtype=np.int64).reshape(-1, 2))
