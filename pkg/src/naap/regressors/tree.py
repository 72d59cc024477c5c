"""Variance-reduction CART regression tree with optional sample weights.

The tree is grown level by level over a single per-feature presort of the
training matrix, so each level costs one pass over every feature column.
Ensembles that refit on the same matrix share the presort, and resampling
is expressed as integer sample weights rather than copied rows.
"""

from __future__ import annotations

import numpy as np
from numba import njit


def presort(X: np.ndarray) -> np.ndarray:
    """Per-feature stable ascending order, shape (n_features, n_samples)."""
    return np.ascontiguousarray(np.argsort(X, axis=0, kind="stable").T)


@njit(cache=True)
def _grow(X, y, w, order, max_depth, min_samples_split):
    n, d = X.shape
    cap = 2 * n + 1
    feature = np.full(cap, -1, np.int64)
    threshold = np.zeros(cap)
    left = np.full(cap, -1, np.int64)
    right = np.full(cap, -1, np.int64)
    value = np.zeros(cap)
    tot_w = np.zeros(cap)
    tot_s = np.zeros(cap)
    count = np.zeros(cap, np.int64)
    y_min = np.full(cap, np.inf)
    y_max = np.full(cap, -np.inf)

    node_of = np.full(n, -1, np.int64)
    for i in range(n):
        if w[i] > 0:
            node_of[i] = 0
            tot_w[0] += w[i]
            tot_s[0] += w[i] * y[i]
            count[0] += 1
            y_min[0] = min(y_min[0], y[i])
            y_max[0] = max(y_max[0], y[i])
    value[0] = tot_s[0] / tot_w[0]

    # rows still inside splittable nodes, per feature in ascending x order;
    # zero-weight rows and rows that reach a leaf are dropped as the tree grows
    m = count[0]
    rows = np.empty((d, m), np.int64)
    xs = np.empty((d, m))
    ws = np.empty((d, m))
    wys = np.empty((d, m))
    for f in range(d):
        k = 0
        for r in range(n):
            i = order[f, r]
            if w[i] > 0:
                rows[f, k] = i
                xs[f, k] = X[i, f]
                ws[f, k] = w[i]
                wys[f, k] = w[i] * y[i]
                k += 1

    n_nodes = 1
    level_lo, level_hi = 0, 1
    depth = 0
    slot_of = np.full(cap, -1, np.int64)
    while level_hi > level_lo and m > 0:
        if max_depth >= 0 and depth >= max_depth:
            break
        active = np.empty(level_hi - level_lo, np.int64)
        n_active = 0
        for nd in range(level_lo, level_hi):
            if count[nd] >= min_samples_split and y_max[nd] > y_min[nd]:
                slot_of[nd] = n_active
                active[n_active] = nd
                n_active += 1
        if n_active == 0:
            break
        best = np.full(n_active, -np.inf)
        best_f = np.full(n_active, -1, np.int64)
        best_thr = np.zeros(n_active)
        wl = np.zeros(n_active)
        sl = np.zeros(n_active)
        last_x = np.zeros(n_active)
        seen = np.zeros(n_active, np.bool_)
        for f in range(d):
            wl[:] = 0.0
            sl[:] = 0.0
            seen[:] = False
            for r in range(m):
                i = rows[f, r]
                nd = node_of[i]
                s = slot_of[nd]
                if s < 0:
                    continue
                x = xs[f, r]
                if seen[s] and x > last_x[s]:
                    W = tot_w[nd]
                    wr = W - wl[s]
                    if wl[s] > 0 and wr > 0:
                        sr = tot_s[nd] - sl[s]
                        score = sl[s] * sl[s] / wl[s] + sr * sr / wr
                        if score > best[s]:
                            best[s] = score
                            best_f[s] = f
                            thr = 0.5 * (last_x[s] + x)
                            if thr >= x:
                                thr = last_x[s]
                            best_thr[s] = thr
                wl[s] += ws[f, r]
                sl[s] += wys[f, r]
                last_x[s] = x
                seen[s] = True
        next_lo = n_nodes
        for s in range(n_active):
            if best_f[s] < 0:
                continue
            nd = active[s]
            feature[nd] = best_f[s]
            threshold[nd] = best_thr[s]
            left[nd] = n_nodes
            right[nd] = n_nodes + 1
            n_nodes += 2
        for r in range(m):
            i = rows[0, r]
            nd = node_of[i]
            if feature[nd] < 0:
                continue
            child = left[nd] if X[i, feature[nd]] <= threshold[nd] else right[nd]
            node_of[i] = child
            tot_w[child] += w[i]
            tot_s[child] += w[i] * y[i]
            count[child] += 1
            y_min[child] = min(y_min[child], y[i])
            y_max[child] = max(y_max[child], y[i])
        for nd in range(next_lo, n_nodes):
            value[nd] = tot_s[nd] / tot_w[nd]
        for nd in range(level_lo, level_hi):
            slot_of[nd] = -1
        depth += 1
        if max_depth >= 0 and depth >= max_depth:
            break
        # keep only rows whose new node may split again
        k = 0
        for f in range(d):
            k = 0
            for r in range(m):
                i = rows[f, r]
                nd = node_of[i]
                if nd >= next_lo and count[nd] >= min_samples_split and y_max[nd] > y_min[nd]:
                    rows[f, k] = i
                    xs[f, k] = xs[f, r]
                    ws[f, k] = ws[f, r]
                    wys[f, k] = wys[f, r]
                    k += 1
        m = k
        level_lo, level_hi = next_lo, n_nodes
    return feature[:n_nodes], threshold[:n_nodes], left[:n_nodes], right[:n_nodes], value[:n_nodes]


@njit(cache=True)
def _apply(X, feature, threshold, left, right):
    out = np.empty(X.shape[0], np.int64)
    for i in range(X.shape[0]):
        node = 0
        while feature[node] >= 0:
            if X[i, feature[node]] <= threshold[node]:
                node = left[node]
            else:
                node = right[node]
        out[i] = node
    return out


class RegressionTree:
    """Binary regression tree grown greedily on weighted squared error.

    Splits are searched over all features; ties go to the lowest feature
    index, then the lowest threshold. Thresholds are midpoints between
    consecutive distinct values, so every leaf predicts a weighted mean of
    training targets and predictions never leave the training target range.
    """

    def __init__(self, max_depth: int | None = None, min_samples_split: int = 2):
        self.max_depth = max_depth
        self.min_samples_split = min_samples_split

    def fit(self, X, y, sample_weight=None, order: np.ndarray | None = None) -> "RegressionTree":
        X = np.ascontiguousarray(X, dtype=float)
        y = np.ascontiguousarray(y, dtype=float)
        w = np.ones(len(y)) if sample_weight is None else np.ascontiguousarray(sample_weight, dtype=float)
        if not np.any(w > 0):
            raise ValueError("no samples with positive weight")
        if order is None:
            order = presort(X)
        self.n_features_ = X.shape[1]
        depth = -1 if self.max_depth is None else int(self.max_depth)
        (self.feature_, self.threshold_, self.left_, self.right_,
         self.value_) = _grow(X, y, w, order, depth, int(self.min_samples_split))
        return self

    def apply(self, X) -> np.ndarray:
        X = np.ascontiguousarray(X, dtype=float)
        return _apply(X, self.feature_, self.threshold_, self.left_, self.right_)

    def predict(self, X) -> np.ndarray:
        return self.value_[self.apply(X)]

    @property
    def n_leaves(self) -> int:
        return int(np.sum(self.feature_ < 0))
