"""Pure NumPy implementations of the tree kernels.

Mirror of ``gazelab._kernel`` (the compiled extension).  Every floating-point
expression is arranged the same way as in the compiled code — counts are
exact small integers represented as doubles, scores are the sum of exactly
two quotients — so the two implementations return bit-identical results and
either can back the forest.  Keep the two files in sync when changing either.
"""

from __future__ import annotations

import numpy as np


def best_split(values, labels, n_classes, min_leaf):
    """See ``gazelab._kernel.best_split``; same contract, same results."""
    values = np.asarray(values, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int64)
    n = values.shape[0]
    if n < 2 * min_leaf or n < 2:
        return -1, 0.0

    onehot = np.zeros((n, n_classes), dtype=np.float64)
    onehot[np.arange(n), labels] = 1.0
    left = np.cumsum(onehot, axis=0)[:-1]  # row i-1 = counts left of split i
    total = left[-1] + onehot[-1]
    right = total[np.newaxis, :] - left

    pos = np.arange(1, n)
    valid = (
        (pos >= min_leaf)
        & (n - pos >= min_leaf)
        & (values[1:] > values[:-1])
    )
    if not valid.any():
        return -1, 0.0

    sumsq_l = (left * left).sum(axis=1)
    sumsq_r = (right * right).sum(axis=1)
    score = sumsq_l / pos + sumsq_r / (n - pos)
    score[~valid] = -np.inf
    best = int(np.argmax(score))
    return int(pos[best]), float(score[best])


def apply_tree(feature, threshold, left, right, x, out):
    """See ``gazelab._kernel.apply_tree``; same contract, same results."""
    feature = np.asarray(feature, dtype=np.int32)
    threshold = np.asarray(threshold, dtype=np.float64)
    left = np.asarray(left, dtype=np.int32)
    right = np.asarray(right, dtype=np.int32)
    x = np.asarray(x, dtype=np.float64)

    n = x.shape[0]
    node = np.zeros(n, dtype=np.int64)
    active = np.nonzero(feature[node] >= 0)[0]
    while active.size:
        current = node[active]
        go_left = x[active, feature[current]] <= threshold[current]
        node[active] = np.where(go_left, left[current], right[current])
        active = active[feature[node[active]] >= 0]
    out[:] = node
