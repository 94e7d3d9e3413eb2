# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled kernels for decision-tree fitting and application.

These are the two inner loops that dominate forest training and prediction:

* ``best_split``  — scan a pre-sorted feature column for the class-purity
  maximizing split position.
* ``apply_tree``  — route feature rows through a flattened tree to leaves.

A NumPy implementation of the same two functions lives in
``gazelab._kernel_py``; the arithmetic here is arranged expression-for-
expression the same way so both produce bit-identical results.  Keep the
two files in sync when changing either.
"""

from libc.math cimport INFINITY


def best_split(const double[::1] values, const long long[::1] labels, int n_classes,
               int min_leaf):
    """Find the best binary split of a sorted column.

    ``values`` must be ascending; ``labels[i]`` is the class (0..n_classes-1)
    of the row with the i-th smallest value.  A split at position ``i``
    sends rows [0, i) left and [i, n) right; it is valid when both sides
    have at least ``min_leaf`` rows and the value actually changes at the
    boundary.  The score of a split is

        sum_c left_count[c]^2 / n_left  +  sum_c right_count[c]^2 / n_right

    which is an affine transform of the (negated) weighted Gini impurity,
    so maximizing it minimizes the impurity.  Returns ``(pos, score)``
    with ``pos = -1`` when no valid split exists.
    """
    cdef Py_ssize_t n = values.shape[0]
    cdef double[64] left_counts
    cdef double[64] total_counts
    cdef int c
    cdef Py_ssize_t i
    cdef double score, sumsq_l, sumsq_r, best_score, diff
    cdef Py_ssize_t best_pos = -1

    if n_classes > 64:
        raise ValueError("best_split supports at most 64 classes")
    if n < 2 * min_leaf or n < 2:
        return -1, 0.0

    for c in range(n_classes):
        left_counts[c] = 0.0
        total_counts[c] = 0.0
    for i in range(n):
        total_counts[labels[i]] += 1.0

    best_score = -INFINITY
    for i in range(1, n):
        left_counts[labels[i - 1]] += 1.0
        if i < min_leaf or n - i < min_leaf:
            continue
        if values[i] <= values[i - 1]:
            continue
        sumsq_l = 0.0
        sumsq_r = 0.0
        for c in range(n_classes):
            sumsq_l += left_counts[c] * left_counts[c]
            diff = total_counts[c] - left_counts[c]
            sumsq_r += diff * diff
        score = sumsq_l / <double>i + sumsq_r / <double>(n - i)
        if score > best_score:
            best_score = score
            best_pos = i

    if best_pos == -1:
        return -1, 0.0
    return best_pos, best_score


def apply_tree(const int[::1] feature, const double[::1] threshold, const int[::1] left,
               const int[::1] right, const double[:, ::1] x, long long[::1] out):
    """Route each row of ``x`` through a flattened tree.

    Node arrays are indexed by node id; ``feature[node] < 0`` marks a leaf.
    Rows go left when ``x[row, feature] <= threshold`` and right otherwise.
    Writes the reached leaf id for every row into ``out``.
    """
    cdef Py_ssize_t n = x.shape[0]
    cdef Py_ssize_t i
    cdef int node
    for i in range(n):
        node = 0
        while feature[node] >= 0:
            if x[i, feature[node]] <= threshold[node]:
                node = left[node]
            else:
                node = right[node]
        out[i] = node
