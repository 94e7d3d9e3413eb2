"""Compiled extension vs pure-Python kernel: bit-identical behaviour."""

import os
import subprocess
import sys

import numpy as np
import pytest

from gazelab import _kernel_py, kernel


def random_split_problem(rng):
    n = int(rng.integers(2, 60))
    if rng.random() < 0.3:
        # discrete values force ties and repeated thresholds
        values = np.sort(rng.integers(0, 4, n).astype(np.float64))
    else:
        values = np.sort(rng.normal(0, 1, n))
    labels = rng.integers(0, 3, n).astype(np.int64)
    min_leaf = int(rng.integers(1, 4))
    return values, labels, min_leaf


class TestBestSplitParity:
    def test_matches_python_fallback_on_random_problems(self):
        rng = np.random.default_rng(12345)
        for _ in range(2000):
            values, labels, min_leaf = random_split_problem(rng)
            got = kernel.best_split(values, labels, 3, min_leaf)
            want = _kernel_py.best_split(values, labels, 3, min_leaf)
            assert got[0] == want[0]
            # scores are exact-integer arithmetic in doubles: bit-identical
            assert got[1] == want[1]

    def test_constant_column_has_no_split(self):
        values = np.full(10, 2.5)
        labels = np.arange(10, dtype=np.int64) % 3
        assert kernel.best_split(values, labels, 3, 1) == (-1, 0.0)

    def test_min_leaf_blocks_edge_positions(self):
        values = np.array([0.0, 1.0, 2.0, 3.0])
        labels = np.array([0, 0, 1, 1], dtype=np.int64)
        pos, _ = kernel.best_split(values, labels, 2, 2)
        assert pos == 2  # only position with 2 samples on each side

    def test_prefers_first_of_tied_scores(self):
        # symmetric labels: positions 1 and 3 tie; the scan keeps the first
        values = np.array([0.0, 1.0, 2.0, 3.0])
        labels = np.array([0, 1, 0, 1], dtype=np.int64)
        got = kernel.best_split(values, labels, 2, 1)
        want = _kernel_py.best_split(values, labels, 2, 1)
        assert got == want


class TestApplyTreeParity:
    def test_matches_python_fallback_on_random_trees(self):
        rng = np.random.default_rng(999)
        for _ in range(300):
            n_nodes = int(rng.integers(1, 31))
            feature = np.full(n_nodes, -1, dtype=np.int32)
            threshold = np.zeros(n_nodes, dtype=np.float64)
            left = np.full(n_nodes, -1, dtype=np.int32)
            right = np.full(n_nodes, -1, dtype=np.int32)
            # build a random binary tree over a node budget
            frontier = [0]
            next_free = 1
            while frontier and next_free + 1 < n_nodes:
                node = frontier.pop(0)
                if rng.random() < 0.7:
                    feature[node] = int(rng.integers(0, 6))
                    threshold[node] = float(rng.normal())
                    left[node] = next_free
                    right[node] = next_free + 1
                    frontier.extend([next_free, next_free + 1])
                    next_free += 2
            x = rng.normal(0, 1.5, (40, 6))
            out_c = np.zeros(40, dtype=np.int64)
            out_p = np.zeros(40, dtype=np.int64)
            kernel.apply_tree(feature, threshold, left, right, x, out_c)
            _kernel_py.apply_tree(feature, threshold, left, right, x, out_p)
            assert np.array_equal(out_c, out_p)

    def test_boundary_goes_left(self):
        feature = np.array([0, -1, -1], dtype=np.int32)
        threshold = np.array([1.0, 0.0, 0.0])
        left = np.array([1, -1, -1], dtype=np.int32)
        right = np.array([2, -1, -1], dtype=np.int32)
        x = np.array([[1.0], [1.0000001]])
        out = np.zeros(2, dtype=np.int64)
        kernel.apply_tree(feature, threshold, left, right, x, out)
        assert list(out) == [1, 2]


class TestKernelSelection:
    def test_compiled_kernel_active_in_this_build(self):
        # The package is installed with the extension; if this fails the
        # build fell back silently and the parity tests above lose teeth.
        assert kernel.USING_COMPILED

    def test_env_var_forces_python_fallback(self):
        code = (
            "from gazelab import kernel; "
            "print(kernel.USING_COMPILED)"
        )
        env = dict(os.environ, GAZELAB_FORCE_PYTHON_KERNEL="1")
        out = subprocess.run(
            [sys.executable, "-c", code],
            capture_output=True,
            text=True,
            env=env,
            check=True,
        )
        assert out.stdout.strip() == "False"


class TestForestSameUnderBothKernels:
    def test_trained_forest_identical(self):
        code = """
import numpy as np
from gazelab.features import FeatureVector
from gazelab.model import BEHAVIOUR_ORDER
from gazelab.forest import train_forest, forest_to_text, ForestParams

rng = np.random.default_rng(7)
data = []
for i in range(120):
    v = rng.normal(0, 1, 34)
    arr = np.asarray(v); arr.flags.writeable = False
    data.append(FeatureVector(values=arr, label=BEHAVIOUR_ORDER[i % 3]))
model = train_forest(data, ForestParams(n_trees=8, seed=3))
import sys
sys.stdout.write(forest_to_text(model))
"""
        runs = {}
        for force in ("0", "1"):
            env = dict(os.environ, GAZELAB_FORCE_PYTHON_KERNEL=force)
            out = subprocess.run(
                [sys.executable, "-c", code],
                capture_output=True,
                text=True,
                env=env,
                check=True,
            )
            runs[force] = out.stdout
        assert runs["0"] == runs["1"]
