#!/usr/bin/env python3
"""Compare the compiled tree kernels against the NumPy fallback.

Three workloads, each timed on both backends:

  split-scan   one ``best_split`` pass over a sorted feature column
  tree-apply   routing a large batch through one trained tree
  forest-fit   training a full forest end to end

The forest module resolves the kernels through ``gazelab.kernel`` at call
time, so the fit benchmark swaps backends by pointing that module's
``best_split``/``apply_tree`` at each implementation in turn.  Both
backends produce bit-identical results (asserted below before timing);
only speed differs.

Usage:  python3 benchmarks/bench_kernel.py [--rows N] [--batch N] [--repeats N]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from gazelab import kernel
from gazelab.features import FEATURE_DIM, FeatureVector
from gazelab.forest import ForestParams, predict_forest_batch, train_forest
from gazelab.model import BEHAVIOUR_ORDER


def time_best(fn, repeats: int) -> float:
    """Best-of-N wall time in seconds (best-of suppresses scheduler noise)."""
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def make_dataset(rng: np.random.Generator, n: int) -> list[FeatureVector]:
    data = []
    for _ in range(n):
        label = BEHAVIOUR_ORDER[int(rng.integers(0, 3))]
        values = rng.normal(0.0, 1.0, FEATURE_DIM)
        # give each class a separable bump so trees have structure to find
        values[:3] += 2.0 * BEHAVIOUR_ORDER.index(label)
        data.append(FeatureVector(values=values, label=label))
    return data


def backends() -> dict[str, object]:
    table = {"python": kernel.python_kernel}
    if kernel.compiled_kernel is not None:
        table["compiled"] = kernel.compiled_kernel
    return table


def report(name: str, timings: dict[str, float]) -> None:
    line = f"{name:<12}"
    for backend, seconds in timings.items():
        line += f"  {backend}: {seconds * 1e3:9.3f} ms"
    if len(timings) == 2:
        line += f"  speedup: {timings['python'] / timings['compiled']:.1f}x"
    print(line)


def bench_split_scan(rng, rows: int, repeats: int) -> None:
    values = np.sort(rng.normal(0.0, 1.0, rows))
    labels = rng.integers(0, 3, rows).astype(np.int64)
    reference = kernel.python_kernel.best_split(values, labels, 3, 1)
    timings = {}
    for name, impl in backends().items():
        assert impl.best_split(values, labels, 3, 1) == reference
        timings[name] = time_best(lambda: impl.best_split(values, labels, 3, 1), repeats)
    report("split-scan", timings)


def bench_tree_apply(rng, rows: int, batch: int, repeats: int) -> None:
    model = train_forest(make_dataset(rng, rows), ForestParams(n_trees=1, seed=0))
    tree = model.trees[0]
    x = np.ascontiguousarray(rng.normal(0.0, 1.0, (batch, FEATURE_DIM)))
    out = np.empty(batch, dtype=np.int64)
    reference = np.empty(batch, dtype=np.int64)
    kernel.python_kernel.apply_tree(
        tree.feature, tree.threshold, tree.left, tree.right, x, reference
    )
    timings = {}
    for name, impl in backends().items():
        impl.apply_tree(tree.feature, tree.threshold, tree.left, tree.right, x, out)
        assert np.array_equal(out, reference)
        timings[name] = time_best(
            lambda: impl.apply_tree(
                tree.feature, tree.threshold, tree.left, tree.right, x, out
            ),
            repeats,
        )
    report("tree-apply", timings)


def bench_forest_fit(rng, rows: int, repeats: int) -> None:
    data = make_dataset(rng, rows)
    x = np.stack([fv.values for fv in data])
    original = (kernel.best_split, kernel.apply_tree)
    timings = {}
    reference = None
    try:
        for name, impl in backends().items():
            kernel.best_split = impl.best_split
            kernel.apply_tree = impl.apply_tree
            model = train_forest(data, ForestParams(n_trees=10, seed=0))
            predictions = predict_forest_batch(model, x)
            if reference is None:
                reference = predictions
            assert np.array_equal(predictions, reference)
            timings[name] = time_best(
                lambda: train_forest(data, ForestParams(n_trees=10, seed=0)), repeats
            )
    finally:
        kernel.best_split, kernel.apply_tree = original
    report("forest-fit", timings)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--rows", type=int, default=4096,
                        help="training rows / split-scan column length")
    parser.add_argument("--batch", type=int, default=50_000,
                        help="rows routed per tree-apply call")
    parser.add_argument("--repeats", type=int, default=5,
                        help="best-of-N repetitions per timing")
    args = parser.parse_args()

    active = "compiled" if kernel.USING_COMPILED else "python"
    print(f"active backend at import: {active}")
    if kernel.compiled_kernel is None:
        print("compiled extension not available; timing the fallback only")

    rng = np.random.default_rng(0)
    bench_split_scan(rng, args.rows, args.repeats)
    bench_tree_apply(rng, args.rows, args.batch, args.repeats)
    bench_forest_fit(rng, args.rows, args.repeats)


if __name__ == "__main__":
    main()
