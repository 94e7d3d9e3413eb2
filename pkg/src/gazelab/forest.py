"""Random-forest classifier built from scratch on the shared tree kernels.

Trees are grown by recursive Gini-impurity splitting: at each node a seeded
subset of candidate features is drawn, each candidate column is sorted and
scanned by ``kernel.best_split`` (compiled when available), and the best
(feature, threshold) pair wins — earlier candidates win exact score ties.
Leaves store class histograms; prediction routes rows through flattened
node arrays with ``kernel.apply_tree`` and votes across trees, breaking
ties by class order (S < L < O).

Determinism: everything derives from (data, params, seed).  The bootstrap
for tree t is seeded by (seed, t); the feature subset at a node is seeded
by (seed, t, node_path) where node_path is the heap path id (root 1, left
child 2p, right child 2p+1).  Because deepening the tree never changes the
seeds of existing nodes, raising max_depth refines a tree instead of
rebuilding it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import kernel
from .errors import InsufficientData, SchemaError
from .features import FEATURE_DIM, FeatureVector
from .model import BEHAVIOUR_ORDER, BehaviourClass

__all__ = [
    "ForestParams",
    "DecisionTree",
    "ForestModel",
    "train_forest",
    "predict_forest",
    "predict_forest_batch",
    "forest_to_text",
    "forest_from_text",
]

_N_CLASSES = len(BEHAVIOUR_ORDER)
_CLASS_INDEX = {c: i for i, c in enumerate(BEHAVIOUR_ORDER)}


@dataclass(frozen=True)
class ForestParams:
    n_trees: int = 30
    max_depth: int = 12
    min_leaf: int = 1
    features_per_split: int = 5  # floor(sqrt(34))
    seed: int = 0

    def __post_init__(self):
        if self.n_trees < 1:
            raise SchemaError(f"n_trees must be >= 1, got {self.n_trees}")
        if self.max_depth < 1:
            raise SchemaError(f"max_depth must be >= 1, got {self.max_depth}")
        if self.min_leaf < 1:
            raise SchemaError(f"min_leaf must be >= 1, got {self.min_leaf}")
        if not (1 <= self.features_per_split <= FEATURE_DIM):
            raise SchemaError(
                f"features_per_split must be in [1, {FEATURE_DIM}], "
                f"got {self.features_per_split}"
            )
        if self.seed < 0:
            raise SchemaError(f"seed must be >= 0, got {self.seed}")


@dataclass(frozen=True)
class DecisionTree:
    """Flattened tree: node arrays indexed by node id, root 0.

    ``feature[n] == -1`` marks a leaf; internal nodes route rows left when
    ``x[feature] <= threshold``.  ``counts[n]`` is the class histogram of
    the training rows that reached node n.
    """

    feature: np.ndarray  # int32
    threshold: np.ndarray  # float64
    left: np.ndarray  # int32
    right: np.ndarray  # int32
    counts: np.ndarray  # int64, shape (n_nodes, 3)

    @property
    def n_nodes(self) -> int:
        return int(self.feature.shape[0])


@dataclass(frozen=True)
class ForestModel:
    params: ForestParams
    trees: tuple[DecisionTree, ...]


def _as_arrays(data: Sequence[FeatureVector]) -> tuple[np.ndarray, np.ndarray]:
    if any(fv.label is None for fv in data):
        raise InsufficientData("every training vector needs a label")
    x = np.ascontiguousarray(
        np.stack([fv.values for fv in data]), dtype=np.float64
    )
    y = np.asarray([_CLASS_INDEX[fv.label] for fv in data], dtype=np.int64)
    return x, y


class _TreeBuilder:
    def __init__(self, x, y, params: ForestParams, tree_index: int):
        self.x = x
        self.y = y
        self.params = params
        self.tree_index = tree_index
        self.feature: list[int] = []
        self.threshold: list[float] = []
        self.left: list[int] = []
        self.right: list[int] = []
        self.counts: list[np.ndarray] = []

    def _new_node(self, class_counts: np.ndarray) -> int:
        node = len(self.feature)
        self.feature.append(-1)
        self.threshold.append(0.0)
        self.left.append(-1)
        self.right.append(-1)
        self.counts.append(class_counts)
        return node

    def build(self, rows: np.ndarray) -> None:
        self._grow(rows, depth=0, path=1)

    def _grow(self, rows: np.ndarray, depth: int, path: int) -> int:
        y_rows = self.y[rows]
        class_counts = np.bincount(y_rows, minlength=_N_CLASSES).astype(np.int64)
        node = self._new_node(class_counts)

        if (
            depth >= self.params.max_depth
            or int(class_counts.max()) == rows.shape[0]  # pure
            or rows.shape[0] < 2 * self.params.min_leaf
        ):
            return node

        rng = np.random.default_rng(
            np.random.SeedSequence((self.params.seed, self.tree_index, path))
        )
        candidates = rng.choice(
            FEATURE_DIM, size=self.params.features_per_split, replace=False
        )

        best_score = -np.inf
        best_feature = -1
        best_threshold = 0.0
        for f in candidates:
            col = self.x[rows, f]
            order = np.argsort(col, kind="stable")
            values = np.ascontiguousarray(col[order])
            labels = np.ascontiguousarray(y_rows[order])
            pos, score = kernel.best_split(
                values, labels, _N_CLASSES, self.params.min_leaf
            )
            if pos == -1 or score <= best_score:  # first candidate wins ties
                continue
            best_score = score
            best_feature = int(f)
            lo, hi = values[pos - 1], values[pos]
            t = 0.5 * (lo + hi)
            if t >= hi:  # midpoint rounded up: fall back to the left value
                t = lo
            best_threshold = float(t)

        if best_feature == -1:
            return node  # no valid split on any candidate: stay a leaf

        go_left = self.x[rows, best_feature] <= best_threshold
        left_rows = rows[go_left]
        right_rows = rows[~go_left]
        self.feature[node] = best_feature
        self.threshold[node] = best_threshold
        self.left[node] = self._grow(left_rows, depth + 1, 2 * path)
        self.right[node] = self._grow(right_rows, depth + 1, 2 * path + 1)
        return node

    def finish(self) -> DecisionTree:
        return DecisionTree(
            feature=np.asarray(self.feature, dtype=np.int32),
            threshold=np.asarray(self.threshold, dtype=np.float64),
            left=np.asarray(self.left, dtype=np.int32),
            right=np.asarray(self.right, dtype=np.int32),
            counts=np.stack(self.counts).astype(np.int64),
        )


def train_forest(
    data: Sequence[FeatureVector], params: ForestParams | None = None
) -> ForestModel:
    """Fit the forest. Needs >= 2 labelled samples (any number of classes)."""
    if params is None:
        params = ForestParams()
    if len(data) < 2:
        raise InsufficientData(
            f"forest training needs at least 2 samples, got {len(data)}"
        )
    x, y = _as_arrays(data)
    n = x.shape[0]
    trees: list[DecisionTree] = []
    for t in range(params.n_trees):
        rng = np.random.default_rng(np.random.SeedSequence((params.seed, t)))
        bootstrap = rng.integers(0, n, size=n)
        builder = _TreeBuilder(x, y, params, t)
        builder.build(np.sort(bootstrap))
        trees.append(builder.finish())
    return ForestModel(params=params, trees=tuple(trees))


def _tree_predict(tree: DecisionTree, x: np.ndarray) -> np.ndarray:
    leaves = np.zeros(x.shape[0], dtype=np.int64)
    kernel.apply_tree(tree.feature, tree.threshold, tree.left, tree.right, x, leaves)
    return np.argmax(tree.counts[leaves], axis=1)  # first max: S < L < O


def predict_forest_batch(model: ForestModel, x: np.ndarray) -> np.ndarray:
    """Class indices for each row of x, by majority vote over trees."""
    x = np.ascontiguousarray(x, dtype=np.float64)
    votes = np.zeros((x.shape[0], _N_CLASSES), dtype=np.int64)
    for tree in model.trees:
        predicted = _tree_predict(tree, x)
        votes[np.arange(x.shape[0]), predicted] += 1
    return np.argmax(votes, axis=1)  # first max: class-order tie-break


def predict_forest(model: ForestModel, fv: FeatureVector) -> BehaviourClass:
    index = int(predict_forest_batch(model, fv.values[np.newaxis, :])[0])
    return BEHAVIOUR_ORDER[index]


# ---------------------------------------------------------------------------
# Structured-text serialization (diff-able, no binary)
# ---------------------------------------------------------------------------


def forest_to_text(model: ForestModel) -> str:
    p = model.params
    lines = [
        "forest v1",
        f"params n_trees={p.n_trees} max_depth={p.max_depth} "
        f"min_leaf={p.min_leaf} features_per_split={p.features_per_split} "
        f"seed={p.seed}",
    ]
    for i, tree in enumerate(model.trees):
        lines.append(f"tree {i} nodes {tree.n_nodes}")
        for n in range(tree.n_nodes):
            counts = " ".join(str(int(v)) for v in tree.counts[n])
            lines.append(
                f"node {n} feature {int(tree.feature[n])} "
                f"threshold {float(tree.threshold[n])!r} "
                f"left {int(tree.left[n])} right {int(tree.right[n])} "
                f"counts {counts}"
            )
    return "".join(line + "\n" for line in lines)


def forest_from_text(text: str) -> ForestModel:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != "forest v1":
        raise SchemaError("not a serialized forest (missing 'forest v1' header)")
    kv = dict(part.split("=") for part in lines[1].split()[1:])
    params = ForestParams(
        n_trees=int(kv["n_trees"]),
        max_depth=int(kv["max_depth"]),
        min_leaf=int(kv["min_leaf"]),
        features_per_split=int(kv["features_per_split"]),
        seed=int(kv["seed"]),
    )
    trees: list[DecisionTree] = []
    i = 2
    while i < len(lines):
        header = lines[i].split()
        if header[0] != "tree":
            raise SchemaError(f"expected 'tree' line, got {lines[i]!r}")
        n_nodes = int(header[3])
        i += 1
        feature = np.empty(n_nodes, dtype=np.int32)
        threshold = np.empty(n_nodes, dtype=np.float64)
        left = np.empty(n_nodes, dtype=np.int32)
        right = np.empty(n_nodes, dtype=np.int32)
        counts = np.empty((n_nodes, _N_CLASSES), dtype=np.int64)
        for n in range(n_nodes):
            tok = lines[i].split()
            if tok[0] != "node" or int(tok[1]) != n:
                raise SchemaError(f"malformed node line {lines[i]!r}")
            feature[n] = int(tok[3])
            threshold[n] = float(tok[5])
            left[n] = int(tok[7])
            right[n] = int(tok[9])
            counts[n] = [int(v) for v in tok[11 : 11 + _N_CLASSES]]
            i += 1
        trees.append(
            DecisionTree(
                feature=feature,
                threshold=threshold,
                left=left,
                right=right,
                counts=counts,
            )
        )
    if len(trees) != params.n_trees:
        raise SchemaError(
            f"expected {params.n_trees} trees, found {len(trees)}"
        )
    return ForestModel(params=params, trees=tuple(trees))
