"""Training-data-size experiments: k-fold cross-validation and the
fraction sweep comparing learned baselines against the rule-based engine.

Both learned models plug in through the same trainer interface: a trainer
is a callable that fits on a list of labelled FeatureVectors and returns a
batch predictor (feature matrix -> integer class labels).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

import numpy as np

from .errors import EmptyInput, MissingKeypoints, TooFewSamples
from .features import FeatureVector, featurize
from .forest import ForestParams, predict_forest_batch, train_forest
from .io import AnnotationRecord, DetectionStream, SessionConfig
from .metrics import EvalReport, evaluate
from .mlp import MlpParams, predict_mlp_batch, train_mlp
from .model import BEHAVIOUR_ORDER, BehaviourClass, HeadDetection, PersonId
from .tracking import initialize_session, track_frame, update_anchors
from .pipeline import ANCHOR_ALPHA

__all__ = [
    "Trainer",
    "Predictor",
    "forest_trainer",
    "mlp_trainer",
    "CvResult",
    "cross_validate",
    "SweepPoint",
    "SweepResult",
    "run_sweep",
    "build_dataset",
    "RULE_BASED_MODEL_NAME",
]

Predictor = Callable[[np.ndarray], np.ndarray]
Trainer = Callable[[Sequence[FeatureVector]], Predictor]

RULE_BASED_MODEL_NAME = "rule-based"


def forest_trainer(params: ForestParams | None = None) -> Trainer:
    def train(data: Sequence[FeatureVector]) -> Predictor:
        model = train_forest(data, params)
        return lambda x: predict_forest_batch(model, x)

    return train


def mlp_trainer(params: MlpParams | None = None) -> Trainer:
    def train(data: Sequence[FeatureVector]) -> Predictor:
        model = train_mlp(data, params)
        return lambda x: predict_mlp_batch(model, x)

    return train


def _features_and_labels(
    data: Sequence[FeatureVector], indices: np.ndarray
) -> tuple[np.ndarray, list[BehaviourClass]]:
    x = np.stack([data[i].values for i in indices])
    labels = [data[i].label for i in indices]
    return x, labels


def _score_split(
    data: Sequence[FeatureVector],
    train_idx: np.ndarray,
    test_idx: np.ndarray,
    trainer: Trainer,
) -> EvalReport:
    predictor = trainer([data[i] for i in train_idx])
    x_test, truth = _features_and_labels(data, test_idx)
    predicted = predictor(x_test)
    pairs = [
        (BEHAVIOUR_ORDER[int(p)], t) for p, t in zip(predicted, truth)
    ]
    return evaluate(pairs)


@dataclass(frozen=True)
class CvResult:
    per_fold: tuple[float, ...]
    mean: float


def cross_validate(
    data: Sequence[FeatureVector],
    k: int,
    trainer: Trainer,
    seed: int = 0,
) -> CvResult:
    """Seeded shuffle, k contiguous folds, weighted F1 per held-out fold.

    Requires k >= 2 and at least k samples (k == len(data) is leave-one-out).
    """
    n = len(data)
    if k < 2:
        raise TooFewSamples(f"cross-validation needs k >= 2, got k={k}")
    if n < k:
        raise TooFewSamples(
            f"cross-validation needs at least k={k} samples, got {n}"
        )
    for fv in data:
        if fv.label is None:
            raise EmptyInput("cross-validation requires labelled samples")
    order = np.random.default_rng(np.random.SeedSequence(seed)).permutation(n)
    folds = np.array_split(order, k)
    scores: list[float] = []
    for i, fold in enumerate(folds):
        train_idx = np.concatenate(
            [f for j, f in enumerate(folds) if j != i]
        )
        scores.append(_score_split(data, train_idx, fold, trainer).weighted_f1)
    return CvResult(per_fold=tuple(scores), mean=float(np.mean(scores)))


@dataclass(frozen=True)
class SweepPoint:
    fraction: float
    model: str
    seed: int
    weighted_f1: float


@dataclass(frozen=True)
class SweepResult:
    points: tuple[SweepPoint, ...]
    rule_based_f1: float

    def to_rows(self) -> list[tuple[float | None, str, float]]:
        """Rows for sweep.csv: learned points in sweep order, then the
        constant rule-based line (empty fraction field)."""
        rows: list[tuple[float | None, str, float]] = [
            (p.fraction, p.model, p.weighted_f1) for p in self.points
        ]
        rows.append((None, RULE_BASED_MODEL_NAME, self.rule_based_f1))
        return rows


def run_sweep(
    data: Sequence[FeatureVector],
    fractions: Sequence[float],
    trainers: Mapping[str, Trainer],
    rule_based_f1: float,
    seeds: Sequence[int] = (0, 1, 2),
) -> SweepResult:
    """Train on a fraction, test on the rest, for every (fraction, model,
    seed) combination; points are ordered fraction-major, then model (in the
    mapping's order), then seed.

    Every seed draws one shuffled split shared by all models at that
    (fraction, seed), so model comparisons are paired.  Training sizes are
    rounded half-up and clamped to [1, n-1] so both sides stay non-empty.
    """
    n = len(data)
    if n < 2:
        raise TooFewSamples(f"sweep needs at least 2 samples, got {n}")
    for f in fractions:
        if not (0.0 < f < 1.0):
            raise TooFewSamples(f"fractions must be inside (0, 1), got {f}")
    for fv in data:
        if fv.label is None:
            raise EmptyInput("sweep requires labelled samples")
    points: list[SweepPoint] = []
    for fraction in fractions:
        for model_name, trainer in trainers.items():
            for seed in seeds:
                order = np.random.default_rng(
                    np.random.SeedSequence(seed)
                ).permutation(n)
                m = int(np.floor(fraction * n + 0.5))
                m = max(1, min(n - 1, m))
                report = _score_split(data, order[:m], order[m:], trainer)
                points.append(
                    SweepPoint(
                        fraction=float(fraction),
                        model=model_name,
                        seed=int(seed),
                        weighted_f1=report.weighted_f1,
                    )
                )
    return SweepResult(points=tuple(points), rule_based_f1=float(rule_based_f1))


def build_dataset(
    stream: DetectionStream,
    annotations: Sequence[AnnotationRecord],
    cfg: SessionConfig,
    frame_width: float = 1920.0,
    frame_height: float = 1080.0,
) -> list[FeatureVector]:
    """Labelled feature vectors for every annotated, tracked, keypointed
    (frame, person) in the stream.

    Runs the same seat initialization and tracking as the decision pipeline,
    then featurizes each matched head that both carries keypoints and has an
    annotation.  Raises MissingKeypoints when tracking matched heads but
    none carried keypoints, and EmptyInput when no (frame, person) had both
    a matched head and an annotation.
    """
    labels: dict[tuple[int, int], BehaviourClass] = {}
    for rec in annotations:
        labels[(rec.frame_index, rec.person.ordinal)] = rec.behaviour

    seat_map, gate = initialize_session(stream, cfg)
    previous = None
    data: list[FeatureVector] = []
    saw_matched_head = False
    saw_keypoints = False
    for frame in stream.frames:
        tracked = track_frame(frame, seat_map, previous, gate)
        for person, head_idx in tracked.assignments.items():
            if head_idx is None:
                continue
            saw_matched_head = True
            head: HeadDetection = frame.heads[head_idx]
            if head.keypoints is not None:
                saw_keypoints = True
            label = labels.get((frame.frame_index, person.ordinal))
            if label is None or head.keypoints is None:
                continue
            data.append(featurize(head, frame_width, frame_height, label))
        seat_map, _ = update_anchors(seat_map, tracked, frame, ANCHOR_ALPHA)
        previous = tracked
    if not data:
        if saw_matched_head and not saw_keypoints:
            raise MissingKeypoints(
                "stream carries no keypoints on any matched head"
            )
        raise EmptyInput(
            "no (frame, person) had both a tracked head and an annotation"
        )
    return data
