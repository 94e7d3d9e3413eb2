"""Shared builders for the test suite."""

from __future__ import annotations

import numpy as np
import pytest

from gazelab.features import FEATURE_DIM, FeatureVector
from gazelab.io import SessionConfig
from gazelab.model import (
    BoundingBox,
    FrameRecord,
    GazeEstimate,
    HeadDetection,
    Keypoint,
    ObjectClass,
    ObjectDetection,
    Point2D,
)

CENTER = Point2D(960.0, 540.0)


def box_at(cx: float, cy: float, w: float, h: float) -> BoundingBox:
    return BoundingBox(cx - w / 2, cy - h / 2, cx + w / 2, cy + h / 2)


def head_at(
    cx: float, cy: float, size: float = 60.0, keypoints=None, confidence: float = 1.0
) -> HeadDetection:
    return HeadDetection(
        box=box_at(cx, cy, size, size), confidence=confidence, keypoints=keypoints
    )


def object_at(
    cls: ObjectClass, cx: float, cy: float, w: float = 110.0, h: float = 70.0
) -> ObjectDetection:
    return ObjectDetection(cls, box_at(cx, cy, w, h), 1.0)


def frame_of(
    index: int, heads=(), objects=(), gazes=(), timestamp: float | None = None
) -> FrameRecord:
    return FrameRecord(
        frame_index=index,
        timestamp_s=float(index) if timestamp is None else timestamp,
        heads=tuple(heads),
        objects=tuple(objects),
        gazes=tuple(gazes),
    )


def gaze(head_index: int, x: float, y: float, score: float = 1.0) -> GazeEstimate:
    return GazeEstimate(subject_head_index=head_index, point=Point2D(x, y), score=score)


def keypoints_all_at(x: float, y: float) -> tuple[Keypoint, ...]:
    return tuple(Keypoint(Point2D(x, y), True) for _ in range(17))


def feature_vector(values, label=None) -> FeatureVector:
    arr = np.zeros(FEATURE_DIM, dtype=np.float64)
    arr[: len(values)] = values
    arr.flags.writeable = False
    return FeatureVector(values=arr, label=label)


@pytest.fixture
def session_cfg() -> SessionConfig:
    return SessionConfig(
        group_size=4, table_center=CENTER, seat_distance_max=450.0
    )
