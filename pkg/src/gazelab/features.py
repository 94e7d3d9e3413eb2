"""Keypoint feature extraction for the learned baselines.

Each head detection's 17 body keypoints become a 34-dimensional vector:
visible keypoint i contributes ``((x - cx)/s, (y - cy)/s)`` at positions
(2i, 2i+1), where (cx, cy) is the head-box center and s the head-box
diagonal; invisible keypoints contribute (0, 0).  Normalizing by the head
box makes the features invariant under translation and uniform scaling of
the image, so learned models cannot shortcut on absolute seat position.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import MissingKeypoints, SpecError
from .model import BehaviourClass, HeadDetection, KEYPOINT_COUNT, box_center

__all__ = ["FEATURE_DIM", "FeatureVector", "featurize"]

#: 17 keypoints x (x, y)
FEATURE_DIM = 2 * KEYPOINT_COUNT


@dataclass(frozen=True)
class FeatureVector:
    """34 normalized reals plus an optional training label.

    ``degenerate`` marks vectors built from fully-invisible keypoint sets
    (valid input, but carrying no signal).
    """

    values: np.ndarray
    label: BehaviourClass | None = None
    degenerate: bool = False

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.shape != (FEATURE_DIM,):
            raise SpecError(
                f"feature vector must have shape ({FEATURE_DIM},), got {values.shape}"
            )
        if not np.all(np.isfinite(values)):
            raise SpecError("feature vector must be finite")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)


def featurize(
    head: HeadDetection,
    frame_width: float,
    frame_height: float,
    label: BehaviourClass | None = None,
) -> FeatureVector:
    """Build the feature vector for one head detection.

    The frame dimensions are accepted for call-site explicitness and
    validated, but the head-box normalization makes them inert.  Raises
    MissingKeypoints when the detection carries no keypoints.
    """
    if not (frame_width > 0 and frame_height > 0):
        raise SpecError(
            f"frame dimensions must be positive, got {frame_width}x{frame_height}"
        )
    if head.keypoints is None:
        raise MissingKeypoints("head detection has no keypoints to featurize")
    center = box_center(head.box)
    scale = head.box.diagonal
    values = np.zeros(FEATURE_DIM, dtype=np.float64)
    any_visible = False
    for i, kp in enumerate(head.keypoints):
        if not kp.visible:
            continue
        any_visible = True
        values[2 * i] = (kp.point.x - center.x) / scale
        values[2 * i + 1] = (kp.point.y - center.y) / scale
    return FeatureVector(values=values, label=label, degenerate=not any_visible)
