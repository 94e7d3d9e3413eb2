"""Core value types and geometric primitives.

Everything here is an immutable value object: frames, detections, gaze
targets, behaviour decisions.  Invariants are enforced at construction time
so downstream code can assume every instance it sees is well-formed.

Image coordinates follow the usual convention for video frames: the origin
is the top-left corner, x grows rightward, y grows downward.  With that
orientation, sweeping the mathematical angle ``atan2(dy, dx)`` upward moves
*clockwise* on screen — a fact the seating code relies on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

from .errors import GeometryError, SchemaError

__all__ = [
    "ObjectClass",
    "BehaviourClass",
    "BEHAVIOUR_ORDER",
    "PersonId",
    "Point2D",
    "BoundingBox",
    "Keypoint",
    "KEYPOINT_COUNT",
    "HeadDetection",
    "ObjectDetection",
    "GazeEstimate",
    "FrameRecord",
    "GazeTarget",
    "UNASSIGNED",
    "GazeDecision",
    "point_in_box",
    "box_center",
    "euclidean_distance",
]

#: Number of body keypoints carried by a pose-augmented head detection.
KEYPOINT_COUNT = 17


class ObjectClass(Enum):
    """Detectable object categories that can serve as gaze targets."""

    LAPTOP = "laptop"
    TABLET = "tablet"
    PHONE = "phone"


class BehaviourClass(Enum):
    """The three gaze-behaviour labels: looking at a peer (S), at one's own
    laptop/screen area (L), or anywhere else (O)."""

    STUDENT = "S"
    LAPTOP = "L"
    OTHER = "O"


#: Canonical class order used by every confusion matrix, report and model.
BEHAVIOUR_ORDER = (BehaviourClass.STUDENT, BehaviourClass.LAPTOP, BehaviourClass.OTHER)


def _require_finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise GeometryError(f"{name} must be finite, got {value!r}")
    return value


@dataclass(frozen=True, order=True)
class PersonId:
    """Stable identity of a group member, numbered 1..group_size clockwise
    around the table."""

    ordinal: int

    def __post_init__(self):
        if not isinstance(self.ordinal, int) or isinstance(self.ordinal, bool):
            raise SchemaError(f"person ordinal must be an int, got {self.ordinal!r}")
        if self.ordinal < 1:
            raise SchemaError(f"person ordinal must be >= 1, got {self.ordinal}")

    @property
    def label(self) -> str:
        return f"Person{self.ordinal}"


@dataclass(frozen=True)
class Point2D:
    """A point in image coordinates (pixels)."""

    x: float
    y: float

    def __post_init__(self):
        object.__setattr__(self, "x", _require_finite("x", self.x))
        object.__setattr__(self, "y", _require_finite("y", self.y))


@dataclass(frozen=True)
class BoundingBox:
    """Axis-aligned box ``[x_min, x_max] x [y_min, y_max]`` with positive area.

    Both boundaries are *inclusive*: a point lying exactly on an edge counts
    as inside.
    """

    x_min: float
    y_min: float
    x_max: float
    y_max: float

    def __post_init__(self):
        for name in ("x_min", "y_min", "x_max", "y_max"):
            value = _require_finite(name, getattr(self, name))
            if value < 0:
                raise GeometryError(f"{name} must be >= 0, got {value}")
            object.__setattr__(self, name, value)
        if not (self.x_min < self.x_max and self.y_min < self.y_max):
            raise GeometryError(
                "box must have positive extent: "
                f"[{self.x_min}, {self.y_min}, {self.x_max}, {self.y_max}]"
            )

    @property
    def width(self) -> float:
        return self.x_max - self.x_min

    @property
    def height(self) -> float:
        return self.y_max - self.y_min

    @property
    def diagonal(self) -> float:
        return math.hypot(self.width, self.height)

    def as_list(self) -> list[float]:
        return [self.x_min, self.y_min, self.x_max, self.y_max]


@dataclass(frozen=True)
class Keypoint:
    """One body keypoint with its visibility flag."""

    point: Point2D
    visible: bool


@dataclass(frozen=True)
class HeadDetection:
    """A detected head box, optionally carrying the 17 body keypoints of the
    person it belongs to."""

    box: BoundingBox
    confidence: float
    keypoints: tuple[Keypoint, ...] | None = None

    def __post_init__(self):
        conf = _require_finite("confidence", self.confidence)
        if not (0.0 <= conf <= 1.0):
            raise SchemaError(f"confidence must be in [0, 1], got {conf}")
        object.__setattr__(self, "confidence", conf)
        if self.keypoints is not None:
            kp = tuple(self.keypoints)
            if len(kp) != KEYPOINT_COUNT:
                raise SchemaError(
                    f"expected {KEYPOINT_COUNT} keypoints, got {len(kp)}"
                )
            object.__setattr__(self, "keypoints", kp)

    @property
    def center(self) -> Point2D:
        return box_center(self.box)


@dataclass(frozen=True)
class ObjectDetection:
    """A detected target object (laptop, tablet or phone)."""

    object_class: ObjectClass
    box: BoundingBox
    confidence: float

    def __post_init__(self):
        conf = _require_finite("confidence", self.confidence)
        if not (0.0 <= conf <= 1.0):
            raise SchemaError(f"confidence must be in [0, 1], got {conf}")
        object.__setattr__(self, "confidence", conf)


@dataclass(frozen=True)
class GazeEstimate:
    """An estimated gaze point for one head in the same frame.

    ``subject_head_index`` refers into ``FrameRecord.heads``; ``score`` is
    the estimator's confidence in [0, 1].
    """

    subject_head_index: int
    point: Point2D
    score: float

    def __post_init__(self):
        if not isinstance(self.subject_head_index, int) or isinstance(
            self.subject_head_index, bool
        ):
            raise SchemaError(
                f"head index must be an int, got {self.subject_head_index!r}"
            )
        if self.subject_head_index < 0:
            raise SchemaError(
                f"head index must be >= 0, got {self.subject_head_index}"
            )
        score = _require_finite("score", self.score)
        if not (0.0 <= score <= 1.0):
            raise SchemaError(f"score must be in [0, 1], got {score}")
        object.__setattr__(self, "score", score)


@dataclass(frozen=True)
class FrameRecord:
    """All detections for one sampled video frame."""

    frame_index: int
    timestamp_s: float
    heads: tuple[HeadDetection, ...] = ()
    objects: tuple[ObjectDetection, ...] = ()
    gazes: tuple[GazeEstimate, ...] = ()

    def __post_init__(self):
        if not isinstance(self.frame_index, int) or isinstance(self.frame_index, bool):
            raise SchemaError(f"frame index must be an int, got {self.frame_index!r}")
        if self.frame_index < 0:
            raise SchemaError(f"frame index must be >= 0, got {self.frame_index}")
        object.__setattr__(self, "timestamp_s", _require_finite("t", self.timestamp_s))
        object.__setattr__(self, "heads", tuple(self.heads))
        object.__setattr__(self, "objects", tuple(self.objects))
        object.__setattr__(self, "gazes", tuple(self.gazes))
        seen: set[int] = set()
        for gaze in self.gazes:
            if gaze.subject_head_index >= len(self.heads):
                raise SchemaError(
                    f"gaze refers to head {gaze.subject_head_index} but frame "
                    f"{self.frame_index} has only {len(self.heads)} heads"
                )
            if gaze.subject_head_index in seen:
                raise SchemaError(
                    f"frame {self.frame_index} has more than one gaze estimate "
                    f"for head {gaze.subject_head_index}"
                )
            seen.add(gaze.subject_head_index)


@dataclass(frozen=True)
class GazeTarget:
    """What a gaze point landed on: a person, an object instance, or nothing.

    Use the factory methods; the constructor checks that exactly the fields
    matching ``kind`` are set.
    """

    kind: str  # "person" | "object" | "unassigned"
    person: PersonId | None = None
    object_class: ObjectClass | None = None
    object_index: int | None = None

    def __post_init__(self):
        if self.kind == "person":
            if self.person is None or self.object_class is not None:
                raise SchemaError("person target must set person and nothing else")
        elif self.kind == "object":
            if (
                self.object_class is None
                or self.object_index is None
                or self.person is not None
            ):
                raise SchemaError(
                    "object target must set object_class and object_index only"
                )
            if self.object_index < 0:
                raise SchemaError(
                    f"object index must be >= 0, got {self.object_index}"
                )
        elif self.kind == "unassigned":
            if (
                self.person is not None
                or self.object_class is not None
                or self.object_index is not None
            ):
                raise SchemaError("unassigned target carries no detail")
        else:
            raise SchemaError(f"unknown target kind {self.kind!r}")

    @staticmethod
    def at_person(person: PersonId) -> "GazeTarget":
        return GazeTarget(kind="person", person=person)

    @staticmethod
    def at_object(object_class: ObjectClass, object_index: int) -> "GazeTarget":
        return GazeTarget(
            kind="object", object_class=object_class, object_index=object_index
        )


#: Singleton target meaning "the gaze point landed on nothing we detected".
UNASSIGNED = GazeTarget(kind="unassigned")


@dataclass(frozen=True)
class GazeDecision:
    """Final per-frame, per-person outcome of the pipeline.

    A person whose head was not tracked in the frame is *absent*: both
    ``target`` and ``behaviour`` are None.  Present persons always carry a
    target (possibly UNASSIGNED) and a behaviour label.
    """

    frame_index: int
    person: PersonId
    target: GazeTarget | None
    behaviour: BehaviourClass | None

    def __post_init__(self):
        if (self.target is None) != (self.behaviour is None):
            raise SchemaError(
                "a decision is either absent (no target, no behaviour) "
                "or present (both set)"
            )

    @property
    def absent(self) -> bool:
        return self.target is None


def point_in_box(point: Point2D, box: BoundingBox) -> bool:
    """True when ``point`` lies inside ``box``, boundary included."""
    return (
        box.x_min <= point.x <= box.x_max and box.y_min <= point.y <= box.y_max
    )


def box_center(box: BoundingBox) -> Point2D:
    """Geometric center of a box."""
    return Point2D((box.x_min + box.x_max) / 2.0, (box.y_min + box.y_max) / 2.0)


def euclidean_distance(a: Point2D, b: Point2D) -> float:
    """Plain Euclidean distance between two points."""
    return math.hypot(a.x - b.x, a.y - b.y)
