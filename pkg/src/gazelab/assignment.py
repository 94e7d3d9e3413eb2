"""Gaze-target assignment and behaviour classification — the core rule.

A predicted gaze point is mapped to whatever it landed on: candidates are
the *other* tracked group members' head boxes plus every detected object
box.  A point inside exactly one candidate box takes that target; inside
several, the candidate whose box center is nearest the point wins (exact
distance ties resolve persons before objects, then by smallest ordinal /
detection index, giving a total order); inside none, the gaze is
Unassigned.

Behaviour classes follow from the target: persons are S, laptops are L,
everything else — tablets, phones, unassigned — is O.  Tablets can be
promoted to L via ``tablet_as_laptop`` for sites that treat them as the
primary screen.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import SubjectAbsent
from .model import (
    BehaviourClass,
    BoundingBox,
    FrameRecord,
    GazeDecision,
    GazeTarget,
    ObjectClass,
    PersonId,
    Point2D,
    UNASSIGNED,
    box_center,
    euclidean_distance,
    point_in_box,
)
from .tracking import SeatMap, TrackedFrame

__all__ = [
    "CandidateTarget",
    "candidate_targets",
    "assign_gaze",
    "classify_behaviour",
    "decide_frame",
]


@dataclass(frozen=True)
class CandidateTarget:
    """A box a gaze point could be assigned to (never the Unassigned variant)."""

    target: GazeTarget
    box: BoundingBox

    def __post_init__(self):
        if self.target.kind == "unassigned":
            raise ValueError("a candidate target is always a person or object")


def candidate_targets(
    subject: PersonId,
    tracked: TrackedFrame,
    frame: FrameRecord,
    seat_map: SeatMap,
) -> list[CandidateTarget]:
    """Candidates for a subject's gaze, in tie-break order: matched peers'
    head boxes by ordinal (own head excluded), then object boxes by
    detection index.  Unmatched (untracked) heads are not candidates."""
    candidates: list[CandidateTarget] = []
    for person in seat_map.persons:
        if person == subject:
            continue
        head_idx = tracked.assignments.get(person)
        if head_idx is None:
            continue
        candidates.append(
            CandidateTarget(
                target=GazeTarget.at_person(person),
                box=frame.heads[head_idx].box,
            )
        )
    for idx, obj in enumerate(frame.objects):
        candidates.append(
            CandidateTarget(
                target=GazeTarget.at_object(obj.object_class, idx),
                box=obj.box,
            )
        )
    return candidates


def assign_gaze(
    point: Point2D,
    subject: PersonId,
    tracked: TrackedFrame,
    frame: FrameRecord,
    seat_map: SeatMap,
) -> GazeTarget:
    """Map one gaze point to its target.

    Raises SubjectAbsent when the subject has no matched head in ``tracked``
    (there is no meaningful "own head" to exclude).
    """
    if tracked.assignments.get(subject) is None:
        raise SubjectAbsent(
            f"{subject.label} is not matched in frame {tracked.frame_index}"
        )
    best: GazeTarget | None = None
    best_distance = float("inf")
    for cand in candidate_targets(subject, tracked, frame, seat_map):
        if not point_in_box(point, cand.box):
            continue
        d = euclidean_distance(point, box_center(cand.box))
        if d < best_distance:  # strict: earlier candidates win exact ties
            best_distance = d
            best = cand.target
    return best if best is not None else UNASSIGNED


def classify_behaviour(
    target: GazeTarget, tablet_as_laptop: bool = False
) -> BehaviourClass:
    """Collapse a target to the three-class taxonomy (S / L / O)."""
    if target.kind == "person":
        return BehaviourClass.STUDENT
    if target.kind == "object":
        if target.object_class is ObjectClass.LAPTOP:
            return BehaviourClass.LAPTOP
        if target.object_class is ObjectClass.TABLET and tablet_as_laptop:
            return BehaviourClass.LAPTOP
        return BehaviourClass.OTHER
    return BehaviourClass.OTHER  # unassigned: the catch-all class


def decide_frame(
    frame: FrameRecord,
    tracked: TrackedFrame,
    seat_map: SeatMap,
    tablet_as_laptop: bool = False,
) -> list[GazeDecision]:
    """One decision per seat, in ordinal order.

    Matched seats with a gaze estimate get the full assignment rule; matched
    seats the estimator skipped get Unassigned (classified Other); Absent
    seats get the absent marker.
    """
    gaze_by_head = {g.subject_head_index: g for g in frame.gazes}
    decisions: list[GazeDecision] = []
    for person in seat_map.persons:
        head_idx = tracked.assignments.get(person)
        if head_idx is None:
            decisions.append(
                GazeDecision(
                    frame_index=frame.frame_index,
                    person=person,
                    target=None,
                    behaviour=None,
                )
            )
            continue
        gaze = gaze_by_head.get(head_idx)
        if gaze is None:
            target = UNASSIGNED
        else:
            target = assign_gaze(gaze.point, person, tracked, frame, seat_map)
        decisions.append(
            GazeDecision(
                frame_index=frame.frame_index,
                person=person,
                target=target,
                behaviour=classify_behaviour(target, tablet_as_laptop),
            )
        )
    return decisions
