"""End-to-end per-session orchestration: seats, tracking, gaze decisions.

``run_pipeline`` chains seat initialization, per-frame tracking with anchor
drift, and the gaze assignment rule over a whole detection stream, producing
one decision per (frame, seat).
"""

from __future__ import annotations

from dataclasses import dataclass

from .assignment import decide_frame
from .io import DetectionStream, SessionConfig
from .model import GazeDecision
from .tracking import (
    SeatMap,
    initialize_session,
    track_frame,
    update_anchors,
)

__all__ = ["PipelineResult", "run_pipeline"]

#: Anchor drift rate: how strongly a matched head pulls its seat anchor.
ANCHOR_ALPHA = 0.2


@dataclass(frozen=True)
class PipelineResult:
    decisions: tuple[GazeDecision, ...]
    initial_seat_map: SeatMap
    final_seat_map: SeatMap
    gate: float
    order_violations: int


def run_pipeline(
    stream: DetectionStream,
    cfg: SessionConfig,
    tablet_as_laptop: bool = False,
) -> PipelineResult:
    """Decide every (frame, seat) of the stream.

    Seat anchors are initialized from the stream's opening sample, then per
    frame: heads are matched to seats (gated), decisions are made for every
    seat (Absent when unmatched), and anchors drift toward matched head
    centers unless the drift would scramble the clockwise seat order (such
    rejected updates are counted in ``order_violations``).

    Raises the underlying module errors unchanged (EmptyInput on an empty
    stream, InsufficientFrames when too few frames qualify for seat
    initialization, DegenerateGeometry, ...).
    """
    seat_map, gate = initialize_session(stream, cfg)
    initial = seat_map
    decisions: list[GazeDecision] = []
    previous = None
    violations = 0
    for frame in stream.frames:
        tracked = track_frame(frame, seat_map, previous, gate)
        decisions.extend(
            decide_frame(frame, tracked, seat_map, tablet_as_laptop)
        )
        seat_map, violated = update_anchors(
            seat_map, tracked, frame, ANCHOR_ALPHA
        )
        if violated:
            violations += 1
        previous = tracked
    return PipelineResult(
        decisions=tuple(decisions),
        initial_seat_map=initial,
        final_seat_map=seat_map,
        gate=gate,
        order_violations=violations,
    )
