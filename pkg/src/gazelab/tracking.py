"""Seat initialization and frame-to-frame head tracking.

Seats get persistent PersonIds numbered clockwise around the table center:
Person1 is the seat whose angle is smallest under the start rule below, and
ordinals increase clockwise on screen.  Tracking then associates each
frame's head detections to those identities by optimal (minimum total
distance) one-to-one assignment, gated so implausibly long matches leave a
person Absent instead of teleporting them.

Angle convention: for a point p and center c, ``clockwise_angle(p, c)`` is
``atan2(c.y - p.y, c.x - p.x)`` wrapped to [0, 2π) — the direction of the
vector *from the seat toward the center*.  Because image y grows downward,
ascending angle walks the seats clockwise as seen on screen.  Exact angular
ties order by distance to the center.
"""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import DegenerateGeometry, EmptyInput, InsufficientFrames
from .io import DetectionStream, SessionConfig
from .model import (
    FrameRecord,
    HeadDetection,
    PersonId,
    Point2D,
    box_center,
    euclidean_distance,
)

__all__ = [
    "SeatMap",
    "TrackedFrame",
    "clockwise_angle",
    "initialize_seats",
    "initialize_session",
    "track_frame",
    "update_anchors",
]

#: Gate multiplier for cfg.tracking_gate == "auto": heads rarely move more
#: than 1.5x their own box diagonal between consecutive sampled frames.
AUTO_GATE_DIAGONAL_FACTOR = 1.5

#: Cap on qualifying frames examined (accepted + replaced) during seat
#: initialization, as a multiple of the requested sample count.
MAX_EXAMINED_FACTOR = 5


def clockwise_angle(point: Point2D, center: Point2D) -> float:
    """Angle of ``point`` around ``center`` in [0, 2π), ascending clockwise
    on screen (image coordinates, y down)."""
    return math.atan2(center.y - point.y, center.x - point.x) % (2.0 * math.pi)


def _angular_key(point: Point2D, center: Point2D) -> tuple[float, float]:
    return (clockwise_angle(point, center), euclidean_distance(point, center))


@dataclass(frozen=True)
class SeatMap:
    """Persistent seats: (PersonId, anchor) in ordinal order, plus the center.

    Ordinals are 1..group_size with no gaps; walking seats in ordinal order
    walks them clockwise around the center (possibly starting mid-circle
    after anchors drift, i.e. the ordering is validated cyclically).
    """

    seats: tuple[tuple[PersonId, Point2D], ...]
    table_center: Point2D

    def __post_init__(self):
        object.__setattr__(self, "seats", tuple(self.seats))
        ordinals = [p.ordinal for p, _ in self.seats]
        if ordinals != list(range(1, len(self.seats) + 1)):
            raise DegenerateGeometry(
                f"seat ordinals must be 1..{len(self.seats)} in order, got {ordinals}"
            )
        if not self.seats:
            raise DegenerateGeometry("a seat map needs at least one seat")
        if not _cyclic_order_ok(self.seats, self.table_center):
            raise DegenerateGeometry(
                "seat anchors are not in clockwise order around the center"
            )

    @property
    def group_size(self) -> int:
        return len(self.seats)

    @property
    def persons(self) -> tuple[PersonId, ...]:
        return tuple(p for p, _ in self.seats)

    def anchor_of(self, person: PersonId) -> Point2D:
        return self.seats[person.ordinal - 1][1]


def _cyclic_order_ok(
    seats: Sequence[tuple[PersonId, Point2D]], center: Point2D
) -> bool:
    """True when seats sorted by clockwise angle are a rotation of the
    ordinal sequence 1..N (N == 1 is trivially ordered)."""
    n = len(seats)
    if n <= 1:
        return True
    ranked = sorted(seats, key=lambda s: _angular_key(s[1], center))
    ordinals = [p.ordinal for p, _ in ranked]
    start = ordinals.index(1)
    rotated = ordinals[start:] + ordinals[:start]
    return rotated == list(range(1, n + 1))


@dataclass(frozen=True)
class TrackedFrame:
    """Head-to-person association for one frame.

    ``assignments`` maps every PersonId to a head index in the frame, or
    None when the person is Absent.  ``matched_centers`` carries the matched
    head centers so the next frame can track from where people actually
    were, without revisiting this frame's record.
    """

    frame_index: int
    assignments: Mapping[PersonId, int | None]
    unmatched_heads: tuple[int, ...] = ()
    matched_centers: Mapping[PersonId, Point2D | None] = field(default_factory=dict)

    def __post_init__(self):
        used = [h for h in self.assignments.values() if h is not None]
        if len(used) != len(set(used)):
            raise DegenerateGeometry(
                f"a head index is assigned to two persons: {sorted(used)}"
            )


def _qualifying_heads(
    frame: FrameRecord, cfg: SessionConfig
) -> list[HeadDetection] | None:
    """The frame's heads within seat_distance_max of the center, if exactly
    group_size of them qualify (farther heads are ignored, per the filter
    rule); None otherwise."""
    near = [
        h
        for h in frame.heads
        if euclidean_distance(box_center(h.box), cfg.table_center)
        <= cfg.seat_distance_max
    ]
    return near if len(near) == cfg.group_size else None


def _assign_to_clusters(
    cluster_means: list[Point2D], centers: list[Point2D]
) -> list[int]:
    """Optimal assignment of frame head centers to running clusters; returns
    for each center the cluster index it belongs to."""
    n = len(cluster_means)
    cost = np.empty((n, n), dtype=np.float64)
    for i, mean in enumerate(cluster_means):
        for j, c in enumerate(centers):
            cost[i, j] = euclidean_distance(mean, c)
    rows, cols = linear_sum_assignment(cost)
    out = [0] * n
    for cluster_idx, center_idx in zip(rows, cols):
        out[center_idx] = cluster_idx
    return out


def _rotation_consistent(
    cluster_means: list[Point2D],
    centers: list[Point2D],
    membership: list[int],
    center: Point2D,
) -> bool:
    """Check that walking this frame's heads clockwise visits clusters in the
    same cyclic order as walking the cluster means clockwise."""
    n = len(cluster_means)
    if n <= 2:
        return True  # any two seats are trivially in cyclic order
    cluster_rank = sorted(range(n), key=lambda i: _angular_key(cluster_means[i], center))
    head_rank = sorted(range(n), key=lambda j: _angular_key(centers[j], center))
    head_clusters = [membership[j] for j in head_rank]
    start = head_clusters.index(cluster_rank[0])
    rotated = head_clusters[start:] + head_clusters[:start]
    return rotated == cluster_rank


def _collect_sample(
    stream: DetectionStream, cfg: SessionConfig, sample_count: int
) -> tuple[list[Point2D], list[list[HeadDetection]]]:
    """Scan the stream for consistent qualifying frames; returns the final
    cluster means and the accepted frames' qualifying heads."""
    if not stream.frames:
        raise EmptyInput("cannot initialize seats from an empty stream")
    n = cfg.group_size
    sums: list[list[float]] = []
    counts = 0
    accepted_heads: list[list[HeadDetection]] = []
    examined = 0
    means: list[Point2D] = []

    for frame in stream.frames:
        if counts >= sample_count or examined >= MAX_EXAMINED_FACTOR * sample_count:
            break
        heads = _qualifying_heads(frame, cfg)
        if heads is None:
            continue
        examined += 1
        centers = [box_center(h.box) for h in heads]
        if not sums:
            sums = [[c.x, c.y] for c in centers]
            counts = 1
            accepted_heads.append(heads)
            means = list(centers)
            continue
        membership = _assign_to_clusters(means, centers)
        if not _rotation_consistent(means, centers, membership, cfg.table_center):
            continue  # inconsistent frame: discard and replace with a later one
        for j, cluster_idx in enumerate(membership):
            sums[cluster_idx][0] += centers[j].x
            sums[cluster_idx][1] += centers[j].y
        counts += 1
        accepted_heads.append(heads)
        means = [Point2D(sx / counts, sy / counts) for sx, sy in sums]

    if counts < n:
        raise InsufficientFrames(
            f"seat initialization needs at least {n} qualifying frames, "
            f"found {counts}"
        )
    return means, accepted_heads


def _order_clockwise(means: list[Point2D], center: Point2D) -> list[Point2D]:
    angles = [clockwise_angle(m, center) for m in means]
    for i in range(len(means)):
        for j in range(i + 1, len(means)):
            if angles[i] == angles[j]:
                raise DegenerateGeometry(
                    f"two seat centroids at identical angle {angles[i]:.6f} rad "
                    "around the table center"
                )
    return sorted(means, key=lambda m: _angular_key(m, center))


def initialize_seats(
    stream: DetectionStream, cfg: SessionConfig, sample_count: int | None = None
) -> SeatMap:
    """Establish the seat map from up to ``sample_count`` qualifying frames.

    A frame qualifies when exactly ``group_size`` head centers lie within
    ``seat_distance_max`` of the table center (farther heads are ignored).
    Qualifying frames whose clockwise head order disagrees with the running
    seat order are discarded and replaced by later ones, up to 5x the
    sample count.  Raises InsufficientFrames when fewer than ``group_size``
    frames were accepted, DegenerateGeometry when two seat centroids share
    an angle.
    """
    if sample_count is None:
        sample_count = cfg.seat_init_sample_count
    means, _ = _collect_sample(stream, cfg, sample_count)
    ordered = _order_clockwise(means, cfg.table_center)
    seats = tuple(
        (PersonId(i + 1), anchor) for i, anchor in enumerate(ordered)
    )
    return SeatMap(seats=seats, table_center=cfg.table_center)


def initialize_session(
    stream: DetectionStream, cfg: SessionConfig
) -> tuple[SeatMap, float]:
    """One-pass convenience for the pipeline: seat map plus resolved gate.

    When ``cfg.tracking_gate`` is "auto", the gate is 1.5x the median head-box
    diagonal over the accepted initialization sample.
    """
    means, accepted = _collect_sample(stream, cfg, cfg.seat_init_sample_count)
    ordered = _order_clockwise(means, cfg.table_center)
    seats = tuple((PersonId(i + 1), anchor) for i, anchor in enumerate(ordered))
    seat_map = SeatMap(seats=seats, table_center=cfg.table_center)
    if isinstance(cfg.tracking_gate, str):
        diagonals = [h.box.diagonal for heads in accepted for h in heads]
        gate = AUTO_GATE_DIAGONAL_FACTOR * statistics.median(diagonals)
    else:
        gate = float(cfg.tracking_gate)
    return seat_map, gate


def track_frame(
    frame: FrameRecord,
    seat_map: SeatMap,
    previous: TrackedFrame | None,
    gate: float,
) -> TrackedFrame:
    """Associate the frame's heads with persons.

    Each person's reference point is their previous matched head center when
    available, else their seat anchor.  The optimal one-to-one assignment
    minimizing total Euclidean distance is computed; pairings longer than
    ``gate`` are severed, leaving the person Absent and the head unmatched.
    """
    persons = seat_map.persons
    references: list[Point2D] = []
    for person in persons:
        ref = None
        if previous is not None:
            ref = previous.matched_centers.get(person)
        references.append(ref if ref is not None else seat_map.anchor_of(person))

    centers = [box_center(h.box) for h in frame.heads]
    assignments: dict[PersonId, int | None] = {p: None for p in persons}
    matched_centers: dict[PersonId, Point2D | None] = {p: None for p in persons}

    if centers:
        cost = np.empty((len(persons), len(centers)), dtype=np.float64)
        for i, ref in enumerate(references):
            for j, c in enumerate(centers):
                cost[i, j] = euclidean_distance(ref, c)
        rows, cols = linear_sum_assignment(cost)
        for i, j in zip(rows, cols):
            if cost[i, j] > gate:
                continue  # severed: too far to be the same person
            person = persons[i]
            assignments[person] = int(j)
            matched_centers[person] = centers[j]

    used = {h for h in assignments.values() if h is not None}
    unmatched = tuple(j for j in range(len(centers)) if j not in used)
    return TrackedFrame(
        frame_index=frame.frame_index,
        assignments=assignments,
        unmatched_heads=unmatched,
        matched_centers=matched_centers,
    )


def update_anchors(
    seat_map: SeatMap,
    tracked: TrackedFrame,
    frame: FrameRecord,
    alpha: float = 0.2,
) -> tuple[SeatMap, bool]:
    """Drift anchors toward matched head centers by exponential smoothing.

    Each matched seat moves ``anchor <- (1-alpha)*anchor + alpha*center``;
    Absent seats stay put.  If the moved anchors would break the clockwise
    seat order, the update is discarded: the old map is returned with the
    violation flag True so callers can count the event.
    """
    if not (0.0 < alpha <= 1.0):
        raise DegenerateGeometry(f"alpha must be in (0, 1], got {alpha}")
    new_seats: list[tuple[PersonId, Point2D]] = []
    for person, anchor in seat_map.seats:
        head_idx = tracked.assignments.get(person)
        if head_idx is None:
            new_seats.append((person, anchor))
        else:
            c = box_center(frame.heads[head_idx].box)
            new_seats.append(
                (
                    person,
                    Point2D(
                        (1.0 - alpha) * anchor.x + alpha * c.x,
                        (1.0 - alpha) * anchor.y + alpha * c.y,
                    ),
                )
            )
    if not _cyclic_order_ok(new_seats, seat_map.table_center):
        return seat_map, True
    return (
        SeatMap(seats=tuple(new_seats), table_center=seat_map.table_center),
        False,
    )
