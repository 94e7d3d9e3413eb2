"""Session-level aggregation: per-student behaviour proportions, joint
visual attention episodes, and group peer-gaze drop alerts.

Everything here is pure counting over immutable decision lists; the
functions never mutate their inputs and are safe to run concurrently
across sessions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import DuplicateError, SchemaError
from .model import (
    BEHAVIOUR_ORDER,
    BehaviourClass,
    GazeDecision,
    GazeTarget,
    PersonId,
)
from .tracking import SeatMap

__all__ = [
    "PersonSummary",
    "SessionSummary",
    "JvaEpisode",
    "summarize",
    "detect_jva",
    "peer_gaze_drop_alert",
    "summary_to_json",
    "serialize_jva",
    "serialize_alerts",
]


@dataclass(frozen=True)
class PersonSummary:
    """One student's session totals.

    ``proportions`` are over non-Absent decisions only; when every decision
    is Absent the proportions are all zero and ``degenerate`` is True.
    """

    person: PersonId
    counts: Mapping[BehaviourClass, int]
    proportions: Mapping[BehaviourClass, float]
    absent_count: int
    degenerate: bool

    @property
    def decision_count(self) -> int:
        return sum(self.counts.values()) + self.absent_count


@dataclass(frozen=True)
class SessionSummary:
    persons: tuple[PersonSummary, ...]
    totals: Mapping[BehaviourClass, int]
    total_absent: int
    duration_frames: int


@dataclass(frozen=True)
class JvaEpisode:
    """A maximal run of sampled frames in which at least ``min_participants``
    persons share one identical object target (same class and index).

    ``participants`` is the union over the run's frames of the persons
    sharing the target, so it always has at least ``min_participants``
    members.  ``start_frame``/``end_frame`` are inclusive frame indices."""

    target: GazeTarget
    participants: frozenset[PersonId]
    start_frame: int
    end_frame: int

    def __post_init__(self):
        if self.target.kind != "object":
            raise SchemaError(
                f"JVA episodes require an object target, got {self.target.kind}"
            )
        if self.end_frame < self.start_frame:
            raise SchemaError(
                f"episode end {self.end_frame} precedes start {self.start_frame}"
            )
        if len(self.participants) < 2:
            raise SchemaError("JVA episodes require at least 2 participants")


def _check_no_duplicates(decisions: Sequence[GazeDecision]):
    seen: set[tuple[int, int]] = set()
    for dec in decisions:
        key = (dec.frame_index, dec.person.ordinal)
        if key in seen:
            raise DuplicateError(
                f"duplicate decision for frame {key[0]}, person {key[1]}"
            )
        seen.add(key)


def summarize(
    decisions: Sequence[GazeDecision], seat_map: SeatMap | None = None
) -> SessionSummary:
    """Exact per-person behaviour counts and proportions.

    Absent decisions are excluded from the proportion denominator and
    reported as ``absent_count``.  The roster is the union of the seat map's
    persons (when given) and every person appearing in the decisions, so a
    student who was absent for the whole session still gets a row.
    ``duration_frames`` counts distinct sampled frames.
    """
    _check_no_duplicates(decisions)
    roster: set[PersonId] = set()
    if seat_map is not None:
        roster.update(person for person, _ in seat_map.seats)
    counts: dict[PersonId, dict[BehaviourClass, int]] = {}
    absent: dict[PersonId, int] = {}
    frames: set[int] = set()
    for dec in decisions:
        roster.add(dec.person)
        frames.add(dec.frame_index)
        if dec.absent:
            absent[dec.person] = absent.get(dec.person, 0) + 1
            continue
        per = counts.setdefault(dec.person, {c: 0 for c in BEHAVIOUR_ORDER})
        per[dec.behaviour] += 1

    persons: list[PersonSummary] = []
    totals = {c: 0 for c in BEHAVIOUR_ORDER}
    total_absent = 0
    for person in sorted(roster, key=lambda p: p.ordinal):
        per = counts.get(person, {c: 0 for c in BEHAVIOUR_ORDER})
        n_absent = absent.get(person, 0)
        present = sum(per.values())
        if present > 0:
            proportions = {c: per[c] / present for c in BEHAVIOUR_ORDER}
            degenerate = False
        else:
            proportions = {c: 0.0 for c in BEHAVIOUR_ORDER}
            degenerate = True
        for c in BEHAVIOUR_ORDER:
            totals[c] += per[c]
        total_absent += n_absent
        persons.append(
            PersonSummary(
                person=person,
                counts=per,
                proportions=proportions,
                absent_count=n_absent,
                degenerate=degenerate,
            )
        )
    return SessionSummary(
        persons=tuple(persons),
        totals=totals,
        total_absent=total_absent,
        duration_frames=len(frames),
    )


def detect_jva(
    decisions: Sequence[GazeDecision],
    min_participants: int = 2,
    min_duration: int = 3,
) -> list[JvaEpisode]:
    """Maximal shared-object-attention runs.

    A frame *qualifies* for target T when at least ``min_participants``
    persons' decisions point at T (the identical object instance: same class
    and object index — two students at their own laptops never qualify).
    Episodes are maximal runs of consecutive *sampled* frames (adjacent in
    the sorted distinct-frame sequence, so a sparsely sampled session is
    handled by sample position, not raw index gaps) in which every frame
    qualifies; runs spanning fewer than ``min_duration`` sampled frames are
    dropped.  Episodes are returned sorted by (start_frame, class, index).
    """
    if min_participants < 2:
        raise SchemaError(
            f"min_participants must be >= 2, got {min_participants}"
        )
    if min_duration < 1:
        raise SchemaError(f"min_duration must be >= 1, got {min_duration}")
    _check_no_duplicates(decisions)

    # frame -> target key -> persons looking at it
    by_frame: dict[int, dict[tuple[str, int], set[PersonId]]] = {}
    targets: dict[tuple[str, int], GazeTarget] = {}
    for dec in decisions:
        if dec.absent or dec.target.kind != "object":
            continue
        key = (dec.target.object_class.value, dec.target.object_index)
        targets[key] = dec.target
        by_frame.setdefault(dec.frame_index, {}).setdefault(key, set()).add(
            dec.person
        )

    sampled = sorted({dec.frame_index for dec in decisions})
    episodes: list[JvaEpisode] = []
    for key in sorted(targets):
        run_start: int | None = None  # position in `sampled`
        participants: set[PersonId] = set()
        for pos, frame in enumerate(sampled):
            sharers = by_frame.get(frame, {}).get(key, set())
            if len(sharers) >= min_participants:
                if run_start is None:
                    run_start = pos
                    participants = set()
                participants |= sharers
            elif run_start is not None:
                if pos - run_start >= min_duration:
                    episodes.append(
                        JvaEpisode(
                            target=targets[key],
                            participants=frozenset(participants),
                            start_frame=sampled[run_start],
                            end_frame=sampled[pos - 1],
                        )
                    )
                run_start = None
        if run_start is not None and len(sampled) - run_start >= min_duration:
            episodes.append(
                JvaEpisode(
                    target=targets[key],
                    participants=frozenset(participants),
                    start_frame=sampled[run_start],
                    end_frame=sampled[-1],
                )
            )
    episodes.sort(
        key=lambda e: (
            e.start_frame,
            e.target.object_class.value,
            e.target.object_index,
        )
    )
    return episodes


def peer_gaze_drop_alert(
    decisions: Sequence[GazeDecision],
    window: int,
    drop_ratio: float = 0.5,
) -> list[tuple[int, float]]:
    """Alert frames where group peer-directed gaze collapses.

    Per sampled frame, the peer-gaze rate is the fraction of non-Absent
    decisions classified Student; frames with no non-Absent decision have no
    rate and are skipped.  At each frame with a *full* trailing window of
    ``window`` rated frames, the window mean is compared against
    ``drop_ratio`` times the session-to-date mean (all rated frames up to
    and including the current one); strictly lower means an alert, reported
    as ``(frame_index, window_mean)``.
    """
    if window < 1:
        raise SchemaError(f"window must be >= 1, got {window}")
    if drop_ratio < 0:
        raise SchemaError(f"drop_ratio must be >= 0, got {drop_ratio}")
    _check_no_duplicates(decisions)

    present: dict[int, int] = {}
    student: dict[int, int] = {}
    for dec in decisions:
        if dec.absent:
            continue
        present[dec.frame_index] = present.get(dec.frame_index, 0) + 1
        if dec.behaviour is BehaviourClass.STUDENT:
            student[dec.frame_index] = student.get(dec.frame_index, 0) + 1

    rated = [
        (frame, student.get(frame, 0) / count)
        for frame, count in sorted(present.items())
    ]
    alerts: list[tuple[int, float]] = []
    running_sum = 0.0
    for i, (frame, rate) in enumerate(rated):
        running_sum += rate
        if i + 1 < window:
            continue
        window_mean = sum(r for _, r in rated[i + 1 - window : i + 1]) / window
        session_mean = running_sum / (i + 1)
        if window_mean < drop_ratio * session_mean:
            alerts.append((frame, window_mean))
    return alerts


# ---------------------------------------------------------------------------
# Renderers
# ---------------------------------------------------------------------------


def summary_to_json(summary: SessionSummary) -> str:
    """summary.json body (sorted keys, trailing newline)."""
    doc = {
        "duration_frames": summary.duration_frames,
        "persons": [
            {
                "person": ps.person.ordinal,
                "counts": {c.value: ps.counts[c] for c in BEHAVIOUR_ORDER},
                "proportions": {
                    c.value: ps.proportions[c] for c in BEHAVIOUR_ORDER
                },
                "absent": ps.absent_count,
                "degenerate": ps.degenerate,
            }
            for ps in summary.persons
        ],
        "totals": {
            **{c.value: summary.totals[c] for c in BEHAVIOUR_ORDER},
            "absent": summary.total_absent,
        },
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def serialize_jva(episodes: Iterable[JvaEpisode]) -> list[str]:
    """jva.csv lines: ``target,participants,start,end`` with the target as
    ``class:index`` and participants as space-joined ascending ordinals."""
    lines = ["target,participants,start,end"]
    for ep in episodes:
        target = f"{ep.target.object_class.value}:{ep.target.object_index}"
        participants = " ".join(
            str(p.ordinal) for p in sorted(ep.participants, key=lambda q: q.ordinal)
        )
        lines.append(f"{target},{participants},{ep.start_frame},{ep.end_frame}")
    return lines


def serialize_alerts(alerts: Iterable[tuple[int, float]]) -> list[str]:
    """alerts.csv lines: ``frame,rate``."""
    lines = ["frame,rate"]
    for frame, rate in alerts:
        lines.append(f"{frame},{rate!r}")
    return lines
