"""Reading and writing every wire format the engine speaks.

Formats (all line-oriented, diff-able text):

* ``detections.jsonl`` — one JSON object per frame:
  ``{"frame": int, "t": float, "heads": [{"box": [x0,y0,x1,y1], "conf": f,
  "kp": [[x,y,v] x17]?}, ...], "objects": [{"cls": "laptop|tablet|phone",
  "box": [...], "conf": f}, ...], "gazes": [{"head": i, "point": [x,y],
  "score": f}, ...]}``.  An optional first line *without* a ``"frame"`` key
  is a stream header carrying ``"session"``/``"fps"`` plus free-form
  provenance; producers that need none of that emit no header.
* ``annotations.csv`` — ``frame,person,behaviour,annotator``.
* ``decisions.csv`` — ``frame,person,target_kind,target_detail,behaviour``.
* ``seats.csv`` — ``person,anchor_x,anchor_y``.
* ``truth.csv`` — ``frame,person,behaviour,target_kind,target_detail``.
* ``sweep.csv`` — ``fraction,model,weighted_f1``.
* config files — flat ``key = value`` lines (values in JSON notation,
  ``[section]`` headers prefix the keys that follow with ``section.``).

Every parse error names the offending 1-based line.  Serialization is
canonical: parsing a file and serializing the result reproduces the file
byte-for-byte when the input was in canonical form.
"""

from __future__ import annotations

import io as _stdio
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .errors import DuplicateError, GeometryError, OrderError, SchemaError
from .model import (
    BEHAVIOUR_ORDER,
    KEYPOINT_COUNT,
    BehaviourClass,
    BoundingBox,
    FrameRecord,
    GazeDecision,
    GazeEstimate,
    GazeTarget,
    HeadDetection,
    Keypoint,
    ObjectClass,
    ObjectDetection,
    PersonId,
    Point2D,
    UNASSIGNED,
)

__all__ = [
    "DetectionStream",
    "AnnotationRecord",
    "SessionConfig",
    "AlignResult",
    "TruthRow",
    "parse_detection_stream",
    "serialize_detection_stream",
    "parse_annotations",
    "serialize_annotations",
    "filter_annotator",
    "parse_decisions",
    "serialize_decisions",
    "serialize_seats",
    "parse_seats",
    "serialize_truth",
    "parse_truth",
    "serialize_sweep_rows",
    "load_config",
    "session_config_from_mapping",
    "align",
]


# ---------------------------------------------------------------------------
# Domain types owned by this module
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DetectionStream:
    """A validated, ordered sequence of frame records plus stream identity."""

    frames: tuple[FrameRecord, ...] = ()
    session_id: str = ""
    fps_sampled: float = 1.0
    #: Raw header object as read from the file (provenance; not compared).
    header_raw: dict | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "frames", tuple(self.frames))
        if not (self.fps_sampled > 0):
            raise SchemaError(f"fps must be > 0, got {self.fps_sampled}")
        previous = None
        for fr in self.frames:
            if previous is not None and fr.frame_index <= previous:
                raise OrderError(
                    f"frame indices must be strictly increasing: "
                    f"{previous} then {fr.frame_index}"
                )
            previous = fr.frame_index


@dataclass(frozen=True)
class AnnotationRecord:
    """One human (or simulator) ground-truth label."""

    frame_index: int
    person: PersonId
    behaviour: BehaviourClass
    annotator_id: str

    def __post_init__(self):
        if self.frame_index < 0:
            raise SchemaError(f"frame index must be >= 0, got {self.frame_index}")
        if not self.annotator_id:
            raise SchemaError("annotator id must be non-empty")


@dataclass(frozen=True)
class SessionConfig:
    """Session-level knobs for seat initialization and tracking."""

    group_size: int
    table_center: Point2D
    seat_distance_max: float
    seat_init_sample_count: int = 20
    tracking_gate: float | str = "auto"

    def __post_init__(self):
        if not (2 <= self.group_size <= 8):
            raise SchemaError(
                f"group_size must be in [2, 8], got {self.group_size}"
            )
        if not (self.seat_distance_max > 0):
            raise SchemaError(
                f"seat_distance_max must be > 0, got {self.seat_distance_max}"
            )
        if self.seat_init_sample_count < self.group_size:
            raise SchemaError(
                "seat_init_sample_count must be >= group_size "
                f"({self.seat_init_sample_count} < {self.group_size})"
            )
        if isinstance(self.tracking_gate, str):
            if self.tracking_gate != "auto":
                raise SchemaError(
                    f'tracking_gate must be a number or "auto", '
                    f"got {self.tracking_gate!r}"
                )
        elif not (float(self.tracking_gate) > 0):
            raise SchemaError(
                f"tracking_gate must be > 0, got {self.tracking_gate}"
            )


# ---------------------------------------------------------------------------
# Low-level helpers
# ---------------------------------------------------------------------------


def _iter_lines(source) -> Iterable[str]:
    if isinstance(source, (str, Path)):
        text = Path(source).read_text(encoding="utf-8")
        return text.splitlines()
    if hasattr(source, "read"):
        return source.read().splitlines()
    return list(source)  # already an iterable of lines


def _require_number(value, what: str, line: int) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(f"{what} must be a number, got {value!r}", line=line)
    return float(value)


def _require_int(value, what: str, line: int) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemaError(f"{what} must be an integer, got {value!r}", line=line)
    return value


def _require_object(value, what: str, line: int, allowed: set[str]) -> dict:
    if not isinstance(value, dict):
        raise SchemaError(f"{what} must be an object, got {value!r}", line=line)
    unknown = set(value) - allowed
    if unknown:
        raise SchemaError(
            f"{what} has unexpected field(s) {sorted(unknown)}", line=line
        )
    return value


def _require_list(value, what: str, line: int, length: int | None = None) -> list:
    if not isinstance(value, list):
        raise SchemaError(f"{what} must be an array, got {value!r}", line=line)
    if length is not None and len(value) != length:
        raise SchemaError(
            f"{what} must have {length} entries, got {len(value)}", line=line
        )
    return value


def _get(obj: dict, key: str, what: str, line: int):
    if key not in obj:
        raise SchemaError(f"{what} is missing field {key!r}", line=line)
    return obj[key]


def _parse_box(value, what: str, line: int) -> BoundingBox:
    raw = _require_list(value, what, line, length=4)
    coords = [_require_number(v, f"{what}[{i}]", line) for i, v in enumerate(raw)]
    try:
        return BoundingBox(*coords)
    except GeometryError as exc:
        raise GeometryError(f"{what}: {exc.args[0]}", line=line) from None


def _parse_point(value, what: str, line: int) -> Point2D:
    raw = _require_list(value, what, line, length=2)
    x = _require_number(raw[0], f"{what}[0]", line)
    y = _require_number(raw[1], f"{what}[1]", line)
    try:
        return Point2D(x, y)
    except GeometryError as exc:
        raise GeometryError(f"{what}: {exc.args[0]}", line=line) from None


# ---------------------------------------------------------------------------
# detections.jsonl
# ---------------------------------------------------------------------------


def _parse_head(obj, idx: int, line: int) -> HeadDetection:
    what = f"heads[{idx}]"
    head = _require_object(obj, what, line, {"box", "conf", "kp"})
    box = _parse_box(_get(head, "box", what, line), f"{what}.box", line)
    conf = _require_number(_get(head, "conf", what, line), f"{what}.conf", line)
    keypoints = None
    if "kp" in head:
        raw_kp = _require_list(
            head["kp"], f"{what}.kp", line, length=KEYPOINT_COUNT
        )
        parsed = []
        for j, entry in enumerate(raw_kp):
            triple = _require_list(entry, f"{what}.kp[{j}]", line, length=3)
            x = _require_number(triple[0], f"{what}.kp[{j}][0]", line)
            y = _require_number(triple[1], f"{what}.kp[{j}][1]", line)
            v = _require_int(triple[2], f"{what}.kp[{j}][2]", line)
            if v not in (0, 1):
                raise SchemaError(
                    f"{what}.kp[{j}][2] (visibility) must be 0 or 1, got {v}",
                    line=line,
                )
            try:
                pt = Point2D(x, y)
            except GeometryError as exc:
                raise GeometryError(
                    f"{what}.kp[{j}]: {exc.args[0]}", line=line
                ) from None
            parsed.append(Keypoint(pt, v == 1))
        keypoints = tuple(parsed)
    try:
        return HeadDetection(box=box, confidence=conf, keypoints=keypoints)
    except SchemaError as exc:
        raise SchemaError(f"{what}: {exc.args[0]}", line=line) from None


def _parse_object(obj, idx: int, line: int) -> ObjectDetection:
    what = f"objects[{idx}]"
    rec = _require_object(obj, what, line, {"cls", "box", "conf"})
    cls_token = _get(rec, "cls", what, line)
    try:
        cls = ObjectClass(cls_token)
    except ValueError:
        allowed = sorted(c.value for c in ObjectClass)
        raise SchemaError(
            f"{what}.cls must be one of {allowed}, got {cls_token!r}", line=line
        ) from None
    box = _parse_box(_get(rec, "box", what, line), f"{what}.box", line)
    conf = _require_number(_get(rec, "conf", what, line), f"{what}.conf", line)
    try:
        return ObjectDetection(object_class=cls, box=box, confidence=conf)
    except SchemaError as exc:
        raise SchemaError(f"{what}: {exc.args[0]}", line=line) from None


def _parse_gaze(obj, idx: int, line: int) -> GazeEstimate:
    what = f"gazes[{idx}]"
    rec = _require_object(obj, what, line, {"head", "point", "score"})
    head = _require_int(_get(rec, "head", what, line), f"{what}.head", line)
    point = _parse_point(_get(rec, "point", what, line), f"{what}.point", line)
    score = _require_number(_get(rec, "score", what, line), f"{what}.score", line)
    try:
        return GazeEstimate(subject_head_index=head, point=point, score=score)
    except SchemaError as exc:
        raise SchemaError(f"{what}: {exc.args[0]}", line=line) from None


def parse_detection_stream(source) -> DetectionStream:
    """Parse a detection stream from a path, file object or iterable of lines.

    Raises :class:`SchemaError`, :class:`OrderError` or
    :class:`GeometryError`, each naming the offending line.  Empty input is
    a valid zero-frame stream.
    """
    frames: list[FrameRecord] = []
    header_raw: dict | None = None
    session_id = ""
    fps = 1.0
    previous_index: int | None = None
    saw_content = False

    for lineno, raw_line in enumerate(_iter_lines(source), start=1):
        text = raw_line.strip()
        if not text:
            continue
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"invalid JSON ({exc.msg})", line=lineno) from None
        if not isinstance(obj, dict):
            raise SchemaError(
                f"each line must be a JSON object, got {type(obj).__name__}",
                line=lineno,
            )

        if "frame" not in obj:
            # A header is only legal as the first content line.
            if saw_content:
                raise SchemaError(
                    "record is missing field 'frame' "
                    "(a header object is only allowed as the first line)",
                    line=lineno,
                )
            saw_content = True
            header_raw = obj
            if "session" in obj:
                if not isinstance(obj["session"], str):
                    raise SchemaError(
                        f"header session must be a string, got {obj['session']!r}",
                        line=lineno,
                    )
                session_id = obj["session"]
            if "fps" in obj:
                fps = _require_number(obj["fps"], "header fps", lineno)
                if not fps > 0:
                    raise SchemaError(
                        f"header fps must be > 0, got {fps}", line=lineno
                    )
            continue

        saw_content = True
        rec = _require_object(
            obj, "frame record", lineno, {"frame", "t", "heads", "objects", "gazes"}
        )
        frame_index = _require_int(
            _get(rec, "frame", "frame record", lineno), "frame", lineno
        )
        if frame_index < 0:
            raise SchemaError(f"frame must be >= 0, got {frame_index}", line=lineno)
        if previous_index is not None and frame_index <= previous_index:
            raise OrderError(
                f"frame {frame_index} does not increase on previous "
                f"frame {previous_index}",
                line=lineno,
            )
        previous_index = frame_index

        t = _require_number(_get(rec, "t", "frame record", lineno), "t", lineno)
        heads = tuple(
            _parse_head(h, i, lineno)
            for i, h in enumerate(
                _require_list(_get(rec, "heads", "frame record", lineno), "heads", lineno)
            )
        )
        objects = tuple(
            _parse_object(o, i, lineno)
            for i, o in enumerate(
                _require_list(
                    _get(rec, "objects", "frame record", lineno), "objects", lineno
                )
            )
        )
        gazes_raw = _require_list(
            _get(rec, "gazes", "frame record", lineno), "gazes", lineno
        )
        gazes = tuple(_parse_gaze(g, i, lineno) for i, g in enumerate(gazes_raw))
        try:
            frames.append(
                FrameRecord(
                    frame_index=frame_index,
                    timestamp_s=t,
                    heads=heads,
                    objects=objects,
                    gazes=gazes,
                )
            )
        except SchemaError as exc:
            raise SchemaError(exc.args[0], line=lineno) from None

    return DetectionStream(
        frames=tuple(frames),
        session_id=session_id,
        fps_sampled=fps,
        header_raw=header_raw,
    )


def _dump(obj) -> str:
    return json.dumps(obj, separators=(",", ":"), ensure_ascii=False)


def _head_to_json(head: HeadDetection) -> dict:
    out: dict = {"box": head.box.as_list(), "conf": head.confidence}
    if head.keypoints is not None:
        out["kp"] = [
            [kp.point.x, kp.point.y, 1 if kp.visible else 0]
            for kp in head.keypoints
        ]
    return out


def serialize_detection_stream(stream: DetectionStream) -> str:
    """Render a stream in canonical form (one frame per line, compact JSON).

    A header line is emitted only when the stream carries one (either parsed
    from input or implied by a non-default session id / fps).
    """
    lines: list[str] = []
    if stream.header_raw is not None:
        lines.append(_dump(stream.header_raw))
    elif stream.session_id or stream.fps_sampled != 1.0:
        lines.append(_dump({"session": stream.session_id, "fps": stream.fps_sampled}))
    for fr in stream.frames:
        lines.append(
            _dump(
                {
                    "frame": fr.frame_index,
                    "t": fr.timestamp_s,
                    "heads": [_head_to_json(h) for h in fr.heads],
                    "objects": [
                        {
                            "cls": o.object_class.value,
                            "box": o.box.as_list(),
                            "conf": o.confidence,
                        }
                        for o in fr.objects
                    ],
                    "gazes": [
                        {
                            "head": g.subject_head_index,
                            "point": [g.point.x, g.point.y],
                            "score": g.score,
                        }
                        for g in fr.gazes
                    ],
                }
            )
        )
    return "".join(line + "\n" for line in lines)


# ---------------------------------------------------------------------------
# CSV formats
# ---------------------------------------------------------------------------

_ANNOTATION_HEADER = "frame,person,behaviour,annotator"
_DECISION_HEADER = "frame,person,target_kind,target_detail,behaviour"
_SEATS_HEADER = "person,anchor_x,anchor_y"
_TRUTH_HEADER = "frame,person,behaviour,target_kind,target_detail"
_SWEEP_HEADER = "fraction,model,weighted_f1"


def _split_csv_line(text: str, expected: int, line: int) -> list[str]:
    parts = text.split(",")
    if len(parts) != expected:
        raise SchemaError(
            f"expected {expected} comma-separated fields, got {len(parts)}",
            line=line,
        )
    return parts


def _parse_behaviour(token: str, line: int) -> BehaviourClass:
    try:
        return BehaviourClass(token)
    except ValueError:
        allowed = [b.value for b in BEHAVIOUR_ORDER]
        raise SchemaError(
            f"behaviour must be one of {allowed}, got {token!r}", line=line
        ) from None


def _parse_int_field(token: str, what: str, line: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise SchemaError(f"{what} must be an integer, got {token!r}", line=line) from None


def _parse_float_field(token: str, what: str, line: int) -> float:
    try:
        return float(token)
    except ValueError:
        raise SchemaError(f"{what} must be a number, got {token!r}", line=line) from None


def _check_header(lines: list[str], expected: str, what: str):
    if not lines or lines[0].strip() != expected:
        got = lines[0].strip() if lines else "<empty file>"
        raise SchemaError(
            f"{what} must start with header {expected!r}, got {got!r}", line=1
        )


def parse_annotations(source) -> tuple[AnnotationRecord, ...]:
    """Parse annotations.csv; duplicate (frame, person, annotator) is fatal."""
    lines = list(_iter_lines(source))
    _check_header(lines, _ANNOTATION_HEADER, "annotations")
    records: list[AnnotationRecord] = []
    seen: set[tuple[int, int, str]] = set()
    for lineno, raw in enumerate(lines[1:], start=2):
        text = raw.strip()
        if not text:
            continue
        frame_s, person_s, behaviour_s, annotator = _split_csv_line(text, 4, lineno)
        frame = _parse_int_field(frame_s, "frame", lineno)
        person = _parse_int_field(person_s, "person", lineno)
        behaviour = _parse_behaviour(behaviour_s, lineno)
        if not annotator:
            raise SchemaError("annotator must be non-empty", line=lineno)
        key = (frame, person, annotator)
        if key in seen:
            raise DuplicateError(
                f"duplicate annotation for frame {frame}, person {person}, "
                f"annotator {annotator!r}",
                line=lineno,
            )
        seen.add(key)
        try:
            records.append(
                AnnotationRecord(
                    frame_index=frame,
                    person=PersonId(person),
                    behaviour=behaviour,
                    annotator_id=annotator,
                )
            )
        except SchemaError as exc:
            raise SchemaError(exc.args[0], line=lineno) from None
    return tuple(records)


def serialize_annotations(records: Sequence[AnnotationRecord]) -> str:
    out = _stdio.StringIO()
    out.write(_ANNOTATION_HEADER + "\n")
    for rec in records:
        out.write(
            f"{rec.frame_index},{rec.person.ordinal},"
            f"{rec.behaviour.value},{rec.annotator_id}\n"
        )
    return out.getvalue()


def filter_annotator(
    records: Sequence[AnnotationRecord], annotator_id: str
) -> tuple[AnnotationRecord, ...]:
    """Keep only one annotator's records (evaluation uses a single source of truth)."""
    return tuple(r for r in records if r.annotator_id == annotator_id)


def _target_to_fields(target: GazeTarget | None) -> tuple[str, str]:
    if target is None:
        return "absent", ""
    if target.kind == "person":
        return "person", str(target.person.ordinal)
    if target.kind == "object":
        return "object", f"{target.object_class.value}:{target.object_index}"
    return "unassigned", ""


def _target_from_fields(kind: str, detail: str, line: int) -> GazeTarget | None:
    if kind == "absent":
        if detail:
            raise SchemaError(
                f"absent rows carry no target_detail, got {detail!r}", line=line
            )
        return None
    if kind == "unassigned":
        if detail:
            raise SchemaError(
                f"unassigned rows carry no target_detail, got {detail!r}", line=line
            )
        return UNASSIGNED
    if kind == "person":
        return GazeTarget.at_person(PersonId(_parse_int_field(detail, "target_detail", line)))
    if kind == "object":
        cls_token, sep, index_s = detail.partition(":")
        if not sep:
            raise SchemaError(
                f"object target_detail must look like 'laptop:0', got {detail!r}",
                line=line,
            )
        try:
            cls = ObjectClass(cls_token)
        except ValueError:
            allowed = sorted(c.value for c in ObjectClass)
            raise SchemaError(
                f"object class must be one of {allowed}, got {cls_token!r}",
                line=line,
            ) from None
        return GazeTarget.at_object(cls, _parse_int_field(index_s, "object index", line))
    raise SchemaError(
        "target_kind must be one of ['absent', 'object', 'person', 'unassigned'], "
        f"got {kind!r}",
        line=line,
    )


def parse_decisions(source) -> tuple[GazeDecision, ...]:
    """Parse decisions.csv back into GazeDecision values."""
    lines = list(_iter_lines(source))
    _check_header(lines, _DECISION_HEADER, "decisions")
    decisions: list[GazeDecision] = []
    for lineno, raw in enumerate(lines[1:], start=2):
        text = raw.strip()
        if not text:
            continue
        frame_s, person_s, kind, detail, behaviour_s = _split_csv_line(text, 5, lineno)
        frame = _parse_int_field(frame_s, "frame", lineno)
        person = _parse_int_field(person_s, "person", lineno)
        target = _target_from_fields(kind, detail, lineno)
        if target is None:
            if behaviour_s:
                raise SchemaError(
                    f"absent rows carry no behaviour, got {behaviour_s!r}",
                    line=lineno,
                )
            behaviour = None
        else:
            behaviour = _parse_behaviour(behaviour_s, lineno)
        try:
            decisions.append(
                GazeDecision(
                    frame_index=frame,
                    person=PersonId(person),
                    target=target,
                    behaviour=behaviour,
                )
            )
        except SchemaError as exc:
            raise SchemaError(exc.args[0], line=lineno) from None
    return tuple(decisions)


def serialize_decisions(decisions: Sequence[GazeDecision]) -> str:
    out = _stdio.StringIO()
    out.write(_DECISION_HEADER + "\n")
    for dec in decisions:
        kind, detail = _target_to_fields(dec.target)
        behaviour = dec.behaviour.value if dec.behaviour is not None else ""
        out.write(
            f"{dec.frame_index},{dec.person.ordinal},{kind},{detail},{behaviour}\n"
        )
    return out.getvalue()


def serialize_seats(seats: Sequence[tuple[PersonId, Point2D]]) -> str:
    out = _stdio.StringIO()
    out.write(_SEATS_HEADER + "\n")
    for person, anchor in seats:
        out.write(f"{person.ordinal},{anchor.x},{anchor.y}\n")
    return out.getvalue()


def parse_seats(source) -> tuple[tuple[PersonId, Point2D], ...]:
    lines = list(_iter_lines(source))
    _check_header(lines, _SEATS_HEADER, "seats")
    seats: list[tuple[PersonId, Point2D]] = []
    for lineno, raw in enumerate(lines[1:], start=2):
        text = raw.strip()
        if not text:
            continue
        person_s, x_s, y_s = _split_csv_line(text, 3, lineno)
        seats.append(
            (
                PersonId(_parse_int_field(person_s, "person", lineno)),
                Point2D(
                    _parse_float_field(x_s, "anchor_x", lineno),
                    _parse_float_field(y_s, "anchor_y", lineno),
                ),
            )
        )
    return tuple(seats)


@dataclass(frozen=True)
class TruthRow:
    """One ground-truth row: what a person was really doing in a frame."""

    frame_index: int
    person: PersonId
    behaviour: BehaviourClass | None
    target: GazeTarget | None


def serialize_truth(rows: Sequence[TruthRow]) -> str:
    out = _stdio.StringIO()
    out.write(_TRUTH_HEADER + "\n")
    for row in rows:
        kind, detail = _target_to_fields(row.target)
        behaviour = row.behaviour.value if row.behaviour is not None else ""
        out.write(
            f"{row.frame_index},{row.person.ordinal},{behaviour},{kind},{detail}\n"
        )
    return out.getvalue()


def parse_truth(source) -> tuple[TruthRow, ...]:
    lines = list(_iter_lines(source))
    _check_header(lines, _TRUTH_HEADER, "truth")
    rows: list[TruthRow] = []
    for lineno, raw in enumerate(lines[1:], start=2):
        text = raw.strip()
        if not text:
            continue
        frame_s, person_s, behaviour_s, kind, detail = _split_csv_line(text, 5, lineno)
        target = _target_from_fields(kind, detail, lineno)
        behaviour = _parse_behaviour(behaviour_s, lineno) if behaviour_s else None
        rows.append(
            TruthRow(
                frame_index=_parse_int_field(frame_s, "frame", lineno),
                person=PersonId(_parse_int_field(person_s, "person", lineno)),
                behaviour=behaviour,
                target=target,
            )
        )
    return tuple(rows)


def serialize_sweep_rows(rows: Sequence[tuple[float | None, str, float]]) -> str:
    """Rows are (fraction, model, weighted_f1); fraction None = the constant
    rule-based line."""
    out = _stdio.StringIO()
    out.write(_SWEEP_HEADER + "\n")
    for fraction, model, wf1 in rows:
        fraction_s = "" if fraction is None else f"{fraction}"
        out.write(f"{fraction_s},{model},{wf1}\n")
    return out.getvalue()


# ---------------------------------------------------------------------------
# Flat key/value config
# ---------------------------------------------------------------------------


def load_config(source) -> dict[str, object]:
    """Parse a flat ``key = value`` config file.

    Values use JSON notation (numbers, quoted strings, booleans, arrays).
    ``[section]`` headers prefix subsequent keys with ``section.``.  Blank
    lines and ``#`` comments are ignored.
    """
    mapping: dict[str, object] = {}
    prefix = ""
    for lineno, raw in enumerate(_iter_lines(source), start=1):
        text = raw.strip()
        if not text or text.startswith("#"):
            continue
        if text.startswith("[") and text.endswith("]"):
            section = text[1:-1].strip()
            if not section:
                raise SchemaError("empty section name", line=lineno)
            prefix = section + "."
            continue
        key, sep, value_s = text.partition("=")
        if not sep:
            raise SchemaError(
                f"expected 'key = value', got {text!r}", line=lineno
            )
        key = prefix + key.strip()
        if not key:
            raise SchemaError("empty key", line=lineno)
        try:
            value = json.loads(value_s.strip())
        except json.JSONDecodeError:
            raise SchemaError(
                f"value for {key!r} must be JSON notation "
                f"(number, \"string\", true/false, or [array]), got {value_s.strip()!r}",
                line=lineno,
            ) from None
        if key in mapping:
            raise DuplicateError(f"duplicate config key {key!r}", line=lineno)
        mapping[key] = value
    return mapping


def _cfg_point(mapping: dict, key: str) -> Point2D:
    value = mapping[key]
    if not (isinstance(value, list) and len(value) == 2):
        raise SchemaError(f"{key} must be [x, y], got {value!r}")
    return Point2D(float(value[0]), float(value[1]))


def session_config_from_mapping(mapping: dict[str, object]) -> SessionConfig:
    """Build a SessionConfig from a parsed config mapping."""
    required = {"group_size", "table_center", "seat_distance_max"}
    missing = required - set(mapping)
    if missing:
        raise SchemaError(f"config is missing key(s) {sorted(missing)}")
    kwargs: dict = {
        "group_size": mapping["group_size"],
        "table_center": _cfg_point(mapping, "table_center"),
        "seat_distance_max": float(mapping["seat_distance_max"]),  # type: ignore[arg-type]
    }
    if "seat_init_sample_count" in mapping:
        kwargs["seat_init_sample_count"] = mapping["seat_init_sample_count"]
    if "tracking_gate" in mapping:
        gate = mapping["tracking_gate"]
        kwargs["tracking_gate"] = gate if isinstance(gate, str) else float(gate)  # type: ignore[arg-type]
    if not isinstance(kwargs["group_size"], int) or isinstance(
        kwargs["group_size"], bool
    ):
        raise SchemaError(f"group_size must be an integer, got {kwargs['group_size']!r}")
    return SessionConfig(**kwargs)


# ---------------------------------------------------------------------------
# Alignment of predictions with ground truth
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AlignResult:
    """Paired labels plus the bookkeeping evaluation reports alongside."""

    pairs: tuple[tuple[BehaviourClass, BehaviourClass], ...]  # (predicted, true)
    unmatched_pred: int
    unmatched_true: int


def align(
    decisions: Sequence[GazeDecision], annotations: Sequence[AnnotationRecord]
) -> AlignResult:
    """Pair predictions with annotations on (frame, person).

    Absent decisions never produce a pair; they surface as ``unmatched_true``
    when the person was annotated.  Annotations must come from a single
    annotator (one truth per key) — duplicates raise DuplicateError, as do
    duplicate prediction keys.
    """
    predicted: dict[tuple[int, int], BehaviourClass | None] = {}
    for dec in decisions:
        key = (dec.frame_index, dec.person.ordinal)
        if key in predicted:
            raise DuplicateError(
                f"two decisions for frame {key[0]}, person {key[1]}"
            )
        predicted[key] = dec.behaviour  # None when absent

    truth: dict[tuple[int, int], BehaviourClass] = {}
    for ann in annotations:
        key = (ann.frame_index, ann.person.ordinal)
        if key in truth:
            raise DuplicateError(
                f"two annotations for frame {key[0]}, person {key[1]} "
                "(filter to a single annotator before aligning)"
            )
        truth[key] = ann.behaviour

    pairs: list[tuple[BehaviourClass, BehaviourClass]] = []
    unmatched_pred = 0
    unmatched_true = 0
    for key in sorted(predicted):
        pred = predicted[key]
        if pred is None:
            continue  # absent: counted from the truth side below
        if key in truth:
            pairs.append((pred, truth[key]))
        else:
            unmatched_pred += 1
    for key in sorted(truth):
        pred = predicted.get(key)
        if pred is None:  # missing entirely or absent
            unmatched_true += 1
    return AlignResult(
        pairs=tuple(pairs),
        unmatched_pred=unmatched_pred,
        unmatched_true=unmatched_true,
    )
