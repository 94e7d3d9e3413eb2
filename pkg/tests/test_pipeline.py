"""End-to-end pipeline tests: seat setup, tracking, decisions, anchor drift.

The keystone property: on a noiseless synthetic session the pipeline's
decisions reproduce the generator's ground truth exactly, person by person
and frame by frame.
"""

from __future__ import annotations

import math

import pytest

from gazelab.errors import EmptyInput, InsufficientFrames
from gazelab.io import DetectionStream, FrameRecord, SessionConfig
from gazelab.model import (
    BehaviourClass,
    BoundingBox,
    GazeEstimate,
    HeadDetection,
    ObjectClass,
    ObjectDetection,
    Point2D,
)
from gazelab.pipeline import ANCHOR_ALPHA, PipelineResult, run_pipeline
from gazelab.simulate import SceneSpec, generate

CENTER = Point2D(960.0, 540.0)


def head_at(x: float, y: float, size: float = 60.0) -> HeadDetection:
    half = size / 2.0
    return HeadDetection(
        box=BoundingBox(x - half, y - half, x + half, y + half),
        confidence=1.0,
        keypoints=None,
    )


def ring_seat(theta: float, r: float = 300.0) -> tuple[float, float]:
    return (CENTER.x - r * math.cos(theta), CENTER.y - r * math.sin(theta))


def frame_of(index: int, heads, objects=(), gazes=()) -> FrameRecord:
    return FrameRecord(
        frame_index=index,
        timestamp_s=float(index),
        heads=tuple(heads),
        objects=tuple(objects),
        gazes=tuple(gazes),
    )


THREE_SEATS = [ring_seat(a) for a in (0.0, 2 * math.pi / 3, 4 * math.pi / 3)]


def three_seat_cfg(**overrides) -> SessionConfig:
    kwargs = dict(group_size=3, table_center=CENTER, seat_distance_max=450.0)
    kwargs.update(overrides)
    return SessionConfig(**kwargs)


class TestNoiselessFidelity:
    def test_decisions_reproduce_ground_truth_exactly(self):
        scene = SceneSpec(group_size=4, n_frames=120, seed=5)
        stream, truth, _ = generate(scene)
        cfg = SessionConfig(
            group_size=4, table_center=CENTER, seat_distance_max=450.0
        )
        result = run_pipeline(stream, cfg)
        assert len(result.decisions) == scene.n_frames * scene.group_size
        rows = {(r.frame_index, r.person.ordinal): r for r in truth.rows}
        keys = set()
        for decision in result.decisions:
            key = (decision.frame_index, decision.person.ordinal)
            keys.add(key)
            row = rows[key]
            assert decision.behaviour == row.behaviour
            assert decision.target == row.target
        assert keys == set(rows)
        assert result.order_violations == 0

    def test_five_seat_session_also_exact(self):
        scene = SceneSpec(group_size=5, n_frames=60, seed=9)
        stream, truth, _ = generate(scene)
        cfg = SessionConfig(
            group_size=5, table_center=CENTER, seat_distance_max=450.0
        )
        result = run_pipeline(stream, cfg)
        rows = {(r.frame_index, r.person.ordinal): r for r in truth.rows}
        for decision in result.decisions:
            row = rows[(decision.frame_index, decision.person.ordinal)]
            assert decision.behaviour == row.behaviour
            assert decision.target == row.target


class TestGate:
    def test_numeric_gate_passed_through(self):
        frames = [
            frame_of(i, [head_at(*s) for s in THREE_SEATS]) for i in range(3)
        ]
        result = run_pipeline(
            DetectionStream(frames=tuple(frames)),
            three_seat_cfg(tracking_gate=123.0),
        )
        assert result.gate == 123.0

    def test_auto_gate_from_head_diagonals(self):
        scene = SceneSpec(group_size=4, n_frames=10, seed=0, head_size=60.0)
        stream, _, _ = generate(scene)
        cfg = SessionConfig(
            group_size=4, table_center=CENTER, seat_distance_max=450.0
        )
        result = run_pipeline(stream, cfg)
        assert result.gate == pytest.approx(1.5 * math.hypot(60.0, 60.0))


class TestAbsence:
    def test_zero_head_frame_marks_everyone_absent(self):
        base = [head_at(*s) for s in THREE_SEATS]
        frames = [frame_of(i, base) for i in range(3)]
        frames.append(frame_of(3, []))
        frames.append(frame_of(4, base))
        result = run_pipeline(
            DetectionStream(frames=tuple(frames)), three_seat_cfg()
        )
        by_key = {
            (d.frame_index, d.person.ordinal): d for d in result.decisions
        }
        for ordinal in (1, 2, 3):
            assert by_key[(3, ordinal)].absent
            assert by_key[(3, ordinal)].target is None
            assert by_key[(3, ordinal)].behaviour is None
            assert not by_key[(4, ordinal)].absent

    def test_single_missing_head_marks_only_that_person(self):
        base = [head_at(*s) for s in THREE_SEATS]
        frames = [frame_of(i, base) for i in range(3)]
        frames.append(frame_of(3, [base[0], base[2]]))  # person 2 missing
        frames.append(frame_of(4, base))
        result = run_pipeline(
            DetectionStream(frames=tuple(frames)), three_seat_cfg()
        )
        by_key = {
            (d.frame_index, d.person.ordinal): d for d in result.decisions
        }
        assert by_key[(3, 2)].absent
        assert not by_key[(3, 1)].absent
        assert not by_key[(3, 3)].absent
        assert not by_key[(4, 2)].absent  # recovers on the next frame


class TestAnchorDrift:
    def test_final_anchors_follow_displaced_heads(self):
        base = [head_at(*s) for s in THREE_SEATS]
        displaced = [head_at(s[0] + 10.0, s[1]) for s in THREE_SEATS]
        frames = [frame_of(i, base) for i in range(3)]
        frames.append(frame_of(3, displaced))
        # Cap initialization at the three clean frames so the displaced one
        # exercises drift rather than being averaged into the anchors.
        result = run_pipeline(
            DetectionStream(frames=tuple(frames)),
            three_seat_cfg(seat_init_sample_count=3),
        )
        final = {p.ordinal: pt for p, pt in result.final_seat_map.seats}
        for ordinal, (sx, sy) in enumerate(THREE_SEATS, start=1):
            assert final[ordinal].x == pytest.approx(
                sx + ANCHOR_ALPHA * 10.0, abs=1e-9
            )
            assert final[ordinal].y == pytest.approx(sy, abs=1e-9)

    def test_order_breaking_update_is_rejected_and_counted(self):
        # Frame 3 keeps persons 2 and 3 pinned at their anchors but drags
        # person 1 far east, so the blended anchor would cross person 2 in
        # clockwise order. The update must be discarded, leaving the map
        # exactly as a run without that frame.
        base = [head_at(*s) for s in THREE_SEATS]
        clean = [frame_of(i, base) for i in range(3)]
        bad = frame_of(
            3, [head_at(2960.0, 440.0), base[1], base[2]]
        )
        cfg = three_seat_cfg(tracking_gate=3000.0)
        with_bad = run_pipeline(
            DetectionStream(frames=tuple(clean + [bad])), cfg
        )
        without_bad = run_pipeline(DetectionStream(frames=tuple(clean)), cfg)
        assert with_bad.order_violations == 1
        assert without_bad.order_violations == 0
        assert with_bad.final_seat_map == without_bad.final_seat_map
        # The wayward head is still matched (within the gate), not absent.
        keys = {
            (d.frame_index, d.person.ordinal): d for d in with_bad.decisions
        }
        assert not keys[(3, 1)].absent


class TestTabletFlag:
    @staticmethod
    def tablet_stream() -> DetectionStream:
        seats = [ring_seat(a) for a in (0.0, math.pi)]
        heads = [head_at(*s) for s in seats]
        tablet = ObjectDetection(
            ObjectClass.TABLET,
            BoundingBox(925.0, 515.0, 995.0, 565.0),
            1.0,
        )
        gaze = GazeEstimate(
            subject_head_index=0, point=Point2D(960.0, 540.0), score=1.0
        )
        frames = [
            frame_of(0, heads),
            frame_of(1, heads),
            frame_of(2, heads, objects=[tablet], gazes=[gaze]),
        ]
        return DetectionStream(frames=tuple(frames))

    def test_tablet_counts_as_other_by_default(self):
        cfg = SessionConfig(
            group_size=2, table_center=CENTER, seat_distance_max=450.0
        )
        result = run_pipeline(self.tablet_stream(), cfg)
        by_key = {
            (d.frame_index, d.person.ordinal): d for d in result.decisions
        }
        decision = by_key[(2, 1)]
        assert decision.target.object_class is ObjectClass.TABLET
        assert decision.behaviour is BehaviourClass.OTHER

    def test_tablet_promoted_to_laptop_with_flag(self):
        cfg = SessionConfig(
            group_size=2, table_center=CENTER, seat_distance_max=450.0
        )
        result = run_pipeline(self.tablet_stream(), cfg, tablet_as_laptop=True)
        by_key = {
            (d.frame_index, d.person.ordinal): d for d in result.decisions
        }
        assert by_key[(2, 1)].behaviour is BehaviourClass.LAPTOP


class TestErrorPassthrough:
    def test_empty_stream(self):
        cfg = three_seat_cfg()
        with pytest.raises(EmptyInput):
            run_pipeline(DetectionStream(frames=()), cfg)

    def test_too_few_qualifying_frames(self):
        base = [head_at(*s) for s in THREE_SEATS]
        frames = [
            frame_of(0, base),
            frame_of(1, base),
            frame_of(2, base[:2]),  # only two heads: does not qualify
        ]
        with pytest.raises(InsufficientFrames):
            run_pipeline(DetectionStream(frames=tuple(frames)), three_seat_cfg())

    def test_group_size_mismatch_cannot_initialize(self):
        scene = SceneSpec(group_size=4, n_frames=10, seed=0)
        stream, _, _ = generate(scene)
        cfg = SessionConfig(
            group_size=5, table_center=CENTER, seat_distance_max=450.0
        )
        with pytest.raises(InsufficientFrames):
            run_pipeline(stream, cfg)


class TestResultShape:
    def test_result_fields(self):
        frames = [
            frame_of(i, [head_at(*s) for s in THREE_SEATS]) for i in range(3)
        ]
        result = run_pipeline(
            DetectionStream(frames=tuple(frames)), three_seat_cfg()
        )
        assert isinstance(result, PipelineResult)
        assert len(result.decisions) == 9
        assert result.initial_seat_map.table_center == CENTER
        # Matched heads without gaze estimates are present but unassigned.
        for decision in result.decisions:
            assert not decision.absent
            assert decision.target.kind == "unassigned"
            assert decision.behaviour is BehaviourClass.OTHER
