"""Tests for the synthetic session generator.

The generator is the test-bed oracle for the rest of the engine, so these
tests pin down its contract precisely: exact geometry of the layout, the
behaviour dynamics of the Markov chain, the semantics of every noise knob,
and byte-level determinism.
"""

from __future__ import annotations

import math

import numpy as np
import pytest

from gazelab.errors import SpecError
from gazelab.io import serialize_annotations, serialize_detection_stream
from gazelab.model import (
    BEHAVIOUR_ORDER,
    BehaviourClass,
    BoundingBox,
    GazeTarget,
    ObjectClass,
    Point2D,
    box_center,
    euclidean_distance,
    point_in_box,
)
from gazelab.simulate import (
    DEFAULT_STATIONARY,
    DEFAULT_STICKINESS,
    LAPTOP_SIZE,
    PHONE_SIZE,
    TABLET_SIZE,
    NoiseSpec,
    SceneSpec,
    default_markov,
    generate,
    noise_spec_from_mapping,
    scene_spec_from_mapping,
    truth_behaviour_distribution,
)

CENTER = Point2D(960.0, 540.0)


def small_scene(**overrides) -> SceneSpec:
    kwargs = dict(group_size=4, n_frames=20, seed=0)
    kwargs.update(overrides)
    return SceneSpec(**kwargs)


class TestDefaultMarkov:
    def test_rows_sum_to_one(self):
        markov = default_markov()
        for row in markov:
            assert sum(row) == pytest.approx(1.0, abs=1e-15)

    def test_construction_formula(self):
        pi = (0.5, 0.3, 0.2)
        s = 0.4
        markov = default_markov(pi, s)
        for i in range(3):
            for j in range(3):
                expected = (s if i == j else 0.0) + (1.0 - s) * pi[j]
                assert markov[i][j] == pytest.approx(expected, abs=1e-15)

    def test_requested_distribution_is_stationary(self):
        pi = np.array(DEFAULT_STATIONARY)
        p = np.array(default_markov())
        assert np.allclose(pi @ p, pi, atol=1e-12)

    def test_defaults_are_a_probability_vector(self):
        assert sum(DEFAULT_STATIONARY) == pytest.approx(1.0, abs=1e-12)
        assert all(p > 0 for p in DEFAULT_STATIONARY)
        assert 0.0 <= DEFAULT_STICKINESS <= 1.0


class TestSceneSpecValidation:
    def test_group_size_bounds(self):
        with pytest.raises(SpecError):
            SceneSpec(group_size=1)
        with pytest.raises(SpecError):
            SceneSpec(group_size=9)

    def test_positive_geometry(self):
        with pytest.raises(SpecError):
            SceneSpec(seat_radius=0.0)
        with pytest.raises(SpecError):
            SceneSpec(head_size=-1.0)
        with pytest.raises(SpecError):
            SceneSpec(frame_width=0.0)

    def test_negative_frames_and_seed(self):
        with pytest.raises(SpecError):
            SceneSpec(n_frames=-1)
        with pytest.raises(SpecError):
            SceneSpec(seed=-1)

    def test_start_angle_must_stay_below_seat_spacing(self):
        # The bound is 2*pi/group_size, exclusive: at exactly that angle the
        # seat ordinals would rotate one position.
        bound = 2.0 * math.pi / 4
        with pytest.raises(SpecError):
            SceneSpec(group_size=4, start_angle=bound)
        SceneSpec(group_size=4, start_angle=bound - 1e-9)  # just inside: fine
        with pytest.raises(SpecError):
            SceneSpec(group_size=4, start_angle=-0.1)

    def test_markov_shape_and_rows(self):
        with pytest.raises(SpecError):
            SceneSpec(behaviour_markov=((0.5, 0.5), (0.5, 0.5)))
        with pytest.raises(SpecError):
            SceneSpec(
                behaviour_markov=((0.6, 0.3, 0.2), (0.0, 1.0, 0.0), (0.0, 0.0, 1.0))
            )
        with pytest.raises(SpecError):
            SceneSpec(
                behaviour_markov=((1.2, -0.2, 0.0), (0.0, 1.0, 0.0), (0.0, 0.0, 1.0))
            )

    def test_other_phone_share_range(self):
        with pytest.raises(SpecError):
            SceneSpec(other_phone_share=1.5)
        with pytest.raises(SpecError):
            SceneSpec(other_phone_share=-0.1)

    def test_seat_lists_validated(self):
        with pytest.raises(SpecError):
            SceneSpec(group_size=4, phone_seats=(0,))
        with pytest.raises(SpecError):
            SceneSpec(group_size=4, phone_seats=(5,))
        with pytest.raises(SpecError):
            SceneSpec(group_size=4, tablet_seats=(2, 2))

    def test_scene_must_fit_frame(self):
        with pytest.raises(SpecError, match="fit"):
            generate(
                SceneSpec(
                    group_size=2,
                    table_center=Point2D(350.0, 300.0),
                    seat_radius=200.0,
                    start_angle=0.0,
                    n_frames=1,
                    frame_width=500.0,
                    frame_height=600.0,
                )
            )


class TestNoiseSpecValidation:
    def test_negative_sigmas_rejected(self):
        with pytest.raises(SpecError):
            NoiseSpec(box_jitter_sigma=-1.0)
        with pytest.raises(SpecError):
            NoiseSpec(keypoint_noise_sigma=-0.5)

    def test_probabilities_bounded(self):
        with pytest.raises(SpecError):
            NoiseSpec(head_miss_prob=1.5)
        with pytest.raises(SpecError):
            NoiseSpec(gaze_miss_prob=-0.1)
        with pytest.raises(SpecError):
            NoiseSpec(spurious_box_rate=-2.0)

    def test_all_zero_property(self):
        assert NoiseSpec().all_zero
        assert not NoiseSpec(gaze_jitter_sigma=0.1).all_zero


class TestLayout:
    def test_compass_seats_for_start_angle_zero(self):
        scene = small_scene(start_angle=0.0, seat_radius=320.0, n_frames=1)
        _, truth, _ = generate(scene)
        seats = {p.ordinal: pt for p, pt in truth.seat_map.seats}
        c, r = CENTER, 320.0
        # Clockwise from angle zero: west, north, east, south.
        assert seats[1] == Point2D(c.x - r, c.y)
        assert seats[2].x == pytest.approx(c.x, abs=1e-9)
        assert seats[2].y == pytest.approx(c.y - r, abs=1e-9)
        assert seats[3].x == pytest.approx(c.x + r, abs=1e-9)
        assert seats[3].y == pytest.approx(c.y, abs=1e-9)
        assert seats[4].x == pytest.approx(c.x, abs=1e-9)
        assert seats[4].y == pytest.approx(c.y + r, abs=1e-9)
        assert truth.seat_map.table_center == CENTER

    def test_default_cast_has_laptops_and_phones_per_seat(self):
        scene = small_scene(n_frames=1)
        stream, _, _ = generate(scene)
        objects = stream.frames[0].objects
        by_class = {}
        for obj in objects:
            by_class.setdefault(obj.object_class, []).append(obj)
        assert len(by_class[ObjectClass.LAPTOP]) == 4
        assert len(by_class[ObjectClass.PHONE]) == 4
        assert ObjectClass.TABLET not in by_class

    def test_object_footprints(self):
        scene = small_scene(n_frames=1, tablet_seats=(2,))
        stream, _, _ = generate(scene)
        sizes = {
            ObjectClass.LAPTOP: LAPTOP_SIZE,
            ObjectClass.TABLET: TABLET_SIZE,
            ObjectClass.PHONE: PHONE_SIZE,
        }
        for obj in stream.frames[0].objects:
            w, h = sizes[obj.object_class]
            assert obj.box.x_max - obj.box.x_min == pytest.approx(w, abs=1e-9)
            assert obj.box.y_max - obj.box.y_min == pytest.approx(h, abs=1e-9)

    def test_phone_seats_subset(self):
        scene = small_scene(n_frames=1, phone_seats=())
        stream, _, _ = generate(scene)
        classes = {o.object_class for o in stream.frames[0].objects}
        assert ObjectClass.PHONE not in classes

    def test_head_boxes_are_square_head_size(self):
        scene = small_scene(n_frames=1, head_size=48.0)
        stream, _, _ = generate(scene)
        for head in stream.frames[0].heads:
            assert head.box.x_max - head.box.x_min == pytest.approx(48.0)
            assert head.box.y_max - head.box.y_min == pytest.approx(48.0)


def resolve_like_engine(
    point: Point2D, candidates: list[tuple[object, BoundingBox]]
) -> object | None:
    """Independent re-statement of the containment + nearest-center rule:
    first candidate wins ties, evaluated in the given priority order."""
    best = None
    best_d = math.inf
    for tag, box in candidates:
        if not point_in_box(point, box):
            continue
        d = euclidean_distance(point, box_center(box))
        if d < best_d:
            best_d = d
            best = tag
    return best


class TestNoiselessGeneration:
    def test_emitted_heads_match_truth_boxes(self):
        scene = small_scene()
        stream, truth, _ = generate(scene)
        assert len(stream.frames) == scene.n_frames
        for frame in stream.frames:
            assert len(frame.heads) == scene.group_size
            assert frame.timestamp_s == float(frame.frame_index)
            for ordinal in range(1, scene.group_size + 1):
                idx = truth.head_index_map[frame.frame_index][ordinal]
                assert idx is not None
                emitted = frame.heads[idx].box
                true_box = truth.head_boxes[(frame.frame_index, ordinal)]
                assert emitted == true_box

    def test_every_person_has_one_gaze(self):
        scene = small_scene()
        stream, truth, _ = generate(scene)
        for frame in stream.frames:
            subjects = sorted(g.subject_head_index for g in frame.gazes)
            assert subjects == list(range(scene.group_size))

    def test_keypoints_visibility_pattern(self):
        scene = small_scene(n_frames=3)
        stream, _, _ = generate(scene)
        for frame in stream.frames:
            for head in frame.heads:
                assert head.keypoints is not None
                assert len(head.keypoints) == 17
                visible = [kp.visible for kp in head.keypoints]
                assert visible == [True] * 11 + [False] * 6
                for kp in head.keypoints[11:]:
                    assert (kp.point.x, kp.point.y) == (0.0, 0.0)

    def test_nose_points_toward_gaze(self):
        scene = small_scene(n_frames=10)
        stream, _, _ = generate(scene)
        for frame in stream.frames:
            for gaze in frame.gazes:
                head = frame.heads[gaze.subject_head_index]
                center = box_center(head.box)
                nose = head.keypoints[0].point
                gx, gy = gaze.point.x - center.x, gaze.point.y - center.y
                nx, ny = nose.x - center.x, nose.y - center.y
                if math.hypot(gx, gy) > 1e-9:
                    assert gx * nx + gy * ny > 0.0

    def test_gaze_points_resolve_to_truth_targets(self):
        # The load-bearing fidelity property: replaying the engine's
        # containment + nearest-center rule on the emitted frame must
        # reproduce the generator's intended target for every person.
        scene = small_scene(group_size=5, n_frames=40, seed=11)
        stream, truth, _ = generate(scene)
        rows = {(r.frame_index, r.person.ordinal): r for r in truth.rows}
        checked = 0
        for frame in stream.frames:
            n = len(frame.heads)
            for gaze in frame.gazes:
                ordinal = gaze.subject_head_index + 1
                candidates: list[tuple[object, BoundingBox]] = []
                for j in range(n):
                    if j != gaze.subject_head_index:
                        candidates.append((("person", j + 1), frame.heads[j].box))
                for idx, obj in enumerate(frame.objects):
                    candidates.append((("object", obj.object_class, idx), obj.box))
                resolved = resolve_like_engine(gaze.point, candidates)
                target = rows[(frame.frame_index, ordinal)].target
                if target.kind == "unassigned":
                    assert resolved is None
                elif target.kind == "person":
                    assert resolved == ("person", target.person.ordinal)
                else:
                    assert resolved == (
                        "object",
                        target.object_class,
                        target.object_index,
                    )
                checked += 1
        assert checked == scene.group_size * scene.n_frames

    def test_annotations_mirror_truth(self):
        scene = small_scene()
        _, truth, annotations = generate(scene)
        assert len(annotations) == len(truth.rows)
        for row, ann in zip(truth.rows, annotations):
            assert ann.frame_index == row.frame_index
            assert ann.person == row.person
            assert ann.behaviour == row.behaviour
            assert ann.annotator_id == "sim"

    def test_truth_rows_cover_every_frame_person_pair(self):
        scene = small_scene()
        _, truth, _ = generate(scene)
        keys = {(r.frame_index, r.person.ordinal) for r in truth.rows}
        assert len(truth.rows) == scene.n_frames * scene.group_size
        assert keys == {
            (f, p)
            for f in range(scene.n_frames)
            for p in range(1, scene.group_size + 1)
        }

    def test_behaviour_distribution_counts(self):
        scene = small_scene()
        _, truth, _ = generate(scene)
        counts = truth_behaviour_distribution(truth)
        assert set(counts) == set(BEHAVIOUR_ORDER)
        assert sum(counts.values()) == len(truth.rows)
        manual = {c: 0 for c in BEHAVIOUR_ORDER}
        for row in truth.rows:
            manual[row.behaviour] += 1
        assert counts == manual


class TestBehaviourDynamics:
    def test_absorbing_chain_yields_single_class(self):
        markov = ((1.0, 0.0, 0.0),) * 3
        _, truth, _ = generate(small_scene(n_frames=50, behaviour_markov=markov))
        assert all(r.behaviour is BehaviourClass.STUDENT for r in truth.rows)

    def test_identity_chain_keeps_each_person_constant(self):
        markov = ((1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (0.0, 0.0, 1.0))
        _, truth, _ = generate(
            small_scene(group_size=5, n_frames=40, seed=7, behaviour_markov=markov)
        )
        per_person: dict[int, set[BehaviourClass]] = {}
        for row in truth.rows:
            per_person.setdefault(row.person.ordinal, set()).add(row.behaviour)
        assert all(len(classes) == 1 for classes in per_person.values())

    def test_long_run_matches_stationary_distribution(self):
        # 4 persons x 2500 frames = 10,000 decisions drawn from the default
        # sticky chain; empirical class shares must sit within 0.02 of the
        # chain's stationary distribution.
        scene = SceneSpec(group_size=4, n_frames=2500, seed=0)
        _, truth, _ = generate(scene)
        counts = truth_behaviour_distribution(truth)
        total = sum(counts.values())
        assert total == 10_000
        for cls, expected in zip(BEHAVIOUR_ORDER, DEFAULT_STATIONARY):
            assert counts[cls] / total == pytest.approx(expected, abs=0.02)

    def test_laptopless_scene_rejects_chain_that_reaches_laptop(self):
        with pytest.raises(SpecError, match="laptop"):
            generate(small_scene(n_frames=1, laptop_per_seat=False))

    def test_laptopless_scene_accepts_laptop_free_chain(self):
        markov = ((0.8, 0.0, 0.2), (1.0, 0.0, 0.0), (0.3, 0.0, 0.7))
        stream, truth, _ = generate(
            small_scene(group_size=3, n_frames=30, seed=2,
                        laptop_per_seat=False, behaviour_markov=markov)
        )
        classes = {o.object_class for f in stream.frames for o in f.objects}
        assert ObjectClass.LAPTOP not in classes
        assert {r.behaviour for r in truth.rows} <= {
            BehaviourClass.STUDENT,
            BehaviourClass.OTHER,
        }

    def test_phone_share_zero_makes_other_unassigned(self):
        markov = ((0.0, 0.0, 1.0),) * 3
        _, truth, _ = generate(
            small_scene(n_frames=15, other_phone_share=0.0, behaviour_markov=markov)
        )
        assert all(r.behaviour is BehaviourClass.OTHER for r in truth.rows)
        assert all(r.target.kind == "unassigned" for r in truth.rows)

    def test_phone_share_one_makes_other_look_at_phone(self):
        markov = ((0.0, 0.0, 1.0),) * 3
        _, truth, _ = generate(
            small_scene(n_frames=15, other_phone_share=1.0, behaviour_markov=markov)
        )
        assert all(r.target.kind == "object" for r in truth.rows)
        assert all(r.target.object_class is ObjectClass.PHONE for r in truth.rows)


class TestNoiseEffects:
    def test_none_noise_equals_all_zero_noise(self):
        scene = small_scene()
        stream_a, truth_a, ann_a = generate(scene)
        stream_b, truth_b, ann_b = generate(scene, NoiseSpec())
        assert serialize_detection_stream(stream_a) == serialize_detection_stream(
            stream_b
        )
        assert truth_a.rows == truth_b.rows
        assert ann_a == ann_b

    def test_head_miss_one_removes_all_heads_and_gazes(self):
        scene = small_scene()
        stream, truth, _ = generate(scene, NoiseSpec(head_miss_prob=1.0))
        for frame in stream.frames:
            assert frame.heads == ()
            assert frame.gazes == ()
        for mapping in truth.head_index_map.values():
            assert set(mapping.values()) == {None}
        # Ground truth still records what everyone was doing.
        assert len(truth.rows) == scene.n_frames * scene.group_size
        assert all(r.behaviour is not None for r in truth.rows)

    def test_object_miss_one_removes_all_objects(self):
        stream, _, _ = generate(small_scene(), NoiseSpec(object_miss_prob=1.0))
        assert all(frame.objects == () for frame in stream.frames)

    def test_gaze_miss_one_keeps_heads_but_drops_gazes(self):
        stream, _, _ = generate(small_scene(), NoiseSpec(gaze_miss_prob=1.0))
        for frame in stream.frames:
            assert len(frame.heads) == 4
            assert frame.gazes == ()

    def test_partial_head_miss_keeps_index_map_consistent(self):
        scene = small_scene(n_frames=60, seed=5)
        stream, truth, _ = generate(scene, NoiseSpec(head_miss_prob=0.4))
        missed = 0
        for frame in stream.frames:
            mapping = truth.head_index_map[frame.frame_index]
            emitted = [idx for idx in mapping.values() if idx is not None]
            assert sorted(emitted) == list(range(len(frame.heads)))
            missed += sum(1 for idx in mapping.values() if idx is None)
            for ordinal, idx in mapping.items():
                if idx is not None:
                    true_box = truth.head_boxes[(frame.frame_index, ordinal)]
                    assert frame.heads[idx].box == true_box
        assert 0 < missed < scene.n_frames * scene.group_size

    def test_spurious_boxes_appended_after_real_detections(self):
        scene = small_scene(n_frames=40, seed=3)
        stream, truth, _ = generate(scene, NoiseSpec(spurious_box_rate=3.0))
        n = scene.group_size
        extra_heads = 0
        extra_objects = 0
        for frame in stream.frames:
            mapping = truth.head_index_map[frame.frame_index]
            # Real heads keep the leading indices and carry keypoints.
            assert all(idx is not None and idx < n for idx in mapping.values())
            for i, head in enumerate(frame.heads):
                if i < n:
                    assert head.keypoints is not None
                else:
                    assert head.keypoints is None
                    extra_heads += 1
            extra_objects += max(0, len(frame.objects) - 8)
            # Gaze estimates never point at fabricated heads.
            assert all(g.subject_head_index < n for g in frame.gazes)
        assert extra_heads > 0
        assert extra_objects > 0

    def test_box_jitter_stays_within_frame(self):
        scene = small_scene(n_frames=30, seed=9)
        stream, _, _ = generate(scene, NoiseSpec(box_jitter_sigma=400.0))
        boxes = [h.box for f in stream.frames for h in f.heads]
        boxes += [o.box for f in stream.frames for o in f.objects]
        assert boxes
        for box in boxes:
            assert box.x_min >= 0.0
            assert box.y_min >= 0.0
            assert box.x_max <= scene.frame_width
            assert box.y_max <= scene.frame_height

    def test_box_jitter_moves_boxes(self):
        scene = small_scene(n_frames=5)
        clean, truth, _ = generate(scene)
        noisy, _, _ = generate(scene, NoiseSpec(box_jitter_sigma=4.0))
        moved = [
            (a.box, b.box)
            for fa, fb in zip(clean.frames, noisy.frames)
            for a, b in zip(fa.heads, fb.heads)
            if a.box != b.box
        ]
        assert moved  # jitter actually displaces detections

    def test_keypoint_noise_preserves_visibility(self):
        scene = small_scene(n_frames=5)
        stream, _, _ = generate(scene, NoiseSpec(keypoint_noise_sigma=2.0))
        for frame in stream.frames:
            for head in frame.heads:
                visible = [kp.visible for kp in head.keypoints]
                assert visible == [True] * 11 + [False] * 6
                for kp in head.keypoints[11:]:
                    assert (kp.point.x, kp.point.y) == (0.0, 0.0)

    def test_gaze_jitter_displaces_points(self):
        scene = small_scene(n_frames=5)
        clean, _, _ = generate(scene)
        noisy, _, _ = generate(scene, NoiseSpec(gaze_jitter_sigma=10.0))
        diffs = [
            euclidean_distance(a.point, b.point)
            for fa, fb in zip(clean.frames, noisy.frames)
            for a, b in zip(fa.gazes, fb.gazes)
        ]
        assert any(d > 1.0 for d in diffs)


class TestDeterminism:
    def test_same_seed_is_byte_identical(self):
        scene = small_scene(n_frames=50, seed=42)
        noise = NoiseSpec(
            box_jitter_sigma=2.0,
            gaze_jitter_sigma=8.0,
            head_miss_prob=0.1,
            object_miss_prob=0.05,
            gaze_miss_prob=0.1,
            spurious_box_rate=0.5,
            keypoint_noise_sigma=1.5,
        )
        stream_a, truth_a, ann_a = generate(scene, noise)
        stream_b, truth_b, ann_b = generate(scene, noise)
        assert serialize_detection_stream(stream_a) == serialize_detection_stream(
            stream_b
        )
        assert serialize_annotations(ann_a) == serialize_annotations(ann_b)
        assert truth_a.rows == truth_b.rows
        assert truth_a.head_index_map == truth_b.head_index_map

    def test_different_seeds_differ(self):
        stream_a, _, _ = generate(small_scene(seed=0))
        stream_b, _, _ = generate(small_scene(seed=1))
        assert serialize_detection_stream(stream_a) != serialize_detection_stream(
            stream_b
        )


class TestEdgeCases:
    def test_zero_frames(self):
        stream, truth, annotations = generate(small_scene(n_frames=0))
        assert stream.frames == ()
        assert truth.rows == ()
        assert annotations == ()
        assert len(truth.seat_map.seats) == 4

    def test_unrealizable_gaze_raises(self):
        # Two oversized heads tile the frame completely, so an off-target
        # ("unassigned") gaze point can never be placed: the generator must
        # give up with a clear error instead of looping forever.
        scene = SceneSpec(
            group_size=2,
            table_center=Point2D(75.0, 50.0),
            seat_radius=25.0,
            head_size=100.0,
            n_frames=1,
            seed=0,
            start_angle=0.0,
            frame_width=150.0,
            frame_height=100.0,
            behaviour_markov=((0.0, 0.0, 1.0),) * 3,
            other_phone_share=0.0,
        )
        with pytest.raises(SpecError, match="could not realize"):
            generate(scene)


class TestConfigMappings:
    def test_scene_mapping_full(self):
        mapping = {
            "group_size": 5,
            "table_center": [800.0, 450.0],
            "seat_radius": 260.0,
            "head_size": 52.0,
            "n_frames": 7,
            "seed": 3,
            "start_angle": 0.2,
            "frame_width": 1600.0,
            "frame_height": 900.0,
            "other_phone_share": 0.25,
            "laptop_per_seat": True,
            "phone_seats": [1, 3],
            "tablet_seats": [2],
            "behaviour_markov": [
                [0.8, 0.1, 0.1],
                [0.2, 0.7, 0.1],
                [0.3, 0.3, 0.4],
            ],
        }
        scene = scene_spec_from_mapping(mapping)
        assert scene.group_size == 5
        assert scene.table_center == Point2D(800.0, 450.0)
        assert scene.n_frames == 7
        assert scene.phone_seats == (1, 3)
        assert scene.tablet_seats == (2,)
        assert scene.behaviour_markov[2] == (0.3, 0.3, 0.4)

    def test_scene_mapping_defaults(self):
        scene = scene_spec_from_mapping({})
        assert scene == SceneSpec()

    def test_scene_mapping_bad_table_center(self):
        with pytest.raises(SpecError, match="table_center"):
            scene_spec_from_mapping({"table_center": 960.0})

    def test_noise_mapping_prefixed_keys(self):
        noise = noise_spec_from_mapping(
            {"noise.gaze_jitter_sigma": 12.0, "noise.head_miss_prob": 0.2}
        )
        assert noise.gaze_jitter_sigma == 12.0
        assert noise.head_miss_prob == 0.2
        assert noise.box_jitter_sigma == 0.0

    def test_noise_mapping_empty_is_all_zero(self):
        assert noise_spec_from_mapping({}).all_zero

    def test_noise_mapping_validates(self):
        with pytest.raises(SpecError):
            noise_spec_from_mapping({"noise.head_miss_prob": 2.0})
