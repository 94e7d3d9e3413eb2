"""Seeded synthetic-session generator: the engine's verification oracle.

A scene places ``group_size`` heads on a ring around the table center
(Person i sits at angle ``start_angle + 2*pi*(i-1)/group_size`` measured by
the same clockwise convention the tracker uses, so simulator ordinals and
engine ordinals coincide by construction).  Each seat gets a laptop toward
the center, optionally a phone beside the head and a tablet on the other
side.  Per frame, each person's behaviour evolves by a Markov chain over
(S, L, O); the true gaze point is drawn uniformly inside the target's box
(a uniformly chosen peer's head for S, the seat's own laptop for L, the
seat's phone or an off-all-boxes point for O) and re-drawn (up to 100
attempts) until the engine's own containment + nearest-center rule maps it
to the intended target, which makes noiseless end-to-end fidelity exact by
construction.

Seventeen body keypoints are synthesized per head: 11 visible upper-body
points in a fixed layout scaled by head size, 6 invisible lower-body points
encoded (0, 0).  The nose (fully) and the eyes (half-weight) are displaced
toward the gaze target with a magnitude that decays with target distance,
so the keypoints genuinely encode the behaviour class for the learned
baselines.

Noise (all optional): per-head Bernoulli misses and Gaussian box jitter,
per-keypoint Gaussian jitter, per-object misses and jitter, per-gaze misses
and jitter, and Poisson-many spurious boxes of random kind and position.

Determinism: one generator — PCG64 seeded with SceneSpec.seed — drives the
whole run.  Draw order per frame: (1) behaviour transitions, persons in
ordinal order; (2) per person: peer choice for S (one integer), phone-vs-off
choice for O when the seat has a phone and the share is positive (one
uniform), then the gaze point rejection loop (two uniforms per attempt);
(3) per person: head-miss uniform (only when head_miss_prob > 0), box
jitter (two normals, only when box_jitter_sigma > 0), keypoint jitter (one
11x2 normal block, only when keypoint_noise_sigma > 0); (4) per true
object: miss uniform, jitter normals (same gating); (5) per person with an
emitted head: gaze-miss uniform, gaze jitter normals (same gating); (6)
spurious boxes: one Poisson count (only when spurious_box_rate > 0), then
per box a kind integer and two center uniforms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .errors import SpecError
from .io import AnnotationRecord, DetectionStream, TruthRow
from .model import (
    BEHAVIOUR_ORDER,
    BehaviourClass,
    BoundingBox,
    FrameRecord,
    GazeEstimate,
    GazeTarget,
    HeadDetection,
    Keypoint,
    ObjectClass,
    ObjectDetection,
    PersonId,
    Point2D,
    UNASSIGNED,
    box_center,
    euclidean_distance,
    point_in_box,
)
from .tracking import SeatMap

__all__ = [
    "SceneSpec",
    "NoiseSpec",
    "GroundTruth",
    "generate",
    "truth_behaviour_distribution",
    "default_markov",
    "scene_spec_from_mapping",
    "noise_spec_from_mapping",
]

# Object footprint sizes in pixels (width, height).
LAPTOP_SIZE = (110.0, 70.0)
TABLET_SIZE = (70.0, 50.0)
PHONE_SIZE = (36.0, 24.0)

#: Default long-run behaviour mix (heavily student-gaze dominated, like
#: observed classroom distributions) and how sticky behaviours are per frame.
DEFAULT_STATIONARY = (0.71, 0.24, 0.05)
DEFAULT_STICKINESS = 0.6

_MAX_POINT_ATTEMPTS = 100

# Keypoint layout: (dx, dy) in head-size units relative to the head center,
# visibility, and how strongly the point is displaced toward the gaze
# target (the head turns fully, the torso partially, the arms barely).
# Indices follow the usual 17-point body convention: nose, eyes, ears,
# shoulders, elbows, wrists, then 6 lower-body points that a seated,
# table-occluded person's pose model cannot see.
_KP_LAYOUT: tuple[tuple[float, float, bool, float], ...] = (
    (0.00, 0.00, True, 1.0),  # nose
    (-0.15, -0.10, True, 0.5),  # left eye
    (0.15, -0.10, True, 0.5),  # right eye
    (-0.35, -0.05, True, 0.3),  # left ear
    (0.35, -0.05, True, 0.3),  # right ear
    (-0.55, 0.55, True, 0.2),  # left shoulder
    (0.55, 0.55, True, 0.2),  # right shoulder
    (-0.70, 1.05, True, 0.12),  # left elbow
    (0.70, 1.05, True, 0.12),  # right elbow
    (-0.55, 1.45, True, 0.08),  # left wrist
    (0.55, 1.45, True, 0.08),  # right wrist
    (0.0, 0.0, False, 0.0),  # left hip
    (0.0, 0.0, False, 0.0),  # right hip
    (0.0, 0.0, False, 0.0),  # left knee
    (0.0, 0.0, False, 0.0),  # right knee
    (0.0, 0.0, False, 0.0),  # left ankle
    (0.0, 0.0, False, 0.0),  # right ankle
)

_N_VISIBLE_KP = sum(1 for entry in _KP_LAYOUT if entry[2])


def default_markov(
    stationary: Sequence[float] = DEFAULT_STATIONARY,
    stickiness: float = DEFAULT_STICKINESS,
) -> tuple[tuple[float, float, float], ...]:
    """A sticky chain with the requested stationary distribution:
    ``P = stickiness*I + (1-stickiness)*ones*pi^T``."""
    return tuple(
        tuple(
            (stickiness if i == j else 0.0) + (1.0 - stickiness) * stationary[j]
            for j in range(3)
        )
        for i in range(3)
    )


@dataclass(frozen=True)
class SceneSpec:
    """Geometry, cast and behaviour dynamics of a synthetic session."""

    group_size: int = 4
    table_center: Point2D = Point2D(960.0, 540.0)
    seat_radius: float = 320.0
    head_size: float = 60.0
    n_frames: int = 600
    seed: int = 0
    start_angle: float = 0.35
    frame_width: float = 1920.0
    frame_height: float = 1080.0
    behaviour_markov: tuple[tuple[float, ...], ...] = field(
        default_factory=default_markov
    )
    other_phone_share: float = 0.5
    laptop_per_seat: bool = True
    phone_seats: tuple[int, ...] | None = None  # None = every seat
    tablet_seats: tuple[int, ...] = ()

    def __post_init__(self):
        if not (2 <= self.group_size <= 8):
            raise SpecError(f"group_size must be in [2, 8], got {self.group_size}")
        if not (self.seat_radius > 0 and self.head_size > 0):
            raise SpecError("seat_radius and head_size must be positive")
        if self.n_frames < 0:
            raise SpecError(f"n_frames must be >= 0, got {self.n_frames}")
        if self.seed < 0:
            raise SpecError(f"seed must be >= 0, got {self.seed}")
        if not (self.frame_width > 0 and self.frame_height > 0):
            raise SpecError("frame dimensions must be positive")
        if not (0.0 <= self.start_angle < 2.0 * math.pi / self.group_size):
            raise SpecError(
                "start_angle must be in [0, 2*pi/group_size) so seat ordinals "
                f"stay aligned with clockwise order, got {self.start_angle}"
            )
        markov = tuple(tuple(float(v) for v in row) for row in self.behaviour_markov)
        if len(markov) != 3 or any(len(row) != 3 for row in markov):
            raise SpecError("behaviour_markov must be a 3x3 matrix over (S, L, O)")
        for row in markov:
            if any(v < 0 for v in row):
                raise SpecError(f"behaviour_markov entries must be >= 0: {row}")
            if abs(sum(row) - 1.0) > 1e-12:
                raise SpecError(
                    f"behaviour_markov rows must sum to 1 +- 1e-12: {row}"
                )
        object.__setattr__(self, "behaviour_markov", markov)
        if not (0.0 <= self.other_phone_share <= 1.0):
            raise SpecError(
                f"other_phone_share must be in [0, 1], got {self.other_phone_share}"
            )
        for name in ("phone_seats", "tablet_seats"):
            seats = getattr(self, name)
            if seats is None:
                continue
            seats = tuple(int(s) for s in seats)
            if any(not (1 <= s <= self.group_size) for s in seats):
                raise SpecError(
                    f"{name} entries must be seat ordinals in "
                    f"[1, {self.group_size}], got {seats}"
                )
            if len(set(seats)) != len(seats):
                raise SpecError(f"{name} has duplicate entries: {seats}")
            object.__setattr__(self, name, seats)


@dataclass(frozen=True)
class NoiseSpec:
    """Detector imperfection model; all-zero means truth passes through."""

    box_jitter_sigma: float = 0.0
    gaze_jitter_sigma: float = 0.0
    head_miss_prob: float = 0.0
    object_miss_prob: float = 0.0
    gaze_miss_prob: float = 0.0
    spurious_box_rate: float = 0.0
    keypoint_noise_sigma: float = 0.0

    def __post_init__(self):
        for name in ("box_jitter_sigma", "gaze_jitter_sigma", "keypoint_noise_sigma"):
            if getattr(self, name) < 0:
                raise SpecError(f"{name} must be >= 0")
        for name in ("head_miss_prob", "object_miss_prob", "gaze_miss_prob"):
            value = getattr(self, name)
            if not (0.0 <= value <= 1.0):
                raise SpecError(f"{name} must be in [0, 1], got {value}")
        if self.spurious_box_rate < 0:
            raise SpecError(
                f"spurious_box_rate must be >= 0, got {self.spurious_box_rate}"
            )

    @property
    def all_zero(self) -> bool:
        return all(
            getattr(self, name) == 0
            for name in (
                "box_jitter_sigma",
                "gaze_jitter_sigma",
                "head_miss_prob",
                "object_miss_prob",
                "gaze_miss_prob",
                "spurious_box_rate",
                "keypoint_noise_sigma",
            )
        )


@dataclass(frozen=True)
class GroundTruth:
    """Everything the generator knew: true behaviours/targets per (frame,
    person), true head boxes, the seat map, and where each person's head
    landed in the emitted (noisy) frame — None when the detector missed it."""

    seat_map: SeatMap
    rows: tuple[TruthRow, ...]
    head_boxes: Mapping[tuple[int, int], BoundingBox]
    head_index_map: Mapping[int, Mapping[int, int | None]]


def truth_behaviour_distribution(gt: GroundTruth) -> dict[BehaviourClass, int]:
    """Exact per-class counts over all (frame, person) truth rows."""
    counts = {c: 0 for c in BEHAVIOUR_ORDER}
    for row in gt.rows:
        if row.behaviour is not None:
            counts[row.behaviour] += 1
    return counts


# ---------------------------------------------------------------------------
# Scene layout
# ---------------------------------------------------------------------------


def _box_at(center_x: float, center_y: float, w: float, h: float) -> BoundingBox:
    return BoundingBox(
        center_x - w / 2.0, center_y - h / 2.0, center_x + w / 2.0, center_y + h / 2.0
    )


@dataclass(frozen=True)
class _Layout:
    seats: tuple[Point2D, ...]
    head_boxes: tuple[BoundingBox, ...]
    objects: tuple[ObjectDetection, ...]
    laptop_index: dict  # ordinal -> object index
    phone_index: dict
    tablet_index: dict


def _build_layout(scene: SceneSpec) -> _Layout:
    n = scene.group_size
    c = scene.table_center
    r = scene.seat_radius
    h = scene.head_size
    seats: list[Point2D] = []
    head_boxes: list[BoundingBox] = []
    toward_center: list[tuple[float, float]] = []
    sideways: list[tuple[float, float]] = []
    for i in range(n):
        theta = scene.start_angle + 2.0 * math.pi * i / n
        seat = Point2D(c.x - r * math.cos(theta), c.y - r * math.sin(theta))
        seats.append(seat)
        head_boxes.append(_box_at(seat.x, seat.y, h, h))
        rho = ((c.x - seat.x) / r, (c.y - seat.y) / r)  # unit, toward center
        toward_center.append(rho)
        sideways.append((-rho[1], rho[0]))  # rho rotated +90 degrees

    objects: list[ObjectDetection] = []
    laptop_index: dict[int, int] = {}
    phone_index: dict[int, int] = {}
    tablet_index: dict[int, int] = {}

    if scene.laptop_per_seat:
        for i in range(n):
            rho = toward_center[i]
            cx = seats[i].x + 0.45 * r * rho[0]
            cy = seats[i].y + 0.45 * r * rho[1]
            laptop_index[i + 1] = len(objects)
            objects.append(
                ObjectDetection(
                    ObjectClass.LAPTOP, _box_at(cx, cy, *LAPTOP_SIZE), 1.0
                )
            )
    for ordinal in scene.tablet_seats:
        i = ordinal - 1
        rho, tau = toward_center[i], sideways[i]
        cx = seats[i].x + 0.45 * r * rho[0] - 0.35 * r * tau[0]
        cy = seats[i].y + 0.45 * r * rho[1] - 0.35 * r * tau[1]
        tablet_index[ordinal] = len(objects)
        objects.append(
            ObjectDetection(ObjectClass.TABLET, _box_at(cx, cy, *TABLET_SIZE), 1.0)
        )
    phone_seats = (
        tuple(range(1, n + 1)) if scene.phone_seats is None else scene.phone_seats
    )
    for ordinal in phone_seats:
        i = ordinal - 1
        rho, tau = toward_center[i], sideways[i]
        cx = seats[i].x + 0.10 * r * rho[0] + 0.22 * r * tau[0]
        cy = seats[i].y + 0.10 * r * rho[1] + 0.22 * r * tau[1]
        phone_index[ordinal] = len(objects)
        objects.append(
            ObjectDetection(ObjectClass.PHONE, _box_at(cx, cy, *PHONE_SIZE), 1.0)
        )

    for box in list(head_boxes) + [o.box for o in objects]:
        if not (
            box.x_min >= 0
            and box.y_min >= 0
            and box.x_max <= scene.frame_width
            and box.y_max <= scene.frame_height
        ):
            raise SpecError(
                "scene geometry does not fit the frame: box "
                f"[{box.x_min}, {box.y_min}, {box.x_max}, {box.y_max}] vs "
                f"{scene.frame_width}x{scene.frame_height}"
            )
    return _Layout(
        seats=tuple(seats),
        head_boxes=tuple(head_boxes),
        objects=tuple(objects),
        laptop_index=laptop_index,
        phone_index=phone_index,
        tablet_index=tablet_index,
    )


# ---------------------------------------------------------------------------
# Behaviour dynamics
# ---------------------------------------------------------------------------


def _stationary(markov: np.ndarray) -> np.ndarray:
    a = markov.T - np.eye(3)
    a[2, :] = 1.0
    b = np.array([0.0, 0.0, 1.0])
    try:
        pi = np.linalg.solve(a, b)
    except np.linalg.LinAlgError:
        return np.full(3, 1.0 / 3.0)  # ambiguous (e.g. identity chain)
    pi = np.clip(pi, 0.0, None)
    total = pi.sum()
    if total <= 0:
        return np.full(3, 1.0 / 3.0)
    return pi / total


def _draw_index(rng: np.random.Generator, probs: Sequence[float]) -> int:
    u = rng.random()
    acc = 0.0
    for i, p in enumerate(probs):
        acc += p
        if u < acc:
            return i
    return len(probs) - 1


# ---------------------------------------------------------------------------
# Gaze-point synthesis
# ---------------------------------------------------------------------------


def _resolves_to(
    point: Point2D,
    intended: GazeTarget,
    candidates: Sequence[tuple[GazeTarget, BoundingBox]],
) -> bool:
    """Replicates the engine's containment + nearest-center rule so generated
    points provably map back to their intended target."""
    best: GazeTarget | None = None
    best_distance = float("inf")
    for target, box in candidates:
        if not point_in_box(point, box):
            continue
        d = euclidean_distance(point, box_center(box))
        if d < best_distance:
            best_distance = d
            best = target
    if intended.kind == "unassigned":
        return best is None
    return best == intended


def _draw_point_in_box(rng: np.random.Generator, box: BoundingBox) -> Point2D:
    return Point2D(
        rng.uniform(box.x_min, box.x_max), rng.uniform(box.y_min, box.y_max)
    )


def _synthesize_keypoints(
    head_center: Point2D, head_size: float, gaze_point: Point2D
) -> tuple[Keypoint, ...]:
    dx = gaze_point.x - head_center.x
    dy = gaze_point.y - head_center.y
    dist = math.hypot(dx, dy)
    if dist == 0.0:
        ux, uy = 1.0, 0.0
    else:
        ux, uy = dx / dist, dy / dist
    # Displacement shrinks smoothly with target distance, so magnitude and
    # direction jointly encode what is being looked at.
    k = 1.0 / (1.0 + dist / (4.0 * head_size))
    mag = head_size * (0.45 * k + 0.15)
    points: list[Keypoint] = []
    for off_x, off_y, visible, weight in _KP_LAYOUT:
        if not visible:
            points.append(Keypoint(Point2D(0.0, 0.0), False))
            continue
        px = head_center.x + off_x * head_size + weight * mag * ux
        py = head_center.y + off_y * head_size + weight * mag * uy
        points.append(Keypoint(Point2D(px, py), True))
    return tuple(points)


def _shift_box(
    box: BoundingBox, dx: float, dy: float, width: float, height: float
) -> BoundingBox:
    dx = min(max(dx, -box.x_min), width - box.x_max)
    dy = min(max(dy, -box.y_min), height - box.y_max)
    return BoundingBox(
        box.x_min + dx, box.y_min + dy, box.x_max + dx, box.y_max + dy
    )


# ---------------------------------------------------------------------------
# Generation
# ---------------------------------------------------------------------------

_SPURIOUS_SIZES = {
    0: None,  # head: uses scene.head_size
    1: LAPTOP_SIZE,
    2: TABLET_SIZE,
    3: PHONE_SIZE,
}
_SPURIOUS_CLASSES = {1: ObjectClass.LAPTOP, 2: ObjectClass.TABLET, 3: ObjectClass.PHONE}


def generate(
    scene: SceneSpec, noise: NoiseSpec | None = None
) -> tuple[DetectionStream, GroundTruth, tuple[AnnotationRecord, ...]]:
    """Generate one synthetic session (see module docstring for draw order).

    Returns the noisy detection stream, the ground truth, and per-(frame,
    person) annotations in engine format (annotator id "sim").
    """
    if noise is None:
        noise = NoiseSpec()
    layout = _build_layout(scene)
    n = scene.group_size
    markov = np.asarray(scene.behaviour_markov, dtype=np.float64)
    initial = _stationary(markov)
    rng = np.random.default_rng(np.random.SeedSequence(scene.seed))

    # Engine-rule candidates per subject: all other heads plus every object.
    candidates_by_subject: list[list[tuple[GazeTarget, BoundingBox]]] = []
    all_boxes = list(layout.head_boxes) + [o.box for o in layout.objects]
    for i in range(n):
        cands: list[tuple[GazeTarget, BoundingBox]] = []
        for j in range(n):
            if j != i:
                cands.append(
                    (GazeTarget.at_person(PersonId(j + 1)), layout.head_boxes[j])
                )
        for idx, obj in enumerate(layout.objects):
            cands.append((GazeTarget.at_object(obj.object_class, idx), obj.box))
        candidates_by_subject.append(cands)

    if scene.laptop_per_seat is False:
        must_reach_laptop = initial[1] > 0 or np.any(markov[:, 1] > 0)
        if must_reach_laptop:
            raise SpecError(
                "behaviour_markov can reach L but laptop_per_seat is false"
            )

    states = [0] * n
    frames: list[FrameRecord] = []
    truth_rows: list[TruthRow] = []
    annotations: list[AnnotationRecord] = []
    head_boxes_truth: dict[tuple[int, int], BoundingBox] = {}
    head_index_map: dict[int, dict[int, int | None]] = {}

    for f in range(scene.n_frames):
        # (1) behaviour transitions
        for i in range(n):
            probs = initial if f == 0 else markov[states[i]]
            states[i] = _draw_index(rng, probs)

        # (2) targets and true gaze points
        targets: list[GazeTarget] = []
        points: list[Point2D] = []
        for i in range(n):
            behaviour = BEHAVIOUR_ORDER[states[i]]
            if behaviour is BehaviourClass.STUDENT:
                others = [j for j in range(n) if j != i]
                peer = others[int(rng.integers(0, n - 1))]
                intended = GazeTarget.at_person(PersonId(peer + 1))
                box = layout.head_boxes[peer]
            elif behaviour is BehaviourClass.LAPTOP:
                obj_idx = layout.laptop_index[i + 1]
                intended = GazeTarget.at_object(ObjectClass.LAPTOP, obj_idx)
                box = layout.objects[obj_idx].box
            else:  # OTHER
                phone_idx = layout.phone_index.get(i + 1)
                use_phone = False
                if phone_idx is not None and scene.other_phone_share > 0:
                    use_phone = rng.random() < scene.other_phone_share
                if use_phone:
                    intended = GazeTarget.at_object(ObjectClass.PHONE, phone_idx)
                    box = layout.objects[phone_idx].box
                else:
                    intended = UNASSIGNED
                    box = None

            point = None
            for _ in range(_MAX_POINT_ATTEMPTS):
                if box is not None:
                    attempt = _draw_point_in_box(rng, box)
                else:
                    attempt = Point2D(
                        rng.uniform(0.0, scene.frame_width),
                        rng.uniform(0.0, scene.frame_height),
                    )
                    # An off-target point must miss every box (own head too,
                    # to keep its keypoint signature cleanly "elsewhere").
                    if any(point_in_box(attempt, b) for b in all_boxes):
                        continue
                if _resolves_to(attempt, intended, candidates_by_subject[i]):
                    point = attempt
                    break
            if point is None:
                raise SpecError(
                    f"could not realize a {intended.kind} gaze for Person{i + 1} "
                    f"in frame {f}: scene boxes overlap too much"
                )
            targets.append(intended)
            points.append(point)

        # (3) keypoints are deterministic given the gaze point
        true_keypoints = [
            _synthesize_keypoints(
                box_center(layout.head_boxes[i]), scene.head_size, points[i]
            )
            for i in range(n)
        ]

        # (4) emit heads
        emitted_heads: list[HeadDetection] = []
        idx_map: dict[int, int | None] = {}
        for i in range(n):
            if noise.head_miss_prob > 0 and rng.random() < noise.head_miss_prob:
                idx_map[i + 1] = None
                continue
            box = layout.head_boxes[i]
            if noise.box_jitter_sigma > 0:
                dx, dy = rng.normal(0.0, noise.box_jitter_sigma, 2)
                box = _shift_box(box, dx, dy, scene.frame_width, scene.frame_height)
            kps = true_keypoints[i]
            if noise.keypoint_noise_sigma > 0:
                deltas = rng.normal(0.0, noise.keypoint_noise_sigma, (_N_VISIBLE_KP, 2))
                noisy: list[Keypoint] = []
                v = 0
                for kp in kps:
                    if not kp.visible:
                        noisy.append(kp)
                        continue
                    noisy.append(
                        Keypoint(
                            Point2D(
                                kp.point.x + deltas[v, 0], kp.point.y + deltas[v, 1]
                            ),
                            True,
                        )
                    )
                    v += 1
                kps = tuple(noisy)
            idx_map[i + 1] = len(emitted_heads)
            emitted_heads.append(
                HeadDetection(box=box, confidence=1.0, keypoints=kps)
            )

        # (5) emit objects
        emitted_objects: list[ObjectDetection] = []
        for obj in layout.objects:
            if noise.object_miss_prob > 0 and rng.random() < noise.object_miss_prob:
                continue
            box = obj.box
            if noise.box_jitter_sigma > 0:
                dx, dy = rng.normal(0.0, noise.box_jitter_sigma, 2)
                box = _shift_box(box, dx, dy, scene.frame_width, scene.frame_height)
            emitted_objects.append(
                ObjectDetection(obj.object_class, box, obj.confidence)
            )

        # (6) emit gaze estimates for persons whose head survived
        gazes: list[GazeEstimate] = []
        for i in range(n):
            head_idx = idx_map[i + 1]
            if head_idx is None:
                continue
            if noise.gaze_miss_prob > 0 and rng.random() < noise.gaze_miss_prob:
                continue
            pt = points[i]
            if noise.gaze_jitter_sigma > 0:
                dx, dy = rng.normal(0.0, noise.gaze_jitter_sigma, 2)
                pt = Point2D(pt.x + dx, pt.y + dy)
            gazes.append(GazeEstimate(subject_head_index=head_idx, point=pt, score=1.0))

        # (7) spurious boxes
        if noise.spurious_box_rate > 0:
            for _ in range(int(rng.poisson(noise.spurious_box_rate))):
                kind = int(rng.integers(0, 4))
                size = _SPURIOUS_SIZES[kind] or (scene.head_size, scene.head_size)
                w, h = size
                cx = rng.uniform(w / 2.0, scene.frame_width - w / 2.0)
                cy = rng.uniform(h / 2.0, scene.frame_height - h / 2.0)
                box = _box_at(cx, cy, w, h)
                if kind == 0:
                    emitted_heads.append(
                        HeadDetection(box=box, confidence=1.0, keypoints=None)
                    )
                else:
                    emitted_objects.append(
                        ObjectDetection(_SPURIOUS_CLASSES[kind], box, 1.0)
                    )

        frames.append(
            FrameRecord(
                frame_index=f,
                timestamp_s=float(f),
                heads=tuple(emitted_heads),
                objects=tuple(emitted_objects),
                gazes=tuple(gazes),
            )
        )
        head_index_map[f] = dict(idx_map)
        for i in range(n):
            behaviour = BEHAVIOUR_ORDER[states[i]]
            person = PersonId(i + 1)
            truth_rows.append(
                TruthRow(
                    frame_index=f,
                    person=person,
                    behaviour=behaviour,
                    target=targets[i],
                )
            )
            annotations.append(
                AnnotationRecord(
                    frame_index=f,
                    person=person,
                    behaviour=behaviour,
                    annotator_id="sim",
                )
            )
            head_boxes_truth[(f, i + 1)] = layout.head_boxes[i]

    seat_map = SeatMap(
        seats=tuple((PersonId(i + 1), layout.seats[i]) for i in range(n)),
        table_center=scene.table_center,
    )
    stream = DetectionStream(frames=tuple(frames))
    truth = GroundTruth(
        seat_map=seat_map,
        rows=tuple(truth_rows),
        head_boxes=head_boxes_truth,
        head_index_map=head_index_map,
    )
    return stream, truth, tuple(annotations)


# ---------------------------------------------------------------------------
# Config mapping
# ---------------------------------------------------------------------------

_SCENE_KEYS = {
    "group_size": int,
    "seat_radius": float,
    "head_size": float,
    "n_frames": int,
    "seed": int,
    "start_angle": float,
    "frame_width": float,
    "frame_height": float,
    "other_phone_share": float,
    "laptop_per_seat": bool,
}


def scene_spec_from_mapping(mapping: Mapping[str, object]) -> SceneSpec:
    """Build a SceneSpec from a flat config mapping (unprefixed keys)."""
    kwargs: dict = {}
    for key, cast in _SCENE_KEYS.items():
        if key in mapping:
            kwargs[key] = cast(mapping[key])  # type: ignore[operator]
    if "table_center" in mapping:
        value = mapping["table_center"]
        if not (isinstance(value, list) and len(value) == 2):
            raise SpecError(f"table_center must be [x, y], got {value!r}")
        kwargs["table_center"] = Point2D(float(value[0]), float(value[1]))
    if "behaviour_markov" in mapping:
        kwargs["behaviour_markov"] = tuple(
            tuple(float(v) for v in row) for row in mapping["behaviour_markov"]  # type: ignore[union-attr]
        )
    for key in ("phone_seats", "tablet_seats"):
        if key in mapping:
            kwargs[key] = tuple(int(v) for v in mapping[key])  # type: ignore[union-attr]
    return SceneSpec(**kwargs)


def noise_spec_from_mapping(mapping: Mapping[str, object]) -> NoiseSpec:
    """Build a NoiseSpec from config keys prefixed ``noise.``."""
    kwargs: dict = {}
    for name in (
        "box_jitter_sigma",
        "gaze_jitter_sigma",
        "head_miss_prob",
        "object_miss_prob",
        "gaze_miss_prob",
        "spurious_box_rate",
        "keypoint_noise_sigma",
    ):
        key = f"noise.{name}"
        if key in mapping:
            kwargs[name] = float(mapping[key])  # type: ignore[arg-type]
    return NoiseSpec(**kwargs)
