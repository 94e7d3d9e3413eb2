/**
 * A fully deterministic stand-in for the three model stages, for tests
 * and offline pipeline work: no weights, no RNG, byte-identical output
 * for identical inputs.
 *
 * Geometry: `groupSize` heads sit on a ring around the frame centre
 * (angle 2*pi*i/n for head i, measured so that increasing angle walks the
 * ring clockwise in image coordinates, starting due west).  Each head
 * owns a laptop on an inner ring at the same angle; one phone and one
 * tablet sit off to the sides.  The gaze stage cycles each head through
 * three targets by frame index: a peer's head centre, the head's own
 * laptop centre, then the table centre (which no box contains).
 */

import { ConfigError } from "./errors.js";
import type { SampledFrame } from "./frames.js";
import type { StagePipeline } from "./stages.js";
import {
  KEYPOINT_COUNT,
  type Box,
  type GazeLine,
  type HeadLine,
  type KeypointTriple,
  type ObjectLine,
} from "./schema.js";

export interface StubOptions {
  /** Frame width in pixels. */
  readonly width?: number;
  /** Frame height in pixels. */
  readonly height?: number;
  /** Number of heads on the ring (2..10). */
  readonly groupSize?: number;
}

const HEAD_RING_RADIUS = 300;
const HEAD_HALF = 30;
const LAPTOP_RING_RADIUS = 180;
const LAPTOP_HALF_W = 50;
const LAPTOP_HALF_H = 35;
const VISIBLE_KEYPOINTS = 11;

const HEAD_CONF = 0.9;
const OBJECT_CONF = 0.85;
const GAZE_SCORE = 0.8;

interface Point {
  readonly x: number;
  readonly y: number;
}

function boxAround(center: Point, halfW: number, halfH: number): Box {
  return [center.x - halfW, center.y - halfH, center.x + halfW, center.y + halfH];
}

/** Ring position for angle index i of n: due west at i = 0, clockwise. */
function ringPoint(center: Point, radius: number, i: number, n: number): Point {
  const theta = (2 * Math.PI * i) / n;
  return {
    x: center.x - radius * Math.cos(theta),
    y: center.y - radius * Math.sin(theta),
  };
}

function headKeypoints(center: Point): KeypointTriple[] {
  const kp: KeypointTriple[] = [];
  for (let k = 0; k < VISIBLE_KEYPOINTS; k++) {
    const phi = (2 * Math.PI * k) / VISIBLE_KEYPOINTS;
    kp.push([
      center.x + 0.3 * HEAD_HALF * Math.cos(phi),
      center.y + 0.3 * HEAD_HALF * Math.sin(phi),
      1,
    ]);
  }
  while (kp.length < KEYPOINT_COUNT) kp.push([0, 0, 0]);
  return kp;
}

/**
 * Build the deterministic stub pipeline.  Frame dimensions scale the
 * whole layout; `groupSize` must leave the ring boxes disjoint (2..10).
 */
export function stubPipeline(options: StubOptions = {}): StagePipeline {
  const width = options.width ?? 1920;
  const height = options.height ?? 1080;
  const n = options.groupSize ?? 4;
  if (!Number.isFinite(width) || width <= 0 || !Number.isFinite(height) || height <= 0) {
    throw new ConfigError(`frame size must be positive, got ${width}x${height}`);
  }
  if (!Number.isInteger(n) || n < 2 || n > 10) {
    throw new ConfigError(`group size must be an integer in [2, 10], got ${n}`);
  }

  const scale = Math.min(width, height) / 1080;
  const center: Point = { x: width / 2, y: height / 2 };
  const headCenters: Point[] = [];
  const laptopCenters: Point[] = [];
  for (let i = 0; i < n; i++) {
    headCenters.push(ringPoint(center, HEAD_RING_RADIUS * scale, i, n));
    laptopCenters.push(ringPoint(center, LAPTOP_RING_RADIUS * scale, i, n));
  }
  const phoneCenter: Point = { x: center.x + 420 * scale, y: center.y };
  const tabletCenter: Point = { x: center.x - 420 * scale, y: center.y };

  const heads: HeadLine[] = headCenters.map((c) => ({
    box: boxAround(c, HEAD_HALF * scale, HEAD_HALF * scale),
    conf: HEAD_CONF,
    kp: headKeypoints(c),
  }));

  return {
    provenance: {
      stages: {
        heads: "stub-ring-heads",
        objects: "stub-ring-objects",
        gaze: "stub-cycle-gaze",
      },
      thresholds: { heads: 0.25, objects: 0.25, gaze: 0.0 },
      stub: true,
      geometry: { width, height, group_size: n },
    },

    detectHeads(): HeadLine[] {
      return heads.map((h) => ({ ...h, box: [...h.box], kp: h.kp!.map((t) => [...t] as KeypointTriple) }));
    },

    detectObjects(_frame: SampledFrame, prompts: readonly string[]): ObjectLine[] {
      const objects: ObjectLine[] = [];
      if (prompts.includes("laptop")) {
        for (const c of laptopCenters) {
          objects.push({
            cls: "laptop",
            box: boxAround(c, LAPTOP_HALF_W * scale, LAPTOP_HALF_H * scale),
            conf: OBJECT_CONF,
          });
        }
      }
      if (prompts.includes("phone")) {
        objects.push({
          cls: "phone",
          box: boxAround(phoneCenter, 20 * scale, 30 * scale),
          conf: OBJECT_CONF,
        });
      }
      if (prompts.includes("tablet")) {
        objects.push({
          cls: "tablet",
          box: boxAround(tabletCenter, 40 * scale, 27.5 * scale),
          conf: OBJECT_CONF,
        });
      }
      return objects;
    },

    estimateGaze(frame: SampledFrame, detected: readonly HeadLine[]): GazeLine[] {
      const gazes: GazeLine[] = [];
      for (let i = 0; i < detected.length; i++) {
        const mode = (frame.index + i) % 3;
        let target: Point;
        if (mode === 0) {
          target = headCenters[(i + 1) % n] ?? center;
        } else if (mode === 1) {
          target = laptopCenters[i] ?? center;
        } else {
          target = center;
        }
        gazes.push({ head: i, point: [target.x, target.y], score: GAZE_SCORE });
      }
      return gazes;
    },
  };
}
