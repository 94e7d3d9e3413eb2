/**
 * Video frame sampling.
 *
 * A video is abstracted as a frame count and a rate; sampling at `rate`
 * frames per second picks, for each sample instant k/rate, the first
 * source frame whose timestamp is at or after that instant.  Sampled
 * frames are renumbered 0..n-1 so downstream timing is uniform regardless
 * of the source frame rate.
 *
 * This build decodes synthetic `stub:` sources only (see `openVideo`);
 * real container decoding requires codec libraries that are not bundled.
 */

import { existsSync } from "node:fs";

import { ConfigError, UnreadableVideo } from "./errors.js";

export interface VideoSource {
  /** The path or URI the source was opened from. */
  readonly path: string;
  /** Total decodable frames. */
  readonly frameCount: number;
  /** Source frame rate, frames per second (> 0). */
  readonly fps: number;
}

export interface SampledFrame {
  /** Position in the sampled sequence: 0..n-1. */
  readonly index: number;
  /** Sample instant in seconds from the start of the video. */
  readonly timestampSeconds: number;
  /** Index of the source frame chosen for this instant. */
  readonly sourceFrame: number;
}

const STUB_SCHEME = /^stub:(\d+(?:\.\d+)?)s(?:@(\d+(?:\.\d+)?)fps)?$/;

/**
 * Open a video for sampling.
 *
 * Synthetic sources use the scheme `stub:<seconds>s[@<fps>fps]`, e.g.
 * `stub:10s` (30 fps implied) or `stub:90s@25fps`.  Anything else is
 * treated as a file path: a missing file raises `UnreadableVideo`, and an
 * existing file raises `UnreadableVideo` too because this build ships no
 * container decoder — point it at a `stub:` source instead.
 */
export function openVideo(path: string): VideoSource {
  const stub = STUB_SCHEME.exec(path);
  if (stub !== null) {
    const seconds = Number(stub[1]);
    const fps = stub[2] === undefined ? 30 : Number(stub[2]);
    if (!(fps > 0)) {
      throw new UnreadableVideo(`${path}: stub fps must be positive`);
    }
    return { path, frameCount: Math.round(seconds * fps), fps };
  }
  if (path.startsWith("stub:")) {
    throw new UnreadableVideo(
      `${path}: malformed stub source; expected stub:<seconds>s[@<fps>fps]`,
    );
  }
  if (!existsSync(path)) {
    throw new UnreadableVideo(`${path}: no such file`);
  }
  throw new UnreadableVideo(
    `${path}: container decoding is not available in this build; ` +
      "use a stub:<seconds>s source",
  );
}

/**
 * Sample `video` at `rate` frames per second.
 *
 * Sample instants are k/rate for k = 0, 1, 2, ...; each picks the first
 * source frame at or after the instant (source frame j sits at j/fps).
 * Sampling stops once the instant falls beyond the last source frame, so
 * a 10 s video at 1/s yields exactly 10 frames and an empty video none.
 */
export function extractFrames(video: VideoSource, rate: number): SampledFrame[] {
  if (!Number.isFinite(rate) || rate <= 0) {
    throw new ConfigError(`sample rate must be positive, got ${rate}`);
  }
  const frames: SampledFrame[] = [];
  for (let k = 0; ; k++) {
    const t = k / rate;
    // First j with j/fps >= t; the epsilon absorbs float error when the
    // product lands a hair above an exact integer.
    const j = Math.max(0, Math.ceil(t * video.fps - 1e-9));
    if (j >= video.frameCount) break;
    frames.push({ index: k, timestampSeconds: t, sourceFrame: j });
  }
  return frames;
}
