/**
 * The three-stage inference pipeline that turns sampled frames into
 * detection lines: head detection (optionally with pose keypoints),
 * open-vocabulary object detection over the configured prompts, and
 * per-head gaze estimation.
 *
 * Model internals are configuration, not code: a `StagePipeline` bundles
 * the three stage callables plus a provenance record (model identifiers
 * and confidence thresholds) that is written into the output header so a
 * detection file documents how it was produced.  Stages here run
 * sequentially per frame; a batched implementation may run frames in
 * parallel as long as output lines stay in frame order.
 */

import { ConfigError, InferenceError, ModelLoadError } from "./errors.js";
import type { SampledFrame } from "./frames.js";
import {
  frameLineSchema,
  serializeLine,
  type FrameLine,
  type GazeLine,
  type HeadLine,
  type HeaderLine,
  type ObjectLine,
} from "./schema.js";

export interface StageModels {
  /** Head / person detector identifier (weights name or path). */
  readonly heads: string;
  /** Open-vocabulary object detector identifier. */
  readonly objects: string;
  /** Gaze-target estimator identifier. */
  readonly gaze: string;
}

export interface AdapterConfig {
  /** Video path or stub source. */
  readonly video: string;
  /** Sampling rate, frames per second (> 0). */
  readonly rate: number;
  /** Object classes to prompt the detector with (non-empty). */
  readonly prompts: readonly string[];
  /** Model identifiers for the three stages. */
  readonly models: StageModels;
  /** Compute device selector, e.g. "cpu" or "cuda:0". */
  readonly device: string;
}

export const DEFAULT_RATE = 1;
export const DEFAULT_PROMPTS: readonly string[] = ["laptop", "tablet", "phone"];
export const DEFAULT_MODELS: StageModels = {
  heads: "yolo-pose-m",
  objects: "owl-vit-base",
  gaze: "gaze-lle-s",
};

/** Build a validated config from partial overrides. */
export function makeConfig(overrides: Partial<AdapterConfig> & { video: string }): AdapterConfig {
  const config: AdapterConfig = {
    video: overrides.video,
    rate: overrides.rate ?? DEFAULT_RATE,
    prompts: overrides.prompts ?? DEFAULT_PROMPTS,
    models: overrides.models ?? DEFAULT_MODELS,
    device: overrides.device ?? "cpu",
  };
  if (!Number.isFinite(config.rate) || config.rate <= 0) {
    throw new ConfigError(`sample rate must be positive, got ${config.rate}`);
  }
  if (config.prompts.length === 0) {
    throw new ConfigError("prompt list must not be empty");
  }
  for (const prompt of config.prompts) {
    if (prompt.trim() === "") {
      throw new ConfigError("prompts must be non-blank strings");
    }
  }
  return config;
}

export interface StagePipeline {
  /** Provenance merged into the output header: model ids, thresholds, ... */
  readonly provenance: Readonly<Record<string, unknown>>;
  detectHeads(frame: SampledFrame): HeadLine[];
  detectObjects(frame: SampledFrame, prompts: readonly string[]): ObjectLine[];
  estimateGaze(frame: SampledFrame, heads: readonly HeadLine[]): GazeLine[];
}

/**
 * Load the configured models.  This build bundles no pretrained weights,
 * so any real model identifier raises `ModelLoadError`; callers wanting a
 * runnable pipeline use `stubPipeline` (see stubs module).
 */
export function loadPipeline(config: AdapterConfig): StagePipeline {
  throw new ModelLoadError(
    `cannot load "${config.models.heads}": pretrained weights are not ` +
      "bundled with this build; run with the stub pipeline instead",
  );
}

export interface RunOptions {
  /** Session identifier recorded in the header. */
  readonly session?: string;
}

/**
 * Run the three stages over `frames` and return the serialized detection
 * stream: one header line, then one line per frame in order.
 *
 * Every line is validated against the wire schema before it is emitted —
 * an invalid record means a stage produced something the consumer would
 * reject, which surfaces as `InferenceError` naming the frame.  A frame
 * with no detected heads still yields a line, with empty `heads` and
 * `gazes` arrays.
 */
export function runStages(
  frames: readonly SampledFrame[],
  pipeline: StagePipeline,
  config: AdapterConfig,
  options: RunOptions = {},
): string[] {
  const header: HeaderLine = {
    ...(options.session === undefined ? {} : { session: options.session }),
    fps: config.rate,
    source: config.video,
    prompts: [...config.prompts],
    device: config.device,
    ...pipeline.provenance,
  };
  const lines = [serializeLine(header)];
  for (const frame of frames) {
    let record: FrameLine;
    try {
      const heads = pipeline.detectHeads(frame);
      const objects = pipeline.detectObjects(frame, config.prompts);
      const gazes = heads.length === 0 ? [] : pipeline.estimateGaze(frame, heads);
      record = {
        frame: frame.index,
        t: frame.timestampSeconds,
        heads,
        objects,
        gazes,
      };
    } catch (err) {
      if (err instanceof InferenceError) throw err;
      throw new InferenceError(frame.index, String(err));
    }
    const checked = frameLineSchema.safeParse(record);
    if (!checked.success) {
      throw new InferenceError(
        frame.index,
        `stage output violates the wire schema: ${checked.error.message}`,
      );
    }
    lines.push(serializeLine(checked.data));
  }
  return lines;
}
