/** Error taxonomy for the adapter: every failure a caller can act on. */

/** The video path cannot be opened or decoded. */
export class UnreadableVideo extends Error {
  override readonly name = "UnreadableVideo";
}

/** A model identifier cannot be resolved to runnable weights. */
export class ModelLoadError extends Error {
  override readonly name = "ModelLoadError";
}

/** A model failed on a specific frame; carries the frame index. */
export class InferenceError extends Error {
  override readonly name = "InferenceError";
  readonly frameIndex: number;

  constructor(frameIndex: number, message: string) {
    super(`frame ${frameIndex}: ${message}`);
    this.frameIndex = frameIndex;
  }
}

/** The adapter configuration is invalid. */
export class ConfigError extends Error {
  override readonly name = "ConfigError";
}
