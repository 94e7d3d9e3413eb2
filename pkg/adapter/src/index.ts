export {
  ConfigError,
  InferenceError,
  ModelLoadError,
  UnreadableVideo,
} from "./errors.js";
export { extractFrames, openVideo } from "./frames.js";
export type { SampledFrame, VideoSource } from "./frames.js";
export {
  boxSchema,
  frameLineSchema,
  gazeSchema,
  headSchema,
  headerLineSchema,
  keypointSchema,
  objectSchema,
  serializeLine,
  validateStream,
  KEYPOINT_COUNT,
} from "./schema.js";
export type {
  Box,
  FrameLine,
  GazeLine,
  HeadLine,
  HeaderLine,
  KeypointTriple,
  ObjectClass,
  ObjectLine,
} from "./schema.js";
export {
  loadPipeline,
  makeConfig,
  runStages,
  DEFAULT_MODELS,
  DEFAULT_PROMPTS,
  DEFAULT_RATE,
} from "./stages.js";
export type {
  AdapterConfig,
  RunOptions,
  StageModels,
  StagePipeline,
} from "./stages.js";
export { stubPipeline } from "./stubs.js";
export type { StubOptions } from "./stubs.js";
