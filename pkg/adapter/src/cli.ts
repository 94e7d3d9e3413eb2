#!/usr/bin/env node
/**
 * Command-line entry point: sample a video, run the three stages, write a
 * detection stream.
 *
 *   gazelab-adapter --video lesson.mp4 --out detections.jsonl \
 *       --rate 1 --prompts "laptop,tablet,phone"
 *
 * `--stub` swaps the model stages for the deterministic stub pipeline
 * (the only runnable one in this build; see stubs module), with `--width`,
 * `--height` and `--group-size` controlling its geometry.  The output
 * file is written atomically (temp file + rename).  Exit codes: 0 on
 * success, 1 on runtime failure, 2 on usage errors.
 */

import { mkdtempSync, renameSync, rmSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { dirname, join, resolve } from "node:path";
import { pathToFileURL } from "node:url";

import yargs from "yargs";

import { ConfigError, InferenceError, ModelLoadError, UnreadableVideo } from "./errors.js";
import { extractFrames, openVideo } from "./frames.js";
import { loadPipeline, makeConfig, runStages, DEFAULT_PROMPTS } from "./stages.js";
import { stubPipeline } from "./stubs.js";

class UsageError extends Error {}

function writeAtomic(path: string, content: string): void {
  const dir = mkdtempSync(join(tmpdir(), "adapter-"));
  const tmp = join(dir, "out.jsonl");
  try {
    writeFileSync(tmp, content, { encoding: "utf-8" });
    renameSync(tmp, resolve(path));
  } catch (err) {
    // Rename across filesystems can fail; fall back to a sibling temp file.
    if ((err as NodeJS.ErrnoException).code === "EXDEV") {
      const sibling = join(dirname(resolve(path)), ".adapter-tmp.jsonl");
      writeFileSync(sibling, content, { encoding: "utf-8" });
      renameSync(sibling, resolve(path));
    } else {
      throw err;
    }
  } finally {
    rmSync(dir, { recursive: true, force: true });
  }
}

export function main(argv: readonly string[]): number {
  let args;
  try {
    args = yargs([...argv])
      .scriptName("gazelab-adapter")
      .usage("$0 --video <path|stub:...> --out <file> [options]")
      .option("video", {
        type: "string",
        demandOption: true,
        describe: "video path, or stub:<seconds>s[@<fps>fps]",
      })
      .option("out", {
        type: "string",
        demandOption: true,
        describe: "output detection stream (.jsonl)",
      })
      .option("rate", {
        type: "number",
        default: 1,
        describe: "sampling rate, frames per second",
      })
      .option("prompts", {
        type: "string",
        default: DEFAULT_PROMPTS.join(","),
        describe: "comma-separated object classes to detect",
      })
      .option("session", {
        type: "string",
        describe: "session identifier recorded in the header",
      })
      .option("device", {
        type: "string",
        default: "cpu",
        describe: "compute device selector",
      })
      .option("stub", {
        type: "boolean",
        default: false,
        describe: "use the deterministic stub stages instead of real models",
      })
      .option("width", {
        type: "number",
        default: 1920,
        describe: "stub frame width in pixels",
      })
      .option("height", {
        type: "number",
        default: 1080,
        describe: "stub frame height in pixels",
      })
      .option("group-size", {
        type: "number",
        default: 4,
        describe: "stub ring size (heads per frame)",
      })
      .strict()
      .version(false)
      .exitProcess(false)
      .fail((msg, err) => {
        throw err ?? new UsageError(msg);
      })
      .parseSync();
  } catch (err) {
    if (err instanceof UsageError) {
      process.stderr.write(`error: ${err.message}\n`);
      return 2;
    }
    throw err;
  }

  try {
    const prompts = args.prompts
      .split(",")
      .map((p) => p.trim())
      .filter((p) => p !== "");
    const config = makeConfig({
      video: args.video,
      rate: args.rate,
      prompts,
      device: args.device,
    });
    const video = openVideo(config.video);
    const frames = extractFrames(video, config.rate);
    const pipeline = args.stub
      ? stubPipeline({
          width: args.width,
          height: args.height,
          groupSize: args["group-size"],
        })
      : loadPipeline(config);
    const lines = runStages(frames, pipeline, config, {
      ...(args.session === undefined ? {} : { session: args.session }),
    });
    writeAtomic(args.out, lines.join("\n") + "\n");
    process.stderr.write(`wrote ${frames.length} frames to ${args.out}\n`);
    return 0;
  } catch (err) {
    if (
      err instanceof ConfigError ||
      err instanceof UnreadableVideo ||
      err instanceof ModelLoadError ||
      err instanceof InferenceError
    ) {
      process.stderr.write(`error: ${err.message}\n`);
      return 1;
    }
    throw err;
  }
}

const invokedDirectly =
  process.argv[1] !== undefined &&
  import.meta.url === pathToFileURL(process.argv[1]).href;
if (invokedDirectly) {
  process.exit(main(process.argv.slice(2)));
}
