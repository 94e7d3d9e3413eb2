/**
 * The detection wire format the engine ingests, as zod schemas.
 *
 * One JSON object per line.  An optional first line *without* a `frame`
 * key is a stream header carrying `session`/`fps` plus free-form
 * provenance; every other line is a frame record:
 *
 *   {"frame": int, "t": number,
 *    "heads":   [{"box": [x0,y0,x1,y1], "conf": c, "kp": [[x,y,0|1] x17]?}],
 *    "objects": [{"cls": "laptop"|"tablet"|"phone", "box": [...], "conf": c}],
 *    "gazes":   [{"head": i, "point": [x,y], "score": s}]}
 *
 * Constraints mirrored from the consumer: finite numbers throughout, box
 * coordinates >= 0 with positive extent, confidences and scores in [0, 1],
 * exactly 17 keypoint triples with 0/1 visibility, gaze `head` indices
 * referring to distinct existing heads, frame indices strictly increasing
 * across the stream.  Emitting anything this module rejects would be a bug
 * in the producer, so the pipeline validates every line before writing it.
 */

import { z } from "zod";

const finite = z.number().finite();
const unitInterval = finite.min(0).max(1);

export const boxSchema = z
  .tuple([finite.min(0), finite.min(0), finite.min(0), finite.min(0)])
  .refine(([x0, y0, x1, y1]) => x0 < x1 && y0 < y1, {
    message: "box must have positive extent [x_min, y_min, x_max, y_max]",
  });

export const keypointSchema = z.tuple([
  finite,
  finite,
  z.union([z.literal(0), z.literal(1)]),
]);

export const KEYPOINT_COUNT = 17;

export const headSchema = z.strictObject({
  box: boxSchema,
  conf: unitInterval,
  kp: z.array(keypointSchema).length(KEYPOINT_COUNT).optional(),
});

export const objectClassSchema = z.enum(["laptop", "tablet", "phone"]);

export const objectSchema = z.strictObject({
  cls: objectClassSchema,
  box: boxSchema,
  conf: unitInterval,
});

export const gazeSchema = z.strictObject({
  head: z.number().int().min(0),
  point: z.tuple([finite, finite]),
  score: unitInterval,
});

export const frameLineSchema = z
  .strictObject({
    frame: z.number().int().min(0),
    t: finite,
    heads: z.array(headSchema),
    objects: z.array(objectSchema),
    gazes: z.array(gazeSchema),
  })
  .superRefine((rec, ctx) => {
    const seen = new Set<number>();
    for (const gaze of rec.gazes) {
      if (gaze.head >= rec.heads.length) {
        ctx.addIssue({
          code: "custom",
          message: `gaze refers to head ${gaze.head} but the frame has only ${rec.heads.length} heads`,
        });
      }
      if (seen.has(gaze.head)) {
        ctx.addIssue({
          code: "custom",
          message: `more than one gaze estimate for head ${gaze.head}`,
        });
      }
      seen.add(gaze.head);
    }
  });

/** A header is any object without a `frame` key; `session` and `fps` are
 * understood by the consumer, everything else is free-form provenance. */
export const headerLineSchema = z
  .looseObject({
    session: z.string().optional(),
    fps: z.number().positive().optional(),
  })
  .refine((obj) => !("frame" in obj), {
    message: "a header line must not carry a 'frame' key",
  });

export type Box = z.infer<typeof boxSchema>;
export type KeypointTriple = z.infer<typeof keypointSchema>;
export type HeadLine = z.infer<typeof headSchema>;
export type ObjectClass = z.infer<typeof objectClassSchema>;
export type ObjectLine = z.infer<typeof objectSchema>;
export type GazeLine = z.infer<typeof gazeSchema>;
export type FrameLine = z.infer<typeof frameLineSchema>;
export type HeaderLine = z.infer<typeof headerLineSchema>;

/** Serialize one already-validated line object canonically (compact JSON,
 * stable field order as constructed). */
export function serializeLine(line: HeaderLine | FrameLine): string {
  return JSON.stringify(line);
}

/** Validate a whole stream (header optional, frame indices strictly
 * increasing).  Returns the parsed lines; throws on the first bad line,
 * naming its 1-based position. */
export function validateStream(lines: readonly string[]): {
  header: HeaderLine | null;
  frames: FrameLine[];
} {
  let header: HeaderLine | null = null;
  const frames: FrameLine[] = [];
  let previous = -1;
  lines.forEach((text, i) => {
    if (text.trim() === "") return;
    const lineno = i + 1;
    let obj: unknown;
    try {
      obj = JSON.parse(text);
    } catch (err) {
      throw new Error(`line ${lineno}: invalid JSON (${String(err)})`);
    }
    if (typeof obj === "object" && obj !== null && !("frame" in obj)) {
      if (header !== null || frames.length > 0) {
        throw new Error(
          `line ${lineno}: a header is only allowed as the first line`,
        );
      }
      header = headerLineSchema.parse(obj);
      return;
    }
    const frame = frameLineSchema.parse(obj);
    if (frame.frame <= previous) {
      throw new Error(
        `line ${lineno}: frame ${frame.frame} does not increase on ${previous}`,
      );
    }
    previous = frame.frame;
    frames.push(frame);
  });
  return { header, frames };
}
