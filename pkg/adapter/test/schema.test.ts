import { describe, expect, it } from "vitest";

import {
  frameLineSchema,
  headerLineSchema,
  serializeLine,
  validateStream,
  type FrameLine,
} from "../src/schema.js";

function frameLine(overrides: Record<string, unknown> = {}): Record<string, unknown> {
  return {
    frame: 0,
    t: 0,
    heads: [
      {
        box: [10, 20, 50, 60],
        conf: 0.9,
      },
    ],
    objects: [{ cls: "laptop", box: [100, 100, 200, 170], conf: 0.8 }],
    gazes: [{ head: 0, point: [30, 40], score: 0.7 }],
    ...overrides,
  };
}

const seventeen = Array.from({ length: 17 }, (_, k) => [k, k + 1, k % 2]);

describe("frame line schema", () => {
  it("accepts a well-formed record", () => {
    expect(frameLineSchema.parse(frameLine())).toBeTruthy();
  });

  it("accepts 17 keypoint triples, including negative coordinates", () => {
    const kp = seventeen.map((t) => [...t]);
    kp[0] = [-5.5, -2.25, 1];
    const rec = frameLine({
      heads: [{ box: [10, 20, 50, 60], conf: 0.9, kp }],
    });
    expect(frameLineSchema.parse(rec)).toBeTruthy();
  });

  it("rejects any other keypoint count and visibility outside {0, 1}", () => {
    const sixteen = seventeen.slice(0, 16);
    expect(
      frameLineSchema.safeParse(
        frameLine({ heads: [{ box: [10, 20, 50, 60], conf: 0.9, kp: sixteen }] }),
      ).success,
    ).toBe(false);
    const badVis = seventeen.map((t) => [...t]);
    badVis[3] = [1, 2, 2];
    expect(
      frameLineSchema.safeParse(
        frameLine({ heads: [{ box: [10, 20, 50, 60], conf: 0.9, kp: badVis }] }),
      ).success,
    ).toBe(false);
  });

  it("rejects unknown keys everywhere", () => {
    expect(frameLineSchema.safeParse(frameLine({ extra: 1 })).success).toBe(false);
    expect(
      frameLineSchema.safeParse(
        frameLine({ heads: [{ box: [10, 20, 50, 60], conf: 0.9, label: "x" }] }),
      ).success,
    ).toBe(false);
    expect(
      frameLineSchema.safeParse(
        frameLine({
          objects: [{ cls: "laptop", box: [1, 1, 2, 2], conf: 0.5, id: 7 }],
        }),
      ).success,
    ).toBe(false);
    expect(
      frameLineSchema.safeParse(
        frameLine({ gazes: [{ head: 0, point: [1, 1], score: 0.5, conf: 0.5 }] }),
      ).success,
    ).toBe(false);
  });

  it("rejects degenerate and negative boxes", () => {
    expect(
      frameLineSchema.safeParse(
        frameLine({ heads: [{ box: [50, 20, 50, 60], conf: 0.9 }] }),
      ).success,
    ).toBe(false);
    expect(
      frameLineSchema.safeParse(
        frameLine({ heads: [{ box: [60, 20, 50, 60], conf: 0.9 }] }),
      ).success,
    ).toBe(false);
    expect(
      frameLineSchema.safeParse(
        frameLine({ heads: [{ box: [-1, 20, 50, 60], conf: 0.9 }] }),
      ).success,
    ).toBe(false);
  });

  it("rejects confidences and scores outside [0, 1]", () => {
    expect(
      frameLineSchema.safeParse(
        frameLine({ heads: [{ box: [10, 20, 50, 60], conf: 1.2 }] }),
      ).success,
    ).toBe(false);
    expect(
      frameLineSchema.safeParse(
        frameLine({ gazes: [{ head: 0, point: [1, 1], score: -0.1 }] }),
      ).success,
    ).toBe(false);
  });

  it("rejects unknown object classes", () => {
    expect(
      frameLineSchema.safeParse(
        frameLine({ objects: [{ cls: "book", box: [1, 1, 2, 2], conf: 0.5 }] }),
      ).success,
    ).toBe(false);
  });

  it("allows negative gaze points but not dangling or duplicate head refs", () => {
    expect(
      frameLineSchema.safeParse(
        frameLine({ gazes: [{ head: 0, point: [-10, -20], score: 0.5 }] }),
      ).success,
    ).toBe(true);
    expect(
      frameLineSchema.safeParse(
        frameLine({ gazes: [{ head: 1, point: [1, 1], score: 0.5 }] }),
      ).success,
    ).toBe(false);
    expect(
      frameLineSchema.safeParse(
        frameLine({
          gazes: [
            { head: 0, point: [1, 1], score: 0.5 },
            { head: 0, point: [2, 2], score: 0.5 },
          ],
        }),
      ).success,
    ).toBe(false);
  });

  it("allows empty heads, objects and gazes arrays", () => {
    const rec = frameLine({ heads: [], objects: [], gazes: [] });
    expect(frameLineSchema.parse(rec)).toBeTruthy();
  });
});

describe("header line schema", () => {
  it("accepts free-form provenance", () => {
    expect(
      headerLineSchema.parse({ session: "s1", fps: 1, notes: { any: "thing" } }),
    ).toBeTruthy();
  });

  it("rejects a frame key and non-positive fps", () => {
    expect(headerLineSchema.safeParse({ frame: 0, fps: 1 }).success).toBe(false);
    expect(headerLineSchema.safeParse({ fps: 0 }).success).toBe(false);
  });
});

describe("validateStream", () => {
  const frame0 = serializeLine(frameLineSchema.parse(frameLine()) as FrameLine);
  const frame1 = serializeLine(
    frameLineSchema.parse(frameLine({ frame: 1, t: 1 })) as FrameLine,
  );
  const header = serializeLine({ session: "s", fps: 1 });

  it("accepts header-first streams and bare streams", () => {
    expect(validateStream([header, frame0, frame1]).frames).toHaveLength(2);
    const bare = validateStream([frame0, frame1]);
    expect(bare.header).toBeNull();
    expect(bare.frames).toHaveLength(2);
  });

  it("requires strictly increasing frame indices, naming the line", () => {
    expect(() => validateStream([frame0, frame0])).toThrow(/line 2/);
  });

  it("rejects a header after the first line", () => {
    expect(() => validateStream([frame0, header])).toThrow(/line 2/);
  });

  it("rejects invalid JSON with its line number", () => {
    expect(() => validateStream([frame0, "{oops"])).toThrow(/line 2/);
  });
});
