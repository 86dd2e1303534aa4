import { describe, expect, it } from "vitest";

import { CanvasStore, RasterBuffer, decodePatch } from "../src/raster.js";
import type { DirtyEvent } from "../src/protocol.js";

function dirty(
  seq: number,
  canvas: "image" | "uv",
  rect: [number, number, number, number],
  bytes: number[],
): DirtyEvent {
  return { event: "dirty", seq, canvas, rect, data: Buffer.from(bytes).toString("base64") };
}

describe("RasterBuffer", () => {
  it("starts filled with the background color", () => {
    const buffer = new RasterBuffer(3, 2, [10, 20, 30, 40]);
    expect(buffer.pixel(0, 0)).toEqual([10, 20, 30, 40]);
    expect(buffer.pixel(2, 1)).toEqual([10, 20, 30, 40]);
  });

  it("applies a patch row by row", () => {
    const buffer = new RasterBuffer(4, 4);
    const patch = new Uint8Array(2 * 2 * 4);
    patch.set([1, 2, 3, 4], 0);
    patch.set([5, 6, 7, 8], 4);
    patch.set([9, 10, 11, 12], 8);
    patch.set([13, 14, 15, 16], 12);
    buffer.applyPatch(1, 2, 2, 2, patch);
    expect(buffer.pixel(1, 2)).toEqual([1, 2, 3, 4]);
    expect(buffer.pixel(2, 2)).toEqual([5, 6, 7, 8]);
    expect(buffer.pixel(1, 3)).toEqual([9, 10, 11, 12]);
    expect(buffer.pixel(2, 3)).toEqual([13, 14, 15, 16]);
    expect(buffer.pixel(0, 0)).toEqual([255, 255, 255, 255]); // untouched
  });

  it("rejects out-of-bounds and short patches", () => {
    const buffer = new RasterBuffer(4, 4);
    expect(() => buffer.applyPatch(3, 3, 2, 2, new Uint8Array(16))).toThrow("exceeds");
    expect(() => buffer.applyPatch(0, 0, 2, 2, new Uint8Array(7))).toThrow("bytes");
  });

  it("compares by size and content", () => {
    const a = new RasterBuffer(2, 2);
    const b = new RasterBuffer(2, 2);
    expect(a.equals(b)).toBe(true);
    b.pixels[5] = 7;
    expect(a.equals(b)).toBe(false);
    expect(a.equals(new RasterBuffer(2, 3))).toBe(false);
  });
});

describe("CanvasStore", () => {
  it("routes dirty events to the right canvas", () => {
    const store = new CanvasStore([4, 4], [2, 2]);
    store.applyDirty(dirty(1, "image", [0, 0, 1, 1], [50, 60, 70, 255]));
    store.applyDirty(dirty(2, "uv", [1, 1, 1, 1], [80, 90, 100, 255]));
    expect(store.image.pixel(0, 0)).toEqual([50, 60, 70, 255]);
    expect(store.uv.pixel(1, 1)).toEqual([80, 90, 100, 255]);
    expect(store.lastSeq).toBe(2);
  });

  it("rejects replayed or reordered sequence numbers", () => {
    const store = new CanvasStore([2, 2], [2, 2]);
    store.applyDirty(dirty(5, "image", [0, 0, 1, 1], [1, 1, 1, 255]));
    expect(() =>
      store.applyDirty(dirty(5, "image", [0, 0, 1, 1], [2, 2, 2, 255])),
    ).toThrow("out of order");
  });

  it("decodes base64 patch data to raw bytes", () => {
    const event = dirty(1, "image", [0, 0, 1, 1], [7, 8, 9, 10]);
    expect([...decodePatch(event)]).toEqual([7, 8, 9, 10]);
  });
});
