import { describe, expect, it } from "vitest";

import { decodePng } from "./png.js";

// 5x4 RGBA fixture written by the same encoder the server uses; pixel
// (x, y) = (x*50, y*60, x*40 + y*10, 255 - x*3)
const FIXTURE =
  "iVBORw0KGgoAAAANSUhEUgAAAAUAAAAECAYAAABGM/VAAAAAHUlEQVR4nGNkYGD4b8Sg" +
  "8RcZszDYcDEwMKBi4gUB+skHs8U/B6AAAAAASUVORK5CYII=";

describe("decodePng", () => {
  it("decodes an RGBA8 image byte for byte", () => {
    const decoded = decodePng(Uint8Array.from(Buffer.from(FIXTURE, "base64")));
    expect(decoded.width).toBe(5);
    expect(decoded.height).toBe(4);
    for (let y = 0; y < 4; y++) {
      for (let x = 0; x < 5; x++) {
        const at = (y * 5 + x) * 4;
        expect([...decoded.pixels.subarray(at, at + 4)]).toEqual([
          x * 50,
          y * 60,
          x * 40 + y * 10,
          255 - x * 3,
        ]);
      }
    }
  });

  it("rejects non-PNG bytes", () => {
    expect(() => decodePng(new Uint8Array([1, 2, 3, 4]))).toThrow("not a PNG");
  });
});
