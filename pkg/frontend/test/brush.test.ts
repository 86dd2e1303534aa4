import { describe, expect, it } from "vitest";

import { clampRadius, hsvToRgb, Point, resampleTrack, rgbToHsv } from "../src/brush.js";

/** Small deterministic PRNG so the spacing property test is repeatable. */
function mulberry32(seed: number): () => number {
  let a = seed;
  return () => {
    a |= 0;
    a = (a + 0x6d2b79f5) | 0;
    let t = Math.imul(a ^ (a >>> 15), 1 | a);
    t = (t + Math.imul(t ^ (t >>> 7), 61 | t)) ^ t;
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

describe("resampleTrack", () => {
  it("keeps the first point and drops near-duplicates", () => {
    const track: Point[] = [[10, 10], [11, 10], [12, 10], [30, 10]];
    expect(resampleTrack(track, 8)).toEqual([[10, 10], [30, 10]]);
  });

  it("keeps a dense drag solid: gaps never exceed the raw track's reach", () => {
    const track: Point[] = [];
    for (let x = 0; x <= 100; x++) {
      track.push([x, 50]);
    }
    const kept = resampleTrack(track, 5);
    expect(kept[0]).toEqual([0, 50]);
    for (let i = 1; i < kept.length; i++) {
      const gap = Math.hypot(kept[i][0] - kept[i - 1][0], kept[i][1] - kept[i - 1][1]);
      expect(gap).toBeGreaterThanOrEqual(5);
      expect(gap).toBeLessThanOrEqual(6); // one step of slack past the radius
    }
  });

  it("spacing property: consecutive kept points are at least radius apart", () => {
    const rand = mulberry32(20260823);
    for (let round = 0; round < 50; round++) {
      const radius = 1 + Math.floor(rand() * 12);
      const track: Point[] = [];
      let x = rand() * 200;
      let y = rand() * 200;
      for (let i = 0; i < 120; i++) {
        x += (rand() - 0.5) * radius * 1.5;
        y += (rand() - 0.5) * radius * 1.5;
        track.push([Math.round(x), Math.round(y)]);
      }
      const kept = resampleTrack(track, radius);
      expect(kept.length).toBeGreaterThan(0);
      expect(kept[0]).toEqual(track[0]);
      for (let i = 1; i < kept.length; i++) {
        const gap = Math.hypot(kept[i][0] - kept[i - 1][0], kept[i][1] - kept[i - 1][1]);
        expect(gap).toBeGreaterThanOrEqual(radius);
      }
      // kept points are a subsequence of the input
      let cursor = 0;
      for (const point of kept) {
        cursor = track.findIndex(
          (p, at) => at >= cursor && p[0] === point[0] && p[1] === point[1],
        );
        expect(cursor).toBeGreaterThanOrEqual(0);
        cursor++;
      }
    }
  });

  it("handles empty tracks and rejects bad radii", () => {
    expect(resampleTrack([], 4)).toEqual([]);
    expect(() => resampleTrack([[0, 0]], 0)).toThrow("radius");
  });
});

describe("color conversions", () => {
  it("maps the primary hues", () => {
    expect(hsvToRgb(0, 1, 1)).toEqual([255, 0, 0]);
    expect(hsvToRgb(120, 1, 1)).toEqual([0, 255, 0]);
    expect(hsvToRgb(240, 1, 1)).toEqual([0, 0, 255]);
    expect(hsvToRgb(0, 0, 1)).toEqual([255, 255, 255]);
    expect(hsvToRgb(0, 0, 0)).toEqual([0, 0, 0]);
  });

  it("wraps hue and round-trips within rounding error", () => {
    expect(hsvToRgb(360, 1, 1)).toEqual(hsvToRgb(0, 1, 1));
    expect(hsvToRgb(-120, 1, 1)).toEqual(hsvToRgb(240, 1, 1));
    const rand = mulberry32(7);
    for (let i = 0; i < 60; i++) {
      const rgb: [number, number, number] = [
        Math.floor(rand() * 256),
        Math.floor(rand() * 256),
        Math.floor(rand() * 256),
      ];
      const [h, s, v] = rgbToHsv(rgb);
      const back = hsvToRgb(h, s, v);
      for (let c = 0; c < 3; c++) {
        expect(Math.abs(back[c] - rgb[c])).toBeLessThanOrEqual(1);
      }
    }
  });
});

describe("clampRadius", () => {
  it("clamps to the session range and rounds", () => {
    expect(clampRadius(0, 1, 32)).toBe(1);
    expect(clampRadius(40, 1, 32)).toBe(32);
    expect(clampRadius(7.6, 1, 32)).toBe(8);
  });
});
