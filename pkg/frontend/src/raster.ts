/**
 * Client-side RGBA canvas mirrors, kept in sync by applying the server's
 * dirty-rect patches. Applying every patch in seq order reproduces the
 * server composite byte for byte; get_texture snapshots only reseed or
 * verify, they are never required per stroke.
 */

import type { DirtyEvent } from "./protocol.js";

export class RasterBuffer {
  readonly width: number;
  readonly height: number;
  readonly pixels: Uint8Array;

  constructor(width: number, height: number, fill: [number, number, number, number] = [255, 255, 255, 255]) {
    this.width = width;
    this.height = height;
    this.pixels = new Uint8Array(width * height * 4);
    for (let i = 0; i < width * height; i++) {
      this.pixels.set(fill, i * 4);
    }
  }

  static fromPixels(width: number, height: number, pixels: Uint8Array): RasterBuffer {
    if (pixels.length !== width * height * 4) {
      throw new Error(`expected ${width * height * 4} bytes, got ${pixels.length}`);
    }
    const buffer = new RasterBuffer(width, height);
    buffer.pixels.set(pixels);
    return buffer;
  }

  /** Copy a w*h*4 patch of rows into place at (x, y). */
  applyPatch(x: number, y: number, w: number, h: number, data: Uint8Array): void {
    if (data.length !== w * h * 4) {
      throw new Error(`patch ${w}x${h} needs ${w * h * 4} bytes, got ${data.length}`);
    }
    if (x < 0 || y < 0 || x + w > this.width || y + h > this.height) {
      throw new Error(`patch ${w}x${h}@${x},${y} exceeds ${this.width}x${this.height}`);
    }
    for (let row = 0; row < h; row++) {
      const src = data.subarray(row * w * 4, (row + 1) * w * 4);
      this.pixels.set(src, ((y + row) * this.width + x) * 4);
    }
  }

  pixel(x: number, y: number): [number, number, number, number] {
    const at = (y * this.width + x) * 4;
    return [this.pixels[at], this.pixels[at + 1], this.pixels[at + 2], this.pixels[at + 3]];
  }

  equals(other: RasterBuffer): boolean {
    if (other.width !== this.width || other.height !== this.height) {
      return false;
    }
    for (let i = 0; i < this.pixels.length; i++) {
      if (this.pixels[i] !== other.pixels[i]) {
        return false;
      }
    }
    return true;
  }
}

export function decodePatch(event: DirtyEvent): Uint8Array {
  return Uint8Array.from(Buffer.from(event.data, "base64"));
}

/** The pair of mirrors a connected view keeps, one per server canvas. */
export class CanvasStore {
  image: RasterBuffer;
  uv: RasterBuffer;
  lastSeq = 0;

  constructor(imageSize: [number, number], uvSize: [number, number]) {
    this.image = new RasterBuffer(imageSize[0], imageSize[1]);
    this.uv = new RasterBuffer(uvSize[0], uvSize[1]);
  }

  applyDirty(event: DirtyEvent): void {
    if (event.seq <= this.lastSeq) {
      throw new Error(`event seq ${event.seq} out of order after ${this.lastSeq}`);
    }
    this.lastSeq = event.seq;
    const [x, y, w, h] = event.rect;
    const target = event.canvas === "image" ? this.image : this.uv;
    target.applyPatch(x, y, w, h, decodePatch(event));
  }
}
