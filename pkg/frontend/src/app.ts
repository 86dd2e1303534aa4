/**
 * The headless application core: one object owning the protocol client,
 * the canvas mirrors, and the view-model. A DOM shell only has to forward
 * pointer events in and blit RasterBuffers out.
 */

import {
  CanvasName,
  ServerError,
  ServerState,
  UVLinkClient,
} from "./protocol.js";
import { CanvasStore } from "./raster.js";
import { fromCameraParams, OrbitState, toCameraParams } from "./orbit.js";
import { applyServerState, initialState, UiState } from "./state.js";
import { clampRadius, Point, resampleTrack } from "./brush.js";

export class PaintApp {
  state: UiState = initialState();
  store: CanvasStore;
  orbit: OrbitState;
  /** codes of server errors the shell should surface, newest last */
  notices: string[] = [];

  private constructor(readonly client: UVLinkClient, server: ServerState) {
    this.state = applyServerState(this.state, server);
    this.store = new CanvasStore(server.image_size, server.uv_size);
    this.orbit = fromCameraParams(server.camera);
    client.onDirty((event) => this.store.applyDirty(event));
  }

  /** Connect, read the session state, and seed both canvas mirrors. */
  static async connect(host: string, port: number): Promise<PaintApp> {
    const client = await UVLinkClient.connect(host, port);
    const app = new PaintApp(client, await client.getState());
    await app.reseed("image");
    await app.reseed("uv");
    return app;
  }

  /**
   * Replace a mirror with a decoded get_texture snapshot. The transport
   * has no PNG decoder of its own, so the shell supplies one.
   */
  async reseed(
    canvas: CanvasName,
    decode?: (png: Uint8Array, width: number, height: number) => Uint8Array,
  ): Promise<void> {
    if (!decode) {
      return; // mirrors start white, matching a fresh session
    }
    const snapshot = await this.client.getTexture(canvas);
    const pixels = decode(
      Uint8Array.from(Buffer.from(snapshot.png, "base64")),
      snapshot.width,
      snapshot.height,
    );
    const target = this.store[canvas];
    target.pixels.set(pixels);
  }

  private async run(cmd: string, params: Record<string, unknown> = {}): Promise<unknown> {
    try {
      const result = await this.client.call(cmd, params);
      this.state = applyServerState(this.state, await this.client.getState());
      return result;
    } catch (error) {
      if (error instanceof ServerError) {
        this.notices.push(error.code);
      }
      throw error;
    }
  }

  async setMode(mode: "creator" | "user"): Promise<void> {
    await this.run("set_mode", { mode });
  }

  async setColor(rgb: [number, number, number]): Promise<void> {
    await this.run("set_color", { color: rgb });
  }

  async setBrushRadius(radius: number): Promise<void> {
    await this.run("set_brush_radius", {
      radius: clampRadius(radius, this.state.brushMin, this.state.brushMax),
    });
  }

  /** A pointer drag over the image panel, resampled to brush spacing. */
  async strokeImage(track: Point[]): Promise<void> {
    const points = resampleTrack(track, this.state.brushRadius);
    if (points.length > 0) {
      await this.run("stroke_image", { points });
    }
  }

  /** A pointer drag over the model view, resampled to brush spacing. */
  async strokeModel(track: Point[]): Promise<void> {
    const points = resampleTrack(track, this.state.brushRadius);
    if (points.length > 0) {
      await this.run("stroke_model_screen", { points });
    }
  }

  async revoke(): Promise<void> {
    await this.run("revoke");
  }

  async saveGroup(): Promise<void> {
    await this.run("save_group");
  }

  async fill(point: Point): Promise<number[]> {
    const result = (await this.run("fill", { point })) as { matched: number[] };
    return result.matched;
  }

  /** Push the local orbit to the server so screen strokes line up. */
  async applyOrbit(orbit: OrbitState): Promise<void> {
    this.orbit = orbit;
    await this.run("set_camera", { camera: toCameraParams(orbit) });
  }

  async close(): Promise<void> {
    this.client.close();
  }
}
