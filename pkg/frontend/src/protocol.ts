/**
 * Wire protocol client: newline-delimited JSON over a byte transport.
 *
 * Requests carry a client-chosen id; the server answers each with exactly
 * one response echoing that id, and pushes dirty-rect events (which have no
 * id) before the response of the command that caused them.
 */

import * as net from "node:net";

export type Mode = "creator" | "user";
export type CanvasName = "image" | "uv";

export interface DirtyEvent {
  event: "dirty";
  seq: number;
  canvas: CanvasName;
  rect: [number, number, number, number];
  /** base64 of w*h*4 raw RGBA bytes, rows top to bottom */
  data: string;
}

export interface ErrorBody {
  code: string;
  message: string;
}

export interface Response {
  id: number;
  ok: boolean;
  result?: unknown;
  error?: ErrorBody;
}

export interface CameraParams {
  position: [number, number, number];
  target: [number, number, number];
  up: [number, number, number];
  vfov_degrees: number;
  viewport: [number, number];
}

export interface ServerState {
  mode: Mode;
  color: [number, number, number, number];
  brush_radius: number;
  camera: CameraParams;
  image_size: [number, number];
  uv_size: [number, number];
  pending_image: number;
  pending_uv: number;
  groups: number;
  current_pic_points: number;
  current_word_points: number;
  f: number;
  brush_min: number;
  brush_max: number;
}

export interface TextureSnapshot {
  canvas: CanvasName;
  width: number;
  height: number;
  /** base64 PNG */
  png: string;
}

export interface MeshData {
  vertices: number[][];
  uvs: number[][];
  triangles: number[][];
}

/** Server-reported failure, carrying the protocol error code. */
export class ServerError extends Error {
  readonly code: string;

  constructor(body: ErrorBody) {
    super(`${body.code}: ${body.message}`);
    this.name = "ServerError";
    this.code = body.code;
  }
}

/**
 * Splits an incoming byte stream into complete lines regardless of how the
 * transport chunks it. Carries partial lines across pushes.
 */
export class LineFramer {
  private buffer = "";

  push(chunk: string): string[] {
    this.buffer += chunk;
    const lines = this.buffer.split("\n");
    this.buffer = lines.pop() ?? "";
    return lines.filter((line) => line.length > 0);
  }
}

/** Minimal byte transport so the client core stays runtime-agnostic. */
export interface Transport {
  send(text: string): void;
  onData(handler: (chunk: string) => void): void;
  onClose(handler: () => void): void;
  close(): void;
}

export function connectTcp(host: string, port: number): Promise<Transport> {
  return new Promise((resolve, reject) => {
    const socket = net.createConnection({ host, port });
    socket.setEncoding("utf8");
    socket.once("error", reject);
    socket.once("connect", () => {
      socket.removeListener("error", reject);
      resolve({
        send: (text) => socket.write(text),
        onData: (handler) => socket.on("data", handler),
        onClose: (handler) => {
          socket.on("close", handler);
          socket.on("error", () => socket.destroy());
        },
        close: () => socket.destroy(),
      });
    });
  });
}

interface PendingCall {
  resolve: (result: unknown) => void;
  reject: (error: Error) => void;
}

/**
 * Promise-based protocol client. call() resolves with the command's result
 * or rejects with a ServerError; dirty events stream to the registered
 * handler in arrival (seq) order, always before the triggering response.
 */
export class UVLinkClient {
  private framer = new LineFramer();
  private pending = new Map<number, PendingCall>();
  private nextId = 1;
  private dirtyHandlers: Array<(event: DirtyEvent) => void> = [];
  private closed = false;

  constructor(private transport: Transport) {
    transport.onData((chunk) => this.handleChunk(chunk));
    transport.onClose(() => this.handleClose());
  }

  static async connect(host: string, port: number): Promise<UVLinkClient> {
    return new UVLinkClient(await connectTcp(host, port));
  }

  onDirty(handler: (event: DirtyEvent) => void): void {
    this.dirtyHandlers.push(handler);
  }

  call(cmd: string, params: Record<string, unknown> = {}): Promise<unknown> {
    if (this.closed) {
      return Promise.reject(new Error("connection closed"));
    }
    const id = this.nextId++;
    const promise = new Promise<unknown>((resolve, reject) => {
      this.pending.set(id, { resolve, reject });
    });
    this.transport.send(JSON.stringify({ id, cmd, params }) + "\n");
    return promise;
  }

  // typed conveniences for the commands the UI uses constantly

  getState(): Promise<ServerState> {
    return this.call("get_state") as Promise<ServerState>;
  }

  getTexture(canvas: CanvasName): Promise<TextureSnapshot> {
    return this.call("get_texture", { canvas }) as Promise<TextureSnapshot>;
  }

  getMesh(): Promise<MeshData> {
    return this.call("get_mesh") as Promise<MeshData>;
  }

  close(): void {
    this.closed = true;
    this.transport.close();
  }

  private handleChunk(chunk: string): void {
    for (const line of this.framer.push(chunk)) {
      let message: Record<string, unknown>;
      try {
        message = JSON.parse(line);
      } catch {
        continue; // a torn line on teardown is not worth crashing over
      }
      if (message.event === "dirty") {
        const event = message as unknown as DirtyEvent;
        for (const handler of this.dirtyHandlers) {
          handler(event);
        }
        continue;
      }
      const response = message as unknown as Response;
      const call = this.pending.get(response.id);
      if (!call) {
        continue;
      }
      this.pending.delete(response.id);
      if (response.ok) {
        call.resolve(response.result);
      } else {
        call.reject(new ServerError(response.error as ErrorBody));
      }
    }
  }

  private handleClose(): void {
    this.closed = true;
    for (const [, call] of this.pending) {
      call.reject(new Error("connection closed"));
    }
    this.pending.clear();
  }
}
