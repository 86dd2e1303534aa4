import { describe, expect, it } from "vitest";

import type { ServerState } from "../src/protocol.js";
import {
  applyServerState,
  controlLayout,
  hasUnsavedWork,
  initialState,
} from "../src/state.js";

const SERVER_STATE: ServerState = {
  mode: "user",
  color: [10, 20, 30, 255],
  brush_radius: 12,
  camera: {
    position: [0, 0, 5],
    target: [0, 0, 0],
    up: [0, 1, 0],
    vfov_degrees: 60,
    viewport: [800, 800],
  },
  image_size: [640, 480],
  uv_size: [1024, 1024],
  pending_image: 3,
  pending_uv: 1,
  groups: 2,
  current_pic_points: 3,
  current_word_points: 1,
  f: 8,
  brush_min: 1,
  brush_max: 32,
};

describe("state", () => {
  it("starts disconnected with creator defaults", () => {
    const state = initialState();
    expect(state.status).toBe("disconnected");
    expect(state.mode).toBe("creator");
    expect(state.groups).toBe(0);
  });

  it("mirrors a get_state result", () => {
    const state = applyServerState(initialState(), SERVER_STATE);
    expect(state.status).toBe("connected");
    expect(state.mode).toBe("user");
    expect(state.color).toEqual([10, 20, 30]);
    expect(state.brushRadius).toBe(12);
    expect(state.imageSize).toEqual([640, 480]);
    expect(state.uvSize).toEqual([1024, 1024]);
    expect(state.groups).toBe(2);
    expect(state.pendingImage).toBe(3);
  });

  it("reports unsaved work from either canvas", () => {
    const state = applyServerState(initialState(), SERVER_STATE);
    expect(hasUnsavedWork(state)).toBe(true);
    expect(hasUnsavedWork({ ...state, pendingImage: 0, pendingUv: 0 })).toBe(false);
    expect(hasUnsavedWork({ ...state, pendingImage: 0 })).toBe(true);
  });
});

describe("controlLayout", () => {
  it("shows authoring controls only in creator mode", () => {
    const creator = controlLayout("creator");
    expect(creator.revokeButton).toBe(true);
    expect(creator.saveButton).toBe(true);
    expect(creator.brushSlider).toBe(true);
  });

  it("hides revoke, save, and the brush slider for users", () => {
    const user = controlLayout("user");
    expect(user.revokeButton).toBe(false);
    expect(user.saveButton).toBe(false);
    expect(user.brushSlider).toBe(false);
  });

  it("keeps navigation and color available in both modes", () => {
    for (const mode of ["creator", "user"] as const) {
      const layout = controlLayout(mode);
      expect(layout.modeMenu).toBe(true);
      expect(layout.colorPanel).toBe(true);
      expect(layout.backButton).toBe(true);
    }
  });
});
