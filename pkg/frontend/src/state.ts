/**
 * View-model for the painting interface: connection status, the session
 * facts mirrored from get_state, and the per-mode control layout.
 */

import type { Mode, ServerState } from "./protocol.js";

export type ConnectionStatus = "disconnected" | "connecting" | "connected";

export type Rgb = [number, number, number];

export interface UiState {
  status: ConnectionStatus;
  mode: Mode;
  color: Rgb;
  brushRadius: number;
  brushMin: number;
  brushMax: number;
  groups: number;
  pendingImage: number;
  pendingUv: number;
  currentPicPoints: number;
  currentWordPoints: number;
  imageSize: [number, number];
  uvSize: [number, number];
}

export function initialState(): UiState {
  return {
    status: "disconnected",
    mode: "creator",
    color: [0, 0, 0],
    brushRadius: 32,
    brushMin: 1,
    brushMax: 32,
    groups: 0,
    pendingImage: 0,
    pendingUv: 0,
    currentPicPoints: 0,
    currentWordPoints: 0,
    imageSize: [0, 0],
    uvSize: [0, 0],
  };
}

/** Fold a get_state result into the view-model. */
export function applyServerState(state: UiState, server: ServerState): UiState {
  return {
    ...state,
    status: "connected",
    mode: server.mode,
    color: [server.color[0], server.color[1], server.color[2]],
    brushRadius: server.brush_radius,
    brushMin: server.brush_min,
    brushMax: server.brush_max,
    groups: server.groups,
    pendingImage: server.pending_image,
    pendingUv: server.pending_uv,
    currentPicPoints: server.current_pic_points,
    currentWordPoints: server.current_word_points,
    imageSize: server.image_size,
    uvSize: server.uv_size,
  };
}

export interface ControlLayout {
  modeMenu: boolean;
  colorPanel: boolean;
  revokeButton: boolean;
  saveButton: boolean;
  brushSlider: boolean;
  backButton: boolean;
}

/**
 * Which controls a mode shows. The user view is fill-only: it keeps the
 * color panel and navigation but loses revoke, save, and the brush slider,
 * since those only make sense while authoring regions.
 */
export function controlLayout(mode: Mode): ControlLayout {
  const creator = mode === "creator";
  return {
    modeMenu: true,
    colorPanel: true,
    revokeButton: creator,
    saveButton: creator,
    brushSlider: creator,
    backButton: true,
  };
}

/** True when switching away from creator mode would drop unsaved marks. */
export function hasUnsavedWork(state: UiState): boolean {
  return state.pendingImage > 0 || state.pendingUv > 0;
}
