export {
  CanvasName,
  CameraParams,
  DirtyEvent,
  ErrorBody,
  LineFramer,
  MeshData,
  Mode,
  Response,
  ServerError,
  ServerState,
  TextureSnapshot,
  Transport,
  UVLinkClient,
  connectTcp,
} from "./protocol.js";
export { CanvasStore, RasterBuffer, decodePatch } from "./raster.js";
export {
  ConnectionStatus,
  ControlLayout,
  Rgb,
  UiState,
  applyServerState,
  controlLayout,
  hasUnsavedWork,
  initialState,
} from "./state.js";
export { Point, clampRadius, hsvToRgb, resampleTrack, rgbToHsv } from "./brush.js";
export {
  OrbitState,
  defaultOrbit,
  fromCameraParams,
  orbitPosition,
  rotate,
  toCameraParams,
  zoom,
} from "./orbit.js";
export {
  ProjectedTriangle,
  projectMesh,
  projectPoint,
  shade,
  uvToPixel,
} from "./render.js";
export { PaintApp } from "./app.js";
