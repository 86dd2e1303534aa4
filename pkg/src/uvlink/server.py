"""Live-session protocol: newline-delimited JSON over a local TCP socket.

One request line in, one response line out, with dirty-rect event lines
pushed between a mutating request and its response.  The framing is plain
enough for a browser bridge, a Node client, or netcat.

Wire shapes:
    request   {"id": 7, "cmd": "stroke_image", "params": {...}}
    response  {"id": 7, "ok": true, "result": {...}}
              {"id": 7, "ok": false, "error": {"code": "RANGE", "message": "..."}}
    event     {"event": "dirty", "seq": 12, "canvas": "uv",
               "rect": [x, y, w, h], "data": "<base64 RGBA rows>"}

Every request gets exactly one response with a matching id; failed commands
emit no events; event sequence numbers only ever increase.
"""

from __future__ import annotations

import base64
import io
import json
import logging
import socket
import threading

import numpy as np

from . import canvas as canvaslib
from . import persistence
from .errors import UVLinkError
from .session import COMMAND_OPS, Command, Session, apply, camera_to_dict, error_code

log = logging.getLogger("uvlink.serve")

#: Commands handled by the server itself rather than the session engine.
META_COMMANDS = frozenset({"get_texture", "get_mesh", "get_state", "new_session", "shutdown"})


def _jsonable(value):
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    raise TypeError(f"not JSON serializable: {type(value).__name__}")


def _encode(message: dict) -> bytes:
    return (json.dumps(message, default=_jsonable) + "\n").encode("utf-8")


class UVLinkServer:
    """Serves one painting session to one client at a time.

    The session outlives connections: a client that drops and reconnects sees
    the same canvases and relations until someone sends new_session.
    """

    def __init__(self, session_factory, host: str = "127.0.0.1", port: int = 0):
        self._factory = session_factory
        self.session: Session = session_factory()
        self._listener = socket.create_server((host, port))
        # a blocking accept cannot be interrupted from another thread, so
        # poll with a timeout and let close() also tear down the live client
        self._listener.settimeout(0.5)
        self.address = self._listener.getsockname()[:2]
        self._seq = 0
        self._shutdown = threading.Event()
        self._client: socket.socket | None = None

    @property
    def port(self) -> int:
        return self.address[1]

    def serve_forever(self) -> None:
        log.info("listening on %s:%d", *self.address)
        try:
            while not self._shutdown.is_set():
                try:
                    conn, peer = self._listener.accept()
                except socket.timeout:
                    continue
                except OSError:
                    break
                log.info("client connected from %s:%d", *peer[:2])
                conn.settimeout(None)
                self._client = conn
                try:
                    self._serve_client(conn)
                finally:
                    self._client = None
                    conn.close()
                    log.info("client disconnected")
        finally:
            self.close()

    def start_background(self) -> threading.Thread:
        thread = threading.Thread(target=self.serve_forever, daemon=True)
        thread.start()
        return thread

    def close(self) -> None:
        self._shutdown.set()
        try:
            self._listener.close()
        except OSError:
            pass
        client = self._client
        if client is not None:
            try:
                client.shutdown(socket.SHUT_RDWR)
            except OSError:
                pass

    # ------------------------------------------------------------------

    def _serve_client(self, conn: socket.socket) -> None:
        reader = conn.makefile("rb")
        try:
            for raw in reader:
                line = raw.strip()
                if not line:
                    continue
                for message in self.handle_line(line):
                    conn.sendall(_encode(message))
                if self._shutdown.is_set():
                    break
        except (OSError, ValueError):
            pass  # client went away mid-write; the accept loop continues
        finally:
            reader.close()

    def handle_line(self, line: bytes) -> list[dict]:
        """Process one request line; returns events followed by the response."""
        request_id = None
        try:
            request = json.loads(line)
            if not isinstance(request, dict):
                raise ValueError("request must be a JSON object")
            request_id = request.get("id")
            cmd = request["cmd"]
            params = request.get("params") or {}
            if not isinstance(params, dict):
                raise ValueError("params must be an object")
        except (json.JSONDecodeError, KeyError, ValueError) as exc:
            return [_error_response(request_id, "BAD_REQUEST", f"malformed request: {exc}")]
        return self.handle_request(request_id, cmd, params)

    def handle_request(self, request_id, cmd: str, params: dict) -> list[dict]:
        log.debug("request %r cmd=%s", request_id, cmd)
        try:
            if cmd in META_COMMANDS:
                result = getattr(self, "_meta_" + cmd)(params)
                return [_ok_response(request_id, result)]
            if cmd not in COMMAND_OPS:
                return [_error_response(request_id, "BAD_REQUEST", f"unknown command {cmd!r}")]
            result = apply(self.session, Command(cmd, dict(params)))
        except Exception as exc:  # every failure becomes a typed error response
            code = error_code(exc)
            if code == "INTERNAL":
                log.exception("internal error in %s", cmd)
            return [_error_response(request_id, code, str(exc))]
        events = [self._dirty_event(rect) for rect in result.dirty]
        return events + [_ok_response(request_id, result.data)]

    def _dirty_event(self, rect) -> dict:
        composited = self._composite(rect.canvas)
        region = composited[rect.y:rect.y + rect.h, rect.x:rect.x + rect.w]
        self._seq += 1
        return {
            "event": "dirty",
            "seq": self._seq,
            "canvas": rect.canvas,
            "rect": [rect.x, rect.y, rect.w, rect.h],
            "data": base64.b64encode(np.ascontiguousarray(region).tobytes()).decode("ascii"),
        }

    def _composite(self, which: str) -> np.ndarray:
        target = self.session.image_canvas if which == "image" else self.session.uv_canvas
        return canvaslib.composite(target)

    # ------------------------------------------------------------------
    # meta commands

    def _meta_get_texture(self, params: dict) -> dict:
        which = params.get("canvas", "image")
        if which not in ("image", "uv"):
            raise ValueError(f"canvas must be 'image' or 'uv', not {which!r}")
        composited = self._composite(which)
        buf = io.BytesIO()
        persistence.export_png(composited, buf)
        height, width = composited.shape[:2]
        return {
            "canvas": which,
            "width": width,
            "height": height,
            "png": base64.b64encode(buf.getvalue()).decode("ascii"),
        }

    def _meta_get_mesh(self, params: dict) -> dict:
        mesh = self.session.mesh
        return {
            "vertices": mesh.vertices.tolist(),
            "uvs": mesh.uvs.tolist(),
            "triangles": mesh.triangles.tolist(),
        }

    def _meta_get_state(self, params: dict) -> dict:
        session = self.session
        return {
            "mode": session.mode.value,
            "color": list(session.color),
            "brush_radius": session.brush_radius,
            "camera": camera_to_dict(session.camera),
            "image_size": [session.image_canvas.width, session.image_canvas.height],
            "uv_size": [session.uv_canvas.width, session.uv_canvas.height],
            "pending_image": len(session.image_canvas.pending),
            "pending_uv": len(session.uv_canvas.pending),
            "groups": len(session.relations.groups),
            "current_pic_points": len(session.current_group.pic_points),
            "current_word_points": len(session.current_group.word_points),
            "f": session.relations.f,
            "brush_min": session.config.brush_min,
            "brush_max": session.config.brush_max,
        }

    def _meta_new_session(self, params: dict) -> dict:
        self.session = self._factory()
        return self._meta_get_state({})

    def _meta_shutdown(self, params: dict) -> dict:
        self._shutdown.set()
        # Wake the accept loop; the in-progress client loop exits after replying.
        try:
            self._listener.close()
        except OSError:
            pass
        return {"stopping": True}


def _ok_response(request_id, result) -> dict:
    return {"id": request_id, "ok": True, "result": result}


def _error_response(request_id, code: str, message: str) -> dict:
    return {"id": request_id, "ok": False, "error": {"code": code, "message": message}}


class ServeClient:
    """Minimal blocking client for tests, demos, and scripting.

    Collects pushed events on the side; request() returns once the matching
    response arrives.
    """

    def __init__(self, host: str, port: int, timeout: float = 10.0):
        self._sock = socket.create_connection((host, port), timeout=timeout)
        self._reader = self._sock.makefile("rb")
        self._next_id = 1
        self.events: list[dict] = []

    def request(self, cmd: str, params: dict | None = None) -> dict:
        request_id = self._next_id
        self._next_id += 1
        payload = {"id": request_id, "cmd": cmd, "params": params or {}}
        self._sock.sendall(_encode(payload))
        while True:
            line = self._reader.readline()
            if not line:
                raise ConnectionError("server closed the connection")
            message = json.loads(line)
            if message.get("event"):
                self.events.append(message)
                continue
            if message.get("id") != request_id:
                raise UVLinkError(f"response id {message.get('id')!r} != {request_id}")
            return message

    def call(self, cmd: str, params: dict | None = None) -> dict:
        """request() that raises on error responses and unwraps the result."""
        response = self.request(cmd, params)
        if not response["ok"]:
            error = response["error"]
            raise UVLinkError(f"{error['code']}: {error['message']}")
        return response["result"]

    def close(self) -> None:
        try:
            self._reader.close()
        finally:
            self._sock.close()

    def __enter__(self) -> "ServeClient":
        return self

    def __exit__(self, *exc) -> None:
        self.close()
