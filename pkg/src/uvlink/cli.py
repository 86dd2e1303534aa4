"""The uvlink command line: inspect meshes, run scripts, verify, serve.

Exit codes are stable and documented: 0 success, 2 usage errors (from
argparse), 3 input loading failures, 4 script parse or execution failures,
5 verification failures.  Set UVLINK_LOG=DEBUG (or any logging level name)
for diagnostics on stderr.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

import numpy as np

from . import canvas as canvaslib
from . import persistence, verify
from .errors import UVLinkError
from .relation import DEFAULT_F
from .server import UVLinkServer
from .session import SessionConfig, new_session, run_script

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_LOAD = 3
EXIT_SCRIPT = 4
EXIT_VERIFY = 5

log = logging.getLogger("uvlink.cli")


def _configure_logging() -> None:
    level_name = os.environ.get("UVLINK_LOG", "WARNING").upper()
    level = getattr(logging, level_name, None)
    if not isinstance(level, int):
        level = logging.WARNING
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")


def _stage_error(stage: str, exc: BaseException, code: int) -> int:
    print(f"uvlink: {stage}: {exc}", file=sys.stderr)
    return code


def _session_config(args) -> SessionConfig:
    return SessionConfig(uv_canvas_size=(args.uv_size, args.uv_size), f=args.f)


def _load_image(args) -> tuple[np.ndarray, np.ndarray | None]:
    if args.image:
        image = persistence.import_png(args.image)
    else:
        size = args.image_size
        image = np.empty((size, size, 4), dtype=np.uint8)
        image[:] = canvaslib.WHITE
    overlay = persistence.import_png(args.overlay) if args.overlay else None
    return image, overlay


def _add_session_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--mesh", required=True, help="UV-mapped OBJ file")
    parser.add_argument("--image", help="front-view PNG for the image canvas "
                                        "(default: white)")
    parser.add_argument("--overlay", help="line-art PNG composited over the image canvas")
    parser.add_argument("--f", type=float, default=DEFAULT_F,
                        help="fill matching distance in pixels (default %(default)s)")
    parser.add_argument("--uv-size", type=int, default=1024,
                        help="UV canvas edge length (default %(default)s)")
    parser.add_argument("--image-size", type=int, default=1024,
                        help="image canvas edge length when no --image is given")


def cmd_inspect(args) -> int:
    try:
        mesh = persistence.load_obj(args.mesh)
    except (UVLinkError, OSError, ValueError) as exc:
        return _stage_error("inspect", exc, EXIT_LOAD)
    lo, hi = mesh.bounds()
    areas = mesh.triangle_areas()
    degenerate = int(np.count_nonzero(areas <= 0.0))
    uv_lo = mesh.uvs.min(axis=0)
    uv_hi = mesh.uvs.max(axis=0)
    print(f"mesh: {args.mesh}")
    print(f"vertices: {len(mesh.vertices)}")
    print(f"triangles: {len(mesh.triangles)}")
    print(f"bounds: ({lo[0]:.6g}, {lo[1]:.6g}, {lo[2]:.6g}) .. "
          f"({hi[0]:.6g}, {hi[1]:.6g}, {hi[2]:.6g})")
    print(f"uv bounds: ({uv_lo[0]:.6g}, {uv_lo[1]:.6g}) .. ({uv_hi[0]:.6g}, {uv_hi[1]:.6g})")
    print(f"degenerate triangles: {degenerate}")
    return EXIT_OK


def cmd_run(args) -> int:
    try:
        mesh = persistence.load_obj(args.mesh)
        image, overlay = _load_image(args)
    except (UVLinkError, OSError, ValueError) as exc:
        return _stage_error("load", exc, EXIT_LOAD)
    try:
        script = persistence.parse_script(args.script)
    except (UVLinkError, OSError, ValueError) as exc:
        return _stage_error("script", exc, EXIT_SCRIPT)
    try:
        session = new_session(_session_config(args), mesh, image, overlay)
    except (UVLinkError, ValueError) as exc:
        return _stage_error("session", exc, EXIT_LOAD)
    if script.camera is not None:
        session.camera = script.camera

    transcript = run_script(
        session, script.commands,
        continue_on_error=args.continue_on_error or script.continue_on_error,
    )

    out = Path(args.out)
    try:
        os.makedirs(out, exist_ok=True)
        persistence.export_png(canvaslib.composite(session.image_canvas), out / "image.png")
        persistence.export_png(canvaslib.composite(session.uv_canvas), out / "uv.png")
        persistence.save_relations(session.relations, out / "session.relations.json")
        persistence.export_colored_model(
            session.mesh, canvaslib.composite(session.uv_canvas), out / "model")
        persistence.save_transcript(transcript, out / "transcript.json")
    except OSError as exc:
        return _stage_error("export", exc, EXIT_LOAD)

    ran = len(transcript.entries)
    print(f"ran {ran} command(s), {len(transcript.failures)} failure(s); wrote {out}")
    for entry in transcript.entries:
        if not entry.ok:
            print(f"  [{entry.index}] {entry.op}: {entry.error_code}: {entry.error}")
    if not transcript.completed:
        return _stage_error("script", f"aborted at command {ran - 1}", EXIT_SCRIPT)
    return EXIT_OK


def cmd_verify(args) -> int:
    names = [args.suite] if args.suite else None
    try:
        results = verify.run_suites(names, f_override=args.f_override)
    except KeyError as exc:
        return _stage_error("verify", exc.args[0], EXIT_USAGE)
    print(verify.format_table(results))
    return EXIT_OK if all(r.ok for r in results) else EXIT_VERIFY


def cmd_serve(args) -> int:
    try:
        mesh = persistence.load_obj(args.mesh)
        image, overlay = _load_image(args)
        config = _session_config(args)
        factory = lambda: new_session(config, mesh, image, overlay)
        server = UVLinkServer(factory, host=args.host, port=args.port)
    except (UVLinkError, OSError, ValueError) as exc:
        return _stage_error("serve", exc, EXIT_LOAD)
    print(f"uvlink serve listening on {server.address[0]}:{server.port}", flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.close()
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="uvlink",
        description="Paint 3D models through 2D image regions, headlessly.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_inspect = sub.add_parser("inspect", help="report mesh statistics")
    p_inspect.add_argument("mesh", help="OBJ file to inspect")
    p_inspect.set_defaults(func=cmd_inspect)

    p_run = sub.add_parser("run", help="run a paint script headlessly and export results")
    _add_session_flags(p_run)
    p_run.add_argument("--script", required=True, help="JSON command script")
    p_run.add_argument("--out", required=True, help="output directory")
    p_run.add_argument("--continue-on-error", action="store_true",
                       help="run every command even after failures")
    p_run.set_defaults(func=cmd_run)

    p_verify = sub.add_parser("verify", help="run built-in oracle suites")
    p_verify.add_argument("--suite", choices=sorted(verify.SUITES),
                          help="run a single suite instead of all of them")
    p_verify.add_argument("--f-override", type=float, default=None,
                          help="test the f-threshold suite at one specific f")
    p_verify.set_defaults(func=cmd_verify)

    p_serve = sub.add_parser("serve", help="serve a live session over TCP")
    _add_session_flags(p_serve)
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=0,
                         help="TCP port; 0 picks a free one (printed on startup)")
    p_serve.set_defaults(func=cmd_serve)
    return parser


def main(argv=None) -> int:
    _configure_logging()
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
