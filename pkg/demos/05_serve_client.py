"""
Talking to a painting session over the wire protocol
====================================================

Starts the TCP server in-process on an ephemeral port and drives it with the
bundled client. Every mutating command is acknowledged with a response, and
any pixels it touched arrive first as dirty-rect events carrying raw RGBA
patches, which is all a remote canvas needs to stay in sync.
"""

import base64

import numpy as np

import uvlink
from uvlink.server import ServeClient, UVLinkServer


def make_session() -> uvlink.Session:
    mesh = uvlink.lat_long_sphere()
    image = np.full((256, 256, 4), 255, dtype=np.uint8)
    return uvlink.new_session(
        uvlink.SessionConfig(uv_canvas_size=(256, 256)), mesh, image)


server = UVLinkServer(make_session, host="127.0.0.1", port=0)
server.start_background()
host, port = server.address
print(f"serving on {host}:{port}")

with ServeClient(host, port) as client:
    state = client.call("get_state")
    print(f"state: mode={state['mode']}, image={state['image_size']}")

    # a stroke comes back as dirty events, then the command's own response
    client.call("set_color", {"color": [255, 120, 0]})
    before = len(client.events)
    result = client.call("stroke_image", {"points": [[64, 64], [80, 64]]})
    events = client.events[before:]
    print(f"stroke result {result}, {len(events)} dirty event(s)")
    for event in events:
        x, y, w, h = event["rect"]
        patch = np.frombuffer(base64.b64decode(event["data"]),
                              dtype=np.uint8).reshape(h, w, 4)
        print(f"  {event['canvas']} rect {x},{y} {w}x{h}, "
              f"center texel {tuple(int(c) for c in patch[h // 2, w // 2])}")

    # errors arrive as structured codes instead of closed connections
    try:
        client.call("fill", {"point": [64, 64]})
    except uvlink.UVLinkError as exc:
        print(f"fill in creator mode failed as expected: {exc}")

    # full snapshots are available on demand as PNG
    texture = client.call("get_texture", {"canvas": "image"})
    png = base64.b64decode(texture["png"])
    print(f"image snapshot: {texture['width']}x{texture['height']}, "
          f"{len(png)} PNG bytes")

server.close()
print("server closed")
