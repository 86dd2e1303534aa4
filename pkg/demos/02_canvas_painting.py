"""
Brush stamps, pending strokes, and the revoke/commit split
==========================================================

Paints onto an RGBA canvas with hard-edged disc stamps. New stamps stay in a
pending list so a whole stroke can be revoked; committing folds them into the
base image without changing a single pixel of the composite.
"""

import warnings

import numpy as np

import uvlink

canvas = uvlink.create_canvas(256, 256)  # opaque white
red = (220, 40, 40, 255)
blue = (40, 80, 220, 255)

# a stroke is just a run of stamps; radius is in pixels
for x in range(40, 200, 12):
    uvlink.add_pending_stamp(canvas, uvlink.BrushStamp((x, 100), 9, red))
print(f"pending after stroke: {len(canvas.pending)}")

# the composite shows base + pending, newest on top
frame = uvlink.composite(canvas)
print(f"center pixel while pending: {tuple(int(c) for c in frame[100, 120])}")

# revoking throws away everything not yet committed
removed = uvlink.revoke_pending(canvas)
frame = uvlink.composite(canvas)
print(f"revoked {removed} stamps, center back to {tuple(int(c) for c in frame[100, 120])}")

# paint again, then keep it: commit rasterizes in stroke order
for x in range(40, 200, 12):
    uvlink.add_pending_stamp(canvas, uvlink.BrushStamp((x, 100), 9, red))
uvlink.add_pending_stamp(canvas, uvlink.BrushStamp((120, 100), 9, blue))
before = uvlink.composite(canvas)
uvlink.commit_pending(canvas)
after = uvlink.composite(canvas)
print(f"commit changed pixels: {not np.array_equal(before, after)}")
print(f"blue stays on top after commit: {tuple(int(c) for c in canvas.base[100, 120])}")

# a soft limit warns when a stroke gets very long, but never blocks painting
crowded = uvlink.create_canvas(64, 64, warn_threshold=10)
with warnings.catch_warnings(record=True) as caught:
    warnings.simplefilter("always")
    for i in range(15):
        uvlink.add_pending_stamp(crowded, uvlink.BrushStamp((32, 32), 3, red))
print(f"warned once at stamp 11: {len(caught) == 1}, "
      f"all 15 kept: {len(crowded.pending) == 15}")
