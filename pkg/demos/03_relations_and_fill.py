"""
Linking picture regions to texture regions, then filling by proximity
=====================================================================

A relation group pairs marker points on a reference picture with marker
points on the model's texture. A later fill click matches every group whose
picture markers lie within the threshold f, and recolors the linked texture
markers with the stamped radii they were saved with.
"""

import uvlink

image_size = (320, 240)
uv_size = (512, 512)
relations = uvlink.RelationSet(image_size, uv_size, f=8.0)

# group 0: a picture region near (60, 60) linked to the texture's top strip
uvlink.save_group(relations, uvlink.RelationGroup(
    pic_points=[uvlink.MarkerPoint((60, 60), 5), uvlink.MarkerPoint((72, 60), 5)],
    word_points=[uvlink.MarkerPoint((256, 40), 12)],
))

# group 1: a second picture region 40 px to the right, different texture strip
uvlink.save_group(relations, uvlink.RelationGroup(
    pic_points=[uvlink.MarkerPoint((100, 60), 5)],
    word_points=[uvlink.MarkerPoint((256, 200), 12)],
))
print(f"groups: {[g.id for g in relations.groups]}")

# matching is strict: a click must land strictly closer than f to any marker
# (52, 60) is exactly 8 px from the nearest marker, so it matches nothing
for click in [(66, 60), (68, 60), (96, 60), (52, 60)]:
    ids = uvlink.lookup_groups(relations, click)
    print(f"click {click} -> groups {ids}")

# a permissive threshold catches both regions at once
wide = uvlink.RelationSet(image_size, uv_size, f=50.0)
for group in relations.groups:
    uvlink.save_group(wide, uvlink.RelationGroup(
        pic_points=list(group.pic_points), word_points=list(group.word_points)))
print(f"same click, f=50 -> groups {uvlink.lookup_groups(wide, (66, 60))}")

# fill paints the matched groups' texture markers straight onto the canvases
image_canvas = uvlink.create_canvas(*image_size)
uv_canvas = uvlink.create_canvas(*uv_size)
matched = uvlink.fill(relations, (66, 60), (20, 160, 20, 255),
                      image_canvas, uv_canvas)
print(f"fill matched {matched}; texture marker now "
      f"{tuple(int(c) for c in uv_canvas.base[40, 256])}, untouched strip still "
      f"{tuple(int(c) for c in uv_canvas.base[200, 256])}")
