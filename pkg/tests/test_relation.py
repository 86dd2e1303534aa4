import numpy as np
import pytest

import uvlink
from uvlink import relation
from uvlink.errors import MissingDataError, RangeError

from .oracles import brute_force_matches, disc_pixels


def make_group(pics, words, radius=3):
    return uvlink.RelationGroup(
        pic_points=[uvlink.MarkerPoint(p, radius) for p in pics],
        word_points=[uvlink.MarkerPoint(p, radius) for p in words],
    )


@pytest.fixture
def relations():
    return uvlink.RelationSet((128, 128), (128, 128), f=8.0)


def test_marker_point_coerces_and_validates():
    marker = uvlink.MarkerPoint((3.0, 4.0), 2.0)
    assert marker.position == (3, 4)
    assert marker.radius == 2
    with pytest.raises(RangeError):
        uvlink.MarkerPoint((0, 0), 0)


def test_relation_set_requires_positive_f():
    for bad in (0.0, -1.0):
        with pytest.raises(RangeError):
            uvlink.RelationSet((10, 10), (10, 10), f=bad)


def test_record_markers_append_in_order():
    group = uvlink.RelationGroup()
    relation.record_image_marker(group, uvlink.BrushStamp((1, 2), 3, (0, 0, 0, 255)))
    relation.record_model_marker(group, uvlink.BrushStamp((4, 5), 6, (0, 0, 0, 255)))
    assert group.pic_points == [uvlink.MarkerPoint((1, 2), 3)]
    assert group.word_points == [uvlink.MarkerPoint((4, 5), 6)]
    assert not group.is_empty()


def test_save_group_assigns_sequential_ids(relations):
    first = uvlink.save_group(relations, make_group([(1, 1)], [(2, 2)]))
    second = uvlink.save_group(relations, make_group([(3, 3)], [(4, 4)]))
    assert (first, second) == (0, 1)
    assert [g.id for g in relations.groups] == [0, 1]


@pytest.mark.parametrize("pics,words", [([], [(1, 1)]), ([(1, 1)], [])])
def test_save_group_rejects_empty_side_without_mutating(relations, pics, words):
    uvlink.save_group(relations, make_group([(9, 9)], [(9, 9)]))
    next_id_before = relations._next_id
    with pytest.raises(MissingDataError, match="missing data"):
        uvlink.save_group(relations, make_group(pics, words))
    assert len(relations.groups) == 1
    assert relations._next_id == next_id_before


def test_have_point_is_strictly_less_than():
    group = make_group([(100, 100)], [(0, 0)])
    assert relation.have_point(group, (107, 100), 8.0)      # distance 7
    assert not relation.have_point(group, (108, 100), 8.0)  # distance 8, not < 8
    assert not relation.have_point(group, (109, 100), 8.0)  # distance 9


def test_have_point_any_marker_counts():
    group = make_group([(0, 0), (50, 50)], [(0, 0)])
    assert relation.have_point(group, (52, 50), 8.0)


def test_lookup_returns_ascending_ids(relations):
    uvlink.save_group(relations, make_group([(10, 10)], [(0, 0)]))
    uvlink.save_group(relations, make_group([(90, 90)], [(0, 0)]))
    uvlink.save_group(relations, make_group([(12, 10)], [(0, 0)]))
    assert uvlink.lookup_groups(relations, (11, 10)) == [0, 2]
    assert uvlink.lookup_groups(relations, (90, 91)) == [1]
    assert uvlink.lookup_groups(relations, (50, 50)) == []


def test_lookup_matches_brute_force_on_random_data():
    rng = np.random.default_rng(23)
    relations = uvlink.RelationSet((256, 256), (256, 256), f=11.5)
    for gid in range(30):
        group = make_group(
            [(int(rng.integers(0, 256)), int(rng.integers(0, 256)))
             for _ in range(int(rng.integers(1, 4)))],
            [(int(rng.integers(0, 256)), int(rng.integers(0, 256)))],
        )
        uvlink.save_group(relations, group)
    for _ in range(300):
        pos = (int(rng.integers(0, 256)), int(rng.integers(0, 256)))
        assert uvlink.lookup_groups(relations, pos) == \
            brute_force_matches(relations.groups, pos, relations.f)


def test_fill_recolors_all_markers_of_matched_groups(relations):
    uvlink.save_group(relations, make_group([(20, 20), (60, 20)], [(30, 100)], radius=4))
    image = uvlink.create_canvas(128, 128)
    uv = uvlink.create_canvas(128, 128)
    matched = uvlink.fill(relations, (22, 20), (255, 0, 0, 255), image, uv)
    assert matched == [0]
    for center in [(20, 20), (60, 20)]:
        for x, y in disc_pixels(center, 4, 128, 128):
            assert tuple(image.base[y, x]) == (255, 0, 0, 255)
    for x, y in disc_pixels((30, 100), 4, 128, 128):
        assert tuple(uv.base[y, x]) == (255, 0, 0, 255)


def test_fill_uses_stored_radius_not_current_brush(relations):
    uvlink.save_group(relations, make_group([(64, 64)], [(64, 64)], radius=2))
    image = uvlink.create_canvas(128, 128)
    uv = uvlink.create_canvas(128, 128)
    uvlink.fill(relations, (64, 64), (0, 255, 0, 255), image, uv)
    painted = int((image.base[:, :, 0] == 0).sum())
    assert painted == len(disc_pixels((64, 64), 2, 128, 128))


def test_fill_matches_every_group_in_range(relations):
    uvlink.save_group(relations, make_group([(40, 40)], [(10, 10)]))
    uvlink.save_group(relations, make_group([(44, 40)], [(20, 20)]))
    image = uvlink.create_canvas(128, 128)
    uv = uvlink.create_canvas(128, 128)
    matched = uvlink.fill(relations, (42, 40), (0, 0, 255, 255), image, uv)
    assert matched == [0, 1]


def test_fill_without_match_changes_nothing(relations):
    uvlink.save_group(relations, make_group([(20, 20)], [(30, 30)]))
    image = uvlink.create_canvas(128, 128)
    uv = uvlink.create_canvas(128, 128)
    before_image = image.base.copy()
    before_uv = uv.base.copy()
    assert uvlink.fill(relations, (100, 100), (255, 0, 0, 255), image, uv) == []
    assert np.array_equal(image.base, before_image)
    assert np.array_equal(uv.base, before_uv)


def test_fill_writes_to_base_not_pending(relations):
    uvlink.save_group(relations, make_group([(20, 20)], [(30, 30)]))
    image = uvlink.create_canvas(128, 128)
    uv = uvlink.create_canvas(128, 128)
    uvlink.fill(relations, (21, 20), (255, 0, 0, 255), image, uv)
    assert image.pending == [] and uv.pending == []
    assert tuple(image.base[20, 20]) == (255, 0, 0, 255)
