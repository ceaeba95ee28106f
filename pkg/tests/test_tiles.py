#!/usr/bin/env python3
"""
测试 Morse 瓦片模型

验证：
1. 瓦片不变量与 make_tile 的规范化
2. 分类（基本 / 正则 / 临界）与 θ
3. 开面集合与点集语义的相等性
4. 相对（上）同调的闭式公式与直接计算一致
"""

import sys
import os

import pytest

# 添加项目根目录到Python路径
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from morse_shelling.simplicial import INTEGERS, RATIONALS, CoefficientRing, Simplex
from morse_shelling.tiles import (
    MorseTile,
    TileKind,
    TileValidationError,
    classify,
    enumerate_tiles,
    make_tile,
    open_faces,
    relative_homology_bruteforce,
    relative_homology_closed_form,
    theta,
)

GF2 = CoefficientRing.prime_field(2)
GF3 = CoefficientRing.prime_field(3)

TRIANGLE = Simplex((0, 1, 2))
TETRAHEDRON = Simplex((0, 1, 2, 3))


def test_theta():
    """θ 是被去掉的面的对顶点张成的面"""
    assert theta(MorseTile(TRIANGLE, {0})) == Simplex((0,))
    assert theta(MorseTile(TRIANGLE)) is None

    tile = MorseTile(TETRAHEDRON, {1, 2})
    assert theta(tile) == Simplex((1, 2))
    assert theta(tile).dimension == 1


def test_classify_examples():
    """分类的几个典型情形"""
    closed = classify(MorseTile(TRIANGLE))
    assert closed.kind is TileKind.CRITICAL and closed.index == 0

    open_triangle = classify(MorseTile(TRIANGLE, {0, 1, 2}))
    assert open_triangle.is_critical and open_triangle.index == 2

    basic = classify(MorseTile(TRIANGLE, {0}))
    assert basic.kind is TileKind.BASIC
    assert basic.index is None
    assert str(basic) == "basic"

    critical_with_face = classify(MorseTile(TETRAHEDRON, {0}, Simplex((0,))))
    assert critical_with_face.is_critical and critical_with_face.index == 1
    assert str(critical_with_face) == "critical(index=1)"

    regular = classify(MorseTile(TETRAHEDRON, {0}, Simplex((0, 1))))
    assert regular.kind is TileKind.REGULAR
    assert str(regular) == "regular-with-face"


def test_invalid_tile_lists_every_violation():
    """所有被违反的条件都要列出来"""
    with pytest.raises(TileValidationError) as excinfo:
        MorseTile(TRIANGLE, {0, 1, 2}, Simplex((3,)))
    assert len(excinfo.value.violations) == 3


@pytest.mark.parametrize("simplex,removed,morse_face", [
    (TRIANGLE, {5}, None),                    # 对顶点不在单纯形里
    (TRIANGLE, (), Simplex((0,))),            # k = 0 带 Morse 面
    (TRIANGLE, {0}, Simplex((0, 1))),         # Morse 面余维不够
    (TETRAHEDRON, {0, 1}, Simplex((0, 2))),   # θ 不含于 μ
])
def test_invalid_tiles(simplex, removed, morse_face):
    with pytest.raises(TileValidationError):
        MorseTile(simplex, removed, morse_face)


def test_tile_is_immutable():
    tile = MorseTile(TRIANGLE, {0})
    with pytest.raises(AttributeError):
        tile.removed = frozenset()
    with pytest.raises(AttributeError):
        tile.open_faces = frozenset()
    # 开面集合只算一次，修改尝试之后仍是同一个对象
    faces = tile.open_faces
    assert tile.open_faces is faces
    assert len(faces) == 4


def test_make_tile_normalizes_open_simplex():
    """(k = n, μ = θ) 与开单纯形是同一个点集，统一写成 k = n+1"""
    tile = make_tile([2, 0, 1], [0, 1], [1, 0])
    assert tile.removed == frozenset({0, 1, 2})
    assert tile.morse_face is None
    assert tile == MorseTile(TRIANGLE, {0, 1, 2})
    assert classify(tile).index == 2


def test_make_tile_empty_morse_face_means_absent():
    tile = make_tile([0, 1, 2], [0], [])
    assert tile.is_basic


def test_open_faces():
    """Δ_2 去掉顶点 0 对面的边：恰好是含顶点 0 的 4 个面"""
    faces = open_faces(MorseTile(TRIANGLE, {0}))
    assert len(faces) == 4
    assert all(0 in face for face in faces)

    # 临界指标 1：含 0 但不等于 {0}
    critical = MorseTile(TETRAHEDRON, {0}, Simplex((0,)))
    assert len(critical.open_faces) == 7
    assert Simplex((0,)) not in critical.open_faces

    assert len(MorseTile(TRIANGLE).open_faces) == 7
    assert MorseTile(TRIANGLE, {0, 1, 2}).open_faces == frozenset({TRIANGLE})


def test_point_set_equality():
    """闭顶点和开顶点是同一个点集"""
    closed_vertex = MorseTile(Simplex((5,)))
    open_vertex = MorseTile(Simplex((5,)), {5})
    assert closed_vertex == open_vertex
    assert hash(closed_vertex) == hash(open_vertex)
    assert classify(closed_vertex) == classify(open_vertex)

    assert MorseTile(TRIANGLE, {0}) != MorseTile(TRIANGLE, {1})


def test_basic_tile_lowest_face_is_theta():
    """k > 0 的基本瓦片恰好含一个 k-1 维开面，且没有更低维的开面"""
    for tile in enumerate_tiles(4):
        if not tile.is_basic or tile.order == 0:
            continue
        lowest = min(face.dimension for face in tile.open_faces)
        assert lowest == tile.order - 1
        assert [f for f in tile.open_faces if f.dimension == lowest] == [tile.theta]


def test_enumerate_tiles_counts():
    symmetric = {n: len(list(enumerate_tiles(n, up_to_symmetry=True))) for n in range(7)}
    assert symmetric == {0: 2, 1: 3, 2: 5, 3: 10, 4: 22, 5: 49, 6: 107}
    assert sum(symmetric.values()) == 198

    full = {n: len(list(enumerate_tiles(n))) for n in range(6)}
    assert full == {0: 2, 1: 4, 2: 11, 3: 38, 4: 137, 5: 480}
    assert sum(full.values()) == 672


def test_enumerated_tiles_are_distinct_point_sets():
    """n ≥ 1 时枚举出的瓦片两两是不同的点集"""
    for n in range(1, 5):
        tiles = list(enumerate_tiles(n))
        assert len(set(tiles)) == len(tiles)


def test_closed_form_examples():
    assert relative_homology_closed_form(MorseTile(TRIANGLE, {0}), INTEGERS).is_zero
    table = relative_homology_closed_form(MorseTile(TETRAHEDRON, {0}, Simplex((0,))), INTEGERS)
    assert table.ranks() == [0, 1]
    open_table = relative_homology_closed_form(MorseTile(TRIANGLE, {0, 1, 2}), RATIONALS, True)
    assert open_table.cohomological
    assert open_table.ranks() == [0, 0, 1]


@pytest.mark.parametrize("ring", [INTEGERS, RATIONALS, GF2, GF3], ids=str)
@pytest.mark.parametrize("cohomological", [False, True])
def test_closed_form_matches_bruteforce_all_tiles(ring, cohomological):
    """所有维数 ≤ 5 的瓦片（不取对称，共 672 个）在四种系数下闭式 = 直接计算"""
    checked = 0
    for n in range(6):
        for tile in enumerate_tiles(n):
            expected = relative_homology_bruteforce(tile, ring, cohomological)
            assert relative_homology_closed_form(tile, ring, cohomological) == expected, tile
            checked += 1
    assert checked >= 500


@pytest.mark.parametrize("ring", [INTEGERS, RATIONALS, GF2, GF3], ids=str)
@pytest.mark.parametrize("cohomological", [False, True])
def test_closed_form_matches_bruteforce_up_to_symmetry(ring, cohomological):
    """维数 ≤ 6 的瓦片（取对称代表）在四种系数下闭式 = 直接计算"""
    for n in range(7):
        for tile in enumerate_tiles(n, up_to_symmetry=True):
            expected = relative_homology_bruteforce(tile, ring, cohomological)
            assert relative_homology_closed_form(tile, ring, cohomological) == expected, tile
