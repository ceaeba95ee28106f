#!/usr/bin/env python3
"""
测试 Morse 铺砌

验证：
1. 划分校验（未覆盖、重复覆盖、越界）
2. 闭性校验的局部形式与逐层形式一致
3. 壳化判定与失败前缀
4. 底层复形、临界瓦片计数
"""

import sys
import os
import itertools

import pytest

# 添加项目根目录到Python路径
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from morse_shelling.generators import boundary_delta_shelling, triangle_cycle
from morse_shelling.simplicial import Simplex, close_downward
from morse_shelling.tiles import MorseTile, enumerate_tiles
from morse_shelling.tiling import (
    CellSet,
    InvalidTilingError,
    MorseTiling,
    ShellingError,
    ShellingOrder,
    closedness_by_dimension,
    critical_index_counts,
    critical_tiles,
    is_shelling,
    require_shelling,
    require_valid,
    skeleton_cells,
    underlying_complex,
    validate,
    validate_closedness,
    validate_partition,
)


def vertex(v):
    return Simplex((v,))


def test_boundary_delta_is_valid():
    for n in range(5):
        tiling, order = boundary_delta_shelling(n)
        partition, closedness = validate(tiling)
        assert partition.ok and closedness.ok
        assert len(tiling) == n + 2
        assert len(order) == n + 2


def test_double_cover_is_reported():
    tiling = MorseTiling.from_tiles([
        MorseTile(Simplex((0, 1))),
        MorseTile(vertex(0)),
    ])
    report = validate_partition(tiling)
    assert not report.ok
    assert report.multiply_covered == ((vertex(0), (0, 1)),)
    with pytest.raises(InvalidTilingError) as excinfo:
        require_valid(tiling)
    assert not excinfo.value.partition.ok


def test_uncovered_and_outside_cells():
    edge = MorseTile(Simplex((0, 1)), {0})
    uncovered = MorseTiling.from_tiles([edge], cells=[vertex(0), vertex(1), Simplex((0, 1))])
    report = validate_partition(uncovered)
    assert report.uncovered == (vertex(1),)
    assert report.to_dict()["uncovered"] == [[1]]

    outside = MorseTiling.from_tiles([edge], cells=[Simplex((0, 1))])
    report = validate_partition(outside)
    assert report.outside_space == ((vertex(0), 0),)


def test_cell_set_rejects_foreign_cells():
    ambient = close_downward([Simplex((0, 1))])
    with pytest.raises(ValueError):
        CellSet(ambient, frozenset({vertex(9)}))


def test_empty_tiling():
    tiling = MorseTiling.from_tiles([])
    partition, closedness = validate(tiling)
    assert partition.ok and closedness.ok
    assert tiling.dimension == -1
    assert is_shelling(tiling, []).ok
    assert critical_index_counts(tiling) == {}


def test_closedness_violation():
    """闭顶点 {1} 加上去掉 {1} 的边：边的闭包落到了更低维的瓦片里"""
    tiling = MorseTiling.from_tiles([
        MorseTile(vertex(1)),
        MorseTile(Simplex((0, 1)), {0}),
    ])
    assert validate_partition(tiling).ok

    local = validate_closedness(tiling)
    assert not local.ok
    assert local.violations == ((1, vertex(1), 0),)

    layered = closedness_by_dimension(tiling)
    assert not layered.ok
    assert layered.violations == ((0, vertex(1), None),)

    with pytest.raises(InvalidTilingError) as excinfo:
        require_valid(tiling)
    assert not excinfo.value.closedness.ok


def _triangle_boundary_tilings():
    """∂Δ_2 的三条边各取一种形状，未覆盖的顶点补闭顶点"""
    edges = [Simplex((0, 1)), Simplex((1, 2)), Simplex((0, 2))]
    shapes = []
    for edge in edges:
        relabel = dict(enumerate(edge.vertices))
        shapes.append([MorseTile(edge, [relabel[v] for v in t.removed])
                       for t in enumerate_tiles(1)])
    for choice in itertools.product(*shapes):
        covered = set().union(*(t.open_faces for t in choice))
        extra = [MorseTile(vertex(v)) for v in range(3) if vertex(v) not in covered]
        yield MorseTiling.from_tiles(list(choice) + extra)


def test_closedness_forms_agree():
    outcomes = set()
    for tiling in _triangle_boundary_tilings():
        if not validate_partition(tiling).ok:
            continue
        local = validate_closedness(tiling).ok
        assert closedness_by_dimension(tiling).ok == local
        outcomes.add(local)
    assert outcomes == {True, False}


def test_non_closed_cell_set():
    """被铺砌的集合可以不下闭"""
    tile = MorseTile(Simplex((0, 1, 2)), {0})
    tiling = MorseTiling.from_tiles([tile])
    assert not tiling.space.is_closed
    partition, closedness = validate(tiling)
    assert partition.ok and closedness.ok
    assert is_shelling(tiling, [0]).ok


def test_natural_order_is_shelling():
    for n in range(5):
        tiling, order = boundary_delta_shelling(n)
        assert is_shelling(tiling, order.order)
        assert require_shelling(tiling, order) is order


def test_filtration_prefix_sizes():
    tiling, order = boundary_delta_shelling(2)
    sizes = [len(step) for step in order.filtration(tiling)]
    assert sizes == [0, 7, 11, 13, 14]
    assert order.positions() == {0: 1, 1: 2, 2: 3, 3: 4}


def test_failing_prefix():
    tiling, _ = boundary_delta_shelling(2)
    check = is_shelling(tiling, [1, 0, 2, 3])
    assert not check
    assert check.failing_prefix == 1
    assert check.to_dict()["cells"] == [[2], [3], [2, 3]]

    with pytest.raises(ShellingError) as excinfo:
        require_shelling(tiling, ShellingOrder((1, 0, 2, 3)))
    assert excinfo.value.failing_prefix == 1


def test_bad_orders():
    tiling, _ = boundary_delta_shelling(2)
    assert not is_shelling(tiling, [0, 0, 1, 2])
    assert not is_shelling(tiling, [0, 1, 2, 7])

    short = is_shelling(tiling, [0, 1, 2])
    assert not short.ok
    assert short.failing_prefix is None


def test_triangle_cycle_has_no_shelling():
    tiling = triangle_cycle()
    require_valid(tiling)
    for order in itertools.permutations(range(3)):
        check = is_shelling(tiling, order)
        assert not check.ok
        assert check.failing_prefix == 1


def test_partial_shelling_check():
    """q = 1：只排 k ≤ 2 的瓦片，前缀与 1 维骨架的交逐个闭"""
    tiling, _ = boundary_delta_shelling(3)
    assert len(skeleton_cells(tiling, 1)) == 15
    assert len(skeleton_cells(tiling, 0)) == 5
    assert is_shelling(tiling, [0, 1, 2], q=1).ok

    wrong = is_shelling(tiling, [1, 0, 2], q=1)
    assert wrong.failing_prefix == 1
    assert wrong.to_dict()["cells"] == [[2], [3], [4]]

    missing = is_shelling(tiling, [0, 1], q=1)
    assert not missing.ok
    assert missing.reason == "顺序没有覆盖所有单元"


def test_underlying_complex_and_critical_tiles():
    tiling, _ = boundary_delta_shelling(2)
    assert underlying_complex(tiling).f_vector() == [4, 6, 4]
    assert [i for i, _ in critical_tiles(tiling)] == [0, 3]
    assert critical_index_counts(tiling) == {0: 1, 2: 1}

    tiling, _ = boundary_delta_shelling(0)
    assert critical_index_counts(tiling) == {0: 2}
