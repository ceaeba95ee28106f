"""
八面体示例 - 八面体边界上 Morse 铺砌的穷举与 Morse 壳化搜索

八面体顶点 0..5，对顶点对 (0,1)、(2,3)、(4,5)；每个三角形从每对中取一个顶点。
每个三角形有 11 种瓦片形状，回溯时剪掉重复覆盖以及"所有相邻三角形都已
选定但仍未被覆盖"的单元。
"""
import itertools
import logging
from collections import Counter
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import networkx as nx

from ..config import OCTAHEDRON_DEGENERATION_PAGE, OCTAHEDRON_TARGET_INDICES
from ..quiver import build_quiver, is_acyclic, to_networkx
from ..simplicial import (
    CoefficientRing,
    RATIONALS,
    Simplex,
    SimplicialComplex,
    close_downward,
    homology,
)
from ..spectral import compute_page, filtration_from_shelling
from ..tiles import MorseTile, enumerate_tiles
from ..tiling import MorseTiling, ShellingOrder, critical_index_counts, is_shelling, validate
from .base_generator import BaseGenerator

logger = logging.getLogger(__name__)

ANTIPODAL_PAIRS = ((0, 1), (2, 3), (4, 5))


def octahedron_triangles() -> List[Simplex]:
    """8 个三角形，按顶点字典序"""
    return sorted(Simplex(combo) for combo in itertools.product(*ANTIPODAL_PAIRS))


def octahedron_complex() -> SimplicialComplex:
    """八面体边界复形：6 个顶点、12 条边、8 个三角形"""
    return close_downward(octahedron_triangles())


def tile_shapes(triangle: Simplex) -> List[MorseTile]:
    """三角形上所有合法瓦片（由 Δ_2 上的枚举按顶点重新编号得到）"""
    relabel = dict(enumerate(triangle.vertices))
    shapes = []
    for tile in enumerate_tiles(2):
        removed = [relabel[v] for v in tile.removed]
        morse_face = None
        if tile.morse_face is not None:
            morse_face = Simplex.of(relabel[v] for v in tile.morse_face.vertices)
        shapes.append(MorseTile(triangle, removed, morse_face))
    return shapes


def octahedron_tilings() -> Iterator[MorseTiling]:
    """
    穷举八面体边界的 Morse 铺砌（按确定的搜索顺序）

    Yields:
        通过划分与闭性校验的 MorseTiling
    """
    triangles = octahedron_triangles()
    cells = octahedron_complex().faces
    # 每个单元在搜索顺序中最后一个相邻三角形处必须已被覆盖
    closing: Dict[int, List[Simplex]] = {i: [] for i in range(len(triangles))}
    for cell in cells:
        last = max(i for i, t in enumerate(triangles) if cell.issubset(t))
        closing[last].append(cell)
    shapes = [tile_shapes(t) for t in triangles]

    covered = set()
    chosen: List[MorseTile] = []

    def extend(i: int) -> Iterator[MorseTiling]:
        if i == len(triangles):
            tiling = MorseTiling.from_tiles(chosen)
            partition, closedness = validate(tiling)
            if partition.ok and closedness.ok:
                yield tiling
            return
        for tile in shapes[i]:
            faces = tile.open_faces
            if faces & covered:
                continue
            covered.update(faces)
            if all(c in covered for c in closing[i]):
                chosen.append(tile)
                yield from extend(i + 1)
                chosen.pop()
            covered.difference_update(faces)

    yield from extend(0)


def _cancelling_neighbours(tiling: MorseTiling, order: Sequence[int]) -> bool:
    """d_1 只连接相邻位置：需要某个指标 i+1 的临界瓦片紧跟在指标 i 的临界瓦片之后"""
    classes = [tiling.tiles[i].tile_class for i in order]
    return any(
        before.is_critical and after.is_critical and after.index == before.index + 1
        for before, after in zip(classes, classes[1:])
    )


def shelling_orders(tiling: MorseTiling) -> Iterator[ShellingOrder]:
    """枚举所有壳化顺序（箭图反向图的全部拓扑序）"""
    if is_acyclic(build_quiver(tiling)) is not True:
        return
    graph = nx.DiGraph(to_networkx(build_quiver(tiling))).reverse(copy=True)
    for sort in nx.all_topological_sorts(graph):
        yield ShellingOrder(tuple(sort))


def reorder(tiling: MorseTiling, order: ShellingOrder) -> Tuple[MorseTiling, ShellingOrder]:
    """按壳化顺序重排瓦片，返回新铺砌与恒等顺序"""
    tiles = [tiling.tiles[i] for i in order.order]
    return (MorseTiling.from_tiles(tiles, tiling.space.cells),
            ShellingOrder(tuple(range(len(tiles)))))


def octahedron_search(target: Sequence[int] = OCTAHEDRON_TARGET_INDICES,
                      page: int = OCTAHEDRON_DEGENERATION_PAGE,
                      ring: CoefficientRing = RATIONALS) -> Tuple[MorseTiling, ShellingOrder]:
    """
    搜索八面体的 Morse 壳化：临界指标多重集为 target，且谱序列恰在第 page 页退化

    瓦片按找到的壳化顺序输出，因此规范分级给出的就是恒等顺序。

    Raises:
        LookupError: 搜索空间里没有满足条件的铺砌
    """
    wanted = dict(sorted(Counter(target).items()))
    expected = sum(homology(octahedron_complex(), ring).ranks())
    examined = 0
    for tiling in octahedron_tilings():
        examined += 1
        if critical_index_counts(tiling) != wanted:
            continue
        for order in shelling_orders(tiling):
            if page == 2 and not _cancelling_neighbours(tiling, order.order):
                continue
            filtered = filtration_from_shelling(tiling, order, ring=ring)
            if compute_page(filtered, page).total() != expected:
                continue
            if page >= 2 and compute_page(filtered, page - 1).total() == expected:
                continue
            logger.info("✅ 第 %d 个铺砌满足条件，壳化顺序 %s", examined, list(order.order))
            result, identity = reorder(tiling, order)
            check = is_shelling(result, identity.order)
            if not check.ok:
                raise AssertionError(f"重排后的顺序不是壳化: {check.reason}")
            return result, identity
    raise LookupError(f"在 {examined} 个八面体铺砌中没有找到满足条件的 Morse 壳化")


def octahedron_census(limit: Optional[int] = None) -> dict:
    """
    八面体铺砌普查：总数、可壳化个数、临界指标多重集分布

    Args:
        limit: 最多检查的铺砌个数（None 表示全部）

    Returns:
        dict: 统计结果
    """
    total = 0
    shellable = 0
    multisets: Counter = Counter()
    for tiling in octahedron_tilings():
        total += 1
        key = tuple(sorted(
            index for index, count in critical_index_counts(tiling).items() for _ in range(count)))
        multisets[key] += 1
        if is_acyclic(build_quiver(tiling)) is True:
            shellable += 1
        if limit is not None and total >= limit:
            break
    return {
        "tilings": total,
        "shellable": shellable,
        "critical_multisets": {str(list(k)): v for k, v in sorted(multisets.items())},
    }


class OctahedronSearchGenerator(BaseGenerator):
    """八面体 Morse 壳化（搜索得到）"""

    def __init__(self):
        super().__init__("octahedron-search")

    def generate(self, **params):
        return octahedron_search()
