"""
球面示例 - ∂Δ_{n+1} 的标准壳化与三角形边界的循环铺砌
"""
from typing import Tuple

from ..simplicial import Simplex
from ..tiles import MorseTile
from ..tiling import MorseTiling, ShellingOrder
from .base_generator import BaseGenerator


def boundary_delta_shelling(n: int) -> Tuple[MorseTiling, ShellingOrder]:
    """
    ∂Δ_{n+1} 由 n+2 个 n 维基本瓦片铺砌

    T_j 是删去顶点 j 的面，removed_opposite = {0,…,j-1}，即去掉与前面瓦片共有的面。
    T_0 是闭单纯形，T_{n+1} 是开单纯形。

    Args:
        n: 球面维数（≥ 0）

    Returns:
        tuple: (铺砌, 自然顺序 0..n+1)
    """
    if n < 0:
        raise ValueError(f"n 必须非负: {n}")
    vertices = tuple(range(n + 2))
    tiles = []
    for j in vertices:
        facet = Simplex(tuple(v for v in vertices if v != j))
        tiles.append(MorseTile(facet, range(j)))
    return MorseTiling.from_tiles(tiles), ShellingOrder(tuple(range(n + 2)))


def triangle_cycle() -> MorseTiling:
    """
    ∂Δ_2 的三条边各去掉一个端点，首尾相接成环；箭图是有向三角形，不可壳化
    """
    tiles = [
        MorseTile(Simplex((0, 1)), {0}),
        MorseTile(Simplex((1, 2)), {1}),
        MorseTile(Simplex((0, 2)), {2}),
    ]
    return MorseTiling.from_tiles(tiles)


class BoundaryDeltaGenerator(BaseGenerator):
    """∂Δ_{n+1} 标准壳化"""

    def __init__(self):
        super().__init__("boundary-delta")

    def generate(self, n: int = 2, **params):
        return boundary_delta_shelling(int(n))


class TriangleCycleGenerator(BaseGenerator):
    """三角形边界的循环铺砌"""

    def __init__(self):
        super().__init__("triangle-cycle")

    def generate(self, **params):
        return triangle_cycle(), None
