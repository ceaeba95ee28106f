"""
Morse 瓦片模块 - 瓦片模型、分类（基本/正则/临界）、开面集合与相对（上）同调

一个 n 维 k 阶瓦片是 n 维单纯形去掉 k 个余维一的面，k ≥ 1 时还可再去掉一个
余维 ≥ 2 的 Morse 面 μ。去掉的面用其对顶点表示（removed_opposite）。
"""
import itertools
import logging
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import FrozenSet, Iterable, Iterator, List, Optional

from .simplicial import (
    CoefficientRing,
    HomologyTable,
    Simplex,
    SimplicialComplex,
    close_downward,
    relative_cohomology,
    relative_homology,
)

logger = logging.getLogger(__name__)


class TileValidationError(ValueError):
    """瓦片不满足不变量；violations 列出所有被违反的条件"""

    def __init__(self, violations: List[str]):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class TileKind(Enum):
    """瓦片类型"""
    BASIC = "basic"
    REGULAR = "regular-with-face"
    CRITICAL = "critical"


@dataclass(frozen=True)
class TileClass:
    kind: TileKind
    index: Optional[int] = None

    @property
    def is_critical(self) -> bool:
        return self.kind is TileKind.CRITICAL

    def __str__(self):
        if self.is_critical:
            return f"critical(index={self.index})"
        return self.kind.value


class MorseTile:
    """
    Morse 瓦片（不可变）

    相等性按点集语义（开面集合）比较，而不是按表示比较。
    """

    def __init__(self, simplex: Simplex, removed: Iterable[int] = (),
                 morse_face: Optional[Simplex] = None):
        object.__setattr__(self, "simplex", simplex)
        object.__setattr__(self, "removed", frozenset(int(v) for v in removed))
        object.__setattr__(self, "morse_face", morse_face)
        violations = tile_violations(self.simplex, self.removed, self.morse_face)
        if violations:
            raise TileValidationError(violations)

    def __setattr__(self, name, value):
        raise AttributeError("MorseTile 不可修改")

    @property
    def dimension(self) -> int:
        return self.simplex.dimension

    @property
    def order(self) -> int:
        return len(self.removed)

    @property
    def theta(self) -> Optional[Simplex]:
        """被去掉的面的对顶点张成的面 θ（k = 0 时为空）"""
        if not self.removed:
            return None
        return Simplex.of(self.removed)

    @property
    def is_basic(self) -> bool:
        return self.morse_face is None

    @cached_property
    def open_faces(self) -> FrozenSet[Simplex]:
        """
        瓦片包含的开面：{W : θ ⊆ W，且 μ 缺省或 W ⊄ μ}
        """
        faces = set()
        mu = self.morse_face.vertex_set if self.morse_face is not None else None
        for face in self.simplex.faces():
            if not self.removed <= face.vertex_set:
                continue
            if mu is not None and face.vertex_set <= mu:
                continue
            faces.add(face)
        return frozenset(faces)

    @cached_property
    def tile_class(self) -> TileClass:
        return classify(self)

    def removed_facets(self) -> List[Simplex]:
        """被去掉的余维一面（0 维瓦片的面是空集，不计入）"""
        if self.dimension == 0:
            return []
        return [
            Simplex(tuple(v for v in self.simplex.vertices if v != opposite))
            for opposite in sorted(self.removed)
        ]

    def removed_complex(self) -> SimplicialComplex:
        """T̄ \\ T 的闭包：被去掉的面与 μ 生成的子复形 σ ∪ μ"""
        generators = self.removed_facets()
        if self.morse_face is not None:
            generators.append(self.morse_face)
        return close_downward(generators)

    def closure(self) -> SimplicialComplex:
        return close_downward([self.simplex])

    def __eq__(self, other):
        if not isinstance(other, MorseTile):
            return NotImplemented
        return self.open_faces == other.open_faces

    def __hash__(self):
        return hash(self.open_faces)

    def __repr__(self):
        mu = f", μ={self.morse_face}" if self.morse_face is not None else ""
        removed = ",".join(str(v) for v in sorted(self.removed))
        return f"MorseTile({self.simplex}, removed={{{removed}}}{mu})"


def tile_violations(simplex: Simplex, removed: FrozenSet[int],
                    morse_face: Optional[Simplex]) -> List[str]:
    """列出被违反的瓦片不变量（空列表表示合法）"""
    violations = []
    n = simplex.dimension
    k = len(removed)
    if not removed <= simplex.vertex_set:
        violations.append(f"removed_opposite {sorted(removed)} 不是 {simplex} 的顶点子集")
    if morse_face is not None:
        if k == 0:
            violations.append("k = 0 时不能有 Morse 面")
        if k == n + 1:
            violations.append("k = n+1（开单纯形）时不能有 Morse 面")
        if not morse_face.issubset(simplex):
            violations.append(f"Morse 面 {morse_face} 不是 {simplex} 的面")
        if morse_face.dimension > n - 2:
            violations.append(f"Morse 面维数 {morse_face.dimension} 超过 n-2 = {n - 2}")
        if not removed <= morse_face.vertex_set:
            violations.append(f"θ = {sorted(removed)} 不含于 Morse 面 {morse_face}")
    return violations


def make_tile(vertices: Iterable[int], removed_opposite: Iterable[int] = (),
              morse_face: Optional[Iterable[int]] = None) -> MorseTile:
    """
    从原始顶点列表构造瓦片，并做规范化

    (k = n, μ = θ) 与开单纯形是同一个点集，统一改写为 k = n+1、无 Morse 面。
    空的 Morse 面视为缺省。
    """
    simplex = Simplex.of(vertices)
    removed = frozenset(int(v) for v in removed_opposite)
    mu = None
    if morse_face is not None:
        morse_face = list(morse_face)
        if morse_face:
            mu = Simplex.of(morse_face)
    n = simplex.dimension
    if mu is not None and len(removed) == n and n >= 1 and mu.vertex_set == removed:
        logger.debug("规范化瓦片 %s：(k=n, μ=θ) → 开单纯形", simplex)
        return MorseTile(simplex, simplex.vertex_set, None)
    return MorseTile(simplex, removed, mu)


def theta(tile: MorseTile) -> Optional[Simplex]:
    return tile.theta


def classify(tile: MorseTile) -> TileClass:
    """
    瓦片分类

    k = 0 → 临界指标 0；k = n+1 → 临界指标 n（开单纯形）；
    μ = θ → 临界指标 k；其余带 μ 的为正则；无 μ 且 1 ≤ k ≤ n 为基本（正则）。
    """
    k, n = tile.order, tile.dimension
    if k == 0:
        return TileClass(TileKind.CRITICAL, 0)
    if k == n + 1:
        return TileClass(TileKind.CRITICAL, n)
    if tile.morse_face is not None:
        if tile.morse_face.dimension == k - 1:
            return TileClass(TileKind.CRITICAL, k)
        return TileClass(TileKind.REGULAR)
    return TileClass(TileKind.BASIC)


def open_faces(tile: MorseTile) -> FrozenSet[Simplex]:
    return tile.open_faces


def relative_homology_closed_form(tile: MorseTile, ring: CoefficientRing,
                                  cohomological: bool = False) -> HomologyTable:
    """正则瓦片的相对（上）同调为零；临界指标 k 的瓦片为 R 集中在 k 维"""
    tile_class = tile.tile_class
    if tile_class.is_critical:
        return HomologyTable.concentrated(ring, tile_class.index, cohomological)
    return HomologyTable.zero(ring, cohomological)


def relative_homology_bruteforce(tile: MorseTile, ring: CoefficientRing,
                                 cohomological: bool = False) -> HomologyTable:
    """直接计算 H_*(T̄, σ ∪ μ; R)（或上同调），作为闭式公式的对照"""
    if cohomological:
        return relative_cohomology(tile.closure(), tile.removed_complex(), ring)
    return relative_homology(tile.closure(), tile.removed_complex(), ring)


def enumerate_tiles(n: int, up_to_symmetry: bool = False) -> Iterator[MorseTile]:
    """
    枚举 Δ_n = {0,…,n} 上所有合法瓦片

    Args:
        n: 维数
        up_to_symmetry: 为 True 时只取 removed_opposite = {0,…,k-1}

    Yields:
        MorseTile（开单纯形只以 k = n+1 形式出现一次）
    """
    vertices = tuple(range(n + 1))
    simplex = Simplex(vertices)
    for k in range(n + 2):
        if up_to_symmetry:
            removed_choices = [vertices[:k]]
        else:
            removed_choices = list(itertools.combinations(vertices, k))
        for removed in removed_choices:
            yield MorseTile(simplex, removed)
            if k == 0 or k == n + 1:
                continue
            rest = [v for v in vertices if v not in removed]
            # |μ| = k + |extra| ≤ n - 1
            for extra_size in range(0, n - k):
                for extra in itertools.combinations(rest, extra_size):
                    yield MorseTile(simplex, removed, Simplex.of(removed + extra))
