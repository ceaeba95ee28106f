"""
铺砌模块 - Morse 铺砌的划分/闭性校验、壳化判定与底层复形

被铺砌的集合 S 是环境复形中任意一组开面（不要求下闭），
因此所有校验都以 S 为参照，而不是整个环境复形。
"""
import logging
from collections import Counter
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .simplicial import Simplex, SimplicialComplex, close_downward, simplex_key
from .tiles import MorseTile
from .utils import format_cells

logger = logging.getLogger(__name__)


class ShellingError(ValueError):
    """给定的顺序不是（部分）壳化：记录第一个失败的前缀和缺失的单元"""

    def __init__(self, message: str, failing_prefix: Optional[int] = None,
                 cells: Iterable[Simplex] = ()):
        self.failing_prefix = failing_prefix
        self.cells = tuple(cells)
        super().__init__(message)


class InvalidTilingError(ValueError):
    """铺砌不满足划分或闭性条件"""

    def __init__(self, partition: "PartitionReport", closedness: Optional["ClosednessReport"] = None):
        self.partition = partition
        self.closedness = closedness
        problems = []
        if not partition.ok:
            problems.append("划分不成立")
        if closedness is not None and not closedness.ok:
            problems.append("闭性不成立")
        super().__init__("无效的 Morse 铺砌: " + "，".join(problems))


@dataclass(frozen=True)
class CellSet:
    """环境复形中的一组开面 S"""
    ambient: SimplicialComplex
    cells: FrozenSet[Simplex]

    def __post_init__(self):
        cells = frozenset(self.cells)
        outside = [c for c in cells if c not in self.ambient]
        if outside:
            raise ValueError(f"单元不在环境复形中: {format_cells(outside)}")
        object.__setattr__(self, "cells", cells)

    def __contains__(self, cell):
        return cell in self.cells

    def __len__(self):
        return len(self.cells)

    def skeleton(self, q: Optional[int]) -> FrozenSet[Simplex]:
        """S^{(q)}：维数 ≤ q 的单元；q 为 None 时返回全部"""
        if q is None:
            return self.cells
        return frozenset(c for c in self.cells if c.dimension <= q)

    @property
    def is_closed(self) -> bool:
        """S 本身是否下闭（即是一个单纯复形）"""
        return all(f in self.cells for c in self.cells for f in c.faces())

    def as_complex(self) -> SimplicialComplex:
        return SimplicialComplex(self.cells)


@dataclass(frozen=True)
class MorseTiling:
    """
    Morse 铺砌：被铺砌的单元集合 + 瓦片列表（瓦片编号即下标）

    构造时不做校验，使用前应调用 validate / require_valid。
    """
    space: CellSet
    tiles: Tuple[MorseTile, ...]

    def __post_init__(self):
        object.__setattr__(self, "tiles", tuple(self.tiles))

    @classmethod
    def from_tiles(cls, tiles: Sequence[MorseTile],
                   cells: Optional[Iterable[Simplex]] = None) -> "MorseTiling":
        """
        由瓦片构造铺砌

        Args:
            tiles: 瓦片列表
            cells: 显式的单元集合；缺省时取所有瓦片开面的并

        Returns:
            MorseTiling（环境复形为瓦片单纯形的下闭包）
        """
        tiles = tuple(tiles)
        ambient = close_downward(t.simplex for t in tiles)
        if cells is None:
            cells = frozenset().union(*(t.open_faces for t in tiles)) if tiles else frozenset()
        else:
            cells = frozenset(cells)
            ambient = close_downward(list(ambient.faces) + list(cells))
        return cls(CellSet(ambient, cells), tiles)

    def __len__(self):
        return len(self.tiles)

    def __iter__(self):
        return iter(self.tiles)

    def __getitem__(self, index) -> MorseTile:
        return self.tiles[index]

    @property
    def ambient(self) -> SimplicialComplex:
        return self.space.ambient

    @property
    def dimension(self) -> int:
        return max((t.dimension for t in self.tiles), default=-1)

    def owners(self) -> Dict[Simplex, int]:
        """单元 → 包含它的瓦片编号（多重覆盖时取编号最小者）"""
        owner: Dict[Simplex, int] = {}
        for index, tile in enumerate(self.tiles):
            for face in tile.open_faces:
                owner.setdefault(face, index)
        return owner


@dataclass(frozen=True)
class PartitionReport:
    """划分校验结果"""
    ok: bool
    uncovered: Tuple[Simplex, ...] = ()
    multiply_covered: Tuple[Tuple[Simplex, Tuple[int, ...]], ...] = ()
    outside_space: Tuple[Tuple[Simplex, int], ...] = ()
    foreign_tiles: Tuple[int, ...] = ()

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "uncovered": format_cells(self.uncovered),
            "multiply_covered": [
                {"cell": list(cell.vertices), "tiles": list(tiles)}
                for cell, tiles in self.multiply_covered
            ],
            "outside_space": [
                {"cell": list(cell.vertices), "tile": tile} for cell, tile in self.outside_space
            ],
            "foreign_tiles": list(self.foreign_tiles),
        }


@dataclass(frozen=True)
class ClosednessReport:
    """
    闭性校验结果

    violations 每项为 (瓦片编号, 单元, 单元所属瓦片编号)；
    按维数逐层检查时瓦片编号位置记录的是层数 j。
    """
    ok: bool
    violations: Tuple[Tuple[int, Simplex, Optional[int]], ...] = ()

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "violations": [
                {"tile": tile, "cell": list(cell.vertices), "owner": owner}
                for tile, cell, owner in self.violations
            ],
        }


@dataclass(frozen=True)
class ShellingCheck:
    """壳化判定结果：失败时给出第一个不闭的前缀（1 起始）及缺失的单元"""
    ok: bool
    failing_prefix: Optional[int] = None
    cells: Tuple[Simplex, ...] = ()
    reason: str = ""

    def __bool__(self):
        return self.ok

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "failing_prefix": self.failing_prefix,
            "cells": format_cells(self.cells),
            "reason": self.reason,
        }


@dataclass(frozen=True)
class ShellingOrder:
    """
    （部分）壳化顺序：瓦片编号序列

    q 为 None 表示完整壳化；否则为 q 阶部分壳化，只排 order ≤ q+1 的瓦片。
    """
    order: Tuple[int, ...]
    q: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "order", tuple(int(i) for i in self.order))

    def __len__(self):
        return len(self.order)

    def __iter__(self):
        return iter(self.order)

    def positions(self) -> Dict[int, int]:
        """瓦片编号 → 在壳化中的位置（1 起始）"""
        return {tile: position for position, tile in enumerate(self.order, start=1)}

    def filtration(self, tiling: MorseTiling) -> List[FrozenSet[Simplex]]:
        """前缀并 S_0 ⊂ S_1 ⊂ … ⊂ S_N（部分壳化时与 S^{(q)} 取交）"""
        allowed = tiling.space.skeleton(self.q)
        prefix: FrozenSet[Simplex] = frozenset()
        steps = [prefix]
        for index in self.order:
            prefix = prefix | (tiling.tiles[index].open_faces & allowed)
            steps.append(prefix)
        return steps

    def to_dict(self) -> dict:
        return {"order": list(self.order), "q": self.q}


def validate_partition(tiling: MorseTiling) -> PartitionReport:
    """
    划分校验：S 的每个单元恰好属于一个瓦片的开面

    同时报告落在 S 之外的瓦片开面，以及单纯形不在环境复形中的瓦片。
    """
    cover: Dict[Simplex, List[int]] = {}
    outside = []
    foreign = []
    for index, tile in enumerate(tiling.tiles):
        if tile.simplex not in tiling.ambient:
            foreign.append(index)
        for face in tile.open_faces:
            if face not in tiling.space:
                outside.append((face, index))
            else:
                cover.setdefault(face, []).append(index)

    uncovered = tuple(sorted((c for c in tiling.space.cells if c not in cover), key=simplex_key))
    multiple = tuple(
        (cell, tuple(owners))
        for cell, owners in sorted(cover.items(), key=lambda item: simplex_key(item[0]))
        if len(owners) > 1
    )
    outside = tuple(sorted(outside, key=lambda item: (simplex_key(item[0]), item[1])))
    ok = not (uncovered or multiple or outside or foreign)
    if not ok:
        logger.debug("划分校验失败: 未覆盖 %d, 重复覆盖 %d, 越界 %d, 外来瓦片 %d",
                     len(uncovered), len(multiple), len(outside), len(foreign))
    return PartitionReport(ok, uncovered, multiple, outside, tuple(foreign))


def validate_closedness(tiling: MorseTiling) -> ClosednessReport:
    """
    闭性校验（局部形式）

    对每个瓦片 T 和 S 中每个 f ⊆ T̄、f ∉ T 的单元，包含 f 的瓦片维数必须 ≥ dim T。
    这等价于"维数 > j 的瓦片之并在 S 中闭"对所有 j 成立。
    """
    owner = tiling.owners()
    violations = []
    for index, tile in enumerate(tiling.tiles):
        for face in tile.simplex.faces():
            if face not in tiling.space or face in tile.open_faces:
                continue
            holder = owner.get(face)
            if holder is None:
                # 未覆盖的单元由划分校验报告
                continue
            if tiling.tiles[holder].dimension < tile.dimension:
                violations.append((index, face, holder))
    violations.sort(key=lambda v: (v[0], simplex_key(v[1])))
    return ClosednessReport(not violations, tuple(violations))


def closedness_by_dimension(tiling: MorseTiling) -> ClosednessReport:
    """
    闭性校验（逐层形式）：对每个 j，维数 > j 的瓦片之并在 S 中闭

    violations 项为 (j, 缺失的面, None)。
    """
    violations = []
    for j in range(-1, tiling.dimension):
        union = frozenset().union(
            *(t.open_faces for t in tiling.tiles if t.dimension > j))
        for cell in union:
            for face in cell.faces():
                if face in tiling.space and face not in union:
                    violations.append((j, face, None))
    violations = sorted(set(violations), key=lambda v: (v[0], simplex_key(v[1])))
    return ClosednessReport(not violations, tuple(violations))


def validate(tiling: MorseTiling) -> Tuple[PartitionReport, ClosednessReport]:
    """依次做划分和闭性校验"""
    partition = validate_partition(tiling)
    closedness = validate_closedness(tiling)
    return partition, closedness


def require_valid(tiling: MorseTiling) -> MorseTiling:
    """
    校验铺砌，不合法时抛出 InvalidTilingError

    Returns:
        原铺砌（便于链式调用）
    """
    partition, closedness = validate(tiling)
    if not (partition.ok and closedness.ok):
        raise InvalidTilingError(partition, closedness)
    return tiling


def underlying_complex(tiling: MorseTiling) -> SimplicialComplex:
    """所有瓦片单纯形的下闭包 S̄"""
    return close_downward(t.simplex for t in tiling.tiles)


def skeleton_cells(tiling: MorseTiling, q: int) -> FrozenSet[Simplex]:
    """S^{(q)}"""
    return tiling.space.skeleton(q)


def critical_tiles(tiling: MorseTiling) -> List[Tuple[int, MorseTile]]:
    """临界瓦片 (编号, 瓦片) 列表"""
    return [(i, t) for i, t in enumerate(tiling.tiles) if t.tile_class.is_critical]


def critical_index_counts(tiling: MorseTiling) -> Dict[int, int]:
    """临界瓦片按指标计数"""
    counts = Counter(t.tile_class.index for _, t in critical_tiles(tiling))
    return dict(sorted(counts.items()))


def is_shelling(tiling: MorseTiling, order: Sequence[int], q: Optional[int] = None) -> ShellingCheck:
    """
    判定给定顺序是否为（部分）壳化

    Args:
        tiling: 已校验的铺砌
        order: 瓦片编号序列（完整壳化时必须是全排列）
        q: 部分壳化的阶数；None 表示完整壳化

    Returns:
        ShellingCheck：逐个前缀检查 闭包(前缀并) ∩ S ⊆ 前缀并
    """
    order = [int(i) for i in order]
    n_tiles = len(tiling.tiles)
    if len(set(order)) != len(order) or any(i < 0 or i >= n_tiles for i in order):
        return ShellingCheck(False, reason="顺序中有重复或越界的瓦片编号")

    allowed = tiling.space.skeleton(q)
    if q is None and len(order) != n_tiles:
        return ShellingCheck(False, reason="完整壳化必须包含所有瓦片")

    prefix = set()
    for position, index in enumerate(order, start=1):
        tile_cells = tiling.tiles[index].open_faces & allowed
        prefix.update(tile_cells)
        missing = {
            face
            for cell in tile_cells
            for face in cell.faces()
            if face in allowed and face not in prefix
        }
        if missing:
            logger.debug("第 %d 个前缀不闭，缺失 %d 个单元", position, len(missing))
            return ShellingCheck(False, position, tuple(sorted(missing, key=simplex_key)),
                                 reason="前缀并不闭")

    leftover = allowed - prefix
    if leftover:
        return ShellingCheck(False, None, tuple(sorted(leftover, key=simplex_key)),
                             reason="顺序没有覆盖所有单元")
    return ShellingCheck(True)


def require_shelling(tiling: MorseTiling, order: ShellingOrder) -> ShellingOrder:
    """校验壳化顺序，不合法时抛出 ShellingError"""
    check = is_shelling(tiling, order.order, order.q)
    if not check.ok:
        raise ShellingError(f"不是壳化顺序: {check.reason}", check.failing_prefix, check.cells)
    return order
