"""
箭图模块 - 铺砌的箭图、无环判定、分级、壳化顺序与部分壳化

箭头 T → T' 当且仅当 T' 的某个开面落在 T 的闭包里（不含自环），
标签为 σ_T ∩ σ_T' 的维数。
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Tuple, Union

import networkx as nx

from .tiling import (
    MorseTiling,
    ShellingError,
    ShellingOrder,
    is_shelling,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True, order=True)
class Arrow:
    source: int
    target: int
    label: int

    def to_dict(self) -> dict:
        return {"source": self.source, "target": self.target, "label": self.label}


@dataclass(frozen=True)
class Quiver:
    """
    箭图：顶点为瓦片编号，顶点标签为瓦片阶数 k，箭头按 (source, target) 排序

    由铺砌构造时还满足 order(target) ≤ label + 1，由 build_quiver 检查。
    """
    vertices: Tuple[int, ...]
    orders: Tuple[int, ...]
    arrows: Tuple[Arrow, ...]
    _order_of: Dict[int, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "orders", tuple(self.orders))
        object.__setattr__(self, "arrows", tuple(sorted(self.arrows)))
        if len(self.vertices) != len(self.orders):
            raise ValueError("顶点与顶点标签数量不一致")
        object.__setattr__(self, "_order_of", dict(zip(self.vertices, self.orders)))
        for arrow in self.arrows:
            if arrow.source == arrow.target:
                raise ValueError(f"箭图不允许自环: {arrow}")
            if arrow.source not in self._order_of or arrow.target not in self._order_of:
                raise ValueError(f"箭头端点不是顶点: {arrow}")

    def order_of(self, vertex: int) -> int:
        return self._order_of[vertex]

    def subquiver(self, max_label: int) -> "Quiver":
        """保留所有顶点、只保留标签 ≤ max_label 的箭头"""
        arrows = tuple(a for a in self.arrows if a.label <= max_label)
        return Quiver(self.vertices, self.orders, arrows)

    def to_dict(self) -> dict:
        return {
            "vertices": [{"id": v, "order": k} for v, k in zip(self.vertices, self.orders)],
            "arrows": [a.to_dict() for a in self.arrows],
        }


@dataclass(frozen=True)
class CycleCertificate:
    """有向环证书：首尾相接的箭头序列；作为否定结论，其真值为 False"""
    arrows: Tuple[Arrow, ...]

    def __post_init__(self):
        arrows = tuple(self.arrows)
        if not arrows:
            raise ValueError("环的长度至少为 1")
        for before, after in zip(arrows, arrows[1:] + arrows[:1]):
            if before.target != after.source:
                raise ValueError(f"箭头不首尾相接: {before} → {after}")
        object.__setattr__(self, "arrows", arrows)

    def __bool__(self):
        return False

    def __len__(self):
        return len(self.arrows)

    @property
    def vertices(self) -> List[int]:
        return [a.source for a in self.arrows]

    def to_dict(self) -> dict:
        return {"cycle": self.vertices, "arrows": [a.to_dict() for a in self.arrows]}


@dataclass(frozen=True)
class Grading:
    """分级：瓦片编号 → 整数，单射且沿箭头严格递减"""
    values: Dict[int, int]

    def __getitem__(self, vertex: int) -> int:
        return self.values[vertex]

    def sorted_vertices(self) -> List[int]:
        return sorted(self.values, key=self.values.__getitem__)


@dataclass(frozen=True)
class PartialShelling:
    """部分壳化：order ≤ q+1 的瓦片顺序 + q 维骨架的前缀过滤"""
    order: ShellingOrder
    filtration: Tuple[frozenset, ...]

    def to_dict(self) -> dict:
        return {
            "order": list(self.order.order),
            "q": self.order.q,
            "prefix_sizes": [len(step) for step in self.filtration],
        }


def _arrow_label(tiling: MorseTiling, source: int, target: int) -> int:
    common = tiling.tiles[source].simplex.vertex_set & tiling.tiles[target].simplex.vertex_set
    return len(common) - 1


def label_order_violations(quiver: Quiver) -> List[Arrow]:
    """不满足 order(target) ≤ label + 1 的箭头"""
    return [a for a in quiver.arrows if quiver.order_of(a.target) > a.label + 1]


def build_quiver(tiling: MorseTiling) -> Quiver:
    """
    构造铺砌的箭图

    Args:
        tiling: 已校验的铺砌

    Returns:
        Quiver：T → T' 当且仅当 T' 有开面含于 σ_T；标签为公共面的维数

    Raises:
        ValueError: 某条箭头的目标阶数超过标签 + 1（瓦片数据不一致）
    """
    tiles = tiling.tiles
    arrows = []
    for i, source in enumerate(tiles):
        for j, target in enumerate(tiles):
            if i == j:
                continue
            if any(face.issubset(source.simplex) for face in target.open_faces):
                arrows.append(Arrow(i, j, _arrow_label(tiling, i, j)))
    quiver = Quiver(tuple(range(len(tiles))), tuple(t.order for t in tiles), tuple(arrows))
    bad = label_order_violations(quiver)
    if bad:
        raise ValueError(f"箭头目标的阶数超过标签 + 1: {bad}")
    logger.debug("箭图: %d 个顶点, %d 条箭头", len(quiver.vertices), len(quiver.arrows))
    return quiver


def restricted_quiver(tiling: MorseTiling, q: int) -> Quiver:
    """
    部分壳化定理证明中的箭图

    顶点为 order ≤ q+1 的瓦片；T → T' 当且仅当 σ_T ∩ T' 含有维数 ≤ q 的开面。
    """
    tiles = tiling.tiles
    vertices = [i for i, t in enumerate(tiles) if t.order <= q + 1]
    arrows = []
    for i in vertices:
        for j in vertices:
            if i == j:
                continue
            if any(face.dimension <= q and face.issubset(tiles[i].simplex)
                   for face in tiles[j].open_faces):
                arrows.append(Arrow(i, j, _arrow_label(tiling, i, j)))
    return Quiver(tuple(vertices), tuple(tiles[i].order for i in vertices), tuple(arrows))


def to_networkx(quiver: Quiver) -> nx.MultiDiGraph:
    """转换为 networkx 多重有向图（边的 key 为箭头下标）"""
    graph = nx.MultiDiGraph()
    for vertex, order in zip(quiver.vertices, quiver.orders):
        graph.add_node(vertex, order=order)
    for index, arrow in enumerate(quiver.arrows):
        graph.add_edge(arrow.source, arrow.target, key=index, label=arrow.label)
    return graph


def is_acyclic(quiver: Quiver) -> Union[bool, CycleCertificate]:
    """
    无环判定

    Returns:
        无环时返回 True，否则返回一个有向环证书
    """
    if not quiver.arrows:
        return True
    graph = to_networkx(quiver)
    try:
        edges = nx.find_cycle(graph, orientation="original")
    except nx.NetworkXNoCycle:
        return True
    certificate = CycleCertificate(tuple(quiver.arrows[key] for _, _, key, _ in edges))
    logger.debug("发现有向环: %s", certificate.vertices)
    return certificate


def grading(quiver: Quiver) -> Union[Grading, CycleCertificate]:
    """
    构造分级：反复取出极小元（汇点）依次赋 0, 1, 2, …，同层按编号打破平局

    Returns:
        Grading，或箭图有环时的证书
    """
    acyclic = is_acyclic(quiver)
    if acyclic is not True:
        return acyclic
    graph = to_networkx(quiver)
    layered = nx.lexicographical_topological_sort(graph.reverse(copy=True), key=lambda v: v)
    return Grading({vertex: grade for grade, vertex in enumerate(layered)})


def check_grading(quiver: Quiver, candidate: Union[Grading, Dict[int, int]]) -> bool:
    """验证分级：覆盖所有顶点、单射、沿每条箭头严格递减"""
    values = candidate.values if isinstance(candidate, Grading) else dict(candidate)
    if set(values) != set(quiver.vertices):
        return False
    if len(set(values.values())) != len(values):
        return False
    return all(values[a.source] > values[a.target] for a in quiver.arrows)


def path_leq(quiver: Quiver, i: int, j: int) -> bool:
    """偏序 i ≤ j：存在从 j 到 i 的有向路径（长度可为 0）"""
    if i == j:
        return True
    return nx.has_path(to_networkx(quiver), j, i)


def shelling_order(tiling: MorseTiling) -> Union[ShellingOrder, CycleCertificate]:
    """
    由箭图分级得到壳化顺序

    Returns:
        经过 is_shelling 验证的 ShellingOrder；箭图有环时返回证书（此时不存在壳化）

    Raises:
        ShellingError: 分级给出的顺序没有通过验证
    """
    result = grading(build_quiver(tiling))
    if isinstance(result, CycleCertificate):
        return result
    order = ShellingOrder(tuple(result.sorted_vertices()))
    check = is_shelling(tiling, order.order)
    if not check.ok:
        raise ShellingError(f"分级顺序没有通过壳化验证: {check.reason}",
                            check.failing_prefix, check.cells)
    return order


def partial_shellable(tiling: MorseTiling, q: int) -> Union[bool, CycleCertificate]:
    """q 阶部分可壳化：只保留标签 ≤ q 的箭头后无环"""
    if q < 0:
        raise ValueError(f"q 必须非负: {q}")
    return is_acyclic(build_quiver(tiling).subquiver(q))


def partial_shelling_filtration(tiling: MorseTiling, q: int) -> Union[PartialShelling, CycleCertificate]:
    """
    部分壳化过滤：order ≤ q+1 的瓦片按受限箭图的分级排序，
    前缀与 S^{(q)} 的交逐个验证为闭

    Raises:
        ShellingError: 得到的顺序没有通过验证
    """
    if q < 0:
        raise ValueError(f"q 必须非负: {q}")
    result = grading(restricted_quiver(tiling, q))
    if isinstance(result, CycleCertificate):
        return result
    order = ShellingOrder(tuple(result.sorted_vertices()), q)
    check = is_shelling(tiling, order.order, q)
    if not check.ok:
        raise ShellingError(f"部分壳化没有通过验证: {check.reason}",
                            check.failing_prefix, check.cells)
    return PartialShelling(order, tuple(order.filtration(tiling)))


def to_dot(quiver: Quiver) -> str:
    """
    导出 DOT 文本：顶点 "t<i> (k=<阶数>)"，箭头标签为公共面维数，按编号排序
    """
    lines = ["digraph quiver {"]
    for vertex, order in sorted(zip(quiver.vertices, quiver.orders)):
        lines.append(f'  t{vertex} [label="t{vertex} (k={order})"];')
    for arrow in quiver.arrows:
        lines.append(f'  t{arrow.source} -> t{arrow.target} [label="{arrow.label}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
