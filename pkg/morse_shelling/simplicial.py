"""
单纯复形模块 - 单纯形、下闭包、定向边缘算子与精确（上）同调

这里的同调计算是全局的"真值判定器"：瓦片、谱序列等模块的结果都与它比对。
"""
import itertools
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Tuple

import numpy as np
from sympy import isprime
from sympy.polys.domains import GF, QQ, ZZ

from . import linalg

logger = logging.getLogger(__name__)


class SubcomplexError(ValueError):
    """相对同调的第二个参数不是子复形"""


@dataclass(frozen=True, order=True)
class Simplex:
    """抽象单纯形：严格递增的非负整数顶点元组"""
    vertices: Tuple[int, ...]

    def __post_init__(self):
        vertices = tuple(int(v) for v in self.vertices)
        if not vertices:
            raise ValueError("单纯形不能为空")
        if vertices[0] < 0:
            raise ValueError(f"顶点编号必须非负: {vertices}")
        if any(a >= b for a, b in zip(vertices, vertices[1:])):
            raise ValueError(f"顶点必须严格递增: {vertices}")
        object.__setattr__(self, "vertices", vertices)

    @classmethod
    def of(cls, vertices: Iterable[int]) -> "Simplex":
        """从任意顺序的顶点集合构造（重复顶点视为错误）"""
        vertices = [int(v) for v in vertices]
        if len(set(vertices)) != len(vertices):
            raise ValueError(f"顶点重复: {vertices}")
        return cls(tuple(sorted(vertices)))

    @property
    def dimension(self) -> int:
        return len(self.vertices) - 1

    @property
    def vertex_set(self) -> frozenset:
        return frozenset(self.vertices)

    def __len__(self):
        return len(self.vertices)

    def __iter__(self):
        return iter(self.vertices)

    def __contains__(self, vertex):
        return vertex in self.vertices

    def issubset(self, other: "Simplex") -> bool:
        return self.vertex_set <= other.vertex_set

    def faces(self) -> List["Simplex"]:
        """所有非空面（包括自身），按 (维数, 顶点) 排序"""
        return [
            Simplex(combo)
            for size in range(1, len(self.vertices) + 1)
            for combo in itertools.combinations(self.vertices, size)
        ]

    def __str__(self):
        return "{" + ",".join(str(v) for v in self.vertices) + "}"


def simplex_key(simplex: Simplex) -> Tuple[int, Tuple[int, ...]]:
    """规范排序键：先维数后顶点"""
    return (len(simplex.vertices), simplex.vertices)


def facets(simplex: Simplex) -> List[Simplex]:
    """
    余维一的面，第 i 个是删去第 i 个顶点得到的面

    Examples:
        {0,1,2} -> [{1,2}, {0,2}, {0,1}]；0 维单纯形没有面
    """
    vertices = simplex.vertices
    if len(vertices) == 1:
        return []
    return [Simplex(vertices[:i] + vertices[i + 1:]) for i in range(len(vertices))]


@dataclass(frozen=True)
class SimplicialComplex:
    """有限抽象单纯复形：下闭的单纯形集合"""
    faces: frozenset

    def __post_init__(self):
        faces = frozenset(self.faces)
        for face in faces:
            for facet in facets(face):
                if facet not in faces:
                    raise ValueError(f"集合不是下闭的: {face} 的面 {facet} 缺失")
        object.__setattr__(self, "faces", faces)

    @classmethod
    def empty(cls) -> "SimplicialComplex":
        return cls(frozenset())

    @property
    def dimension(self) -> int:
        """复形维数，空复形为 -1"""
        return max((f.dimension for f in self.faces), default=-1)

    def cells(self, d: int) -> Tuple[Simplex, ...]:
        """d 维单纯形，按规范顺序"""
        return tuple(sorted(f for f in self.faces if f.dimension == d))

    @property
    def vertices(self) -> Tuple[int, ...]:
        return tuple(sorted(f.vertices[0] for f in self.faces if f.dimension == 0))

    def sorted_faces(self) -> List[Simplex]:
        return sorted(self.faces, key=simplex_key)

    def __contains__(self, simplex):
        return simplex in self.faces

    def __len__(self):
        return len(self.faces)

    def __iter__(self):
        return iter(self.sorted_faces())

    def is_subcomplex_of(self, other: "SimplicialComplex") -> bool:
        return self.faces <= other.faces

    def f_vector(self) -> List[int]:
        """各维单纯形个数 (f_0, f_1, ...)"""
        counts = [0] * (self.dimension + 1)
        for face in self.faces:
            counts[face.dimension] += 1
        return counts

    def euler_characteristic(self) -> int:
        return sum((-1) ** d * count for d, count in enumerate(self.f_vector()))


def close_downward(generators: Iterable[Simplex]) -> SimplicialComplex:
    """包含给定单纯形的最小下闭集合"""
    faces = set()
    for simplex in generators:
        if simplex in faces:
            continue
        faces.update(simplex.faces())
    return SimplicialComplex(frozenset(faces))


def skeleton(complex_: SimplicialComplex, q: int) -> SimplicialComplex:
    """q 维骨架：维数 ≤ q 的所有面"""
    if q < 0:
        raise ValueError(f"骨架维数必须非负: {q}")
    return SimplicialComplex(frozenset(f for f in complex_.faces if f.dimension <= q))


@dataclass(frozen=True)
class CoefficientRing:
    """系数环：整数、有理数或素域 GF(p)"""
    kind: str
    p: Optional[int] = None

    KINDS = ("integers", "rationals", "prime")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"未知的系数环: {self.kind}")
        if self.kind == "prime":
            if self.p is None or not isprime(int(self.p)):
                raise ValueError(f"GF(p) 要求 p 为素数: {self.p}")
        elif self.p is not None:
            raise ValueError(f"{self.kind} 不接受参数 p")

    @classmethod
    def integers(cls) -> "CoefficientRing":
        return cls("integers")

    @classmethod
    def rationals(cls) -> "CoefficientRing":
        return cls("rationals")

    @classmethod
    def prime_field(cls, p: int) -> "CoefficientRing":
        return cls("prime", int(p))

    @property
    def is_field(self) -> bool:
        return self.kind != "integers"

    @property
    def domain(self):
        """对应的 sympy 域"""
        if self.kind == "integers":
            return ZZ
        if self.kind == "rationals":
            return QQ
        return GF(self.p)

    def __str__(self):
        if self.kind == "integers":
            return "Z"
        if self.kind == "rationals":
            return "Q"
        return f"GF({self.p})"


INTEGERS = CoefficientRing.integers()
RATIONALS = CoefficientRing.rationals()


@dataclass(frozen=True, eq=False)
class ChainComplex:
    """
    链复形：每个维数一组有序基，以及整数边缘矩阵

    boundaries[d] 的形状为 (len(bases[d-1]), len(bases[d]))，元素为 0 或 ±1。
    构造时断言 ∂_{d-1} ∘ ∂_d = 0。
    """
    bases: Dict[int, Tuple[Simplex, ...]]
    boundaries: Dict[int, np.ndarray]

    def __post_init__(self):
        for d in self.boundaries:
            if d - 1 in self.boundaries:
                product = self.boundaries[d - 1] @ self.boundaries[d]
                if product.size and product.any():
                    raise ValueError(f"∂_{d - 1} ∘ ∂_{d} ≠ 0")

    @property
    def top_degree(self) -> int:
        return max((d for d, basis in self.bases.items() if basis), default=-1)

    def size(self, d: int) -> int:
        return len(self.bases.get(d, ()))

    def boundary(self, d: int) -> np.ndarray:
        """∂_d，超出范围时返回对应形状的零矩阵"""
        if d in self.boundaries:
            return self.boundaries[d]
        return np.zeros((self.size(d - 1), self.size(d)), dtype=np.int64)


def chain_complex(complex_: SimplicialComplex, exclude: Optional[SimplicialComplex] = None,
                  key=None) -> ChainComplex:
    """
    构造（相对）链复形 C_*(K) / C_*(L)

    Args:
        complex_: 复形 K
        exclude: 子复形 L（可选），其单纯形从基中去掉
        key: 每个维数内基的排序键（默认规范顺序）

    Returns:
        ChainComplex
    """
    excluded = exclude.faces if exclude is not None else frozenset()
    cells = [f for f in complex_.faces if f not in excluded]
    bases: Dict[int, Tuple[Simplex, ...]] = {}
    for d in range(complex_.dimension + 1):
        bases[d] = tuple(sorted((f for f in cells if f.dimension == d), key=key))

    boundaries: Dict[int, np.ndarray] = {}
    for d in range(1, complex_.dimension + 1):
        row_index = {face: i for i, face in enumerate(bases[d - 1])}
        matrix = np.zeros((len(bases[d - 1]), len(bases[d])), dtype=np.int64)
        for j, simplex in enumerate(bases[d]):
            for i, facet in enumerate(facets(simplex)):
                row = row_index.get(facet)
                if row is not None:
                    matrix[row, j] = (-1) ** i
        boundaries[d] = matrix
    return ChainComplex(bases, boundaries)


def boundary_matrix(complex_: SimplicialComplex, d: int, ring: CoefficientRing):
    """
    ∂_d 在系数环上的矩阵（DomainMatrix），行为 (d-1) 维基，列为 d 维基

    删去第 i 个顶点得到的面对应元素 (-1)^i；d 超出范围时返回零列矩阵。
    """
    chains = chain_complex(complex_)
    if d < 1 or d > complex_.dimension:
        array = np.zeros((chains.size(d - 1), 0), dtype=np.int64)
    else:
        array = chains.boundary(d)
    return linalg.from_integer_array(array, ring.domain)


@dataclass(frozen=True)
class HomologyGroup:
    """单个维数的（上）同调：自由秩 + 挠系数（域上挠部分恒为空）"""
    rank: int
    torsion: Tuple[int, ...] = ()

    @property
    def is_zero(self) -> bool:
        return self.rank == 0 and not self.torsion

    def describe(self, ring: CoefficientRing) -> str:
        parts = []
        if self.rank:
            parts.append(f"{ring}^{self.rank}" if self.rank > 1 else str(ring))
        parts.extend(f"Z/{t}" for t in self.torsion)
        return " ⊕ ".join(parts) if parts else "0"


@dataclass(frozen=True)
class HomologyTable:
    """按维数排列的（上）同调群，末尾的零群会被截掉"""
    ring: CoefficientRing
    groups: Tuple[HomologyGroup, ...]
    cohomological: bool = False

    def __post_init__(self):
        groups = list(self.groups)
        while groups and groups[-1].is_zero:
            groups.pop()
        object.__setattr__(self, "groups", tuple(groups))

    @classmethod
    def zero(cls, ring: CoefficientRing, cohomological: bool = False) -> "HomologyTable":
        return cls(ring, (), cohomological)

    @classmethod
    def concentrated(cls, ring: CoefficientRing, degree: int,
                     cohomological: bool = False) -> "HomologyTable":
        """系数环本身集中在一个维数"""
        groups = [HomologyGroup(0)] * degree + [HomologyGroup(1)]
        return cls(ring, tuple(groups), cohomological)

    def __getitem__(self, degree: int) -> HomologyGroup:
        if 0 <= degree < len(self.groups):
            return self.groups[degree]
        return HomologyGroup(0)

    def rank(self, degree: int) -> int:
        return self[degree].rank

    def ranks(self) -> List[int]:
        """Betti 数列表（域上即维数），末尾的 0 截掉；只有挠部分的维数不占位"""
        ranks = [g.rank for g in self.groups]
        while ranks and ranks[-1] == 0:
            ranks.pop()
        return ranks

    @property
    def is_zero(self) -> bool:
        return not self.groups

    def to_dict(self) -> dict:
        return {
            "ring": str(self.ring),
            "cohomological": self.cohomological,
            "groups": [
                {"degree": d, "rank": g.rank, "torsion": list(g.torsion),
                 "description": g.describe(self.ring)}
                for d, g in enumerate(self.groups)
            ],
        }


@lru_cache(maxsize=8192)
def _graded_invariants(complex_: SimplicialComplex, sub: SimplicialComplex,
                       ring: CoefficientRing):
    """
    相对链复形的基本不变量：各维基大小、各 ∂_d 的秩、各 ∂_d 的挠因子

    整数系数时秩按 QQ 计算，挠因子来自 Smith 标准形；同调与上同调共享这些数据。
    """
    chains = chain_complex(complex_, exclude=sub)
    top = complex_.dimension
    sizes = tuple(chains.size(d) for d in range(top + 1))
    if ring.is_field:
        ranks = tuple(
            linalg.integer_rank(chains.boundary(d), ring.domain) if d >= 1 else 0
            for d in range(top + 2)
        )
        torsion = tuple(() for _ in range(top + 2))
    else:
        ranks = _graded_invariants(complex_, sub, RATIONALS)[1]
        torsion = tuple(
            tuple(t for t in linalg.invariant_factors(chains.boundary(d)) if t > 1)
            if 1 <= d <= top else ()
            for d in range(top + 2)
        )
    logger.debug("相对链复形 |K|=%d |L|=%d %s: sizes=%s ranks=%s",
                 len(complex_), len(sub), ring, sizes, ranks)
    return sizes, ranks, torsion


def _check_pair(complex_: SimplicialComplex, sub: Optional[SimplicialComplex]) -> SimplicialComplex:
    if sub is None:
        return SimplicialComplex.empty()
    if not sub.is_subcomplex_of(complex_):
        raise SubcomplexError("not a subcomplex")
    return sub


def relative_homology(complex_: SimplicialComplex, sub: Optional[SimplicialComplex],
                      ring: CoefficientRing) -> HomologyTable:
    """
    相对同调 H_*(K, L; R)，即商复形 C_*(K)⊗R / C_*(L)⊗R 的同调

    Raises:
        SubcomplexError: L 不含于 K
    """
    sub = _check_pair(complex_, sub)
    sizes, ranks, torsion = _graded_invariants(complex_, sub, ring)
    groups = [
        HomologyGroup(sizes[d] - ranks[d] - ranks[d + 1], torsion[d + 1])
        for d in range(len(sizes))
    ]
    return HomologyTable(ring, tuple(groups))


def relative_cohomology(complex_: SimplicialComplex, sub: Optional[SimplicialComplex],
                        ring: CoefficientRing) -> HomologyTable:
    """
    相对上同调 H^*(K, L; R)：在 L 上取零的上链，上边缘为转置的边缘矩阵

    H^d 的挠部分来自 δ^{d-1} = ∂_d^T，其不变因子与 ∂_d 相同。
    """
    sub = _check_pair(complex_, sub)
    sizes, ranks, torsion = _graded_invariants(complex_, sub, ring)
    groups = [
        HomologyGroup(sizes[d] - ranks[d] - ranks[d + 1], torsion[d])
        for d in range(len(sizes))
    ]
    return HomologyTable(ring, tuple(groups), cohomological=True)


def homology(complex_: SimplicialComplex, ring: CoefficientRing) -> HomologyTable:
    """绝对同调 H_*(K; R)"""
    return relative_homology(complex_, None, ring)


def cohomology(complex_: SimplicialComplex, ring: CoefficientRing) -> HomologyTable:
    """绝对上同调 H^*(K; R)"""
    return relative_cohomology(complex_, None, ring)
