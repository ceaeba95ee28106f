"""
谱序列模块 - 由（部分）壳化诱导的过滤链复形的谱序列

页面按标准公式计算：
    Z^r_p = {x ∈ F_p : Dx ∈ F_{p-r}}
    E^r_p = Z^r_p / (Z^{r-1}_{p-1} + D Z^{r-1}_{p+r-1})
全部在域（Q 或 GF(p)）上做精确线性代数，代表元按主元顺序选取，结果可复现。

同调方向 D = ∂（次数 -1），过滤指标即瓦片位置 p；
上同调方向 D = ∂^T（次数 +1），过滤 C^*(K_N, K_{N-j}) 用 j = N+1-p 编号，
报告时换回瓦片位置，此时 d_r 把位置 p 映到 p+r。
页面条目一律以 (p, s) 为键，s = d - p，d 为链的次数。
"""
import bisect
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from sympy.polys.matrices import DomainMatrix

from . import linalg
from .simplicial import (
    CoefficientRing,
    RATIONALS,
    Simplex,
    SimplicialComplex,
    chain_complex,
    cohomology,
    homology,
    skeleton,
)
from .tiles import relative_homology_closed_form
from .tiling import (
    MorseTiling,
    ShellingError,
    ShellingOrder,
    critical_index_counts,
    is_shelling,
)

logger = logging.getLogger(__name__)

Key = Tuple[int, int]


class SpectralError(ValueError):
    """过滤与微分不相容，或输入不满足谱序列计算的前提"""


@dataclass(eq=False)
class FilteredComplex:
    """
    过滤链复形

    bases[d] 按 (过滤指标, 顶点) 排序，因此 F_j 是每个次数的一个前缀；
    differentials[d] 为 D_d : C_d → C_{d+step} 的整数矩阵。
    """
    bases: Dict[int, Tuple[Simplex, ...]]
    indices: Dict[int, Tuple[int, ...]]
    differentials: Dict[int, np.ndarray]
    length: int
    ring: CoefficientRing
    cohomological: bool = False
    complex_: Optional[SimplicialComplex] = None
    q: Optional[int] = None
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if not self.ring.is_field:
            raise SpectralError(f"谱序列只在域上计算，收到 {self.ring}")
        self._check_filtration()

    @property
    def step(self) -> int:
        return 1 if self.cohomological else -1

    @property
    def domain(self):
        return self.ring.domain

    @property
    def degrees(self) -> List[int]:
        return sorted(self.bases)

    def size(self, d: int) -> int:
        return len(self.bases.get(d, ()))

    def position(self, j: int) -> int:
        """过滤指标 → 报告用的瓦片位置"""
        return self.length + 1 - j if self.cohomological else j

    def prefix_length(self, d: int, j: int) -> int:
        """F_j 在次数 d 的维数"""
        return bisect.bisect_right(self.indices.get(d, ()), j)

    def differential(self, d: int) -> np.ndarray:
        if d in self.differentials:
            return self.differentials[d]
        return np.zeros((self.size(d + self.step), self.size(d)), dtype=np.int64)

    def domain_differential(self, d: int) -> DomainMatrix:
        key = ("D", d)
        if key not in self._cache:
            self._cache[key] = linalg.from_integer_array(self.differential(d), self.domain)
        return self._cache[key]

    def cell_counts(self) -> Dict[Key, int]:
        """每个 (p, s) 上的单元个数，即 E^0 的维数"""
        counts: Dict[Key, int] = {}
        for d, indices in self.indices.items():
            for j in indices:
                p = self.position(j)
                counts[(p, d - p)] = counts.get((p, d - p), 0) + 1
        return counts

    def _check_filtration(self):
        for d, matrix in self.differentials.items():
            rows, cols = np.nonzero(matrix)
            target = self.indices.get(d + self.step, ())
            source = self.indices.get(d, ())
            for i, k in zip(rows.tolist(), cols.tolist()):
                if target[i] > source[k]:
                    raise SpectralError(
                        f"微分抬高了过滤指标: 次数 {d} 的单元 {self.bases[d][k]} "
                        f"→ {self.bases[d + self.step][i]}")

    # ---- 子空间 ----

    def cycles(self, r: int, j: int, d: int) -> linalg.Rows:
        """Z^r_j 在次数 d 的一组基（行向量，长度为 C_d 的维数）"""
        key = ("Z", r, j, d)
        if key in self._cache:
            return self._cache[key]
        n = self.size(d)
        m = self.prefix_length(d, j) if j > 0 else 0
        if m == 0:
            basis = []
        else:
            if r <= 0:
                local = [linalg.unit_vector(m, i, self.domain) for i in range(m)]
            else:
                row_start = self.prefix_length(d + self.step, j - r) if j - r > 0 else 0
                block = self.differential(d)[row_start:, :m]
                if block.shape[0] == 0 or not block.any():
                    local = [linalg.unit_vector(m, i, self.domain) for i in range(m)]
                else:
                    local = linalg.nullspace_rows(linalg.from_integer_array(block, self.domain))
            basis = [list(v) + [self.domain.zero] * (n - m) for v in local]
        self._cache[key] = basis
        return basis

    def boundaries(self, r: int, j: int, d: int) -> linalg.Rows:
        """Z^{r-1}_{j-1} + D Z^{r-1}_{j+r-1} 在次数 d 的线性无关生成组（行简化形）"""
        key = ("B", r, j, d)
        if key in self._cache:
            return self._cache[key]
        spanning = list(self.cycles(r - 1, j - 1, d))
        source = d - self.step
        if self.size(source):
            spanning += linalg.apply(self.domain_differential(source),
                                     self.cycles(r - 1, j + r - 1, source))
        rows, _ = linalg.rref_rows(spanning, self.size(d), self.domain)
        self._cache[key] = rows
        return rows

    def representatives(self, r: int, j: int, d: int) -> linalg.Rows:
        """E^r_j 在次数 d 的代表元（从 Z^r_j 的基中按顺序挑选）"""
        key = ("R", r, j, d)
        if key in self._cache:
            return self._cache[key]
        if j < 1 or j > self.length or not self.size(d):
            reps = []
        else:
            z_basis = self.cycles(r, j, d)
            chosen = linalg.independent_extension(
                self.boundaries(r, j, d), z_basis, self.size(d), self.domain)
            reps = [z_basis[i] for i in chosen]
        self._cache[key] = reps
        return reps


@dataclass(frozen=True)
class DifferentialBlock:
    """d_r 的一个分块：source → target，matrix 的行对应目标代表元"""
    source: Key
    target: Key
    matrix: DomainMatrix
    rank: int

    def to_dict(self) -> dict:
        domain = self.matrix.domain
        return {
            "source": list(self.source),
            "target": list(self.target),
            "rank": self.rank,
            "matrix": [[linalg.element_to_python(domain, x) for x in row]
                       for row in self.matrix.to_list()],
        }


@dataclass(frozen=True)
class SpectralPage:
    """谱序列的一页：(p, s) → dim E^r_{p,s}，以及非零的微分分块"""
    r: int
    length: int
    cohomological: bool
    entries: Dict[Key, int]
    differentials: Tuple[DifferentialBlock, ...] = ()

    def entry(self, p: int, s: int) -> int:
        """越界（p ∉ 1..N 或 d < 0）时为 0"""
        if p < 1 or p > self.length or p + s < 0:
            return 0
        return self.entries.get((p, s), 0)

    def total(self) -> int:
        return sum(self.entries.values())

    def totals_by_degree(self) -> Dict[int, int]:
        """按总次数 d = p + s 求和"""
        totals: Dict[int, int] = {}
        for (p, s), dim in self.entries.items():
            totals[p + s] = totals.get(p + s, 0) + dim
        return dict(sorted(totals.items()))

    def dimension_table(self) -> Dict[Key, int]:
        return {key: dim for key, dim in sorted(self.entries.items()) if dim}

    @property
    def is_degenerate(self) -> bool:
        """d_r 全为零"""
        return all(block.rank == 0 for block in self.differentials)

    def to_dict(self) -> dict:
        return {
            "r": self.r,
            "cohomological": self.cohomological,
            "entries": [
                {"p": p, "s": s, "degree": p + s, "dim": dim}
                for (p, s), dim in sorted(self.entries.items()) if dim
            ],
            "differentials": [b.to_dict() for b in self.differentials if b.rank],
        }


@dataclass(frozen=True)
class LimitReport:
    """E^∞ 与真值（上）同调的比对"""
    ring: CoefficientRing
    cohomological: bool
    q: Optional[int]
    limit: Dict[int, Tuple[int, ...]]
    oracle: Dict[int, int]
    image_filtration: Dict[int, Tuple[int, ...]]
    full_complex: Dict[int, int] = field(default_factory=dict)

    @property
    def totals(self) -> Dict[int, int]:
        return {d: sum(dims) for d, dims in self.limit.items()}

    @property
    def matches(self) -> bool:
        degrees = set(self.limit) | set(self.oracle)
        if any(self.totals.get(d, 0) != self.oracle.get(d, 0) for d in degrees):
            return False
        # 像的过滤的相邻差应恰好是 E^∞
        for d, images in self.image_filtration.items():
            steps = [b - a for a, b in zip((0,) + images, images)]
            if tuple(steps) != self.limit.get(d, tuple(0 for _ in images)):
                return False
        return True

    @property
    def below_order_matches(self) -> Optional[bool]:
        """部分壳化时：次数 < q 的 E^∞ 总维数与整个复形的同调一致"""
        if self.q is None:
            return None
        return all(self.totals.get(d, 0) == self.full_complex.get(d, 0) for d in range(self.q))

    @property
    def verdict(self) -> str:
        return "MATCH" if self.matches else "MISMATCH"

    def to_dict(self) -> dict:
        return {
            "ring": str(self.ring),
            "cohomological": self.cohomological,
            "q": self.q,
            "limit": {str(d): list(dims) for d, dims in sorted(self.limit.items())},
            "totals": {str(d): n for d, n in sorted(self.totals.items())},
            "oracle": {str(d): n for d, n in sorted(self.oracle.items())},
            "image_filtration": {str(d): list(v) for d, v in sorted(self.image_filtration.items())},
            "below_order_matches": self.below_order_matches,
            "verdict": self.verdict,
        }


@dataclass(frozen=True)
class FirstPageComparison:
    """E^1 与各瓦片相对（上）同调闭式的逐项比对"""
    ok: bool
    rows: Tuple[dict, ...]

    def to_dict(self) -> dict:
        return {"ok": self.ok, "rows": list(self.rows)}


@dataclass(frozen=True)
class BettiBoundReport:
    """Betti 数 ≤ 对应指标的临界瓦片个数"""
    ok: bool
    rows: Tuple[dict, ...]

    def to_dict(self) -> dict:
        return {"ok": self.ok, "rows": list(self.rows)}


@dataclass(frozen=True)
class SpectralRun:
    """一次谱序列计算：若干页 + 极限比对"""
    filtered: FilteredComplex
    pages: Tuple[SpectralPage, ...]
    limit_page: SpectralPage
    limit: LimitReport

    @property
    def degeneration_page(self) -> Optional[int]:
        return degeneration_page(self.pages, self.limit_page)

    def to_dict(self) -> dict:
        return {
            "direction": "cohomology" if self.filtered.cohomological else "homology",
            "length": self.filtered.length,
            "pages": [page.to_dict() for page in self.pages],
            "limit_page": self.limit_page.to_dict(),
            "degeneration_page": self.degeneration_page,
            "limit": self.limit.to_dict(),
        }


def _closed_complex(tiling: MorseTiling) -> SimplicialComplex:
    if not tiling.space.is_closed:
        raise SpectralError("被铺砌的集合不是下闭的，无法构造链复形")
    return tiling.space.as_complex()


def filtration_from_shelling(tiling: MorseTiling, order: ShellingOrder, q: Optional[int] = None,
                             ring: CoefficientRing = RATIONALS,
                             cohomological: bool = False) -> FilteredComplex:
    """
    由（部分）壳化构造过滤链复形

    Args:
        tiling: 已校验的铺砌，被铺砌的集合必须下闭
        order: 壳化顺序
        q: 骨架维数；None 表示整个复形（order.q 优先）
        ring: 系数域
        cohomological: 是否构造上同调方向的过滤

    Returns:
        FilteredComplex：K^{(q)} 的链复形，每个单元的过滤指标为所属瓦片的位置

    Raises:
        ShellingError: 顺序不是（部分）壳化
        SpectralError: 集合不闭或系数不是域
    """
    if q is None:
        q = order.q
    check = is_shelling(tiling, order.order, q)
    if not check.ok:
        raise ShellingError(f"不是壳化顺序: {check.reason}", check.failing_prefix, check.cells)

    complex_ = _closed_complex(tiling)
    truncated = skeleton(complex_, q) if q is not None and complex_.faces else complex_
    length = len(order.order)
    positions = order.positions()
    owner = tiling.owners()

    index: Dict[Simplex, int] = {}
    for cell in truncated.faces:
        p = positions[owner[cell]]
        index[cell] = length + 1 - p if cohomological else p

    chains = chain_complex(truncated, key=lambda c: (index[c], c.vertices))
    bases = {d: chains.bases[d] for d in chains.bases}
    indices = {d: tuple(index[c] for c in basis) for d, basis in bases.items()}
    differentials: Dict[int, np.ndarray] = {}
    for d in bases:
        if cohomological:
            if d + 1 in bases:
                differentials[d] = chains.boundary(d + 1).T.copy()
        elif d >= 1:
            differentials[d] = chains.boundary(d)

    filtered = FilteredComplex(bases, indices, differentials, length, ring,
                               cohomological, truncated, q)
    logger.debug("过滤链复形: N=%d, 各次数维数=%s, %s",
                 length, [filtered.size(d) for d in filtered.degrees],
                 "上同调" if cohomological else "同调")
    return filtered


def compute_page(filtered: FilteredComplex, r: int) -> SpectralPage:
    """
    计算第 r 页的维数与诱导微分

    Args:
        filtered: 过滤链复形
        r: 页码（≥ 0）

    Returns:
        SpectralPage
    """
    if r < 0:
        raise ValueError(f"页码必须非负: {r}")
    domain = filtered.domain
    entries: Dict[Key, int] = {}
    blocks = []
    for d in filtered.degrees:
        for j in range(1, filtered.length + 1):
            reps = filtered.representatives(r, j, d)
            if not reps:
                continue
            p = filtered.position(j)
            entries[(p, d - p)] = len(reps)

            target_d, target_j = d + filtered.step, j - r
            target_reps = filtered.representatives(r, target_j, target_d)
            if not target_reps:
                continue
            images = linalg.apply(filtered.domain_differential(d), reps)
            den = filtered.boundaries(r, target_j, target_d)
            coords = linalg.coordinates(den + target_reps, images, filtered.size(target_d), domain)
            # 丢掉分母部分的坐标，剩下的就是在代表元上的坐标
            columns = [c[len(den):] for c in coords]
            data = [[columns[col][row] for col in range(len(reps))]
                    for row in range(len(target_reps))]
            matrix = DomainMatrix(data, (len(target_reps), len(reps)), domain)
            tp = filtered.position(target_j)
            blocks.append(DifferentialBlock((p, d - p), (tp, target_d - tp), matrix,
                                            linalg.rank(matrix)))
    page = SpectralPage(r, filtered.length, filtered.cohomological, entries, tuple(blocks))
    logger.debug("第 %d 页: 总维数 %d, 非零微分 %d 块",
                 r, page.total(), sum(1 for b in blocks if b.rank))
    return page


def page_homology_dims(page: SpectralPage) -> Dict[Key, int]:
    """(E^r, d_r) 的同调维数：ker - 进入的像"""
    out_rank: Dict[Key, int] = {}
    in_rank: Dict[Key, int] = {}
    for block in page.differentials:
        out_rank[block.source] = out_rank.get(block.source, 0) + block.rank
        in_rank[block.target] = in_rank.get(block.target, 0) + block.rank
    result = {}
    for key, dim in page.entries.items():
        value = dim - out_rank.get(key, 0) - in_rank.get(key, 0)
        if value:
            result[key] = value
    return dict(sorted(result.items()))


def check_page(page: SpectralPage) -> bool:
    """验证 d_r ∘ d_r = 0"""
    by_source = {block.source: block for block in page.differentials}
    for first in page.differentials:
        second = by_source.get(first.target)
        if second is None:
            continue
        product = second.matrix.matmul(first.matrix)
        zero = product.domain.zero
        if any(x != zero for row in product.to_list() for x in row):
            return False
    return True


def _image_filtration(filtered: FilteredComplex) -> Dict[int, Tuple[int, ...]]:
    """H_d(F_j) → H_d(K) 的像的维数，按报告位置 p = 1..N 排列"""
    N = filtered.length
    result = {}
    for d in filtered.degrees:
        n = filtered.size(d)
        source = d - filtered.step
        boundary = []
        if filtered.size(source):
            all_chains = [linalg.unit_vector(filtered.size(source), i, filtered.domain)
                          for i in range(filtered.size(source))]
            boundary = linalg.apply(filtered.domain_differential(source), all_chains)
        base = linalg.span_dimension(boundary, n, filtered.domain)
        by_engine = []
        for j in range(1, N + 1):
            cycles = filtered.cycles(N, j, d)
            by_engine.append(linalg.span_dimension(cycles + boundary, n, filtered.domain) - base)
        if filtered.cohomological:
            # 上同调按位置累加增量，得到限制映射 H^d(K) → H^d(K_p) 的秩
            steps = [b - a for a, b in zip([0] + by_engine, by_engine)]
            steps.reverse()
            running, images = 0, []
            for value in steps:
                running += value
                images.append(running)
            by_engine = images
        result[d] = tuple(by_engine)
    return result


def run_to_limit(filtered: FilteredComplex,
                 full_complex: Optional[SimplicialComplex] = None) -> Tuple[SpectralPage, LimitReport]:
    """
    计算 E^∞ = E^N，并与 K^{(q)} 的真值（上）同调比对

    Args:
        filtered: 过滤链复形
        full_complex: 部分壳化时用于比对次数 < q 的完整复形

    Returns:
        tuple: (极限页, LimitReport)
    """
    N = filtered.length
    page = compute_page(filtered, max(N, 1)) if N else SpectralPage(0, 0, filtered.cohomological, {})
    degrees = filtered.degrees
    limit = {
        d: tuple(page.entry(p, d - p) for p in range(1, N + 1))
        for d in degrees
    }
    oracle_fn = cohomology if filtered.cohomological else homology
    complex_ = filtered.complex_ if filtered.complex_ is not None else SimplicialComplex.empty()
    oracle = {d: g for d, g in enumerate(oracle_fn(complex_, filtered.ring).ranks())}
    full = {}
    if filtered.q is not None and full_complex is not None:
        full = {d: g for d, g in enumerate(oracle_fn(full_complex, filtered.ring).ranks())}
    report = LimitReport(filtered.ring, filtered.cohomological, filtered.q, limit, oracle,
                         _image_filtration(filtered), full)
    if not report.matches:
        logger.warning("E^∞ 与真值不一致: E^∞=%s, 真值=%s", report.totals, oracle)
    return page, report


def degeneration_page(pages: Sequence[SpectralPage], limit_page: SpectralPage) -> Optional[int]:
    """第一个 r ≥ 1 使 E^r 的维数表等于 E^∞；已计算的页中没有时返回 None"""
    target = limit_page.dimension_table()
    for page in pages:
        if page.r >= 1 and page.dimension_table() == target:
            return page.r
    return None


def spectral_sequence(tiling: MorseTiling, order: ShellingOrder, q: Optional[int] = None,
                      ring: CoefficientRing = RATIONALS, cohomological: bool = False,
                      r_max: Union[int, str] = "auto") -> SpectralRun:
    """
    谱序列驱动：计算若干页并求极限

    Args:
        r_max: 最大页码；"auto" 表示计算到第一个与上一页维数表相同的页（r ≥ 2）或 r = N

    Returns:
        SpectralRun
    """
    filtered = filtration_from_shelling(tiling, order, q, ring, cohomological)
    N = filtered.length
    pages: List[SpectralPage] = []
    if r_max == "auto":
        last = max(N, 1)
        for r in range(0, last + 1):
            pages.append(compute_page(filtered, r))
            if r >= 2 and pages[-1].dimension_table() == pages[-2].dimension_table():
                break
    else:
        for r in range(0, int(r_max) + 1):
            pages.append(compute_page(filtered, r))

    full_complex = _closed_complex(tiling) if filtered.q is not None else None
    limit_page, limit = run_to_limit(filtered, full_complex)
    return SpectralRun(filtered, tuple(pages), limit_page, limit)


def cohomology_spectral(tiling: MorseTiling, order: ShellingOrder, q: Optional[int] = None,
                        ring: CoefficientRing = RATIONALS,
                        r_max: Union[int, str] = "auto") -> SpectralRun:
    """上同调谱序列（对偶过滤，d_r 把位置 p 映到 p + r）"""
    return spectral_sequence(tiling, order, q, ring, cohomological=True, r_max=r_max)


def first_page_vs_tiles(tiling: MorseTiling, order: ShellingOrder, q: Optional[int] = None,
                        ring: CoefficientRing = RATIONALS,
                        cohomological: bool = False) -> FirstPageComparison:
    """
    比对 E^1_{p,s} 与第 p 个瓦片的相对（上）同调闭式

    部分壳化只比对总次数 < q 的项；更高次数的项照常报告但不参与判定。
    """
    filtered = filtration_from_shelling(tiling, order, q, ring, cohomological)
    page = compute_page(filtered, 1)
    top = max(filtered.degrees, default=-1)
    rows = []
    ok = True
    for p, tile_id in enumerate(order.order, start=1):
        expected_table = relative_homology_closed_form(tiling.tiles[tile_id], ring, cohomological)
        for d in range(top + 1):
            actual = page.entry(p, d - p)
            expected = expected_table.rank(d)
            checked = filtered.q is None or d < filtered.q
            match = actual == expected
            if checked and not match:
                ok = False
            if actual or expected:
                rows.append({"p": p, "tile": tile_id, "degree": d, "e1": actual,
                             "closed_form": expected, "checked": checked, "match": match})
    return FirstPageComparison(ok, tuple(rows))


def betti_bound(tiling: MorseTiling, ring: CoefficientRing = RATIONALS,
                q: Optional[int] = None) -> BettiBoundReport:
    """
    b_k(K; R) ≤ 指标为 k 的临界瓦片个数；部分壳化只检查 k < q
    """
    complex_ = _closed_complex(tiling)
    betti = homology(complex_, ring).ranks()
    counts = critical_index_counts(tiling)
    top = max([len(betti) - 1] + list(counts))
    rows = []
    ok = True
    for k in range(top + 1):
        b = betti[k] if k < len(betti) else 0
        c = counts.get(k, 0)
        checked = q is None or k < q
        holds = b <= c
        if checked and not holds:
            ok = False
        rows.append({"degree": k, "betti": b, "critical_tiles": c, "checked": checked, "holds": holds})
    return BettiBoundReport(ok, tuple(rows))


@dataclass(frozen=True)
class SkeletonComparison:
    """H_i(K^{(q)}) 与 H_i(K) 的比对：i < q 相等，i = q 满射（维数不减）"""
    ok: bool
    rows: Tuple[dict, ...]

    def to_dict(self) -> dict:
        return {"ok": self.ok, "rows": list(self.rows)}


def skeleton_comparison(complex_: SimplicialComplex, q: int,
                        ring: CoefficientRing = RATIONALS) -> SkeletonComparison:
    """骨架包含诱导的同调映射在次数 < q 双射、在次数 q 满射（按维数检查）"""
    truncated = homology(skeleton(complex_, q), ring)
    full = homology(complex_, ring)
    rows = []
    ok = True
    for i in range(q + 1):
        a, b = truncated.rank(i), full.rank(i)
        holds = a == b if i < q else a >= b
        ok = ok and holds
        rows.append({"degree": i, "skeleton": a, "complex": b,
                     "relation": "iso" if i < q else "onto", "holds": holds})
    return SkeletonComparison(ok, tuple(rows))
