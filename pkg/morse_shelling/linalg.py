"""
精确线性代数模块 - 基于 sympy 的 DomainMatrix

向量统一用"行列表"表示：list[list[域元素]]。
在域（QQ、GF(p)）上做行简化、零空间、坐标求解；在 ZZ 上求不变因子。
主元顺序由列下标决定，因此所有结果都是确定的。
"""
from typing import List, Sequence, Tuple

import numpy as np
from sympy.polys.matrices.normalforms import invariant_factors as _domain_invariant_factors
from sympy.polys.domains import ZZ
from sympy.polys.matrices import DomainMatrix


Rows = List[list]


def from_integer_array(array: np.ndarray, domain) -> DomainMatrix:
    """
    把整数 numpy 矩阵转换为指定域上的 DomainMatrix

    Args:
        array: 二维整数数组
        domain: sympy 域（ZZ、QQ、GF(p)）

    Returns:
        DomainMatrix
    """
    n_rows, n_cols = array.shape
    data = [[domain(int(x)) for x in row] for row in array.tolist()]
    if n_rows == 0:
        data = []
    return DomainMatrix(data, (n_rows, n_cols), domain)


def to_field(matrix: DomainMatrix) -> DomainMatrix:
    """ZZ 上的矩阵提升到分式域，域上的矩阵原样返回"""
    if matrix.domain.is_Field:
        return matrix
    return matrix.convert_to(matrix.domain.get_field())


def rank(matrix: DomainMatrix) -> int:
    """矩阵的秩（ZZ 上的矩阵按 QQ 计算）"""
    if 0 in matrix.shape:
        return 0
    _, pivots = to_field(matrix).rref()
    return len(pivots)


def integer_rank(array: np.ndarray, domain) -> int:
    """整数矩阵在给定域上的秩"""
    if 0 in array.shape or not array.any():
        return 0
    return rank(from_integer_array(array, domain))


def rref_rows(rows: Sequence[list], n_cols: int, domain) -> Tuple[Rows, Tuple[int, ...]]:
    """
    行列表的简化行阶梯形

    Returns:
        tuple: (非零行组成的行列表, 主元列下标)
    """
    if not rows or n_cols == 0:
        return [], ()
    matrix = DomainMatrix([list(r) for r in rows], (len(rows), n_cols), domain)
    reduced, pivots = matrix.rref()
    data = reduced.to_list()
    return data[:len(pivots)], tuple(pivots)


def span_dimension(rows: Sequence[list], n_cols: int, domain) -> int:
    """行向量张成子空间的维数"""
    return len(rref_rows(rows, n_cols, domain)[1])


def nullspace_rows(matrix: DomainMatrix) -> Rows:
    """
    右零空间 {x : M x = 0} 的一组基（由 RREF 的自由列构造）

    Args:
        matrix: 域上的 DomainMatrix

    Returns:
        list: 基向量行列表，每行长度等于列数
    """
    n_rows, n_cols = matrix.shape
    domain = matrix.domain
    if n_cols == 0:
        return []
    if n_rows == 0:
        return [unit_vector(n_cols, j, domain) for j in range(n_cols)]

    reduced, pivots = matrix.rref()
    data = reduced.to_list()
    pivot_set = set(pivots)
    basis = []
    for free in range(n_cols):
        if free in pivot_set:
            continue
        vector = unit_vector(n_cols, free, domain)
        for i, pivot in enumerate(pivots):
            vector[pivot] = -data[i][free]
        basis.append(vector)
    return basis


def apply(matrix: DomainMatrix, rows: Sequence[list]) -> Rows:
    """对每个行向量 v 计算 M v，结果仍以行列表返回"""
    n_rows, n_cols = matrix.shape
    if not rows:
        return []
    if n_rows == 0:
        return [[] for _ in rows]
    if n_cols == 0:
        return [[matrix.domain.zero] * n_rows for _ in rows]
    vectors = DomainMatrix([list(r) for r in rows], (len(rows), n_cols), matrix.domain)
    return matrix.matmul(vectors.transpose()).transpose().to_list()


def independent_extension(base: Sequence[list], candidates: Sequence[list],
                          n_cols: int, domain) -> List[int]:
    """
    从候选向量中按顺序挑选，使之与 base 一起线性无关并张成 span(base ∪ candidates)

    base 本身必须线性无关。

    Returns:
        list: 被选中的候选向量下标
    """
    vectors = list(base) + list(candidates)
    if not vectors or n_cols == 0:
        return []
    # 列主元给出字典序最小的极大无关组
    columns = [[vectors[j][i] for j in range(len(vectors))] for i in range(n_cols)]
    _, pivots = rref_rows(columns, len(vectors), domain)
    offset = len(base)
    if sum(1 for p in pivots if p < offset) != offset:
        raise ArithmeticError("基向量组线性相关")
    return [p - offset for p in pivots if p >= offset]


def coordinates(basis: Sequence[list], vectors: Sequence[list], n_cols: int, domain) -> Rows:
    """
    求每个向量在线性无关基下的坐标

    Raises:
        ArithmeticError: 某个向量不在 span(basis) 中
    """
    k = len(basis)
    if not vectors:
        return []
    if k == 0:
        if any(x != domain.zero for v in vectors for x in v):
            raise ArithmeticError("向量不在给定基张成的子空间中")
        return [[] for _ in vectors]
    stacked = list(basis) + list(vectors)
    columns = [[stacked[j][i] for j in range(len(stacked))] for i in range(n_cols)]
    reduced, pivots = rref_rows(columns, len(stacked), domain)
    if tuple(pivots) != tuple(range(k)):
        raise ArithmeticError("向量不在给定基张成的子空间中")
    return [[reduced[i][k + j] for i in range(k)] for j in range(len(vectors))]


def invariant_factors(array: np.ndarray) -> Tuple[int, ...]:
    """
    整数矩阵的非零不变因子（Smith 标准形的对角元，取绝对值）

    使用 sympy 的任意精度整数运算，不会溢出。
    """
    if 0 in array.shape or not array.any():
        return ()
    factors = _domain_invariant_factors(from_integer_array(array, ZZ))
    return tuple(abs(int(f)) for f in factors if f != 0)


def element_to_python(domain, value):
    """把域元素转成 JSON 友好的 Python 值（整数或 'a/b' 字符串）"""
    expr = domain.to_sympy(value)
    if expr.is_Integer:
        return int(expr)
    return str(expr)


def unit_vector(n: int, j: int, domain) -> list:
    vector = [domain.zero] * n
    vector[j] = domain.one
    return vector
