# -*- coding: utf-8 -*-
"""
GF(2) 线性代数
向量用 Python 整数位集表示（第 i 位 = 第 i 个坐标），主元取每行的最低位
"""

from typing import Iterable, Iterator, List, Optional, Sequence, Tuple

from models.algebra import GF2Subspace


def low_bit(x: int) -> int:
    return x & -x


def parity(x: int) -> int:
    return bin(x).count('1') & 1


def rref(rows: Iterable[int], n_cols: int) -> List[int]:
    """约化行阶梯形；任一主元列在其他行中都为 0"""
    mask = (1 << n_cols) - 1
    basis: List[int] = []
    for row in rows:
        row &= mask
        for b in basis:
            if row & low_bit(b):
                row ^= b
        if row:
            pivot = low_bit(row)
            basis = [b ^ row if b & pivot else b for b in basis]
            basis.append(row)
    basis.sort(key=low_bit)
    return basis


def reduce(vector: int, basis: Sequence[int]) -> int:
    """用约化基消去向量中的主元位"""
    for b in basis:
        if vector & low_bit(b):
            vector ^= b
    return vector


def in_span(vector: int, basis: Sequence[int]) -> bool:
    return reduce(vector, basis) == 0


def solve_combination(vector: int, rows: Sequence[int], n_cols: int) -> Optional[int]:
    """求行组合掩码 c 使 XOR_{i in c} rows[i] = vector；无解返回 None"""
    mask = (1 << n_cols) - 1
    basis: List[Tuple[int, int]] = []
    for i, row in enumerate(rows):
        row &= mask
        combo = 1 << i
        for b, c in basis:
            if row & low_bit(b):
                row ^= b
                combo ^= c
        if row:
            pivot = low_bit(row)
            basis = [(b ^ row, c ^ combo) if b & pivot else (b, c) for b, c in basis]
            basis.append((row, combo))
    combo = 0
    for b, c in basis:
        if vector & low_bit(b):
            vector ^= b
            combo ^= c
    return combo if vector == 0 else None


def subspace(rows: Iterable[int], n_cols: int) -> GF2Subspace:
    return GF2Subspace(n_cols, tuple(rref(rows, n_cols)))


def orthogonal_complement(space: GF2Subspace) -> GF2Subspace:
    """标准点积下的正交补"""
    n = space.length
    pivots = {low_bit(b): b for b in space.basis}
    result = []
    for col in range(n):
        bit = 1 << col
        if bit in pivots:
            continue
        vector = bit
        for pivot, row in pivots.items():
            if row & bit:
                vector |= pivot
        result.append(vector)
    return GF2Subspace(n, tuple(rref(result, n)))


def elements(space: GF2Subspace) -> Iterator[int]:
    """枚举子空间的全部 2^dim 个元素"""
    basis = space.basis
    for combo in range(1 << len(basis)):
        vector = 0
        for i, b in enumerate(basis):
            if combo >> i & 1:
                vector ^= b
        yield vector


def enumerate_subspaces(n: int) -> List[GF2Subspace]:
    """Z_2^n 的全部子空间（小规模穷举）"""
    seen = {()}
    frontier = [()]
    result = [GF2Subspace(n, ())]
    while frontier:
        next_frontier = []
        for basis in frontier:
            for v in range(1, 1 << n):
                if in_span(v, basis):
                    continue
                grown = tuple(rref(list(basis) + [v], n))
                if grown not in seen:
                    seen.add(grown)
                    next_frontier.append(grown)
                    result.append(GF2Subspace(n, grown))
        frontier = next_frontier
    return result
