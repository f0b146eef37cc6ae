# -*- coding: utf-8 -*-
"""
精确整数线性代数
无分数 Bareiss 消元求秩；幺模列变换求行格的饱和化基
"""

from typing import List, Sequence, Tuple

import numpy as np


def bareiss_rank(matrix: Sequence[Sequence[int]]) -> int:
    """有理数域上的秩，全程只用整数运算"""
    rows = [[int(x) for x in row] for row in matrix]
    if not rows or not rows[0]:
        return 0
    m, n = len(rows), len(rows[0])
    rank = 0
    previous = 1
    for col in range(n):
        pivot = next((i for i in range(rank, m) if rows[i][col] != 0), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        for i in range(rank + 1, m):
            for j in range(col + 1, n):
                rows[i][j] = (rows[rank][col] * rows[i][j] - rows[i][col] * rows[rank][j]) // previous
            rows[i][col] = 0
        previous = rows[rank][col]
        rank += 1
        if rank == m:
            break
    return rank


def column_echelon(matrix: Sequence[Sequence[int]]) -> Tuple[np.ndarray, np.ndarray, int]:
    """幺模列变换把 A 化为只有前 r 列非零的形式

    Returns:
        (A', W, r)，满足 A = A' W，W 幺模；W 的前 r 行是 A 行空间饱和格的基
    """
    a = np.array([[int(x) for x in row] for row in matrix], dtype=object)
    if a.size == 0:
        n = len(matrix[0]) if len(matrix) else 0
        return a.reshape(len(matrix), n), np.identity(n, dtype=int).astype(object), 0
    m, n = a.shape
    w = np.identity(n, dtype=int).astype(object)
    r = 0
    for k in range(m):
        if r == n:
            break
        while True:
            cols = [j for j in range(r, n) if a[k, j] != 0]
            if len(cols) <= 1:
                break
            j0 = min(cols, key=lambda j: abs(a[k, j]))
            for j in cols:
                if j == j0:
                    continue
                q = a[k, j] // a[k, j0]
                # 列 j -= q * 列 j0，对应 W 的行 j0 += q * 行 j
                a[:, j] = a[:, j] - q * a[:, j0]
                w[j0, :] = w[j0, :] + q * w[j, :]
        cols = [j for j in range(r, n) if a[k, j] != 0]
        if not cols:
            continue
        j = cols[0]
        if j != r:
            a[:, [r, j]] = a[:, [j, r]]
            w[[r, j], :] = w[[j, r], :]
        if a[k, r] < 0:
            a[:, r] = -a[:, r]
            w[r, :] = -w[r, :]
        r += 1
    return a, w, r


def saturation_basis(matrix: Sequence[Sequence[int]]) -> List[Tuple[int, ...]]:
    """行空间 S 的饱和格 S_Q ∩ Z^b 的一组整数基"""
    _, w, r = column_echelon(matrix)
    return [tuple(int(x) for x in w[i, :]) for i in range(r)]
