# -*- coding: utf-8 -*-
"""
秩代数模块
平衡向量矩阵、有理秩、奇坐标自由判定、GF(2) 行空间与正交补、覆盖对以及 Z2 x Z2 流合成
"""

from itertools import combinations
from typing import Iterable, List, Optional, Sequence, Tuple

from loguru import logger

from base_engine import BaseEngine
from group_flow import group_flow_engine
from models.algebra import BalancedMatrix, GF2Subspace, KleinFlowCertificate, OddFreeVerdict
from models.graph import Multigraph
from models.vector import FlowValueIndex, VectorFlow
from services import gf2
from services.lattice import bareiss_rank, saturation_basis
from vector_flow import vector_flow_engine


def _row_masks(rows: Iterable[Sequence[int]]) -> List[int]:
    """整数行约化到 GF(2) 的位集"""
    masks = []
    for row in rows:
        mask = 0
        for i, x in enumerate(row):
            if int(x) % 2:
                mask |= 1 << i
        masks.append(mask)
    return masks


def _popcount(x: int) -> int:
    return bin(x).count('1')


class RankAlgebraEngine(BaseEngine):
    """秩代数引擎"""

    def balanced_matrix(self, graph: Multigraph, index: FlowValueIndex) -> BalancedMatrix:
        """每个顶点的平衡向量 ε(v)"""
        counts = vector_flow_engine.balanced_counts(graph, index)
        vertices = tuple(graph.vertices)
        return BalancedMatrix(index.size, tuple(counts[v] for v in vertices), vertices)

    def rank_q(self, matrix: BalancedMatrix) -> int:
        """有理数域上的精确秩"""
        return bareiss_rank(matrix.rows) if matrix.rows else 0

    def odd_coordinate_free(self, matrix: BalancedMatrix) -> OddFreeVerdict:
        """在饱和格 S_Q ∩ Z^b 上判定奇坐标自由

        饱和格的基约化到 GF(2) 后，若某个 e_j 落在其张成空间中，
        对应的基组合就是恰有一个奇坐标的见证向量。
        """
        b = matrix.b
        basis = saturation_basis(matrix.rows) if matrix.rows and b else []
        masks = _row_masks(basis)
        for j in range(b):
            combo = gf2.solve_combination(1 << j, masks, b)
            if combo is None:
                continue
            witness = [0] * b
            for i, row in enumerate(basis):
                if combo >> i & 1:
                    witness = [w + x for w, x in zip(witness, row)]
            self.ensure(sum(x % 2 for x in witness) == 1, "见证向量的奇坐标个数不为 1", witness=witness)
            logger.info(f"不是奇坐标自由的: 坐标 {j} 的见证向量 {witness}")
            return OddFreeVerdict(False, tuple(witness), j, basis)
        return OddFreeVerdict(True, None, None, basis)

    def odd_free_by_rowspace(self, matrix: BalancedMatrix) -> bool:
        """只看平衡向量整数组合的较弱判定：e_j 均不在 S′ 中"""
        space = self.mod2_rowspace(matrix)
        return not any(gf2.in_span(1 << j, space.basis) for j in range(matrix.b))

    def mod2_rowspace(self, matrix: BalancedMatrix) -> GF2Subspace:
        return gf2.subspace(_row_masks(matrix.rows), matrix.b)

    def orthogonal_complement(self, space: GF2Subspace) -> GF2Subspace:
        complement = gf2.orthogonal_complement(space)
        self.ensure(space.dim + complement.dim == space.length, "正交补维数恒等式不成立",
                    dim=space.dim, complement=complement.dim, length=space.length)
        return complement

    def num_odd_support(self, space: GF2Subspace) -> int:
        """奇数支撑向量的个数（枚举）"""
        return sum(1 for x in gf2.elements(space) if gf2.parity(x))

    def covering_pair(self, space: GF2Subspace) -> Tuple[int, int]:
        """求 x, y ∈ W 使 supp(x) ∪ supp(y) 为全部坐标

        覆盖对通常不唯一，平局按位集整数值打破：可枚举时返回 x 为最小非零元、
        y >= x 的第一对，例如 W = Z_2^3 时得到 (001, 110) 而不是以 111 为 x；
        否则对若干候选 x 在未覆盖坐标上解线性方程组求 y。
        """
        from services.config_manager import config_manager
        b = space.length
        full = space.full_mask
        self.require(space.dim >= b - 2, f"子空间维数不足: dim={space.dim} < b-2={b - 2}",
                     dim=space.dim, deficit=b - 2 - space.dim)
        covered = 0
        for row in space.basis:
            covered |= row
        missing = [j for j in range(b) if not covered >> j & 1]
        self.require(not missing, f"坐标投影不满射: {missing}", coordinates=missing)

        if space.dim <= config_manager.get_solver()['enumerate_limit_log2']:
            members = sorted(gf2.elements(space))
            for i, x in enumerate(members):
                if x == 0:
                    continue
                for y in members[i:]:
                    if x | y == full:
                        return x, y
            self.ensure(False, "满足前提的子空间中没有覆盖对", length=b, dim=space.dim)

        for x in self._candidate_x(space):
            uncovered = full & ~x
            rows = [row & uncovered for row in space.basis]
            combo = gf2.solve_combination(uncovered, rows, b) if uncovered else 0
            if combo is None:
                continue
            y = 0
            for i, row in enumerate(space.basis):
                if combo >> i & 1:
                    y ^= row
            if x | y == full:
                return x, y
        self.ensure(False, "构造覆盖对失败", length=b, dim=space.dim)

    @staticmethod
    def _candidate_x(space: GF2Subspace) -> Iterable[int]:
        greedy = 0
        improved = True
        while improved:
            improved = False
            for row in space.basis:
                if _popcount(greedy ^ row) > _popcount(greedy):
                    greedy ^= row
                    improved = True
        yield greedy
        yield from space.basis
        for first, second in combinations(space.basis, 2):
            yield first ^ second

    def synthesize_4flow(self, graph: Multigraph, flow: VectorFlow,
                         index: Optional[FlowValueIndex] = None) -> KleinFlowCertificate:
        """秩不超过 2 且奇坐标自由的 S^d 流给出无处为零的 Z2 x Z2 流

        Args:
            graph: 图
            flow: 已校验的向量流
            index: 预先构建的流值索引，默认现算

        Returns:
            KleinFlowCertificate: 通过校验的证书
        """
        self.log_operation_start("4-流合成", edges=graph.num_edges)
        report = vector_flow_engine.verify_vector_flow(graph, flow)
        self.require(report.valid, "输入流未通过校验", **report.to_dict())
        index = index or vector_flow_engine.build_value_index(graph, flow)
        matrix = self.balanced_matrix(graph, index)
        b = matrix.b

        rank = self.rank_q(matrix)
        self.require(rank <= 2, f"平衡向量空间的秩为 {rank}，超过 2", rank=rank, b=b)
        verdict = self.odd_coordinate_free(matrix)
        self.require(verdict.free, "平衡向量空间不是奇坐标自由的", **verdict.to_dict())

        rowspace = self.mod2_rowspace(matrix)
        self.ensure(rowspace.dim <= rank, "dim S′ 超过有理秩", dim=rowspace.dim, rank=rank)
        complement = self.orthogonal_complement(rowspace)
        self.ensure(complement.dim >= b - 2, "dim W < b - 2", dim=complement.dim, b=b)
        covered = 0
        for row in complement.basis:
            covered |= row
        self.ensure(covered == complement.full_mask, "W 的坐标投影不满射",
                    coordinates=[j for j in range(b) if not covered >> j & 1])

        x, y = self.covering_pair(complement)
        class_values = [((x >> i) & 1, (y >> i) & 1) for i in range(b)]
        values = {e: class_values[c] for e, c in index.edge_class.items()}
        certificate = KleinFlowCertificate(values, x, y, b, class_values, index.orientation)
        check = group_flow_engine.verify_circulation(graph, certificate.to_group_flow())
        self.ensure(check.nowhere_zero, "合成的 Z2 x Z2 流未通过校验", **check.to_dict())
        self.log_operation_result("4-流合成", True, f"b={b}, rank={rank}, dim S′={rowspace.dim}")
        return certificate


# 全局秩代数引擎实例
rank_algebra_engine = RankAlgebraEngine()
