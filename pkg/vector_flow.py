# -*- coding: utf-8 -*-
"""
单位向量流模块
S^d 流的校验、S^0 / S^1 / R3 构造、按子图族合成、S^6 流流水线、注入下的 S^2 流迁移与流值索引
"""

import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np
from loguru import logger

from base_engine import BaseEngine, Deadline
from errors import BudgetExhaustedError, TheoremViolationError
from graph_core import graph_engine
from group_flow import group_flow_engine
from models.algebra import KleinFlowCertificate
from models.graph import InjectionResult, Multigraph, Orientation
from models.group import AbelianGroup
from models.vector import FlowValueIndex, Tolerance, VectorFlow
from services.cotree_search import (CotreeSystem, EisensteinDomain, GroupDomain, iter_circulations,
                                    search_nowhere_zero, support_mask)
from services.geometry import frame

S6_STRATEGIES = ('search', 'recipe')


@dataclass
class VectorFlowReport:
    """向量流校验报告"""
    max_kcl_residual: float
    max_norm_deviation: float
    zero_edges: List[int]
    kcl_tolerance: float
    unit_tolerance: float
    residuals: Dict[int, float] = field(default_factory=dict)

    @property
    def valid(self) -> bool:
        return (self.max_kcl_residual <= self.kcl_tolerance
                and self.max_norm_deviation <= self.unit_tolerance
                and not self.zero_edges)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'max_kcl_residual': self.max_kcl_residual,
            'max_norm_deviation': self.max_norm_deviation,
            'zero_edges': list(self.zero_edges),
            'valid': self.valid
        }


@dataclass
class S6Family:
    """S^6 流所用的子图族：H1 为偶子图，H2..H4 各有 Z3 流，每条边恰属三个"""
    h1: Tuple[int, ...]
    h2: Tuple[int, ...]
    h3: Tuple[int, ...]
    h4: Tuple[int, ...]
    strategy: str

    @property
    def parts(self) -> List[Tuple[int, ...]]:
        return [self.h1, self.h2, self.h3, self.h4]

    def to_dict(self) -> Dict[str, Any]:
        return {'strategy': self.strategy, 'parts': [list(p) for p in self.parts]}


@dataclass
class InjectedFlow:
    """注入后的图及其 S^2 流"""
    injection: InjectionResult
    flow: VectorFlow
    rotation: np.ndarray

    def to_dict(self) -> Dict[str, Any]:
        return {'injection': self.injection.to_dict(), 'flow': self.flow.to_dict()}


class VectorFlowEngine(BaseEngine):
    """单位向量流引擎"""

    def verify_vector_flow(self, graph: Multigraph, flow: VectorFlow,
                           kcl_tolerance: Optional[float] = None) -> VectorFlowReport:
        """按边编号顺序求和，计算最大 KCL 残差与最大范数偏差

        Args:
            graph: 图
            flow: 向量流
            kcl_tolerance: KCL 容差，默认取流自带的容差

        Returns:
            VectorFlowReport: 校验报告
        """
        flow.orientation.validate(graph)
        self.require(set(flow.values) == set(graph.edge_ids), "流的定义域必须恰好是边集",
                     missing=sorted(set(graph.edge_ids) - set(flow.values)))
        residuals = {}
        for vertex in graph.vertices:
            total = np.zeros(flow.dim)
            for edge_id in sorted(set(graph.incident(vertex))):
                init, ter = flow.orientation.arcs[edge_id]
                if init == ter:
                    continue
                total = total + flow.values[edge_id] if init == vertex else total - flow.values[edge_id]
            residuals[vertex] = float(np.linalg.norm(total))
        norms = {e: float(np.linalg.norm(flow.values[e])) for e in graph.edge_ids}
        zero_edges = [e for e in graph.edge_ids if norms[e] <= 0.5]
        return VectorFlowReport(
            max_kcl_residual=max(residuals.values(), default=0.0),
            max_norm_deviation=max((abs(n - 1.0) for n in norms.values()), default=0.0),
            zero_edges=zero_edges,
            kcl_tolerance=flow.tolerance.kcl if kcl_tolerance is None else kcl_tolerance,
            unit_tolerance=flow.tolerance.unit,
            residuals=residuals)

    def _ensure_valid(self, graph: Multigraph, flow: VectorFlow, what: str,
                      kcl_tolerance: Optional[float] = None) -> VectorFlowReport:
        report = self.verify_vector_flow(graph, flow, kcl_tolerance)
        self.ensure(report.valid, f"{what}未通过校验", **report.to_dict())
        return report

    def _require_valid(self, graph: Multigraph, flow: VectorFlow, what: str):
        report = self.verify_vector_flow(graph, flow)
        self.require(report.valid, f"{what}未通过校验", **report.to_dict())

    def s0_flow_even_graph(self, graph: Multigraph) -> VectorFlow:
        """偶图的 S^0 流：每个分支沿欧拉回路定向，全部取 +1"""
        self.log_operation_start("S0 流构造", edges=graph.num_edges)
        odd = [v for v in graph.vertices if graph.degree(v) % 2]
        self.require(not odd, f"存在奇度顶点: {odd}", vertices=odd)

        arcs: Dict[int, Tuple[int, int]] = {}
        plain = nx.MultiGraph()
        for edge in graph.edges:
            if edge.is_loop:
                arcs[edge.id] = (edge.u, edge.v)
            else:
                plain.add_edge(edge.u, edge.v, key=edge.id)
        for component in sorted(nx.connected_components(plain), key=min):
            sub = plain.subgraph(component)
            for u, v, key in nx.eulerian_circuit(sub, source=min(component), keys=True):
                arcs[key] = (u, v)

        flow = VectorFlow(1, {e: [1.0] for e in arcs}, Orientation(arcs), Tolerance.from_config())
        self._ensure_valid(graph, flow, "S0 流")
        self.log_operation_result("S0 流构造", True)
        return flow

    def s1_flow_R3(self, graph: Multigraph) -> VectorFlow:
        """二部三正则图的 R3 流：定向 A -> B，第 c 个颜色类取 e^{2πic/3}"""
        self.log_operation_start("R3 流构造", vertices=graph.num_vertices)
        matchings = graph_engine.three_edge_coloring_bipartite_cubic(graph)
        part_a = set(graph_engine.is_bipartite(graph).parts[0])
        arcs, values = {}, {}
        for color, matching in enumerate(matchings):
            angle = 2.0 * math.pi * color / 3.0
            for edge_id in matching:
                edge = graph.edge(edge_id)
                arcs[edge_id] = (edge.u, edge.v) if edge.u in part_a else (edge.v, edge.u)
                values[edge_id] = [math.cos(angle), math.sin(angle)]
        flow = VectorFlow(2, values, Orientation(arcs), Tolerance.from_config())
        self._ensure_valid(graph, flow, "R3 流")
        self.log_operation_result("R3 流构造", True)
        return flow

    def r3_flow_exhaustive(self, graph: Multigraph, budget_ms: Optional[float] = None,
                           deadline: Optional[Deadline] = None) -> Optional[VectorFlow]:
        """在六个 Eisenstein 单位中穷举 R3 流（存在当且仅当 Z3 流存在）

        Returns:
            默认定向下的 S^1 流；证明不存在时返回 None
        """
        from services.config_manager import config_manager
        self.log_operation_start("R3 流穷举", edges=graph.num_edges)
        deadline = deadline or self.make_deadline(budget_ms)
        orientation = graph.default_orientation()
        outcome = search_nowhere_zero(CotreeSystem(graph, orientation), EisensteinDomain(), deadline,
                                      config_manager.get_solver()['check_interval'])
        if outcome.verdict == 'budget':
            raise BudgetExhaustedError("R3 流搜索预算耗尽", nodes=outcome.nodes)
        if outcome.verdict == 'none':
            self.log_operation_result("R3 流穷举", True, "证明不存在")
            return None
        values = {e: EisensteinDomain.to_plane(x) for e, x in outcome.values.items()}
        flow = VectorFlow(2, values, orientation, Tolerance.from_config())
        self._ensure_valid(graph, flow, "R3 流")
        self.log_operation_result("R3 流穷举", True, f"{outcome.nodes} 个节点")
        return flow

    def embed_flow(self, flow: VectorFlow, dim: int) -> VectorFlow:
        """补零嵌入更高维空间"""
        self.require(dim >= flow.dim, f"目标维数 {dim} 小于流的维数 {flow.dim}", dim=dim)
        values = {e: np.concatenate([x, np.zeros(dim - flow.dim)]) for e, x in flow.values.items()}
        return VectorFlow(dim, values, flow.orientation, flow.tolerance)

    def compose_decomposition(self, graph: Multigraph, parts: Sequence[Tuple[Multigraph, VectorFlow]],
                              l: int, orientation: Optional[Orientation] = None) -> VectorFlow:
        """每条边恰属 l 个子图时，把各子图上的流拼接并缩放 1/√l

        Args:
            graph: 图 G
            parts: (子图 H_i, H_i 上已校验的流 f_i) 列表
            l: 覆盖次数
            orientation: G 的定向，默认 u -> v

        Returns:
            VectorFlow: 维数为各部分维数之和的单位向量流
        """
        self.log_operation_start("分解合成", parts=len(parts), l=l)
        self.require(l >= 1, f"覆盖次数必须为正: {l}", l=l)
        self.require(len(parts) > 0, "至少需要一个子图")
        orientation = orientation or graph.default_orientation()
        orientation.validate(graph)

        coverage = {e: 0 for e in graph.edge_ids}
        for index, (sub, part_flow) in enumerate(parts):
            for edge in sub.edges:
                self.require(graph.has_edge(edge.id) and graph.edge(edge.id) == edge,
                             f"第 {index} 个子图的边 {edge.id} 不在图中", part=index, edge=edge.id)
                coverage[edge.id] += 1
            report = self.verify_vector_flow(sub, part_flow)
            self.require(report.valid, f"第 {index} 个子图上的流未通过校验", part=index, **report.to_dict())
        wrong = sorted(e for e, count in coverage.items() if count != l)
        self.require(not wrong, f"边 {wrong} 的覆盖次数不等于 {l}", edges=wrong,
                     counts=[coverage[e] for e in wrong])

        scale = 1.0 / math.sqrt(l)
        total_dim = sum(part_flow.dim for _, part_flow in parts)
        values = {}
        for edge_id in graph.edge_ids:
            blocks = []
            for sub, part_flow in parts:
                if sub.has_edge(edge_id):
                    sign = 1.0 if part_flow.orientation.arcs[edge_id] == orientation.arcs[edge_id] else -1.0
                    blocks.append(sign * part_flow.values[edge_id])
                else:
                    blocks.append(np.zeros(part_flow.dim))
            values[edge_id] = scale * np.concatenate(blocks)

        tolerance = parts[0][1].tolerance
        flow = VectorFlow(total_dim, values, orientation, tolerance)
        bound = max(tolerance.kcl, sum(self.verify_vector_flow(s, f).max_kcl_residual for s, f in parts) * scale)
        self._ensure_valid(graph, flow, "合成流", kcl_tolerance=max(bound, tolerance.kcl))
        self.log_operation_result("分解合成", True, f"S^{total_dim - 1} 流")
        return flow

    def find_s6_family(self, graph: Multigraph, budget_ms: Optional[float] = None,
                       strategy: str = 'search', deadline: Optional[Deadline] = None) -> S6Family:
        """寻找 H1..H4 子图族

        search：在偶子图空间与 Z3 流支撑中穷举，取字典序最先的族；
        recipe：由 Z6 流 ψ 构造，H1 为 ψ 的奇支撑，g 为 H1 上的欧拉 ±1 定向，
        H2、H3、H4 分别为 ψ mod 3、ψ mod 3 + g、ψ mod 3 - g 的支撑。
        """
        self.require(strategy in S6_STRATEGIES, f"未知的策略: {strategy}", strategy=strategy)
        bridges = graph_engine.find_bridges(graph)
        self.require(not bridges, f"图存在割边 {list(bridges)}", bridges=list(bridges))
        deadline = deadline or self.make_deadline(budget_ms)
        if strategy == 'recipe':
            return self._s6_family_recipe(graph, deadline)
        return self._s6_family_search(graph, deadline)

    def _s6_family_search(self, graph: Multigraph, deadline: Deadline) -> S6Family:
        order = list(graph.edge_ids)
        full = (1 << len(order)) - 1
        system = CotreeSystem(graph, graph.default_orientation())

        evens = set()
        z2 = GroupDomain(AbelianGroup.cyclic(2))
        for values in iter_circulations(system, z2):
            evens.add(support_mask(values, order, z2.group.is_identity))
        flowable = set()
        z3 = GroupDomain(AbelianGroup.cyclic(3))
        for count, values in enumerate(iter_circulations(system, z3)):
            if count % 1024 == 0 and deadline.expired():
                raise BudgetExhaustedError("Z3 流支撑枚举预算耗尽", enumerated=count)
            flowable.add(support_mask(values, order, z3.group.is_identity))
        logger.debug(f"偶子图 {len(evens)} 个, Z3 流支撑 {len(flowable)} 个")

        candidates = sorted(flowable)
        for h1 in sorted(evens):
            if deadline.expired():
                raise BudgetExhaustedError("子图族搜索预算耗尽")
            c1 = full & ~h1
            # H2、H3 都必须包含 C1，且补集两两不交
            containing = [h for h in candidates if h & c1 == c1]
            for i, h2 in enumerate(containing):
                for h3 in containing[i:]:
                    if h2 | h3 != full:
                        continue
                    c2, c3 = full & ~h2, full & ~h3
                    h4 = c1 | c2 | c3
                    if h4 in flowable:
                        return S6Family(*(self._mask_edges(m, order) for m in (h1, h2, h3, h4)), 'search')
        raise TheoremViolationError("无割边图在完整的搜索空间中没有找到子图族")

    def _s6_family_recipe(self, graph: Multigraph, deadline: Deadline) -> S6Family:
        psi = group_flow_engine.solve_flow_exhaustive(graph, AbelianGroup.cyclic(6),
                                                      deadline.remaining_ms()).require_flow()
        orientation = psi.orientation
        odd = [e for e in graph.edge_ids if psi.values[e][0] % 2]
        euler = self.s0_flow_even_graph(graph.edge_subgraph(odd))
        g = {e: 0 for e in graph.edge_ids}
        for e in odd:
            g[e] = 1 if euler.orientation.arcs[e] == orientation.arcs[e] else -1
        f = {e: psi.values[e][0] % 3 for e in graph.edge_ids}
        h2 = tuple(e for e in graph.edge_ids if f[e] % 3)
        h3 = tuple(e for e in graph.edge_ids if (f[e] + g[e]) % 3)
        h4 = tuple(e for e in graph.edge_ids if (f[e] - g[e]) % 3)
        return S6Family(tuple(odd), h2, h3, h4, 'recipe')

    @staticmethod
    def _mask_edges(mask: int, order: Sequence[int]) -> Tuple[int, ...]:
        return tuple(e for bit, e in enumerate(order) if mask >> bit & 1)

    def s6_pipeline(self, graph: Multigraph, budget_ms: Optional[float] = None,
                    strategy: str = 'search') -> VectorFlow:
        """无割边图的 S^6 流：H1 上的 S^0 流与 H2..H4 上的 S^1 流按 l = 3 合成"""
        self.log_operation_start("S6 流流水线", strategy=strategy, edges=graph.num_edges)
        deadline = self.make_deadline(budget_ms)
        family = self.find_s6_family(graph, strategy=strategy, deadline=deadline)
        parts = []
        h1 = graph.edge_subgraph(family.h1)
        parts.append((h1, self.s0_flow_even_graph(h1)))
        for edges in family.parts[1:]:
            sub = graph.edge_subgraph(edges)
            flow = self.r3_flow_exhaustive(sub, deadline=deadline)
            self.ensure(flow is not None, "有 Z3 流的子图必有 R3 流", edges=list(edges))
            parts.append((sub, flow))
        result = self.compose_decomposition(graph, parts, 3)
        self.log_operation_result("S6 流流水线", True)
        return result

    def injection_flow_transfer(self, graph_g: Multigraph, g: VectorFlow, v: int,
                                graph_h: Multigraph, h: VectorFlow, w: int,
                                pairing: Optional[Sequence[int]] = None) -> InjectedFlow:
        """把 H 注入 G 时合成 S^2 流

        取 θ 使 θ(a'_{σ(i)}) = -a_i（a_i、a'_j 为 v、w 处向外的流值），
        G 侧保持 g，H 侧取 θ∘h，第 i 条连接边从 G 侧指向 H 侧并取 -a_i。
        """
        self.log_operation_start("注入流迁移", v=v, w=w)
        self.require(graph_engine.is_cubic(graph_g) and graph_engine.is_cubic(graph_h), "注入流迁移要求 G、H 均为三正则图")
        self.require(g.dim == 3 and h.dim == 3, "注入流迁移要求 S^2 流", dim_g=g.dim, dim_h=h.dim)
        self._require_valid(graph_g, g, "G 上的流")
        self._require_valid(graph_h, h, "H 上的流")
        injection = graph_engine.inject(graph_h, w, graph_g, v, pairing)

        g_edges = list(graph_g.incident(v))
        h_edges = list(graph_h.incident(w))
        a = [g.outward(e, v) for e in g_edges]
        a_prime = [h.outward(h_edges[injection.pairing[i]], w) for i in range(3)]
        target = frame(-a[0], np.cross(-a[0], -a[1]))
        source = frame(a_prime[0], np.cross(a_prime[0], a_prime[1]))
        theta = target @ source.T
        mismatch = max(float(np.linalg.norm(theta @ a_prime[i] + a[i])) for i in range(3))
        self.require(mismatch <= g.tolerance.rotation, "找不到对齐两组三元流值的旋转",
                     mismatch=mismatch, tolerance=g.tolerance.rotation)

        arcs, values = {}, {}
        bridge_ids = {new_id for new_id, _, _ in injection.bridges}
        for edge in graph_g.edges:
            if edge.id not in set(g_edges):
                arcs[edge.id] = g.orientation.arcs[edge.id]
                values[edge.id] = g.values[edge.id]
        for old_id, new_id in injection.h_edge_map.items():
            init, ter = h.orientation.arcs[old_id]
            arcs[new_id] = (injection.h_vertex_map[init], injection.h_vertex_map[ter])
            values[new_id] = theta @ h.values[old_id]
        for i, (new_id, g_edge, _) in enumerate(injection.bridges):
            edge = injection.graph.edge(new_id)
            x = graph_g.edge(g_edge).other(v)
            y = edge.other(x)
            arcs[new_id] = (x, y)
            values[new_id] = -a[i]
        self.ensure(set(arcs) == set(injection.graph.edge_ids) and bridge_ids <= set(arcs), "注入后边集不完整")

        tolerance = g.tolerance
        flow = VectorFlow(3, values, Orientation(arcs), tolerance)
        self._ensure_valid(injection.graph, flow, "注入后的流", kcl_tolerance=10.0 * tolerance.kcl)
        self.log_operation_result("注入流迁移", True)
        return InjectedFlow(injection, flow, theta)

    def blow_up_flow(self, graph: Multigraph, g: VectorFlow, v: int) -> InjectedFlow:
        """三角形爆破下的 S^2 流：以 K4 的等角浸入导出的流注入"""
        from graph_generators import complete_graph
        from immersion_geometry import immersion_engine
        k4 = complete_graph(4)
        h = immersion_engine.immersion_to_flow(k4, immersion_engine.k4_immersion())
        return self.injection_flow_transfer(graph, g, v, k4, h, 0)

    @staticmethod
    def canonical_sign(vector: np.ndarray, tol: float) -> int:
        """规范符号：绝对值最大的首个坐标为正"""
        magnitudes = np.abs(vector)
        top = float(magnitudes.max()) if magnitudes.size else 0.0
        for c in vector:
            if abs(c) >= top - tol:
                return 1 if c > 0 else -1
        return 1

    def build_value_index(self, graph: Multigraph, flow: VectorFlow,
                          cluster: Optional[float] = None) -> FlowValueIndex:
        """按 ± 聚类流值，负值类的边反转方向"""
        cluster = flow.tolerance.cluster if cluster is None else cluster
        flow.orientation.validate(graph)
        representatives: List[np.ndarray] = []
        edge_class: Dict[int, int] = {}
        reversed_edges: List[int] = []
        for edge_id in graph.edge_ids:
            x = flow.value(edge_id)
            match = None
            for index, rep in enumerate(representatives):
                if np.linalg.norm(x - rep) <= cluster:
                    match = (index, False)
                    break
                if np.linalg.norm(x + rep) <= cluster:
                    match = (index, True)
                    break
            if match is None:
                sign = self.canonical_sign(x, cluster)
                representatives.append(sign * x)
                match = (len(representatives) - 1, sign < 0)
            edge_class[edge_id] = match[0]
            if match[1]:
                reversed_edges.append(edge_id)

        flipped = set(reversed_edges)
        normalized = group_flow_engine.reverse_edge_normalize(flow, lambda e, i, t, x: e not in flipped)
        logger.debug(f"流值索引: {len(representatives)} 个取值类, 反转 {len(reversed_edges)} 条边")
        return FlowValueIndex(representatives, edge_class, normalized, reversed_edges)

    def balanced_counts(self, graph: Multigraph, index: FlowValueIndex) -> Dict[int, Tuple[int, ...]]:
        """ε_i(v) = |E⁺(v) ∩ E_i| - |E⁻(v) ∩ E_i|（规范化定向下）"""
        rows = {}
        for vertex in graph.vertices:
            row = [0] * index.size
            for edge_id in sorted(set(graph.incident(vertex))):
                init, ter = index.orientation.arcs[edge_id]
                if init == ter:
                    continue
                row[index.edge_class[edge_id]] += 1 if init == vertex else -1
            rows[vertex] = tuple(row)
        return rows

    def balanced_residual(self, graph: Multigraph, index: FlowValueIndex) -> float:
        """max_v ‖Σ_i ε_i(v) v_i‖"""
        worst = 0.0
        for row in self.balanced_counts(graph, index).values():
            total = np.zeros(index.flow.dim)
            for count, rep in zip(row, index.representatives):
                if count:
                    total = total + count * rep
            worst = max(worst, float(np.linalg.norm(total)))
        return worst

    def s2_flow_from_klein(self, graph: Multigraph, certificate: KleinFlowCertificate) -> VectorFlow:
        """Z2 x Z2 流的三个偶支撑各带 S^0 流，按 l = 2 合成为 S^2 流"""
        klein = certificate.to_group_flow()
        report = group_flow_engine.verify_circulation(graph, klein)
        self.require(report.nowhere_zero, "Klein 四元群流未通过校验", **report.to_dict())
        supports = [
            [e for e, (x, y) in sorted(klein.values.items()) if x],
            [e for e, (x, y) in sorted(klein.values.items()) if y],
            [e for e, (x, y) in sorted(klein.values.items()) if x != y]
        ]
        parts = []
        for support in supports:
            sub = graph.edge_subgraph(support)
            parts.append((sub, self.s0_flow_even_graph(sub)))
        return self.compose_decomposition(graph, parts, 2)


# 全局向量流引擎实例
vector_flow_engine = VectorFlowEngine()
