# -*- coding: utf-8 -*-
"""
群流模块
群值循环的校验、割平衡、反转边、余树穷举求解、二部三正则图的 Z3 流以及沿归约溯源的流提升
"""

from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Union

import numpy as np
from loguru import logger

from base_engine import BaseEngine
from errors import BudgetExhaustedError, PreconditionError
from graph_core import graph_engine
from models.graph import EdgeTrace, Multigraph, Orientation
from models.group import AbelianGroup, GroupFlow
from models.vector import VectorFlow
from services.cotree_search import CotreeSystem, GroupDomain, random_assignment, search_nowhere_zero

AnyFlow = Union[GroupFlow, VectorFlow]


@dataclass
class CirculationReport:
    """群流校验报告"""
    kcl_violations: List[int] = field(default_factory=list)
    zeros: List[int] = field(default_factory=list)

    @property
    def is_circulation(self) -> bool:
        return not self.kcl_violations

    @property
    def nowhere_zero(self) -> bool:
        return not self.kcl_violations and not self.zeros

    def to_dict(self) -> Dict[str, Any]:
        return {
            'kcl_violations': list(self.kcl_violations),
            'zeros': list(self.zeros),
            'circulation': self.is_circulation,
            'valid': self.nowhere_zero
        }


@dataclass
class SolveResult:
    """穷举求解结果：found / proven-none / budget-exhausted"""
    verdict: str
    flow: Optional[GroupFlow]
    nodes: int
    elapsed_ms: float
    group: AbelianGroup

    def require_flow(self) -> GroupFlow:
        """取出流；不存在或预算耗尽时抛出异常"""
        if self.verdict == 'found':
            return self.flow
        if self.verdict == 'budget-exhausted':
            raise BudgetExhaustedError(f"{self.group.label} 流搜索预算耗尽",
                                       nodes=self.nodes, elapsed_ms=round(self.elapsed_ms, 3))
        raise PreconditionError(f"图不存在无处为零的 {self.group.label} 流", group=self.group.label)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'verdict': self.verdict,
            'group': list(self.group.moduli),
            'nodes': self.nodes,
            'flow': self.flow.to_dict() if self.flow is not None else None
        }


class GroupFlowEngine(BaseEngine):
    """群流引擎"""

    def _check_domain(self, graph: Multigraph, flow: GroupFlow):
        flow.orientation.validate(graph)
        self.require(set(flow.values) == set(graph.edge_ids), "流的定义域必须恰好是边集",
                     missing=sorted(set(graph.edge_ids) - set(flow.values)),
                     extra=sorted(set(flow.values) - set(graph.edge_ids)))
        for edge_id, x in flow.values.items():
            flow.group.validate(x)

    def net_outflow(self, graph: Multigraph, flow: GroupFlow, vertex: int):
        """顶点处流出减流入（环不参与）"""
        group = flow.group
        total = group.identity
        for edge_id in sorted(set(graph.incident(vertex))):
            init, ter = flow.orientation.arcs[edge_id]
            if init == ter:
                continue
            x = flow.values[edge_id]
            total = group.add(total, x) if init == vertex else group.sub(total, x)
        return total

    def verify_circulation(self, graph: Multigraph, flow: GroupFlow) -> CirculationReport:
        """校验基尔霍夫定律并列出取零元的边"""
        self._check_domain(graph, flow)
        report = CirculationReport()
        for vertex in graph.vertices:
            if not flow.group.is_identity(self.net_outflow(graph, flow, vertex)):
                report.kcl_violations.append(vertex)
        report.zeros = [e for e in graph.edge_ids if flow.group.is_identity(flow.values[e])]
        if report.kcl_violations:
            logger.debug(f"基尔霍夫定律在顶点 {report.kcl_violations} 处不成立")
        return report

    def verify_cut_balance(self, graph: Multigraph, flow: GroupFlow, subset: Sequence[int]) -> bool:
        """割平衡：E⁺(X) 上的和等于 E⁻(X) 上的和"""
        plus, minus = graph_engine.cut(graph, flow.orientation, subset)
        group = flow.group
        return group.total(flow.values[e] for e in plus) == group.total(flow.values[e] for e in minus)

    def reverse_edge_normalize(self, flow: AnyFlow,
                               predicate: Callable[[int, int, int, Any], bool]) -> AnyFlow:
        """反转不满足谓词的边并对其取值取负

        Args:
            flow: 群流或向量流
            predicate: (边编号, 起点, 终点, 取值) -> 是否保留当前方向

        Returns:
            新的流对象，原对象不变
        """
        flipped = [e for e, (init, ter) in sorted(flow.orientation.arcs.items())
                   if not predicate(e, init, ter, flow.values[e])]
        orientation = flow.orientation.reversed(flipped)
        if isinstance(flow, GroupFlow):
            values = dict(flow.values)
            for e in flipped:
                values[e] = flow.group.neg(values[e])
            return GroupFlow(flow.group, values, orientation)
        values = {e: np.array(x, copy=True) for e, x in flow.values.items()}
        for e in flipped:
            values[e] = -values[e]
        return VectorFlow(flow.dim, values, orientation, flow.tolerance)

    def solve_flow_exhaustive(self, graph: Multigraph, group: AbelianGroup,
                              budget_ms: Optional[float] = None,
                              orientation: Optional[Orientation] = None) -> SolveResult:
        """在余树赋值空间中穷举无处为零的群流

        Args:
            graph: 图
            group: 有限阿贝尔群
            budget_ms: 时间预算（毫秒），默认取配置
            orientation: 定向，默认 u -> v

        Returns:
            SolveResult: 找到的字典序最小的流，或证明不存在，或预算耗尽
        """
        from services.config_manager import config_manager
        self.log_operation_start("群流穷举", group=group.label, edges=graph.num_edges)
        orientation = orientation or graph.default_orientation()
        orientation.validate(graph)
        deadline = self.make_deadline(budget_ms)
        system = CotreeSystem(graph, orientation)
        outcome = search_nowhere_zero(system, GroupDomain(group), deadline,
                                      config_manager.get_solver()['check_interval'])
        elapsed = deadline.elapsed_ms()

        if outcome.verdict == 'budget':
            self.log_operation_result("群流穷举", False, f"预算耗尽 ({outcome.nodes} 个节点)")
            return SolveResult('budget-exhausted', None, outcome.nodes, elapsed, group)
        if outcome.verdict == 'none':
            self.log_operation_result("群流穷举", True, f"证明不存在 {group.label} 流")
            return SolveResult('proven-none', None, outcome.nodes, elapsed, group)

        flow = GroupFlow(group, outcome.values, orientation)
        report = self.verify_circulation(graph, flow)
        self.ensure(report.nowhere_zero, "搜索得到的流未通过校验", **report.to_dict())
        self.log_operation_result("群流穷举", True, f"找到 {group.label} 流 ({outcome.nodes} 个节点)")
        return SolveResult('found', flow, outcome.nodes, elapsed, group)

    def z3_flow_bipartite_cubic(self, graph: Multigraph) -> GroupFlow:
        """二部三正则图：定向 A -> B，全部取 1"""
        self.require(graph_engine.is_cubic(graph), "Z3 流构造要求三正则图")
        self.require(not graph.has_loops(), "Z3 流构造要求无环")
        bipartition = graph_engine.is_bipartite(graph)
        self.require(bipartition.is_bipartite, "Z3 流构造要求二部图", odd_walk=bipartition.odd_walk)
        part_a = set(bipartition.parts[0])
        arcs = {e.id: (e.u, e.v) if e.u in part_a else (e.v, e.u) for e in graph.edges}
        group = AbelianGroup.cyclic(3)
        flow = GroupFlow(group, {e: (1,) for e in arcs}, Orientation(arcs))
        self.ensure(self.verify_circulation(graph, flow).nowhere_zero, "A -> B 全 1 赋值不是 Z3 流")
        return flow

    def lift_flow(self, original: Multigraph, reduced: Multigraph, trace: EdgeTrace,
                  flow: AnyFlow) -> AnyFlow:
        """把归约图上的流沿溯源提升回原图（原图默认定向）

        Args:
            original: 原图
            reduced: 归约图
            trace: reduce_to_cubic 给出的溯源
            flow: 归约图上已校验的流

        Returns:
            原图上的同类流
        """
        self.log_operation_start("流提升", edges=original.num_edges)
        sources = trace.source_edges()
        self.require(sources == sorted(original.edge_ids), "溯源与原图边集不一致",
                     sources=sources, edges=list(original.edge_ids))
        self.require(set(trace.edges) == set(reduced.edge_ids) == set(flow.values),
                     "溯源、归约图与流的边集不一致")
        self._require_verified(reduced, flow)

        is_group = isinstance(flow, GroupFlow)

        def negate(x):
            return flow.group.neg(x) if is_group else -x

        lifted: Dict[int, Any] = {}
        for new_edge, chain in trace.edges.items():
            value = flow.values[new_edge]
            if not flow.orientation.agrees_with_default(reduced.edge(new_edge)):
                value = negate(value)
            for source, sign in chain:
                lifted[source] = value if sign > 0 else negate(value)

        orientation = original.default_orientation()
        if is_group:
            result = GroupFlow(flow.group, lifted, orientation)
        else:
            result = VectorFlow(flow.dim, lifted, orientation, flow.tolerance)
        self._require_verified(original, result, ensure=True)
        self.log_operation_result("流提升", True)
        return result

    def _require_verified(self, graph: Multigraph, flow: AnyFlow, ensure: bool = False):
        if isinstance(flow, GroupFlow):
            report = self.verify_circulation(graph, flow)
            ok = report.nowhere_zero
            details = report.to_dict()
        else:
            from vector_flow import vector_flow_engine
            report = vector_flow_engine.verify_vector_flow(graph, flow)
            ok = report.valid
            details = report.to_dict()
        if ensure:
            self.ensure(ok, "提升后的流未通过校验", **details)
        else:
            self.require(ok, "输入流未通过校验", **details)

    def random_circulation(self, graph: Multigraph, group: AbelianGroup, rng: np.random.Generator,
                           orientation: Optional[Orientation] = None) -> GroupFlow:
        """循环空间中的均匀随机元素（可能含零值）"""
        orientation = orientation or graph.default_orientation()
        system = CotreeSystem(graph, orientation)
        values = random_assignment(system, GroupDomain(group), rng)
        return GroupFlow(group, values, orientation)


# 全局群流引擎实例
group_flow_engine = GroupFlowEngine()
