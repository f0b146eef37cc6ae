# -*- coding: utf-8 -*-
"""
等角 S^2 浸入模块
浸入与 S^2 流的互相转换、对径翻转、二部图的一点/两点浸入、K4 与准 Petersen 图的构造
"""

import math
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from loguru import logger

from base_engine import BaseEngine
from graph_core import graph_engine
from models.graph import Multigraph, Orientation
from models.immersion import DirectedArc, Immersion
from models.vector import Tolerance, VectorFlow
from services.geometry import (TWO_PI, bisect_root, ccw_angle, meridian_axis, normalize, sphere_point,
                               spherical_angle)

NORTH_POLE = np.array([0.0, 0.0, 1.0])
EQUIANGLE = TWO_PI / 3.0
CONSTRUCTIONS = ('two-point', 'one-point', 'k4', 'quasi-petersen')


@dataclass
class EquiangularReport:
    """等角性检查报告"""
    angles: Dict[int, List[float]]
    max_deviation: float
    endpoint_error: float
    tolerance: float
    endpoint_tolerance: float

    @property
    def valid(self) -> bool:
        return self.max_deviation <= self.tolerance and self.endpoint_error <= self.endpoint_tolerance

    def to_dict(self) -> Dict[str, Any]:
        return {
            'angles': {v: list(a) for v, a in sorted(self.angles.items())},
            'max_deviation': self.max_deviation,
            'endpoint_error': self.endpoint_error,
            'valid': self.valid
        }


def tangent_toward(point: np.ndarray, target: np.ndarray) -> np.ndarray:
    """在 point 处沿劣弧指向 target 的单位切向量"""
    axis = normalize(np.cross(point, target))
    return normalize(np.cross(axis, point))


class ImmersionEngine(BaseEngine):
    """等角浸入引擎"""

    def departure_tangent(self, arc: DirectedArc, at: str = 'start') -> np.ndarray:
        """弧在起点（或终点，反向离开）处的出发方向"""
        self.require(at in ('start', 'end'), f"未知的端点: {at}", at=at)
        axis = arc.axis_vector
        self.require(np.linalg.norm(axis) > 0.5, "弧的轴退化", axis=list(arc.axis))
        if at == 'start':
            return normalize(np.cross(axis, arc.start_vector))
        return -normalize(np.cross(axis, arc.end_vector))

    def reverse_arc(self, arc: DirectedArc) -> DirectedArc:
        """同一点集反向行走：起点改为原终点，轴取反"""
        return DirectedArc(tuple(-arc.axis_vector), tuple(arc.end_vector), arc.length)

    def _departures(self, graph: Multigraph, immersion: Immersion, vertex: int) -> List[np.ndarray]:
        tangents = []
        for edge_id in sorted(set(graph.incident(vertex))):
            init, ter = immersion.orientation.arcs[edge_id]
            arc = immersion.arc(edge_id)
            if init == vertex:
                tangents.append(self.departure_tangent(arc, 'start'))
            if ter == vertex:
                tangents.append(self.departure_tangent(arc, 'end'))
        return tangents

    def check_equiangular(self, graph: Multigraph, immersion: Immersion) -> EquiangularReport:
        """每个顶点处三条弧出发方向两两夹角与 2π/3 的偏差，以及弧端点与顶点像的误差"""
        self.require(graph_engine.is_cubic(graph), "等角性检查要求三正则图")
        immersion.orientation.validate(graph)
        tolerance = immersion.tolerance

        endpoint_error = 0.0
        for edge in graph.edges:
            init, ter = immersion.orientation.arcs[edge.id]
            arc = immersion.arc(edge.id)
            endpoint_error = max(endpoint_error,
                                 float(np.linalg.norm(arc.start_vector - immersion.point(init))),
                                 float(np.linalg.norm(arc.end_vector - immersion.point(ter))),
                                 abs(float(np.dot(arc.axis_vector, arc.start_vector))))

        angles: Dict[int, List[float]] = {}
        deviation = 0.0
        for vertex in graph.vertices:
            t = self._departures(graph, immersion, vertex)
            triple = [spherical_angle(t[0], t[1]), spherical_angle(t[0], t[2]), spherical_angle(t[1], t[2])]
            angles[vertex] = triple
            deviation = max(deviation, max(abs(x - EQUIANGLE) for x in triple))
        return EquiangularReport(angles, deviation, endpoint_error, tolerance.equiangular,
                                 max(tolerance.unit, tolerance.equiangular))

    def immersion_to_flow(self, graph: Multigraph, immersion: Immersion) -> VectorFlow:
        """φ(vw) 取弧的轴"""
        self.log_operation_start("浸入转流", vertices=graph.num_vertices)
        report = self.check_equiangular(graph, immersion)
        self.require(report.valid, "浸入不满足等角条件", max_deviation=report.max_deviation,
                     endpoint_error=report.endpoint_error)
        values = {e.id: normalize(immersion.arc(e.id).axis_vector) for e in graph.edges}
        flow = VectorFlow(3, values, immersion.orientation, immersion.tolerance)

        from vector_flow import vector_flow_engine
        bound = max(immersion.tolerance.kcl, 10.0 * (report.max_deviation + immersion.tolerance.unit))
        check = vector_flow_engine.verify_vector_flow(graph, flow, kcl_tolerance=bound)
        self.ensure(check.valid, "等角浸入导出的流未通过校验", **check.to_dict())
        self.log_operation_result("浸入转流", True, f"最大残差 {check.max_kcl_residual:.3e}")
        return flow

    def flow_to_immersion(self, graph: Multigraph, flow: VectorFlow) -> Immersion:
        """γ(v) 取编号最小的两条关联边向外取值的叉积方向，每条边映到与 φ(e) 正交的大圆上的逆时针弧"""
        from vector_flow import vector_flow_engine
        self.log_operation_start("流转浸入", vertices=graph.num_vertices)
        self.require(graph_engine.is_cubic(graph), "流转浸入要求三正则图")
        self.require(not graph.has_loops(), "流转浸入要求无环")
        self.require(flow.dim == 3, f"流转浸入要求 S^2 流，得到维数 {flow.dim}", dim=flow.dim)
        report = vector_flow_engine.verify_vector_flow(graph, flow)
        self.require(report.valid, "输入流未通过校验", **report.to_dict())
        tolerance = flow.tolerance

        points = {}
        for vertex in graph.vertices:
            first, second = graph.incident(vertex)[:2]
            cross = np.cross(flow.outward(first, vertex), flow.outward(second, vertex))
            norm = float(np.linalg.norm(cross))
            self.require(norm >= tolerance.cross_min, f"顶点 {vertex} 处叉积过小，输入不是真正的 S^2 流",
                         vertex=vertex, norm=norm)
            points[vertex] = cross / norm

        arcs = {}
        for edge in graph.edges:
            init, ter = flow.orientation.arcs[edge.id]
            axis = normalize(flow.values[edge.id])
            length = ccw_angle(axis, points[init], points[ter])
            if length <= tolerance.unit:
                length = TWO_PI
            arcs[edge.id] = DirectedArc(tuple(axis), tuple(points[init]), length)

        immersion = Immersion(points, arcs, flow.orientation, tolerance)
        check = self.check_equiangular(graph, immersion)
        self.ensure(check.valid, "由 S^2 流构造的浸入不等角", max_deviation=check.max_deviation,
                    endpoint_error=check.endpoint_error)
        self.log_operation_result("流转浸入", True)
        return immersion

    def antipodal_flip(self, immersion: Immersion, vertex: int) -> Immersion:
        """γ(v) 换成 -γ(v)，关联弧留在原大圆上（轴不变）

        弧长按 L ± π 取模 2π，终点必然落在新的像上；长于 π 的弧因此变短，
        得到的是原弧的一段而不是延长。
        """
        self.require(vertex in immersion.points, f"浸入中没有顶点 {vertex}", vertex=vertex)
        points = dict(immersion.points)
        points[vertex] = -immersion.points[vertex]
        arcs = dict(immersion.arcs)
        for edge_id, (init, ter) in immersion.orientation.arcs.items():
            if vertex not in (init, ter):
                continue
            arc = immersion.arcs[edge_id]
            start, length = arc.start_vector, arc.length
            if init == vertex:
                start = -start
                length -= math.pi
            if ter == vertex:
                length += math.pi
            length = length % TWO_PI
            if length <= immersion.tolerance.unit:
                length = TWO_PI
            arcs[edge_id] = DirectedArc(arc.axis, tuple(start), length)
        return Immersion(points, arcs, immersion.orientation, immersion.tolerance)

    def _bipartite_setup(self, graph: Multigraph):
        self.require(not graph.has_loops(), "二部浸入要求无环")
        matchings = graph_engine.three_edge_coloring_bipartite_cubic(graph)
        part_a, part_b = graph_engine.is_bipartite(graph).parts
        return matchings, set(part_a), part_b

    def two_point_immersion(self, graph: Multigraph) -> Immersion:
        """A 映到北极，B 映到南极，第 c 个匹配沿经度 2πc/3 的经线"""
        self.log_operation_start("两点浸入", vertices=graph.num_vertices)
        matchings, part_a, _ = self._bipartite_setup(graph)
        points = {v: NORTH_POLE if v in part_a else -NORTH_POLE for v in graph.vertices}
        arcs_map, arcs = {}, {}
        for color, matching in enumerate(matchings):
            axis = meridian_axis(EQUIANGLE * color)
            for edge_id in matching:
                edge = graph.edge(edge_id)
                arcs_map[edge_id] = (edge.u, edge.v) if edge.u in part_a else (edge.v, edge.u)
                arcs[edge_id] = DirectedArc(tuple(axis), tuple(NORTH_POLE), math.pi)
        immersion = Immersion(points, arcs, Orientation(arcs_map), Tolerance.from_config())
        self._ensure_equiangular(graph, immersion, "两点浸入")
        return immersion

    def one_point_immersion(self, graph: Multigraph) -> Immersion:
        """两点浸入翻转全部 B 顶点，所有弧变为完整大圆"""
        immersion = self.two_point_immersion(graph)
        _, part_b = graph_engine.is_bipartite(graph).parts
        for vertex in part_b:
            immersion = self.antipodal_flip(immersion, vertex)
        self._ensure_equiangular(graph, immersion, "一点浸入")
        return immersion

    def k4_immersion(self) -> Immersion:
        """K4：v0 在北极，v1..v3 在余纬度 θ*、经度 2π(i-1)/3"""
        from graph_generators import complete_graph
        graph = complete_graph(4)

        def objective(theta: float) -> float:
            v1 = sphere_point(theta, 0.0)
            v2 = sphere_point(theta, EQUIANGLE)
            return spherical_angle(tangent_toward(v1, NORTH_POLE), tangent_toward(v1, v2)) - EQUIANGLE

        theta = bisect_root(objective, 0.1, math.pi - 0.1)
        logger.debug(f"K4 浸入余纬度 θ* = {theta!r}")
        points = {0: NORTH_POLE}
        for i in range(1, 4):
            points[i] = sphere_point(theta, EQUIANGLE * (i - 1))
        immersion = self._geodesic_immersion(graph, points, meridians={
            e.id: EQUIANGLE * (e.v - 1) for e in graph.edges if e.u == 0})
        self._ensure_equiangular(graph, immersion, "K4 浸入")
        return immersion

    def quasi_petersen_immersion(self, a: int, b: int, p: int) -> Immersion:
        """准 Petersen 图 G_{a,b,p} 的单射等角浸入

        V 层在余纬度 θ_V、W 层在余纬度 π - θ_W，经度均为 2πi/p；
        θ 由二分法使同层两条圈弧的夹角为 2π/3，经线平分其余两个角。
        """
        from graph_generators import quasi_petersen
        self.log_operation_start("准 Petersen 浸入", a=a, b=b, p=p)
        self.require(p / 6 < a < p / 2 and p / 6 < b < p / 2,
                     f"参数越界: 需要 p/6 < a,b < p/2，得到 a={a}, b={b}, p={p}", a=a, b=b, p=p)
        graph = quasi_petersen(a, b, p)

        def layer_objective(step: int):
            def objective(theta: float) -> float:
                here = sphere_point(theta, 0.0)
                ahead = sphere_point(theta, TWO_PI * step / p)
                behind = sphere_point(theta, -TWO_PI * step / p)
                return spherical_angle(tangent_toward(here, ahead), tangent_toward(here, behind)) - EQUIANGLE
            return objective

        theta_v = bisect_root(layer_objective(a), 1e-4, math.pi / 2 - 1e-4)
        theta_w = bisect_root(layer_objective(b), 1e-4, math.pi / 2 - 1e-4)
        logger.debug(f"θ_V = {theta_v!r}, θ_W = {theta_w!r}")

        points = {}
        for i in range(p):
            points[i] = sphere_point(theta_v, TWO_PI * i / p)
            points[p + i] = sphere_point(math.pi - theta_w, TWO_PI * i / p)
        meridians = {e.id: TWO_PI * e.u / p for e in graph.edges if e.v == e.u + p}
        immersion = self._geodesic_immersion(graph, points, meridians)
        self._ensure_equiangular(graph, immersion, "准 Petersen 浸入")
        self.ensure(immersion.distinct_points(), "准 Petersen 浸入不是单射")
        self.log_operation_result("准 Petersen 浸入", True, f"θ_V={theta_v:.12f}, θ_W={theta_w:.12f}")
        return immersion

    def _geodesic_immersion(self, graph: Multigraph, points: Dict[int, np.ndarray],
                            meridians: Dict[int, float]) -> Immersion:
        """经线边沿给定经度向南，其余边取劣弧"""
        arcs = {}
        for edge in graph.edges:
            start, end = points[edge.u], points[edge.v]
            if edge.id in meridians:
                axis = meridian_axis(meridians[edge.id])
            else:
                axis = normalize(np.cross(start, end))
            arcs[edge.id] = DirectedArc(tuple(axis), tuple(start), ccw_angle(axis, start, end))
        return Immersion(points, arcs, graph.default_orientation(), Tolerance.from_config())

    def _ensure_equiangular(self, graph: Multigraph, immersion: Immersion, what: str):
        report = self.check_equiangular(graph, immersion)
        self.ensure(report.valid, f"{what}不等角", max_deviation=report.max_deviation,
                    endpoint_error=report.endpoint_error)
        self.log_operation_result(what, True, f"最大偏差 {report.max_deviation:.3e}")

    def sample_polylines(self, immersion: Immersion, samples: int) -> Dict[int, List[List[float]]]:
        """每条弧等距采样 samples 个点，供外部绘图"""
        self.require(samples >= 2, f"采样点数至少为 2: {samples}", samples=samples)
        return {
            edge_id: [[float(c) for c in arc.point_at(arc.length * k / (samples - 1))] for k in range(samples)]
            for edge_id, arc in sorted(immersion.arcs.items())
        }

    def construct(self, construction: str, graph: Optional[Multigraph] = None,
                  a: Optional[int] = None, b: Optional[int] = None,
                  p: Optional[int] = None) -> Tuple[Multigraph, Immersion]:
        """按名称构造浸入，返回 (图, 浸入)"""
        self.require(construction in CONSTRUCTIONS, f"未知的构造: {construction}",
                     construction=construction, known=list(CONSTRUCTIONS))
        if construction == 'k4':
            from graph_generators import complete_graph
            return complete_graph(4), self.k4_immersion()
        if construction == 'quasi-petersen':
            from graph_generators import quasi_petersen
            self.require(None not in (a, b, p), "quasi-petersen 构造需要参数 a、b、p")
            return quasi_petersen(a, b, p), self.quasi_petersen_immersion(a, b, p)
        self.require(graph is not None, f"{construction} 构造需要输入图")
        if construction == 'two-point':
            return graph, self.two_point_immersion(graph)
        return graph, self.one_point_immersion(graph)


# 全局浸入引擎实例
immersion_engine = ImmersionEngine()
