# -*- coding: utf-8 -*-
"""
JSON 文档模型
图、群流、向量流、浸入、证书的外部格式；解析时拒绝悬空端点和不一致的定向
"""

from typing import Dict, List, Optional

from pydantic import BaseModel, Field, model_validator

from models.graph import Edge, Multigraph, Orientation
from models.group import AbelianGroup, GroupFlow
from models.immersion import DirectedArc, Immersion
from models.vector import Tolerance, VectorFlow


class EdgeDocument(BaseModel):
    """边"""
    id: int = Field(..., ge=0, description="边编号")
    u: int = Field(..., description="端点 u")
    v: int = Field(..., description="端点 v")


class ArcEndsDocument(BaseModel):
    """定向的起点和终点"""
    init: int
    ter: int


OrientationDocument = Dict[int, ArcEndsDocument]


def _orientation(doc: Optional[OrientationDocument]) -> Optional[Orientation]:
    if doc is None:
        return None
    return Orientation({e: (a.init, a.ter) for e, a in doc.items()})


def _orientation_doc(orientation: Orientation) -> OrientationDocument:
    return {e: ArcEndsDocument(init=a, ter=b) for e, (a, b) in sorted(orientation.arcs.items())}


class GraphDocument(BaseModel):
    """图文档 {"vertices", "edges", "orientation"}"""
    vertices: List[int]
    edges: List[EdgeDocument]
    orientation: Optional[OrientationDocument] = None
    allow_loops: bool = False

    @model_validator(mode='after')
    def check_consistency(self) -> 'GraphDocument':
        known = set(self.vertices)
        if len(known) != len(self.vertices):
            raise ValueError("顶点编号重复")
        ids = [e.id for e in self.edges]
        if len(set(ids)) != len(ids):
            raise ValueError("边编号重复")
        for edge in self.edges:
            if edge.u not in known or edge.v not in known:
                raise ValueError(f"边 {edge.id} 的端点未注册")
            if edge.u == edge.v and not self.allow_loops:
                raise ValueError(f"边 {edge.id} 是环，但 allow_loops 为 false")
        if self.orientation is not None:
            by_id = {e.id: e for e in self.edges}
            if set(self.orientation) != set(by_id):
                raise ValueError("定向必须恰好覆盖全部边")
            for edge_id, ends in self.orientation.items():
                edge = by_id[edge_id]
                if sorted((ends.init, ends.ter)) != sorted((edge.u, edge.v)):
                    raise ValueError(f"边 {edge_id} 的定向端点与图不一致")
        return self

    def to_graph(self) -> Multigraph:
        return Multigraph(tuple(self.vertices), tuple(Edge(e.id, e.u, e.v) for e in self.edges), self.allow_loops)

    def to_orientation(self, graph: Optional[Multigraph] = None) -> Orientation:
        orientation = _orientation(self.orientation)
        return orientation if orientation is not None else (graph or self.to_graph()).default_orientation()

    @classmethod
    def from_graph(cls, graph: Multigraph, orientation: Optional[Orientation] = None) -> 'GraphDocument':
        orientation = orientation or graph.default_orientation()
        return cls(vertices=list(graph.vertices),
                   edges=[EdgeDocument(id=e.id, u=e.u, v=e.v) for e in graph.edges],
                   orientation=_orientation_doc(orientation),
                   allow_loops=graph.allow_loops)


class GroupFlowDocument(BaseModel):
    """群流文档 {"group": [模], "values": {边: [余数]}}"""
    group: List[int] = Field(..., min_length=1)
    values: Dict[int, List[int]]
    orientation: Optional[OrientationDocument] = None

    @model_validator(mode='after')
    def check_values(self) -> 'GroupFlowDocument':
        for edge_id, residues in self.values.items():
            if len(residues) != len(self.group):
                raise ValueError(f"边 {edge_id} 的元素长度与群不一致")
            if any(not 0 <= r < k for r, k in zip(residues, self.group)):
                raise ValueError(f"边 {edge_id} 的元素越界")
        return self

    def to_flow(self, graph: Multigraph, default: Optional[Orientation] = None) -> GroupFlow:
        orientation = _orientation(self.orientation) or default or graph.default_orientation()
        orientation.validate(graph)
        group = AbelianGroup(tuple(self.group))
        return GroupFlow(group, {e: tuple(x) for e, x in self.values.items()}, orientation)

    @classmethod
    def from_flow(cls, flow: GroupFlow) -> 'GroupFlowDocument':
        return cls(group=list(flow.group.moduli),
                   values={e: list(x) for e, x in sorted(flow.values.items())},
                   orientation=_orientation_doc(flow.orientation))


class VectorFlowDocument(BaseModel):
    """向量流文档 {"dim": d+1, "values": {边: [浮点]}}"""
    dim: int = Field(..., ge=1)
    values: Dict[int, List[float]]
    orientation: Optional[OrientationDocument] = None

    @model_validator(mode='after')
    def check_dimension(self) -> 'VectorFlowDocument':
        for edge_id, vector in self.values.items():
            if len(vector) != self.dim:
                raise ValueError(f"边 {edge_id} 的向量维数与 dim 不一致")
        return self

    def to_flow(self, graph: Multigraph, default: Optional[Orientation] = None,
                tolerance: Optional[Tolerance] = None) -> VectorFlow:
        orientation = _orientation(self.orientation) or default or graph.default_orientation()
        orientation.validate(graph)
        return VectorFlow(self.dim, dict(self.values), orientation, tolerance or Tolerance.from_config())

    @classmethod
    def from_flow(cls, flow: VectorFlow) -> 'VectorFlowDocument':
        return cls(dim=flow.dim,
                   values={e: [float(c) for c in x] for e, x in sorted(flow.values.items())},
                   orientation=_orientation_doc(flow.orientation))


class ArcDocument(BaseModel):
    """有向弧"""
    axis: List[float] = Field(..., min_length=3, max_length=3)
    start: List[float] = Field(..., min_length=3, max_length=3)
    length: float = Field(..., gt=0)


class ImmersionDocument(BaseModel):
    """浸入文档 {"vertices": {顶点: [x,y,z]}, "arcs": {边: 弧}}"""
    vertices: Dict[int, List[float]]
    arcs: Dict[int, ArcDocument]
    orientation: Optional[OrientationDocument] = None

    def to_immersion(self, graph: Multigraph, tolerance: Optional[Tolerance] = None) -> Immersion:
        orientation = _orientation(self.orientation) or graph.default_orientation()
        orientation.validate(graph)
        return Immersion({v: p for v, p in self.vertices.items()},
                         {e: DirectedArc(tuple(a.axis), tuple(a.start), a.length) for e, a in self.arcs.items()},
                         orientation, tolerance or Tolerance.from_config())

    @classmethod
    def from_immersion(cls, immersion: Immersion) -> 'ImmersionDocument':
        return cls(vertices={v: [float(c) for c in p] for v, p in sorted(immersion.points.items())},
                   arcs={e: ArcDocument(axis=list(a.axis), start=list(a.start), length=a.length)
                         for e, a in sorted(immersion.arcs.items())},
                   orientation=_orientation_doc(immersion.orientation))
