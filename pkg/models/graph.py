# -*- coding: utf-8 -*-
"""
多重图数据模型
顶点和边都用整数编号；允许平行边，环需显式开启
"""

from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import networkx as nx

from errors import ParseError, PreconditionError


@dataclass(frozen=True)
class Edge:
    """无向边，u/v 的先后顺序定义该边的默认方向"""
    id: int
    u: int
    v: int

    @property
    def is_loop(self) -> bool:
        return self.u == self.v

    def other(self, vertex: int) -> int:
        """返回另一端点"""
        if vertex == self.u:
            return self.v
        if vertex == self.v:
            return self.u
        raise PreconditionError(f"顶点 {vertex} 不是边 {self.id} 的端点", edge=self.id, vertex=vertex)

    def to_dict(self) -> Dict[str, int]:
        return {'id': self.id, 'u': self.u, 'v': self.v}


@dataclass(frozen=True)
class Multigraph:
    """有限多重图，构造后不可变"""
    vertices: Tuple[int, ...]
    edges: Tuple[Edge, ...]
    allow_loops: bool = False
    _edge_map: Dict[int, Edge] = field(init=False, repr=False, compare=False)
    _incidence: Dict[int, Tuple[int, ...]] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        vertices = tuple(sorted(set(int(v) for v in self.vertices)))
        if len(vertices) != len(self.vertices):
            raise ParseError("顶点编号重复", vertices=list(self.vertices))
        edges = tuple(sorted(self.edges, key=lambda e: e.id))
        vertex_set = set(vertices)
        edge_map: Dict[int, Edge] = {}
        incidence: Dict[int, List[int]] = {v: [] for v in vertices}
        for edge in edges:
            if edge.id in edge_map:
                raise ParseError(f"边编号重复: {edge.id}", edge=edge.id)
            if edge.u not in vertex_set or edge.v not in vertex_set:
                raise ParseError(f"边 {edge.id} 的端点未注册", edge=edge.id, u=edge.u, v=edge.v)
            if edge.is_loop and not self.allow_loops:
                raise PreconditionError(f"边 {edge.id} 是环，但图未允许环", edge=edge.id)
            edge_map[edge.id] = edge
            incidence[edge.u].append(edge.id)
            incidence[edge.v].append(edge.id)
        object.__setattr__(self, 'vertices', vertices)
        object.__setattr__(self, 'edges', edges)
        object.__setattr__(self, '_edge_map', edge_map)
        object.__setattr__(self, '_incidence', {v: tuple(sorted(ids)) for v, ids in incidence.items()})

    @classmethod
    def from_pairs(cls, vertices: Iterable[int], pairs: Iterable[Tuple[int, int]],
                   allow_loops: bool = False) -> 'Multigraph':
        """按给定顺序从端点对创建，边编号为 0..m-1"""
        edges = tuple(Edge(i, int(u), int(v)) for i, (u, v) in enumerate(pairs))
        return cls(tuple(vertices), edges, allow_loops)

    @classmethod
    def from_networkx(cls, graph: nx.Graph) -> 'Multigraph':
        """从 networkx 图创建，顶点重新编号为 0..n-1（按排序顺序）"""
        order = sorted(graph.nodes())
        relabel = {node: i for i, node in enumerate(order)}
        pairs = sorted(tuple(sorted((relabel[a], relabel[b]))) for a, b in graph.edges())
        return cls.from_pairs(range(len(order)), pairs, allow_loops=any(a == b for a, b in pairs))

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def edge_ids(self) -> Tuple[int, ...]:
        return tuple(e.id for e in self.edges)

    def has_vertex(self, vertex: int) -> bool:
        return vertex in self._incidence

    def has_edge(self, edge_id: int) -> bool:
        return edge_id in self._edge_map

    def edge(self, edge_id: int) -> Edge:
        """按编号获取边"""
        try:
            return self._edge_map[edge_id]
        except KeyError:
            raise ParseError(f"未知的边编号: {edge_id}", edge=edge_id) from None

    def incident(self, vertex: int) -> Tuple[int, ...]:
        """与顶点关联的边编号（升序，环出现两次）"""
        try:
            return self._incidence[vertex]
        except KeyError:
            raise ParseError(f"未知的顶点编号: {vertex}", vertex=vertex) from None

    def degree(self, vertex: int) -> int:
        return len(self.incident(vertex))

    def next_vertex_id(self) -> int:
        return max(self.vertices) + 1 if self.vertices else 0

    def next_edge_id(self) -> int:
        return max(self._edge_map) + 1 if self._edge_map else 0

    def has_loops(self) -> bool:
        return any(e.is_loop for e in self.edges)

    def default_orientation(self) -> 'Orientation':
        """默认定向：每条边 u -> v"""
        return Orientation({e.id: (e.u, e.v) for e in self.edges})

    def edge_subgraph(self, edge_ids: Iterable[int]) -> 'Multigraph':
        """保留全部顶点、只保留指定边的子图"""
        keep = set(edge_ids)
        for edge_id in keep:
            self.edge(edge_id)
        return Multigraph(self.vertices, tuple(e for e in self.edges if e.id in keep), self.allow_loops)

    def to_networkx(self) -> nx.MultiGraph:
        """转换为 networkx 多重图，边的 key 即边编号"""
        graph = nx.MultiGraph()
        graph.add_nodes_from(self.vertices)
        for e in self.edges:
            graph.add_edge(e.u, e.v, key=e.id)
        return graph

    def to_dict(self) -> Dict[str, Any]:
        return {
            'vertices': list(self.vertices),
            'edges': [e.to_dict() for e in self.edges],
            'allow_loops': self.allow_loops
        }


@dataclass
class Orientation:
    """定向：边编号 -> (起点, 终点)"""
    arcs: Dict[int, Tuple[int, int]]

    def init(self, edge_id: int) -> int:
        return self.arcs[edge_id][0]

    def ter(self, edge_id: int) -> int:
        return self.arcs[edge_id][1]

    def agrees_with_default(self, edge: Edge) -> bool:
        """方向是否与边的默认方向 u -> v 一致（环总是一致）"""
        return edge.is_loop or self.arcs[edge.id] == (edge.u, edge.v)

    def validate(self, graph: Multigraph):
        """检查定向与图的端点一致"""
        if set(self.arcs) != set(graph.edge_ids):
            missing = sorted(set(graph.edge_ids) - set(self.arcs))
            extra = sorted(set(self.arcs) - set(graph.edge_ids))
            raise ParseError("定向与边集不一致", missing=missing, extra=extra)
        for edge in graph.edges:
            init, ter = self.arcs[edge.id]
            if sorted((init, ter)) != sorted((edge.u, edge.v)):
                raise ParseError(f"边 {edge.id} 的定向端点与图不一致", edge=edge.id, init=init, ter=ter)

    def reversed(self, edge_ids: Iterable[int]) -> 'Orientation':
        """返回反转指定边后的新定向"""
        arcs = dict(self.arcs)
        for edge_id in edge_ids:
            init, ter = arcs[edge_id]
            arcs[edge_id] = (ter, init)
        return Orientation(arcs)

    def to_dict(self) -> Dict[int, Dict[str, int]]:
        return {e: {'init': a, 'ter': b} for e, (a, b) in sorted(self.arcs.items())}


@dataclass
class EdgeTrace:
    """变换溯源：新边 -> 有序的 (源边编号, 符号) 列表；新顶点 -> 源顶点

    符号为 +1 表示沿新边默认方向行走时按源边默认方向经过该源边。
    """
    edges: Dict[int, Tuple[Tuple[int, int], ...]]
    vertices: Dict[int, int]

    @classmethod
    def identity(cls, graph: Multigraph) -> 'EdgeTrace':
        return cls({e.id: ((e.id, 1),) for e in graph.edges}, {v: v for v in graph.vertices})

    def source_edges(self) -> List[int]:
        return sorted(src for chain in self.edges.values() for src, _ in chain)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'edges': {e: [list(item) for item in chain] for e, chain in sorted(self.edges.items())},
            'vertices': dict(sorted(self.vertices.items()))
        }


@dataclass(frozen=True)
class VertexSplit:
    """顶点分裂结果：每条关联边对应一个新叶子"""
    graph: Multigraph
    leaves: Tuple[Tuple[int, int], ...]   # (边编号, 叶子顶点编号)


@dataclass(frozen=True)
class InjectionResult:
    """注入 H▷G 的结果及编号映射"""
    graph: Multigraph
    h_vertex_map: Dict[int, int]
    h_edge_map: Dict[int, int]
    bridges: Tuple[Tuple[int, int, int], ...]   # (新边编号, G 中的边, H 中的边)
    pairing: Tuple[int, ...]

    def to_dict(self) -> Dict[str, Any]:
        return {
            'graph': self.graph.to_dict(),
            'h_vertex_map': dict(sorted(self.h_vertex_map.items())),
            'h_edge_map': dict(sorted(self.h_edge_map.items())),
            'bridges': [list(b) for b in self.bridges],
            'pairing': list(self.pairing)
        }


def pair_multiset(graph: Multigraph) -> Dict[Tuple[int, int], int]:
    """无序端点对的重数"""
    counts: Dict[Tuple[int, int], int] = {}
    for e in graph.edges:
        key = (min(e.u, e.v), max(e.u, e.v))
        counts[key] = counts.get(key, 0) + 1
    return counts


def vertex_subset(graph: Multigraph, subset: Optional[Sequence[int]]) -> frozenset:
    """校验顶点子集"""
    chosen = frozenset(subset or ())
    unknown = sorted(v for v in chosen if not graph.has_vertex(v))
    if unknown:
        raise PreconditionError(f"未知的顶点编号: {unknown}", unknown=unknown)
    return chosen
