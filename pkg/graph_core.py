# -*- coding: utf-8 -*-
"""
图核心模块
割、度、二部性、割边、二部三正则图的三边着色、归约到三正则、顶点分裂、注入与三角形爆破
"""

from collections import deque
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import networkx as nx
from loguru import logger

from base_engine import BaseEngine
from models.graph import (Edge, EdgeTrace, InjectionResult, Multigraph, Orientation,
                          VertexSplit, pair_multiset, vertex_subset)


@dataclass
class BipartitionResult:
    """二部性判定结果：二部划分，或一条奇长闭途径"""
    parts: Optional[Tuple[Tuple[int, ...], Tuple[int, ...]]]
    odd_walk: Optional[List[int]] = None

    @property
    def is_bipartite(self) -> bool:
        return self.parts is not None


class GraphEngine(BaseEngine):
    """图结构与图变换引擎"""

    def cut(self, graph: Multigraph, orientation: Orientation,
            subset: Sequence[int]) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
        """E⁺(X) 与 E⁻(X)

        Args:
            graph: 图
            orientation: 定向
            subset: 顶点子集 X

        Returns:
            (E_plus, E_minus)：起点在 X 内终点在 X 外的边，以及反向的边；环不出现
        """
        inside = vertex_subset(graph, subset)
        plus, minus = [], []
        for edge in graph.edges:
            init, ter = orientation.arcs[edge.id]
            if init in inside and ter not in inside:
                plus.append(edge.id)
            elif ter in inside and init not in inside:
                minus.append(edge.id)
        return tuple(plus), tuple(minus)

    def degrees(self, graph: Multigraph) -> Dict[int, int]:
        """度序列，环计两次"""
        return {v: graph.degree(v) for v in graph.vertices}

    def is_cubic(self, graph: Multigraph) -> bool:
        return graph.num_vertices > 0 and all(d == 3 for d in self.degrees(graph).values())

    def is_bipartite(self, graph: Multigraph) -> BipartitionResult:
        """BFS 二染色；失败时给出奇长闭途径（首尾顶点相同）"""
        color: Dict[int, int] = {}
        parent: Dict[int, Optional[int]] = {}
        for root in graph.vertices:
            if root in color:
                continue
            color[root] = 0
            parent[root] = None
            queue = deque([root])
            while queue:
                current = queue.popleft()
                for edge_id in graph.incident(current):
                    edge = graph.edge(edge_id)
                    if edge.is_loop:
                        return BipartitionResult(None, [current, current])
                    neighbor = edge.other(current)
                    if neighbor not in color:
                        color[neighbor] = 1 - color[current]
                        parent[neighbor] = current
                        queue.append(neighbor)
                    elif color[neighbor] == color[current]:
                        return BipartitionResult(None, self._odd_walk(parent, current, neighbor))
        part_a = tuple(v for v in graph.vertices if color[v] == 0)
        part_b = tuple(v for v in graph.vertices if color[v] == 1)
        return BipartitionResult((part_a, part_b))

    @staticmethod
    def _odd_walk(parent: Dict[int, Optional[int]], x: int, y: int) -> List[int]:
        path_x = [x]
        while parent[path_x[-1]] is not None:
            path_x.append(parent[path_x[-1]])
        path_y = [y]
        while parent[path_y[-1]] is not None:
            path_y.append(parent[path_y[-1]])
        while len(path_x) > 1 and len(path_y) > 1 and path_x[-2] == path_y[-2]:
            path_x.pop()
            path_y.pop()
        # path_x[-1] == path_y[-1] 为最近公共祖先
        return path_x + list(reversed(path_y[:-1])) + [x]

    def find_bridges(self, graph: Multigraph) -> Tuple[int, ...]:
        """割边：删去后连通分支数增加的边（平行边与环永远不是割边）"""
        multiplicity = pair_multiset(graph)
        simple = nx.Graph()
        simple.add_nodes_from(graph.vertices)
        simple.add_edges_from((u, v) for (u, v) in multiplicity if u != v)
        bridge_pairs = {(min(u, v), max(u, v)) for u, v in nx.bridges(simple)}
        return tuple(e.id for e in graph.edges
                     if not e.is_loop
                     and (min(e.u, e.v), max(e.u, e.v)) in bridge_pairs
                     and multiplicity[(min(e.u, e.v), max(e.u, e.v))] == 1)

    def three_edge_coloring_bipartite_cubic(self, graph: Multigraph) -> Tuple[Tuple[int, ...], ...]:
        """二部三正则图分解为三个完美匹配

        Returns:
            (M1, M2, M3)：两两不交、并为全部边，每个都饱和全部顶点
        """
        self.log_operation_start("三边着色", vertices=graph.num_vertices)
        self.require(self.is_cubic(graph), "三边着色要求三正则图")
        self.require(not graph.has_loops(), "三边着色要求无环")
        bipartition = self.is_bipartite(graph)
        self.require(bipartition.is_bipartite, "三边着色要求二部图", odd_walk=bipartition.odd_walk)
        part_a, _ = bipartition.parts

        remaining = {e.id: e for e in graph.edges}
        matchings = []
        for _ in range(3):
            simple = nx.Graph()
            simple.add_nodes_from(graph.vertices)
            lowest: Dict[Tuple[int, int], int] = {}
            for edge_id in sorted(remaining):
                edge = remaining[edge_id]
                key = (min(edge.u, edge.v), max(edge.u, edge.v))
                if key not in lowest:
                    lowest[key] = edge_id
                    simple.add_edge(*key)
            matching = nx.bipartite.hopcroft_karp_matching(simple, top_nodes=set(part_a))
            chosen = sorted(lowest[(min(a, matching[a]), max(a, matching[a]))]
                            for a in part_a if a in matching)
            self.ensure(len(chosen) == len(part_a), "正则二部图必有完美匹配", size=len(chosen))
            for edge_id in chosen:
                del remaining[edge_id]
            matchings.append(tuple(chosen))
        self.log_operation_result("三边着色", True)
        return tuple(matchings)

    def reduce_to_cubic(self, graph: Multigraph) -> Tuple[Multigraph, EdgeTrace]:
        """按 (R1)(R2) 分裂高度顶点，再按 (R3) 反复压缩二度顶点

        孤立圈分支最终压缩为一个带环的顶点。
        """
        self.log_operation_start("归约到三正则", vertices=graph.num_vertices, edges=graph.num_edges)
        low = sorted(v for v in graph.vertices if graph.degree(v) <= 1)
        self.require(not low, f"存在度数不超过 1 的顶点: {low}", vertices=low)

        next_vertex = graph.next_vertex_id()
        vertex_origin = {v: v for v in graph.vertices}
        ends: Dict[int, List[int]] = {e.id: [e.u, e.v] for e in graph.edges}
        for v in graph.vertices:
            degree = graph.degree(v)
            if degree <= 3:
                continue
            half_edges = self._half_edges(graph, v)
            sizes = [2] * (degree // 2) if degree % 2 == 0 else [3] + [2] * ((degree - 3) // 2)
            position = 0
            for group_index, size in enumerate(sizes):
                if group_index == 0:
                    target = v
                else:
                    target = next_vertex
                    next_vertex += 1
                    vertex_origin[target] = v
                for edge_id, side in half_edges[position:position + size]:
                    ends[edge_id][side] = target
                position += size
            logger.debug(f"顶点 {v} (度 {degree}) 分裂为 {len(sizes)} 个顶点")

        trace: Dict[int, Tuple[Tuple[int, int], ...]] = {e: ((e, 1),) for e in ends}
        next_edge = graph.next_edge_id()
        incidence: Dict[int, List[int]] = {v: [] for v in vertex_origin}
        for edge_id, (u, w) in ends.items():
            incidence[u].append(edge_id)
            incidence[w].append(edge_id)

        while True:
            candidates = sorted(x for x, ids in incidence.items()
                                if len(ids) == 2 and ids[0] != ids[1])
            if not candidates:
                break
            x = candidates[0]
            first, second = sorted(incidence[x])
            a = ends[first][1] if ends[first][0] == x else ends[first][0]
            b = ends[second][1] if ends[second][0] == x else ends[second][0]
            sign_first = 1 if ends[first][1] == x else -1
            sign_second = 1 if ends[second][0] == x else -1
            chain = self._oriented(trace[first], sign_first) + self._oriented(trace[second], sign_second)

            new_edge = next_edge
            next_edge += 1
            for edge_id in (first, second):
                del trace[edge_id]
                for endpoint in ends.pop(edge_id):
                    if endpoint != x:
                        incidence[endpoint].remove(edge_id)
            del incidence[x]
            del vertex_origin[x]
            ends[new_edge] = [a, b]
            trace[new_edge] = chain
            incidence[a].append(new_edge)
            incidence[b].append(new_edge)

        reduced = Multigraph(tuple(sorted(vertex_origin)),
                             tuple(Edge(e, u, w) for e, (u, w) in sorted(ends.items())),
                             allow_loops=any(u == w for u, w in ends.values()))
        self.log_operation_result("归约到三正则", True,
                                  f"{reduced.num_vertices} 个顶点, {reduced.num_edges} 条边")
        return reduced, EdgeTrace(trace, dict(vertex_origin))

    @staticmethod
    def _half_edges(graph: Multigraph, vertex: int) -> List[Tuple[int, int]]:
        """顶点处的半边 (边编号, 端点位置 0=u/1=v)，按边编号排序，环贡献两个"""
        result = []
        for edge_id in sorted(set(graph.incident(vertex))):
            edge = graph.edge(edge_id)
            if edge.u == vertex:
                result.append((edge_id, 0))
            if edge.v == vertex:
                result.append((edge_id, 1))
        return result

    @staticmethod
    def _oriented(chain: Tuple[Tuple[int, int], ...], sign: int) -> Tuple[Tuple[int, int], ...]:
        if sign > 0:
            return chain
        return tuple((src, -s) for src, s in reversed(chain))

    def vertex_split(self, graph: Multigraph, vertex: int) -> VertexSplit:
        """把顶点替换为 deg(v) 片叶子，每条关联边一片"""
        self.require(graph.has_vertex(vertex), f"未知的顶点编号: {vertex}", vertex=vertex)
        next_vertex = graph.next_vertex_id()
        ends = {e.id: [e.u, e.v] for e in graph.edges}
        leaves = []
        for edge_id, side in self._half_edges(graph, vertex):
            ends[edge_id][side] = next_vertex
            leaves.append((edge_id, next_vertex))
            next_vertex += 1
        vertices = tuple(v for v in graph.vertices if v != vertex) + tuple(leaf for _, leaf in leaves)
        split = Multigraph(vertices, tuple(Edge(e, u, w) for e, (u, w) in ends.items()),
                           allow_loops=graph.allow_loops)
        return VertexSplit(split, tuple(leaves))

    def inject(self, graph_h: Multigraph, w: int, graph_g: Multigraph, v: int,
               pairing: Optional[Sequence[int]] = None) -> InjectionResult:
        """把 H 在顶点 w 处注入 G 的顶点 v，得到 H▷G

        G 的顶点与边编号保持不变；第 i 条连接边沿用 G 中 v 的第 i 条关联边的编号，
        连接 x_i 与 y_{pairing[i]}；H 的其余顶点和边按编号顺序分配新编号。

        Args:
            graph_h: 被注入的图 H
            w: H 中的顶点
            graph_g: 宿主图 G
            v: G 中的顶点
            pairing: v 的第 i 条关联边对应 w 的第 pairing[i] 条关联边，默认恒等

        Returns:
            InjectionResult: 新图与编号映射
        """
        self.log_operation_start("注入", w=w, v=v)
        self.require(graph_g.has_vertex(v), f"G 中没有顶点 {v}", vertex=v)
        self.require(graph_h.has_vertex(w), f"H 中没有顶点 {w}", vertex=w)
        k = graph_g.degree(v)
        self.require(graph_h.degree(w) == k, f"度数不一致: deg_G(v)={k}, deg_H(w)={graph_h.degree(w)}",
                     deg_g=k, deg_h=graph_h.degree(w))
        g_edges = list(graph_g.incident(v))
        h_edges = list(graph_h.incident(w))
        self.require(len(set(g_edges)) == k and len(set(h_edges)) == k, "注入顶点处不能有环")
        order = tuple(range(k)) if pairing is None else tuple(int(i) for i in pairing)
        self.require(sorted(order) == list(range(k)), f"配对必须是 0..{k - 1} 的排列", pairing=list(order))

        next_vertex = graph_g.next_vertex_id()
        h_vertex_map = {}
        for vertex in graph_h.vertices:
            if vertex != w:
                h_vertex_map[vertex] = next_vertex
                next_vertex += 1
        next_edge = graph_g.next_edge_id()
        h_edge_map = {}
        edges = [e for e in graph_g.edges if e.id not in set(g_edges)]
        for edge in graph_h.edges:
            if edge.id in set(h_edges):
                continue
            h_edge_map[edge.id] = next_edge
            edges.append(Edge(next_edge, h_vertex_map[edge.u], h_vertex_map[edge.v]))
            next_edge += 1
        bridges = []
        for i, g_edge_id in enumerate(g_edges):
            h_edge_id = h_edges[order[i]]
            x = graph_g.edge(g_edge_id).other(v)
            y = h_vertex_map[graph_h.edge(h_edge_id).other(w)]
            edges.append(Edge(g_edge_id, x, y))
            bridges.append((g_edge_id, g_edge_id, h_edge_id))

        vertices = tuple(u for u in graph_g.vertices if u != v) + tuple(h_vertex_map.values())
        result = Multigraph(vertices, tuple(edges), allow_loops=graph_g.allow_loops or graph_h.allow_loops)
        self.ensure(result.num_vertices == graph_g.num_vertices + graph_h.num_vertices - 2, "注入后顶点数错误")
        self.ensure(result.num_edges == graph_g.num_edges + graph_h.num_edges - k, "注入后边数错误")
        self.log_operation_result("注入", True, f"{result.num_vertices} 个顶点, {result.num_edges} 条边")
        return InjectionResult(result, h_vertex_map, h_edge_map, tuple(bridges), order)

    def blow_up_triangle(self, graph: Multigraph, v: int) -> InjectionResult:
        """把三正则图的顶点 v 爆破为三角形（即在 v 处注入 K4）"""
        from graph_generators import complete_graph
        self.require(self.is_cubic(graph), "三角形爆破要求三正则图")
        return self.inject(complete_graph(4), 0, graph, v)


# 全局图引擎实例
graph_engine = GraphEngine()
