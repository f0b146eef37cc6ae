# -*- coding: utf-8 -*-
"""
图族生成器
准 Petersen 图 G_{a,b,p}、广义 Petersen 图 G(n,k) 及测试常用的标准图族
"""

import math
from typing import Any, Dict, Iterator, List

import networkx as nx
from loguru import logger

from errors import PreconditionError
from models.graph import Multigraph


def quasi_petersen(a: int, b: int, p: int) -> Multigraph:
    """准 Petersen 图 G_{a,b,p}

    顶点 v_i = i，w_i = p + i；边依次为 C_V（v_i v_{i+a}）、C_W（w_i w_{i+b}）、M（v_i w_i）。
    a = p/2 时 C_V 由成对的平行边组成（b 同理）。

    Args:
        a: V 层步长
        b: W 层步长
        p: 每层顶点数

    Returns:
        Multigraph: 3p 条边的三正则多重图
    """
    low = math.ceil(p / 6)
    high = p // 2
    if not (low <= a <= high and low <= b <= high) or low < 1:
        raise PreconditionError(f"参数越界: 需要 ⌈p/6⌉ <= a,b <= ⌊p/2⌋，得到 a={a}, b={b}, p={p}",
                                a=a, b=b, p=p)
    pairs = [(i, (i + a) % p) for i in range(p)]
    pairs += [(p + i, p + (i + b) % p) for i in range(p)]
    pairs += [(i, p + i) for i in range(p)]
    return Multigraph.from_pairs(range(2 * p), pairs)


def generalized_petersen(n: int, k: int) -> Multigraph:
    """广义 Petersen 图 G(n,k)，要求 1 <= k < n/2"""
    if n < 3 or not 1 <= k < n / 2:
        raise PreconditionError(f"参数越界: 需要 1 <= k < n/2，得到 n={n}, k={k}", n=n, k=k)
    pairs = [(i, (i + 1) % n) for i in range(n)]
    pairs += [(n + i, n + (i + k) % n) for i in range(n)]
    pairs += [(i, n + i) for i in range(n)]
    return Multigraph.from_pairs(range(2 * n), pairs)


def petersen_graph() -> Multigraph:
    return quasi_petersen(1, 2, 5)


def complete_graph(n: int) -> Multigraph:
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    return Multigraph.from_pairs(range(n), pairs)


def complete_bipartite(m: int, n: int) -> Multigraph:
    """K_{m,n}：A = 0..m-1，B = m..m+n-1"""
    pairs = [(i, m + j) for i in range(m) for j in range(n)]
    return Multigraph.from_pairs(range(m + n), pairs)


def cube_graph() -> Multigraph:
    """三维立方体 Q3"""
    pairs = [(u, u ^ (1 << bit)) for u in range(8) for bit in range(3) if u < u ^ (1 << bit)]
    return Multigraph.from_pairs(range(8), sorted(pairs))


def cycle_graph(n: int) -> Multigraph:
    if n < 3:
        raise PreconditionError(f"圈至少需要 3 个顶点: {n}", n=n)
    return Multigraph.from_pairs(range(n), [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> Multigraph:
    """n 个顶点的路"""
    return Multigraph.from_pairs(range(n), [(i, i + 1) for i in range(n - 1)])


def prism_graph(n: int = 3) -> Multigraph:
    """棱柱：两个 n 圈加对应顶点间的连边"""
    pairs = [(i, (i + 1) % n) for i in range(n)]
    pairs += [(n + i, n + (i + 1) % n) for i in range(n)]
    pairs += [(i, n + i) for i in range(n)]
    return Multigraph.from_pairs(range(2 * n), pairs)


def two_triangles_with_bridge() -> Multigraph:
    """两个三角形由一条割边相连"""
    return Multigraph.from_pairs(range(6), [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (2, 3)])


def random_regular(d: int, n: int, seed: int) -> Multigraph:
    """固定种子的随机 d-正则简单图"""
    return Multigraph.from_networkx(nx.random_regular_graph(d, n, seed=seed))


FAMILIES = {
    'quasi-petersen': lambda p: quasi_petersen(p['a'], p['b'], p['p']),
    'petersen': lambda p: petersen_graph(),
    'generalized-petersen': lambda p: generalized_petersen(p['n'], p['k']),
    'complete': lambda p: complete_graph(p['n']),
    'k4': lambda p: complete_graph(4),
    'complete-bipartite': lambda p: complete_bipartite(p['m'], p['n']),
    'cube': lambda p: cube_graph(),
    'cycle': lambda p: cycle_graph(p['n']),
    'path': lambda p: path_graph(p['n']),
    'prism': lambda p: prism_graph(p.get('n') or 3),
    'bridge': lambda p: two_triangles_with_bridge(),
    'random-regular': lambda p: random_regular(p['d'], p['n'], p.get('seed') or 0)
}


def build_family(family: str, **params: Any) -> Multigraph:
    """按图族名称和参数生成图"""
    if family not in FAMILIES:
        raise PreconditionError(f"未知的图族: {family}", family=family, known=sorted(FAMILIES))
    try:
        graph = FAMILIES[family](params)
    except (KeyError, TypeError) as e:
        raise PreconditionError(f"图族 {family} 缺少参数: {e}", family=family) from None
    logger.info(f"生成图族 {family}: {graph.num_vertices} 个顶点, {graph.num_edges} 条边")
    return graph


def _multigraph_key(graph: Multigraph) -> nx.Graph:
    simple = nx.Graph()
    simple.add_nodes_from(graph.vertices)
    for e in graph.edges:
        if simple.has_edge(e.u, e.v):
            simple[e.u][e.v]['mult'] += 1
        else:
            simple.add_edge(e.u, e.v, mult=1)
    return simple


def enumerate_cubic_multigraphs(max_vertices: int, unique: bool = True) -> Iterator[Multigraph]:
    """枚举顶点数不超过 max_vertices 的连通无环三正则多重图

    每次给编号最小的未饱和顶点补边，同一顶点的伙伴编号不减，新顶点按编号依次启用。
    unique 为真时用 networkx 同构判定去重。
    """
    for n in range(2, max_vertices + 1, 2):
        seen: Dict[str, List[nx.Graph]] = {}
        for pairs in _fill_cubic(n):
            graph = Multigraph.from_pairs(range(n), pairs)
            if not nx.is_connected(graph.to_networkx()):
                continue
            if unique:
                simple = _multigraph_key(graph)
                key = nx.weisfeiler_lehman_graph_hash(simple, edge_attr='mult')
                bucket = seen.setdefault(key, [])
                match = nx.algorithms.isomorphism.numerical_edge_match('mult', 1)
                if any(nx.is_isomorphic(simple, other, edge_match=match) for other in bucket):
                    continue
                bucket.append(simple)
            yield graph


def _fill_cubic(n: int) -> Iterator[List[tuple]]:
    degree = [0] * n
    pairs: List[tuple] = []

    def extend(current: int, floor: int) -> Iterator[List[tuple]]:
        u = next((x for x in range(n) if degree[x] < 3), None)
        if u is None:
            yield list(pairs)
            return
        if u > 0 and degree[u] == 0:
            return
        if u != current:
            floor = u + 1
        fresh = next((x for x in range(u + 1, n) if degree[x] == 0), None)
        for w in range(floor, n):
            if degree[w] >= 3 or (degree[w] == 0 and w != fresh):
                continue
            degree[u] += 1
            degree[w] += 1
            pairs.append((u, w))
            yield from extend(u, w)
            pairs.pop()
            degree[u] -= 1
            degree[w] -= 1

    yield from extend(-1, 1)
