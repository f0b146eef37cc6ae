# -*- coding: utf-8 -*-
"""
生成森林 / 余树回溯搜索引擎
给余树边赋值，树边的值由基本割上的基尔霍夫定律唯一确定
"""

import itertools
import math
from dataclasses import dataclass
from typing import Any, Callable, Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger

from base_engine import Deadline
from models.graph import Multigraph, Orientation
from models.group import AbelianGroup


class ValueDomain:
    """搜索取值域：零元、候选值（按字典序）、加法与取负"""

    zero: Any = None
    candidates: List[Any] = []

    def add(self, x, y):
        raise NotImplementedError

    def neg(self, x):
        raise NotImplementedError

    def admissible(self, x) -> bool:
        """树边的值是否可接受"""
        raise NotImplementedError


class GroupDomain(ValueDomain):
    """有限阿贝尔群，候选为全部非零元"""

    def __init__(self, group: AbelianGroup):
        self.group = group
        self.zero = group.identity
        self.candidates = group.nonzero_elements()
        self.all_values = list(group.elements())

    def add(self, x, y):
        return self.group.add(x, y)

    def neg(self, x):
        return self.group.neg(x)

    def admissible(self, x) -> bool:
        return any(x)


class EisensteinDomain(ValueDomain):
    """Eisenstein 整数 a + bω，候选为六个单位根 ±1, ±ω, ±ω²"""

    UNITS = sorted([(1, 0), (0, 1), (-1, -1), (-1, 0), (0, -1), (1, 1)])

    def __init__(self):
        self.zero = (0, 0)
        self.candidates = list(self.UNITS)
        self._units = set(self.UNITS)

    def add(self, x, y):
        return (x[0] + y[0], x[1] + y[1])

    def neg(self, x):
        return (-x[0], -x[1])

    def admissible(self, x) -> bool:
        return x in self._units

    @staticmethod
    def to_plane(x) -> np.ndarray:
        """a + bω 对应的平面向量"""
        a, b = x
        return np.array([a - 0.5 * b, 0.5 * math.sqrt(3.0) * b])


@dataclass
class SearchOutcome:
    """搜索结果：found / none / budget"""
    verdict: str
    values: Optional[Dict[int, Any]]
    nodes: int


class CotreeSystem:
    """图在给定定向下的余树参数化"""

    def __init__(self, graph: Multigraph, orientation: Orientation):
        self.graph = graph
        self.orientation = orientation
        self.parent: Dict[int, Optional[int]] = {}
        self.parent_edge: Dict[int, Optional[int]] = {}
        self.depth: Dict[int, int] = {}
        self._build_forest()

        tree = {e for e in self.parent_edge.values() if e is not None}
        self.tree_edges: List[int] = sorted(tree)
        self.cotree_edges: List[int] = [e for e in graph.edge_ids if e not in tree]
        self.dependencies: Dict[int, List[Tuple[int, int]]] = {t: [] for t in self.tree_edges}
        self._build_dependencies()

        self.ready_at: Dict[int, List[int]] = {}
        self.bridges: List[int] = []
        for t in self.tree_edges:
            deps = self.dependencies[t]
            if not deps:
                self.bridges.append(t)
                continue
            self.ready_at.setdefault(max(i for i, _ in deps), []).append(t)
        logger.debug(f"余树参数化完成: 树边 {len(self.tree_edges)} 条, 余树边 {len(self.cotree_edges)} 条")

    @property
    def dimension(self) -> int:
        """循环空间维数 |E| - |V| + 分支数"""
        return len(self.cotree_edges)

    def _build_forest(self):
        for root in self.graph.vertices:
            if root in self.depth:
                continue
            self.parent[root] = None
            self.parent_edge[root] = None
            self.depth[root] = 0
            queue = [root]
            while queue:
                current = queue.pop(0)
                for edge_id in self.graph.incident(current):
                    edge = self.graph.edge(edge_id)
                    if edge.is_loop:
                        continue
                    neighbor = edge.other(current)
                    if neighbor in self.depth:
                        continue
                    self.parent[neighbor] = current
                    self.parent_edge[neighbor] = edge_id
                    self.depth[neighbor] = self.depth[current] + 1
                    queue.append(neighbor)

    def _build_dependencies(self):
        for index, edge_id in enumerate(self.cotree_edges):
            edge = self.graph.edge(edge_id)
            if edge.is_loop:
                continue
            init = self.orientation.init(edge_id)
            x, y = edge.u, edge.v
            while x != y:
                if self.depth[x] >= self.depth[y]:
                    self._add_dependency(x, index, 1 if init == edge.u else -1)
                    x = self.parent[x]
                else:
                    self._add_dependency(y, index, 1 if init == edge.v else -1)
                    y = self.parent[y]

    def _add_dependency(self, child: int, index: int, cotree_sign: int):
        # 割 X = child 的子树；树边指出 X 时符号为 +1
        tree_edge = self.parent_edge[child]
        tree_sign = 1 if self.orientation.init(tree_edge) == child else -1
        self.dependencies[tree_edge].append((index, -tree_sign * cotree_sign))

    def tree_value(self, tree_edge: int, assignment: Sequence[Any], domain: ValueDomain):
        total = domain.zero
        for index, coef in self.dependencies[tree_edge]:
            value = assignment[index]
            total = domain.add(total, value if coef > 0 else domain.neg(value))
        return total

    def solve(self, assignment: Sequence[Any], domain: ValueDomain) -> Dict[int, Any]:
        """由余树赋值回代得到全部边的值"""
        values = {e: assignment[i] for i, e in enumerate(self.cotree_edges)}
        for t in self.tree_edges:
            values[t] = self.tree_value(t, assignment, domain)
        return values


def search_nowhere_zero(system: CotreeSystem, domain: ValueDomain,
                        deadline: Optional[Deadline] = None,
                        check_interval: int = 1024) -> SearchOutcome:
    """按字典序深度优先搜索第一个处处可接受的赋值"""
    if system.bridges:
        logger.debug(f"存在割边 {system.bridges}，其值被强制为零")
        return SearchOutcome('none', None, 0)

    m = len(system.cotree_edges)
    candidates = domain.candidates
    assignment: List[Any] = [None] * m
    choice = [-1] * m
    nodes = 0
    i = 0
    while i >= 0:
        if i == m:
            return SearchOutcome('found', system.solve(assignment, domain), nodes)
        choice[i] += 1
        if choice[i] >= len(candidates):
            choice[i] = -1
            i -= 1
            continue
        assignment[i] = candidates[choice[i]]
        nodes += 1
        if deadline is not None and nodes % check_interval == 0 and deadline.expired():
            logger.warning(f"搜索预算耗尽，已访问 {nodes} 个节点")
            return SearchOutcome('budget', None, nodes)
        if all(domain.admissible(system.tree_value(t, assignment, domain))
               for t in system.ready_at.get(i, ())):
            i += 1
    return SearchOutcome('none', None, nodes)


def iter_circulations(system: CotreeSystem, domain: GroupDomain) -> Iterator[Dict[int, Any]]:
    """枚举全部循环（含零值），共 |A|^dim 个"""
    for assignment in itertools.product(domain.all_values, repeat=system.dimension):
        yield system.solve(assignment, domain)


def random_assignment(system: CotreeSystem, domain: GroupDomain,
                      rng: np.random.Generator) -> Dict[int, Any]:
    """余树边独立均匀取值得到的随机循环"""
    values = domain.all_values
    assignment = [values[int(rng.integers(len(values)))] for _ in range(system.dimension)]
    return system.solve(assignment, domain)


def support_mask(values: Dict[int, Any], order: Sequence[int], is_zero: Callable[[Any], bool]) -> int:
    """非零支撑的位掩码，第 i 位对应 order[i]"""
    mask = 0
    for bit, edge_id in enumerate(order):
        if not is_zero(values[edge_id]):
            mask |= 1 << bit
    return mask
